#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <variant>

#include "tracelab/errors.hpp"

namespace tracelab {

// Arbitrary-precision integer. The semantics of all three languages is
// over unbounded naturals, so no fixed-width type will do.
using Int = boost::multiprecision::cpp_int;

// A first-order value: integer or boolean.
class Value {
  public:
    Value() : rep_(Int(0)) {}
    Value(Int v) : rep_(std::move(v)) {}
    Value(bool v) : rep_(v) {}
    // Disambiguate int literals (they would otherwise prefer bool).
    Value(int v) : rep_(Int(v)) {}
    Value(long long v) : rep_(Int(v)) {}

    bool is_int() const { return std::holds_alternative<Int>(rep_); }
    bool is_bool() const { return std::holds_alternative<bool>(rep_); }

    const Int& as_int() const {
        if (!is_int()) throw StuckError("expected an integer, got " + to_string());
        return std::get<Int>(rep_);
    }
    bool as_bool() const {
        if (!is_bool()) throw StuckError("expected a boolean, got " + to_string());
        return std::get<bool>(rep_);
    }

    std::string to_string() const {
        if (is_bool()) return as_bool() ? "true" : "false";
        return std::get<Int>(rep_).str();
    }

    friend bool operator==(const Value& a, const Value& b) { return a.rep_ == b.rep_; }
    friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }

  private:
    std::variant<Int, bool> rep_;
};

inline bool is_even(const Int& n) { return n % 2 == 0; }

// Truncated-toward-zero division, the behavior of cpp_int's operator/.
inline Int div_trunc(const Int& a, const Int& b) {
    if (b == 0) throw StuckError("division by zero");
    return a / b;
}

}  // namespace tracelab
