#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tracelab/errors.hpp"
#include "tracelab/value.hpp"

namespace tracelab {

// A term tree with every function position collapsed to the opaque token
// <fun>. This is the shared image of the functional erasures, so traces
// produced from different languages can be compared node for node.
struct ErasedTerm {
    enum class Kind { IntLit, BoolLit, Fun, App };

    Kind kind = Kind::IntLit;
    Int int_value{};
    bool bool_value = false;
    std::vector<ErasedTerm> args;  // Kind::App only, never empty

    static ErasedTerm make_int(Int v) {
        ErasedTerm t;
        t.kind = Kind::IntLit;
        t.int_value = std::move(v);
        return t;
    }
    static ErasedTerm make_bool(bool v) {
        ErasedTerm t;
        t.kind = Kind::BoolLit;
        t.bool_value = v;
        return t;
    }
    // A function value outside head position: rendered as a bare <fun>.
    static ErasedTerm make_fun() {
        ErasedTerm t;
        t.kind = Kind::Fun;
        return t;
    }
    static ErasedTerm make_app(std::vector<ErasedTerm> args) {
        if (args.empty()) throw Error("erased application needs at least one argument");
        ErasedTerm t;
        t.kind = Kind::App;
        t.args = std::move(args);
        return t;
    }

    friend bool operator==(const ErasedTerm& a, const ErasedTerm& b) {
        if (a.kind != b.kind) return false;
        switch (a.kind) {
            case Kind::IntLit: return a.int_value == b.int_value;
            case Kind::BoolLit: return a.bool_value == b.bool_value;
            case Kind::Fun: return true;
            case Kind::App: return a.args == b.args;
        }
        return false;
    }
    friend bool operator!=(const ErasedTerm& a, const ErasedTerm& b) { return !(a == b); }
};

inline std::string to_string(const ErasedTerm& t) {
    switch (t.kind) {
        case ErasedTerm::Kind::IntLit: return t.int_value.str();
        case ErasedTerm::Kind::BoolLit: return t.bool_value ? "true" : "false";
        case ErasedTerm::Kind::Fun: return "<fun>";
        case ErasedTerm::Kind::App: {
            std::string out = "<fun>(";
            for (size_t i = 0; i < t.args.size(); ++i) {
                if (i) out += ',';
                out += to_string(t.args[i]);
            }
            out += ')';
            return out;
        }
    }
    return {};
}

// One element of an execution trace: a tuple of store values (imperative
// projection) or an erased term (functional projection).
struct ErasedState {
    std::variant<std::vector<Value>, ErasedTerm> rep;

    static ErasedState tuple(std::vector<Value> values) {
        return ErasedState{std::move(values)};
    }
    static ErasedState term(ErasedTerm t) { return ErasedState{std::move(t)}; }

    bool is_tuple() const { return rep.index() == 0; }
    const std::vector<Value>& as_tuple() const { return std::get<0>(rep); }
    const ErasedTerm& as_term() const { return std::get<1>(rep); }

    friend bool operator==(const ErasedState& a, const ErasedState& b) {
        return a.rep == b.rep;
    }
    friend bool operator!=(const ErasedState& a, const ErasedState& b) {
        return !(a == b);
    }
};

inline std::string to_string(const ErasedState& s) {
    if (s.is_tuple()) {
        std::string out = "(";
        const auto& vs = s.as_tuple();
        for (size_t i = 0; i < vs.size(); ++i) {
            if (i) out += ',';
            out += vs[i].to_string();
        }
        out += ')';
        return out;
    }
    return to_string(s.as_term());
}

namespace detail {

// Minimal recursive-descent reader for the textual state forms written by
// to_string. Used by the trace-file parser; whitespace is not allowed.
class ErasedStateReader {
  public:
    ErasedStateReader(const std::string& text, int line)
        : text_(text), line_(line) {}

    ErasedState read() {
        ErasedState s = state();
        if (pos_ != text_.size()) fail("trailing characters after state");
        return s;
    }

  private:
    ErasedState state() {
        if (peek() == '(') return ErasedState::tuple(tuple_body());
        return ErasedState::term(term());
    }

    std::vector<Value> tuple_body() {
        expect('(');
        std::vector<Value> values;
        if (peek() == ')') {
            ++pos_;
            return values;  // the empty projection ()
        }
        values.push_back(scalar());
        while (peek() == ',') {
            ++pos_;
            values.push_back(scalar());
        }
        expect(')');
        return values;
    }

    ErasedTerm term() {
        if (text_.compare(pos_, 5, "<fun>") == 0) {
            pos_ += 5;
            if (pos_ < text_.size() && text_[pos_] == '(') {
                ++pos_;
                std::vector<ErasedTerm> args;
                args.push_back(term());
                while (peek() == ',') {
                    ++pos_;
                    args.push_back(term());
                }
                expect(')');
                return ErasedTerm::make_app(std::move(args));
            }
            return ErasedTerm::make_fun();
        }
        Value v = scalar();
        if (v.is_bool()) return ErasedTerm::make_bool(v.as_bool());
        return ErasedTerm::make_int(v.as_int());
    }

    Value scalar() {
        if (text_.compare(pos_, 4, "true") == 0 && !ident_continues(pos_ + 4)) {
            pos_ += 4;
            return Value(true);
        }
        if (text_.compare(pos_, 5, "false") == 0 && !ident_continues(pos_ + 5)) {
            pos_ += 5;
            return Value(false);
        }
        size_t start = pos_;
        if (pos_ < text_.size() && text_[pos_] == '-') ++pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (pos_ == start || (text_[start] == '-' && pos_ == start + 1))
            fail("expected a value");
        return Value(Int(text_.substr(start, pos_ - start)));
    }

    bool ident_continues(size_t i) const {
        return i < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[i])) || text_[i] == '_');
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError(msg, line_, static_cast<int>(pos_) + 1);
    }

    const std::string& text_;
    size_t pos_ = 0;
    int line_;
};

}  // namespace detail

inline ErasedState parse_erased_state(const std::string& text, int line = 0) {
    return detail::ErasedStateReader(text, line).read();
}

}  // namespace tracelab
