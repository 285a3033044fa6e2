#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tracelab/eqn.hpp"
#include "tracelab/erased.hpp"
#include "tracelab/imp.hpp"
#include "tracelab/lam.hpp"

namespace tracelab {

enum class Language { imp, eqn, lam };

inline std::string to_string(Language lang) {
    switch (lang) {
        case Language::imp: return "imp";
        case Language::eqn: return "eqn";
        case Language::lam: return "lam";
    }
    return "?";
}

inline std::optional<Language> parse_language(const std::string& name) {
    if (name == "imp") return Language::imp;
    if (name == "eqn") return Language::eqn;
    if (name == "lam") return Language::lam;
    return std::nullopt;
}

// Which erasure to apply when projecting. The functional erasure is
// fixed; the imperative one keeps the listed variables in order, or all
// of them in allocation order when no list is given.
struct ProjectionSpec {
    std::optional<std::vector<std::string>> keep;
};

// A machine configuration of any of the three languages. The variant
// index is the language tag; payload kind and tag cannot disagree.
struct Config {
    std::variant<imp::Config, eqn::Config, lam::Config> payload;

    Config(imp::Config c) : payload(std::move(c)) {}
    Config(eqn::Config c) : payload(std::move(c)) {}
    Config(lam::Config c) : payload(std::move(c)) {}

    Language language() const { return static_cast<Language>(payload.index()); }

    friend bool operator==(const Config& a, const Config& b) {
        return a.payload == b.payload;
    }
    friend bool operator!=(const Config& a, const Config& b) { return !(a == b); }
};

inline std::vector<Config> step(const Config& c) {
    return std::visit(
        [](const auto& payload) -> std::vector<Config> {
            std::vector<Config> out;
            for (auto& next : step(payload)) out.push_back(Config(std::move(next)));
            return out;
        },
        c.payload);
}

inline ErasedState erase(const Config& c, const ProjectionSpec& spec) {
    if (const auto* ic = std::get_if<imp::Config>(&c.payload))
        return imp::erase(*ic, spec.keep);
    if (const auto* ec = std::get_if<eqn::Config>(&c.payload))
        return ErasedState::term(eqn::erase(ec->term));
    return ErasedState::term(lam::erase(std::get<lam::Config>(c.payload).term));
}

inline std::string to_string(const Config& c) {
    return std::visit([](const auto& payload) { return to_string(payload); }, c.payload);
}

}  // namespace tracelab
