#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tracelab/erased.hpp"
#include "tracelab/errors.hpp"
#include "tracelab/lexer.hpp"
#include "tracelab/value.hpp"

// First-order recursive equations: rewrite rules f(p1,...,pn) = rhs with
// variable or literal patterns, reduced call-by-value (leftmost-innermost
// among strict positions) against a pool of primitives. `if` is lazy in
// its branches; everything else is strict everywhere.
namespace tracelab::eqn {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
    struct IntLit {
        Int value;
    };
    struct BoolLit {
        bool value;
    };
    struct Var {
        std::string name;
    };
    struct App {
        std::string name;  // defined function or primitive
        std::vector<TermPtr> args;
    };

    std::variant<IntLit, BoolLit, Var, App> node;
};

inline TermPtr make_int(Int v) { return std::make_shared<Term>(Term{Term::IntLit{std::move(v)}}); }
inline TermPtr make_bool(bool v) { return std::make_shared<Term>(Term{Term::BoolLit{v}}); }
inline TermPtr make_var(std::string n) { return std::make_shared<Term>(Term{Term::Var{std::move(n)}}); }
inline TermPtr make_app(std::string name, std::vector<TermPtr> args) {
    return std::make_shared<Term>(Term{Term::App{std::move(name), std::move(args)}});
}
inline TermPtr make_literal(const Value& v) {
    return v.is_bool() ? make_bool(v.as_bool()) : make_int(v.as_int());
}

inline bool is_literal(const Term& t) {
    return std::holds_alternative<Term::IntLit>(t.node) ||
           std::holds_alternative<Term::BoolLit>(t.node);
}

bool operator==(const Term& a, const Term& b);

inline bool equal(const TermPtr& a, const TermPtr& b) {
    if (a == b) return true;
    return a && b && *a == *b;
}

inline bool operator==(const Term& a, const Term& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&b](const auto& na) -> bool {
            using T = std::decay_t<decltype(na)>;
            const auto& nb = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, Term::IntLit>) {
                return na.value == nb.value;
            } else if constexpr (std::is_same_v<T, Term::BoolLit>) {
                return na.value == nb.value;
            } else if constexpr (std::is_same_v<T, Term::Var>) {
                return na.name == nb.name;
            } else {
                if (na.name != nb.name || na.args.size() != nb.args.size()) return false;
                for (size_t i = 0; i < na.args.size(); ++i)
                    if (!equal(na.args[i], nb.args[i])) return false;
                return true;
            }
        },
        a.node);
}

// One rewrite rule f(p1,...,pn) = rhs. Patterns are variables or
// literals; left-linearity is enforced by the parser.
struct Rule {
    std::string fname;
    std::vector<TermPtr> patterns;
    TermPtr rhs;

    friend bool operator==(const Rule& a, const Rule& b) {
        if (a.fname != b.fname || a.patterns.size() != b.patterns.size()) return false;
        for (size_t i = 0; i < a.patterns.size(); ++i)
            if (!equal(a.patterns[i], b.patterns[i])) return false;
        return equal(a.rhs, b.rhs);
    }
};

struct Program {
    std::vector<Rule> rules;  // source order; first match wins

    bool defines(const std::string& name) const {
        for (const Rule& r : rules)
            if (r.fname == name) return true;
        return false;
    }

    friend bool operator==(const Program& a, const Program& b) {
        return a.rules == b.rules;
    }
};

using ProgramPtr = std::shared_ptr<const Program>;

struct Config {
    ProgramPtr program;
    TermPtr term;  // closed

    friend bool operator==(const Config& a, const Config& b) {
        bool same_program = a.program == b.program ||
                            (a.program && b.program && *a.program == *b.program);
        return same_program && equal(a.term, b.term);
    }
    friend bool operator!=(const Config& a, const Config& b) { return !(a == b); }
};

// ---------------------------------------------------------------------
// Primitives

inline std::optional<size_t> primitive_arity(const std::string& name) {
    if (name == "even") return 1;
    if (name == "/" || name == "+" || name == "*") return 2;
    if (name == "if") return 3;
    return std::nullopt;
}

namespace detail {

inline Int literal_int(const TermPtr& t, const std::string& who) {
    if (const auto* n = std::get_if<Term::IntLit>(&t->node)) return n->value;
    throw StuckError(who + " applied to a non-integer");
}

inline TermPtr apply_primitive(const std::string& name,
                               const std::vector<TermPtr>& args) {
    if (name == "even") return make_bool(is_even(literal_int(args[0], "even")));
    if (name == "/")
        return make_int(div_trunc(literal_int(args[0], "/"), literal_int(args[1], "/")));
    if (name == "+") return make_int(literal_int(args[0], "+") + literal_int(args[1], "+"));
    if (name == "*") return make_int(literal_int(args[0], "*") * literal_int(args[1], "*"));
    throw StuckError("unknown primitive '" + name + "'");
}

// First rule (source order) whose patterns match the literal arguments;
// returns the instantiated right-hand side.
inline TermPtr apply_rules(const Program& program, const std::string& name,
                           const std::vector<TermPtr>& args) {
    for (const Rule& rule : program.rules) {
        if (rule.fname != name || rule.patterns.size() != args.size()) continue;
        std::map<std::string, TermPtr> binding;
        bool ok = true;
        for (size_t i = 0; i < args.size() && ok; ++i) {
            const Term& pat = *rule.patterns[i];
            if (const auto* v = std::get_if<Term::Var>(&pat.node)) {
                binding.emplace(v->name, args[i]);
            } else {
                ok = equal(rule.patterns[i], args[i]);
            }
        }
        if (!ok) continue;
        // Instantiate rhs; every rhs variable is bound (parser invariant).
        struct Subst {
            const std::map<std::string, TermPtr>& binding;
            TermPtr operator()(const TermPtr& t) const {
                if (const auto* v = std::get_if<Term::Var>(&t->node))
                    return binding.at(v->name);
                if (const auto* app = std::get_if<Term::App>(&t->node)) {
                    std::vector<TermPtr> args2;
                    args2.reserve(app->args.size());
                    for (const TermPtr& a : app->args) args2.push_back((*this)(a));
                    return make_app(app->name, std::move(args2));
                }
                return t;
            }
        };
        return Subst{binding}(rule.rhs);
    }
    throw StuckError("no rule matches '" + name + "' with these arguments");
}

// The unique call-by-value step, or nullptr when t is a normal form
// (a literal). Walks strict positions leftmost-innermost; `if` is strict
// only in its condition.
inline TermPtr reduce_once(const Program& program, const TermPtr& t) {
    if (is_literal(*t)) return nullptr;
    if (const auto* v = std::get_if<Term::Var>(&t->node))
        throw StuckError("free variable '" + v->name + "' in term");

    const auto& app = std::get<Term::App>(t->node);
    size_t strict_end = app.name == "if" ? 1 : app.args.size();
    for (size_t i = 0; i < strict_end; ++i) {
        if (is_literal(*app.args[i])) continue;
        TermPtr reduced = reduce_once(program, app.args[i]);
        std::vector<TermPtr> args = app.args;
        args[i] = std::move(reduced);
        return make_app(app.name, std::move(args));
    }
    // All strict arguments are literals: the application itself fires.
    if (app.name == "if") {
        const auto* c = std::get_if<Term::BoolLit>(&app.args[0]->node);
        if (!c) throw StuckError("if condition is not a boolean");
        return c->value ? app.args[1] : app.args[2];
    }
    if (primitive_arity(app.name)) return apply_primitive(app.name, app.args);
    return apply_rules(program, app.name, app.args);
}

}  // namespace detail

// At most one successor: the language is deterministic.
inline std::vector<Config> step(const Config& c) {
    TermPtr next = detail::reduce_once(*c.program, c.term);
    if (!next) return {};
    return {Config{c.program, std::move(next)}};
}

// ---------------------------------------------------------------------
// Erasure: drop every application name, keep the tree.

inline ErasedTerm erase(const Term& t) {
    return std::visit(
        [](const auto& n) -> ErasedTerm {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Term::IntLit>) {
                return ErasedTerm::make_int(n.value);
            } else if constexpr (std::is_same_v<T, Term::BoolLit>) {
                return ErasedTerm::make_bool(n.value);
            } else if constexpr (std::is_same_v<T, Term::Var>) {
                throw StuckError("cannot erase an open term (variable '" + n.name + "')");
            } else {
                std::vector<ErasedTerm> args;
                args.reserve(n.args.size());
                for (const TermPtr& a : n.args) args.push_back(erase(*a));
                return ErasedTerm::make_app(std::move(args));
            }
        },
        t.node);
}

inline ErasedTerm erase(const TermPtr& t) { return erase(*t); }

// ---------------------------------------------------------------------
// Rendering: name(a1,...,an), no interior whitespace.

inline std::string to_string(const Term& t) {
    return std::visit(
        [](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Term::IntLit>) {
                return n.value.str();
            } else if constexpr (std::is_same_v<T, Term::BoolLit>) {
                return n.value ? "true" : "false";
            } else if constexpr (std::is_same_v<T, Term::Var>) {
                return n.name;
            } else {
                std::string out = n.name + "(";
                for (size_t i = 0; i < n.args.size(); ++i) {
                    if (i) out += ',';
                    out += to_string(*n.args[i]);
                }
                return out + ")";
            }
        },
        t.node);
}

inline std::string to_string(const TermPtr& t) { return to_string(*t); }

inline std::string to_string(const Config& c) { return to_string(c.term); }

// ---------------------------------------------------------------------
// Parsing. One rule per line, `lhs = rhs`, `#` comments.

namespace detail {

using tracelab::detail::Token;

inline const std::vector<std::string>& symbols() {
    static const std::vector<std::string> syms = {"(", ")", ",", "=", "/", "+", "*"};
    return syms;
}

inline bool reserved_word(const std::string& s) {
    return s == "true" || s == "false";
}

class LineParser {
  public:
    LineParser(const std::string& line, int line_no,
               const std::set<std::string>& defined)
        : lex_(line, symbols(), /*hash_comments=*/true, line_no), defined_(defined) {}

    // Pattern side: name(p1,...,pn) with distinct variables.
    Rule rule() {
        Token name = lex_.expect_ident();
        if (reserved_word(name.text) || primitive_arity(name.text))
            throw ParseError("cannot define '" + name.text + "'", name.line, name.column);
        Rule r;
        r.fname = name.text;
        lex_.expect_symbol("(");
        std::set<std::string> seen;
        r.patterns.push_back(pattern(seen));
        while (lex_.peek().is_symbol(",")) {
            lex_.next();
            r.patterns.push_back(pattern(seen));
        }
        lex_.expect_symbol(")");
        lex_.expect_symbol("=");
        r.rhs = term(seen);
        if (!lex_.at_end()) lex_.fail("one rule per line");
        return r;
    }

  private:
    TermPtr pattern(std::set<std::string>& seen) {
        const Token& t = lex_.peek();
        if (t.kind == Token::Kind::Integer) return make_int(Int(lex_.next().text));
        if (t.is_ident("true")) {
            lex_.next();
            return make_bool(true);
        }
        if (t.is_ident("false")) {
            lex_.next();
            return make_bool(false);
        }
        if (t.kind == Token::Kind::Ident) {
            if (primitive_arity(t.text) || defined_.count(t.text))
                throw ParseError("pattern variable '" + t.text + "' shadows a function",
                                 t.line, t.column);
            if (!seen.insert(t.text).second)
                throw ParseError("nonlinear pattern: variable '" + t.text + "' repeats",
                                 t.line, t.column);
            return make_var(lex_.next().text);
        }
        lex_.fail("expected a pattern (variable or literal)");
    }

    TermPtr term(const std::set<std::string>& bound) {
        const Token& t = lex_.peek();
        if (t.kind == Token::Kind::Integer) return make_int(Int(lex_.next().text));
        if (t.is_ident("true")) {
            lex_.next();
            return make_bool(true);
        }
        if (t.is_ident("false")) {
            lex_.next();
            return make_bool(false);
        }
        // A primitive spelled as a symbol: /(x,2), +(a,b), *(a,b).
        if (t.is_symbol("/") || t.is_symbol("+") || t.is_symbol("*"))
            return application(lex_.next(), bound);
        if (t.kind == Token::Kind::Ident) {
            Token name = lex_.next();
            if (lex_.peek().is_symbol("(")) return application(name, bound);
            if (bound.count(name.text)) return make_var(name.text);
            throw ParseError("unbound variable '" + name.text + "'", name.line,
                             name.column);
        }
        lex_.fail("expected a term");
    }

    TermPtr application(const Token& name, const std::set<std::string>& bound) {
        bool is_primitive = primitive_arity(name.text).has_value();
        if (!is_primitive && !defined_.count(name.text))
            throw ParseError("unknown function '" + name.text + "'", name.line,
                             name.column);
        lex_.expect_symbol("(");
        std::vector<TermPtr> args;
        args.push_back(term(bound));
        while (lex_.peek().is_symbol(",")) {
            lex_.next();
            args.push_back(term(bound));
        }
        lex_.expect_symbol(")");
        if (auto arity = primitive_arity(name.text); arity && args.size() != *arity)
            throw ParseError("'" + name.text + "' takes " + std::to_string(*arity) +
                                 " arguments, got " + std::to_string(args.size()),
                             name.line, name.column);
        return make_app(name.text, std::move(args));
    }

    tracelab::detail::Lexer lex_;
    const std::set<std::string>& defined_;
};

inline std::string strip_comment(const std::string& line) {
    size_t hash = line.find('#');
    return hash == std::string::npos ? line : line.substr(0, hash);
}

inline bool blank(const std::string& line) {
    for (char c : line)
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace detail

inline ProgramPtr parse(const std::string& source) {
    // Collect the defined names first so rules can call forward.
    std::vector<std::pair<int, std::string>> rule_lines;
    std::set<std::string> defined;
    int line_no = 0;
    size_t pos = 0;
    while (pos <= source.size()) {
        size_t eol = source.find('\n', pos);
        std::string line = source.substr(
            pos, eol == std::string::npos ? std::string::npos : eol - pos);
        ++line_no;
        pos = eol == std::string::npos ? source.size() + 1 : eol + 1;
        std::string body = detail::strip_comment(line);
        if (detail::blank(body)) continue;
        rule_lines.emplace_back(line_no, body);
        size_t start = body.find_first_not_of(" \t");
        size_t end = start;
        while (end < body.size() &&
               (std::isalnum(static_cast<unsigned char>(body[end])) || body[end] == '_'))
            ++end;
        if (end > start && start != std::string::npos)
            defined.insert(body.substr(start, end - start));
    }

    auto program = std::make_shared<Program>();
    for (const auto& [no, text] : rule_lines)
        program->rules.push_back(detail::LineParser(text, no, defined).rule());
    if (program->rules.empty()) throw ParseError("program has no rules");
    return program;
}

// Build the initial term entry(v) for a program input.
inline TermPtr make_call(const Program& program, const std::string& entry,
                         const std::vector<Value>& args) {
    if (!program.defines(entry))
        throw ParseError("entry function '" + entry + "' is not defined");
    std::vector<TermPtr> terms;
    terms.reserve(args.size());
    for (const Value& v : args) terms.push_back(make_literal(v));
    return make_app(entry, std::move(terms));
}

}  // namespace tracelab::eqn
