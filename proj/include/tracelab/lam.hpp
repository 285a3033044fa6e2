#pragma once

#include <algorithm>
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

// Lambda calculus with a recursive abstraction: `fun f x -> t` binds both
// the parameter x and the abstraction itself as f, so
//   (fun f x -> t) u ⟶ t[u/x, (fun f x -> t)/f].
// Reduction is call-by-value, leftmost, with lazy `if` branches.
// Primitives (even, /, +, *) are curried constants that fire only when
// fully applied to literal values.
namespace tracelab::lam {

enum class Prim { even, divide, add, mul };

inline size_t arity(Prim p) { return p == Prim::even ? 1 : 2; }

inline std::string to_string(Prim p) {
    switch (p) {
        case Prim::even: return "even";
        case Prim::divide: return "/";
        case Prim::add: return "+";
        case Prim::mul: return "*";
    }
    return "?";
}

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
    struct PrimConst {
        Prim prim;
    };
    struct FixFun {
        std::string fname;
        std::string param;
        TermPtr body;
        bool sugar;  // written `fun x -> t`; fname is a fresh hidden name
    };
    struct App {
        TermPtr fn;
        TermPtr arg;
    };
    struct If {
        TermPtr cond;
        TermPtr then_branch;
        TermPtr else_branch;
    };

    std::variant<IntLit, BoolLit, Var, PrimConst, FixFun, App, If> node;
};

inline TermPtr make_int(Int v) { return std::make_shared<Term>(Term{Term::IntLit{std::move(v)}}); }
inline TermPtr make_bool(bool v) { return std::make_shared<Term>(Term{Term::BoolLit{v}}); }
inline TermPtr make_var(std::string n) { return std::make_shared<Term>(Term{Term::Var{std::move(n)}}); }
inline TermPtr make_prim(Prim p) { return std::make_shared<Term>(Term{Term::PrimConst{p}}); }
inline TermPtr make_fixfun(std::string f, std::string x, TermPtr body, bool sugar = false) {
    return std::make_shared<Term>(
        Term{Term::FixFun{std::move(f), std::move(x), std::move(body), sugar}});
}
inline TermPtr make_app(TermPtr fn, TermPtr arg) {
    return std::make_shared<Term>(Term{Term::App{std::move(fn), std::move(arg)}});
}
inline TermPtr make_if(TermPtr c, TermPtr a, TermPtr b) {
    return std::make_shared<Term>(Term{Term::If{std::move(c), std::move(a), std::move(b)}});
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
            } else if constexpr (std::is_same_v<T, Term::PrimConst>) {
                return na.prim == nb.prim;
            } else if constexpr (std::is_same_v<T, Term::FixFun>) {
                return na.fname == nb.fname && na.param == nb.param &&
                       equal(na.body, nb.body);
            } else if constexpr (std::is_same_v<T, Term::App>) {
                return equal(na.fn, nb.fn) && equal(na.arg, nb.arg);
            } else {
                return equal(na.cond, nb.cond) && equal(na.then_branch, nb.then_branch) &&
                       equal(na.else_branch, nb.else_branch);
            }
        },
        a.node);
}

struct Config {
    TermPtr term;  // closed

    friend bool operator==(const Config& a, const Config& b) {
        return equal(a.term, b.term);
    }
    friend bool operator!=(const Config& a, const Config& b) { return !(a == b); }
};

// ---------------------------------------------------------------------
// Application spines

namespace detail {

struct Spine {
    TermPtr head;
    std::vector<TermPtr> args;  // left to right
};

inline Spine flatten(const TermPtr& t) {
    Spine s;
    TermPtr cur = t;
    while (const auto* app = std::get_if<Term::App>(&cur->node)) {
        s.args.push_back(app->arg);
        cur = app->fn;
    }
    std::reverse(s.args.begin(), s.args.end());
    s.head = cur;
    return s;
}

}  // namespace detail

// Values: literals, primitive constants, abstractions, and partial
// applications of a primitive to values.
inline bool is_value(const TermPtr& t);

inline bool is_value(const TermPtr& t) {
    const Term& term = *t;
    if (is_literal(term) || std::holds_alternative<Term::PrimConst>(term.node) ||
        std::holds_alternative<Term::FixFun>(term.node))
        return true;
    if (std::holds_alternative<Term::App>(term.node)) {
        detail::Spine s = detail::flatten(t);
        const auto* prim = std::get_if<Term::PrimConst>(&s.head->node);
        if (!prim) return false;
        if (s.args.size() >= arity(prim->prim)) return false;
        for (const TermPtr& a : s.args)
            if (!is_value(a)) return false;
        return true;
    }
    return false;
}

// ---------------------------------------------------------------------
// Substitution

// Simultaneous substitution of closed terms for free variables in
// `body`. Inner binders shadow: a FixFun that rebinds a substituted name
// stops that substitution below it. With closed substituends this is
// capture-avoiding without renaming.
inline TermPtr substitute(const TermPtr& body,
                          const std::map<std::string, TermPtr>& subst) {
    if (subst.empty()) return body;
    return std::visit(
        [&](const auto& n) -> TermPtr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Term::Var>) {
                auto it = subst.find(n.name);
                return it == subst.end() ? body : it->second;
            } else if constexpr (std::is_same_v<T, Term::FixFun>) {
                std::map<std::string, TermPtr> inner = subst;
                inner.erase(n.fname);
                inner.erase(n.param);
                TermPtr new_body = substitute(n.body, inner);
                if (new_body == n.body) return body;
                return make_fixfun(n.fname, n.param, std::move(new_body), n.sugar);
            } else if constexpr (std::is_same_v<T, Term::App>) {
                TermPtr fn = substitute(n.fn, subst);
                TermPtr arg = substitute(n.arg, subst);
                if (fn == n.fn && arg == n.arg) return body;
                return make_app(std::move(fn), std::move(arg));
            } else if constexpr (std::is_same_v<T, Term::If>) {
                TermPtr c = substitute(n.cond, subst);
                TermPtr a = substitute(n.then_branch, subst);
                TermPtr b = substitute(n.else_branch, subst);
                if (c == n.cond && a == n.then_branch && b == n.else_branch) return body;
                return make_if(std::move(c), std::move(a), std::move(b));
            } else {
                return body;
            }
        },
        body->node);
}

// The fixfun β-step: t[u/x, rec/f].
inline TermPtr substitute(const TermPtr& body, const std::string& x, const TermPtr& u,
                          const std::string& f, const TermPtr& rec) {
    std::map<std::string, TermPtr> subst;
    subst.emplace(x, u);
    subst.emplace(f, rec);
    return substitute(body, subst);
}

// ---------------------------------------------------------------------
// Reduction

namespace detail {

inline Int literal_int(const TermPtr& t, Prim p) {
    if (const auto* n = std::get_if<Term::IntLit>(&t->node)) return n->value;
    throw StuckError("'" + to_string(p) + "' applied to a non-integer");
}

inline TermPtr apply_primitive(Prim p, const std::vector<TermPtr>& args) {
    switch (p) {
        case Prim::even: return make_bool(is_even(literal_int(args[0], p)));
        case Prim::divide:
            return make_int(div_trunc(literal_int(args[0], p), literal_int(args[1], p)));
        case Prim::add: return make_int(literal_int(args[0], p) + literal_int(args[1], p));
        case Prim::mul: return make_int(literal_int(args[0], p) * literal_int(args[1], p));
    }
    throw StuckError("unknown primitive");
}

// The unique call-by-value step, or nullptr for values and normal forms.
inline TermPtr reduce_once(const TermPtr& t) {
    const Term& term = *t;
    if (is_literal(term) || std::holds_alternative<Term::PrimConst>(term.node) ||
        std::holds_alternative<Term::FixFun>(term.node))
        return nullptr;
    if (const auto* v = std::get_if<Term::Var>(&term.node))
        throw StuckError("free variable '" + v->name + "' in term");

    if (const auto* cond = std::get_if<Term::If>(&term.node)) {
        if (!is_value(cond->cond)) {
            TermPtr c = reduce_once(cond->cond);
            if (!c) throw StuckError("if condition is stuck");
            return make_if(std::move(c), cond->then_branch, cond->else_branch);
        }
        if (const auto* b = std::get_if<Term::BoolLit>(&cond->cond->node))
            return b->value ? cond->then_branch : cond->else_branch;
        throw StuckError("if condition is not a boolean");
    }

    const auto& app = std::get<Term::App>(term.node);
    if (!is_value(app.fn)) {
        TermPtr fn = reduce_once(app.fn);
        if (!fn) throw StuckError("application head is stuck");
        return make_app(std::move(fn), app.arg);
    }
    if (!is_value(app.arg)) {
        TermPtr arg = reduce_once(app.arg);
        if (!arg) throw StuckError("application argument is stuck");
        return make_app(app.fn, std::move(arg));
    }
    // Both sides are values.
    if (const auto* fix = std::get_if<Term::FixFun>(&app.fn->node))
        return substitute(fix->body, fix->param, app.arg, fix->fname, app.fn);
    Spine s = flatten(t);
    if (const auto* prim = std::get_if<Term::PrimConst>(&s.head->node)) {
        if (s.args.size() == arity(prim->prim))
            return apply_primitive(prim->prim, s.args);
        if (s.args.size() < arity(prim->prim)) return nullptr;  // partial: a value
        throw StuckError("primitive '" + to_string(prim->prim) + "' applied to " +
                         std::to_string(s.args.size()) + " arguments");
    }
    throw StuckError("cannot apply a non-function");
}

}  // namespace detail

inline std::vector<Config> step(const Config& c) {
    TermPtr next = detail::reduce_once(c.term);
    if (!next) return {};
    return {Config{std::move(next)}};
}

// ---------------------------------------------------------------------
// Erasure: abstractions and primitive heads become the opaque <fun>;
// application spines flatten into one n-ary node, and `if` erases as a
// ternary head.

inline ErasedTerm erase(const TermPtr& t) {
    const Term& term = *t;
    if (const auto* n = std::get_if<Term::IntLit>(&term.node))
        return ErasedTerm::make_int(n->value);
    if (const auto* n = std::get_if<Term::BoolLit>(&term.node))
        return ErasedTerm::make_bool(n->value);
    if (const auto* n = std::get_if<Term::Var>(&term.node))
        throw StuckError("cannot erase an open term (variable '" + n->name + "')");
    if (std::holds_alternative<Term::PrimConst>(term.node) ||
        std::holds_alternative<Term::FixFun>(term.node))
        return ErasedTerm::make_fun();
    if (const auto* n = std::get_if<Term::If>(&term.node)) {
        std::vector<ErasedTerm> args;
        args.push_back(erase(n->cond));
        args.push_back(erase(n->then_branch));
        args.push_back(erase(n->else_branch));
        return ErasedTerm::make_app(std::move(args));
    }
    detail::Spine s = detail::flatten(t);
    std::vector<ErasedTerm> args;
    if (const auto* inner_if = std::get_if<Term::If>(&s.head->node)) {
        // An applied if: its three children join the argument list.
        args.push_back(erase(inner_if->cond));
        args.push_back(erase(inner_if->then_branch));
        args.push_back(erase(inner_if->else_branch));
    }
    for (const TermPtr& a : s.args) args.push_back(erase(a));
    if (args.empty()) return ErasedTerm::make_fun();
    return ErasedTerm::make_app(std::move(args));
}

// ---------------------------------------------------------------------
// Rendering

namespace detail {

// Precedence classes for the infix sugar: + is 1, * and / are 2;
// application spines, if-triples and even-calls are self-delimited.
inline std::optional<int> infix_level(Prim p) {
    switch (p) {
        case Prim::add: return 1;
        case Prim::mul:
        case Prim::divide: return 2;
        default: return std::nullopt;
    }
}

std::string render(const TermPtr& t, bool top_level);

// Render for use as an operand of an infix operator.
inline std::string render_operand(const TermPtr& t, int parent_level, bool right) {
    if (std::holds_alternative<Term::App>(t->node)) {
        Spine s = flatten(t);
        if (const auto* prim = std::get_if<Term::PrimConst>(&s.head->node)) {
            auto level = infix_level(prim->prim);
            if (level && s.args.size() == 2) {
                std::string text = render_operand(s.args[0], *level, false) + " " +
                                   to_string(prim->prim) + " " +
                                   render_operand(s.args[1], *level, true);
                bool parens = *level < parent_level || (*level == parent_level && right);
                return parens ? "(" + text + ")" : text;
            }
        }
    }
    if (std::holds_alternative<Term::FixFun>(t->node))
        return "(" + render(t, false) + ")";
    return render(t, false);
}

// Render for use as one element of an application spine.
inline std::string render_element(const TermPtr& t) {
    if (std::holds_alternative<Term::FixFun>(t->node))
        return "(" + render(t, false) + ")";
    if (std::holds_alternative<Term::App>(t->node)) {
        Spine s = flatten(t);
        if (const auto* prim = std::get_if<Term::PrimConst>(&s.head->node)) {
            auto level = infix_level(prim->prim);
            if (level && s.args.size() == 2) return "(" + render(t, false) + ")";
        }
    }
    return render(t, false);
}

inline std::string render(const TermPtr& t, bool top_level) {
    const Term& term = *t;
    if (const auto* n = std::get_if<Term::IntLit>(&term.node)) return n->value.str();
    if (const auto* n = std::get_if<Term::BoolLit>(&term.node))
        return n->value ? "true" : "false";
    if (const auto* n = std::get_if<Term::Var>(&term.node)) return n->name;
    if (const auto* n = std::get_if<Term::PrimConst>(&term.node))
        return to_string(n->prim);
    if (const auto* n = std::get_if<Term::FixFun>(&term.node)) {
        std::string binder = n->sugar ? "fun " + n->param : "fun " + n->fname + " " + n->param;
        return binder + " -> " + render(n->body, false);
    }
    if (const auto* n = std::get_if<Term::If>(&term.node)) {
        return "(if " + render_element(n->cond) + " " + render_element(n->then_branch) +
               " " + render_element(n->else_branch) + ")";
    }
    Spine s = flatten(t);
    if (const auto* prim = std::get_if<Term::PrimConst>(&s.head->node)) {
        auto level = infix_level(prim->prim);
        if (level && s.args.size() == 2) {
            return render_operand(s.args[0], *level, false) + " " +
                   to_string(prim->prim) + " " + render_operand(s.args[1], *level, true);
        }
        if (prim->prim == Prim::even && s.args.size() == 1)
            return "(even " + render_element(s.args[0]) + ")";
    }
    std::string inner = render_element(s.head);
    for (const TermPtr& a : s.args) inner += " " + render_element(a);
    return top_level ? inner : "(" + inner + ")";
}

}  // namespace detail

inline std::string to_string(const TermPtr& t) { return detail::render(t, true); }

inline std::string to_string(const Config& c) { return to_string(c.term); }

// ---------------------------------------------------------------------
// Parsing

namespace detail {

using tracelab::detail::Token;

inline const std::vector<std::string>& symbols() {
    static const std::vector<std::string> syms = {"(", ")", "->", "→",
                                                  "+", "*", "/"};
    return syms;
}

inline bool keyword(const std::string& s) {
    return s == "fun" || s == "if" || s == "even" || s == "true" || s == "false";
}

class Parser {
  public:
    explicit Parser(const std::string& source) : lex_(source, symbols()) {
        // Collect every identifier up front so generated recursion names
        // cannot collide with source names.
        tracelab::detail::Lexer scan(source, symbols());
        while (!scan.at_end()) {
            Token t = scan.next();
            if (t.kind == Token::Kind::Ident) used_names_.insert(t.text);
        }
    }

    TermPtr parse() {
        TermPtr t = term();
        if (!lex_.at_end()) lex_.fail("expected end of term");
        check_closed(t, {});
        return t;
    }

  private:
    TermPtr term() {
        if (lex_.peek().is_ident("fun")) return lambda();
        return additive();
    }

    TermPtr lambda() {
        lex_.expect_keyword("fun");
        Token first = lex_.expect_ident();
        if (keyword(first.text))
            throw ParseError("'" + first.text + "' cannot be a binder", first.line,
                             first.column);
        if (lex_.peek().kind == Token::Kind::Ident) {
            Token second = lex_.expect_ident();
            if (keyword(second.text))
                throw ParseError("'" + second.text + "' cannot be a binder", second.line,
                                 second.column);
            arrow();
            return make_fixfun(first.text, second.text, term());
        }
        arrow();
        return make_fixfun(fresh_name(), first.text, term(), /*sugar=*/true);
    }

    void arrow() {
        if (lex_.peek().is_symbol("->") || lex_.peek().is_symbol("→")) {
            lex_.next();
            return;
        }
        lex_.fail("expected '->'");
    }

    TermPtr additive() {
        TermPtr t = multiplicative();
        while (lex_.peek().is_symbol("+")) {
            lex_.next();
            t = make_app(make_app(make_prim(Prim::add), std::move(t)), multiplicative());
        }
        return t;
    }

    TermPtr multiplicative() {
        TermPtr t = application();
        for (;;) {
            Prim p;
            if (lex_.peek().is_symbol("*")) p = Prim::mul;
            else if (lex_.peek().is_symbol("/")) p = Prim::divide;
            else break;
            lex_.next();
            t = make_app(make_app(make_prim(p), std::move(t)), application());
        }
        return t;
    }

    TermPtr application() {
        TermPtr t = atom();
        while (starts_atom()) t = make_app(std::move(t), atom());
        return t;
    }

    bool starts_atom() const {
        const Token& t = lex_.peek();
        if (t.kind == Token::Kind::Integer) return true;
        if (t.kind == Token::Kind::Ident) return t.text != "fun" && t.text != "if";
        return t.is_symbol("(");
    }

    TermPtr atom() {
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
        if (t.is_ident("even")) {
            lex_.next();
            return make_prim(Prim::even);
        }
        if (t.kind == Token::Kind::Ident && !keyword(t.text))
            return make_var(lex_.next().text);
        if (t.is_symbol("(")) {
            lex_.next();
            TermPtr inner = paren_body();
            lex_.expect_symbol(")");
            return inner;
        }
        lex_.fail("expected a term");
    }

    TermPtr paren_body() {
        const Token& t = lex_.peek();
        if (t.is_ident("if")) {
            // The three operands are atoms; juxtaposition would otherwise
            // swallow the next operand into an application spine.
            lex_.next();
            TermPtr c = atom();
            TermPtr a = atom();
            TermPtr b = atom();
            return make_if(std::move(c), std::move(a), std::move(b));
        }
        // Prefix use of an operator: (/ x 2), (+ a b), (* a b).
        if (t.is_symbol("/") || t.is_symbol("+") || t.is_symbol("*")) {
            Prim p = t.text == "/" ? Prim::divide : t.text == "+" ? Prim::add : Prim::mul;
            lex_.next();
            TermPtr out = make_prim(p);
            while (starts_atom()) out = make_app(std::move(out), atom());
            return out;
        }
        return term();
    }

    std::string fresh_name() {
        for (;;) {
            std::string candidate = "_r" + std::to_string(counter_++);
            if (!used_names_.count(candidate)) return candidate;
        }
    }

    void check_closed(const TermPtr& t, std::set<std::string> bound) {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Term::Var>) {
                    if (!bound.count(n.name))
                        throw ParseError("free variable '" + n.name + "'");
                } else if constexpr (std::is_same_v<T, Term::FixFun>) {
                    std::set<std::string> inner = bound;
                    inner.insert(n.fname);
                    inner.insert(n.param);
                    check_closed(n.body, std::move(inner));
                } else if constexpr (std::is_same_v<T, Term::App>) {
                    check_closed(n.fn, bound);
                    check_closed(n.arg, bound);
                } else if constexpr (std::is_same_v<T, Term::If>) {
                    check_closed(n.cond, bound);
                    check_closed(n.then_branch, bound);
                    check_closed(n.else_branch, bound);
                }
            },
            t->node);
    }

    tracelab::detail::Lexer lex_;
    std::set<std::string> used_names_;
    int counter_ = 0;
};

}  // namespace detail

inline TermPtr parse(const std::string& source) { return detail::Parser(source).parse(); }

}  // namespace tracelab::lam
