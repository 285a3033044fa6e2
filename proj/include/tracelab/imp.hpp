#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tracelab/erased.hpp"
#include "tracelab/errors.hpp"
#include "tracelab/lexer.hpp"
#include "tracelab/value.hpp"

// The small imperative language: skip, assignment, sequencing, blocks,
// if, while, and a nondeterministic power-of-two choice. Programs step
// over ⟨statement sequence, store⟩ pairs; the empty program is the
// irreducible configuration.
namespace tracelab::imp {

// ---------------------------------------------------------------------
// Expressions

enum class BinOp { add, sub, mul, div, eq, lt, le, logical_and, logical_or };
enum class UnOp { even, logical_not };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    struct IntLit {
        Int value;
    };
    struct BoolLit {
        bool value;
    };
    struct Var {
        std::string name;
    };
    struct Binary {
        BinOp op;
        ExprPtr lhs;
        ExprPtr rhs;
    };
    struct Unary {
        UnOp op;
        ExprPtr operand;
    };

    std::variant<IntLit, BoolLit, Var, Binary, Unary> node;
};

inline ExprPtr make_int(Int v) { return std::make_shared<Expr>(Expr{Expr::IntLit{std::move(v)}}); }
inline ExprPtr make_bool(bool v) { return std::make_shared<Expr>(Expr{Expr::BoolLit{v}}); }
inline ExprPtr make_var(std::string n) { return std::make_shared<Expr>(Expr{Expr::Var{std::move(n)}}); }
inline ExprPtr make_binary(BinOp op, ExprPtr l, ExprPtr r) {
    return std::make_shared<Expr>(Expr{Expr::Binary{op, std::move(l), std::move(r)}});
}
inline ExprPtr make_unary(UnOp op, ExprPtr e) {
    return std::make_shared<Expr>(Expr{Expr::Unary{op, std::move(e)}});
}

bool operator==(const Expr& a, const Expr& b);

inline bool equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    return a && b && *a == *b;
}

inline bool operator==(const Expr& a, const Expr& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&b](const auto& na) -> bool {
            using T = std::decay_t<decltype(na)>;
            const auto& nb = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, Expr::IntLit>) {
                return na.value == nb.value;
            } else if constexpr (std::is_same_v<T, Expr::BoolLit>) {
                return na.value == nb.value;
            } else if constexpr (std::is_same_v<T, Expr::Var>) {
                return na.name == nb.name;
            } else if constexpr (std::is_same_v<T, Expr::Binary>) {
                return na.op == nb.op && equal(na.lhs, nb.lhs) && equal(na.rhs, nb.rhs);
            } else {
                return na.op == nb.op && equal(na.operand, nb.operand);
            }
        },
        a.node);
}

// ---------------------------------------------------------------------
// Statements

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;
using StmtSeq = std::vector<StmtPtr>;

struct Stmt {
    struct Skip {};
    struct Assign {
        std::string var;
        ExprPtr expr;
    };
    struct Block {
        StmtSeq body;
    };
    struct If {
        ExprPtr cond;
        StmtSeq then_branch;  // may be empty (skip-like)
        StmtSeq else_branch;
    };
    struct While {
        ExprPtr cond;
        StmtSeq body;
    };
    // x :∈ pow2div(t): one successor per power-of-two divisor of t.
    struct ChoosePow2Div {
        std::string var;
        ExprPtr expr;
    };

    std::variant<Skip, Assign, Block, If, While, ChoosePow2Div> node;
};

inline StmtPtr make_skip() { return std::make_shared<Stmt>(Stmt{Stmt::Skip{}}); }
inline StmtPtr make_assign(std::string var, ExprPtr e) {
    return std::make_shared<Stmt>(Stmt{Stmt::Assign{std::move(var), std::move(e)}});
}
inline StmtPtr make_block(StmtSeq body) {
    return std::make_shared<Stmt>(Stmt{Stmt::Block{std::move(body)}});
}
inline StmtPtr make_if(ExprPtr cond, StmtSeq then_branch, StmtSeq else_branch) {
    return std::make_shared<Stmt>(
        Stmt{Stmt::If{std::move(cond), std::move(then_branch), std::move(else_branch)}});
}
inline StmtPtr make_while(ExprPtr cond, StmtSeq body) {
    return std::make_shared<Stmt>(Stmt{Stmt::While{std::move(cond), std::move(body)}});
}
inline StmtPtr make_choose_pow2div(std::string var, ExprPtr e) {
    return std::make_shared<Stmt>(Stmt{Stmt::ChoosePow2Div{std::move(var), std::move(e)}});
}

bool operator==(const Stmt& a, const Stmt& b);

inline bool equal(const StmtSeq& a, const StmtSeq& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == b[i]) continue;
        if (!a[i] || !b[i] || !(*a[i] == *b[i])) return false;
    }
    return true;
}

inline bool operator==(const Stmt& a, const Stmt& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&b](const auto& na) -> bool {
            using T = std::decay_t<decltype(na)>;
            const auto& nb = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, Stmt::Skip>) {
                return true;
            } else if constexpr (std::is_same_v<T, Stmt::Assign>) {
                return na.var == nb.var && equal(na.expr, nb.expr);
            } else if constexpr (std::is_same_v<T, Stmt::Block>) {
                return equal(na.body, nb.body);
            } else if constexpr (std::is_same_v<T, Stmt::If>) {
                return equal(na.cond, nb.cond) && equal(na.then_branch, nb.then_branch) &&
                       equal(na.else_branch, nb.else_branch);
            } else if constexpr (std::is_same_v<T, Stmt::While>) {
                return equal(na.cond, nb.cond) && equal(na.body, nb.body);
            } else {
                return na.var == nb.var && equal(na.expr, nb.expr);
            }
        },
        a.node);
}

// ---------------------------------------------------------------------
// Store

// Variable environment with stable allocation order: updating a bound
// variable keeps its position, assigning a fresh one appends it.
class Store {
  public:
    Store() = default;
    explicit Store(std::vector<std::pair<std::string, Value>> bindings)
        : bindings_(std::move(bindings)) {
        for (size_t i = 0; i < bindings_.size(); ++i)
            for (size_t j = i + 1; j < bindings_.size(); ++j)
                if (bindings_[i].first == bindings_[j].first)
                    throw Error("duplicate variable '" + bindings_[i].first +
                                "' in store");
    }

    const Value* lookup(const std::string& name) const {
        for (const auto& [n, v] : bindings_)
            if (n == name) return &v;
        return nullptr;
    }

    Store with(const std::string& name, Value v) const {
        Store next = *this;
        for (auto& [n, existing] : next.bindings_) {
            if (n == name) {
                existing = std::move(v);
                return next;
            }
        }
        next.bindings_.emplace_back(name, std::move(v));
        return next;
    }

    const std::vector<std::pair<std::string, Value>>& bindings() const {
        return bindings_;
    }

    std::string to_string() const {
        std::string out = "⟨";
        for (size_t i = 0; i < bindings_.size(); ++i) {
            if (i) out += ", ";
            out += bindings_[i].first + " = " + bindings_[i].second.to_string();
        }
        out += "⟩";
        return out;
    }

    friend bool operator==(const Store& a, const Store& b) {
        return a.bindings_ == b.bindings_;
    }
    friend bool operator!=(const Store& a, const Store& b) { return !(a == b); }

  private:
    std::vector<std::pair<std::string, Value>> bindings_;
};

// ---------------------------------------------------------------------
// Configurations

struct Config {
    StmtSeq program;  // empty program = irreducible
    Store store;

    bool terminal() const { return program.empty(); }

    friend bool operator==(const Config& a, const Config& b) {
        return equal(a.program, b.program) && a.store == b.store;
    }
    friend bool operator!=(const Config& a, const Config& b) { return !(a == b); }
};

// ---------------------------------------------------------------------
// Expression evaluation  ⟦t⟧ρ

inline Value eval_expr(const Expr& e, const Store& store) {
    return std::visit(
        [&store](const auto& n) -> Value {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Expr::IntLit>) {
                return Value(n.value);
            } else if constexpr (std::is_same_v<T, Expr::BoolLit>) {
                return Value(n.value);
            } else if constexpr (std::is_same_v<T, Expr::Var>) {
                const Value* v = store.lookup(n.name);
                if (!v) throw StuckError("unbound variable '" + n.name + "'");
                return *v;
            } else if constexpr (std::is_same_v<T, Expr::Binary>) {
                Value l = eval_expr(*n.lhs, store);
                Value r = eval_expr(*n.rhs, store);
                switch (n.op) {
                    case BinOp::add: return Value(l.as_int() + r.as_int());
                    case BinOp::sub: return Value(l.as_int() - r.as_int());
                    case BinOp::mul: return Value(l.as_int() * r.as_int());
                    case BinOp::div: return Value(div_trunc(l.as_int(), r.as_int()));
                    case BinOp::lt: return Value(l.as_int() < r.as_int());
                    case BinOp::le: return Value(l.as_int() <= r.as_int());
                    case BinOp::eq:
                        if (l.is_int() != r.is_int())
                            throw StuckError("'=' compares values of one kind");
                        return Value(l == r);
                    case BinOp::logical_and: return Value(l.as_bool() && r.as_bool());
                    case BinOp::logical_or: return Value(l.as_bool() || r.as_bool());
                }
                throw StuckError("unknown binary operator");
            } else {
                Value v = eval_expr(*n.operand, store);
                if (n.op == UnOp::even) return Value(is_even(v.as_int()));
                return Value(!v.as_bool());
            }
        },
        e.node);
}

inline Value eval_expr(const ExprPtr& e, const Store& store) { return eval_expr(*e, store); }

// ---------------------------------------------------------------------
// Small step

namespace detail {

inline StmtSeq splice(const StmtSeq& front, StmtSeq rest) {
    StmtSeq out;
    out.reserve(front.size() + rest.size());
    out.insert(out.end(), front.begin(), front.end());
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

// {2^i | i ≥ 1, 2^i divides v}, ascending. Infinite for v = 0 and empty
// for odd v; both are reported as stuck configurations.
inline std::vector<Int> pow2_divisors(const Int& v) {
    if (v == 0) throw StuckError("pow2div of zero has no finite choice set");
    std::vector<Int> out;
    Int p = 2;
    while (v % p == 0) {
        out.push_back(p);
        p *= 2;
    }
    if (out.empty()) throw StuckError("pow2div of an odd number is empty");
    return out;
}

}  // namespace detail

// Head-statement dispatch. Returns the canonical successor set: singleton
// for every deterministic rule, one successor per divisor (ascending) for
// the choice statement, empty for the terminal configuration.
inline std::vector<Config> step(const Config& c) {
    if (c.program.empty()) return {};
    StmtSeq rest(c.program.begin() + 1, c.program.end());
    const Stmt& head = *c.program.front();
    return std::visit(
        [&](const auto& n) -> std::vector<Config> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Stmt::Skip>) {
                return {Config{std::move(rest), c.store}};
            } else if constexpr (std::is_same_v<T, Stmt::Assign>) {
                Value v = eval_expr(n.expr, c.store);
                return {Config{std::move(rest), c.store.with(n.var, std::move(v))}};
            } else if constexpr (std::is_same_v<T, Stmt::Block>) {
                return {Config{detail::splice(n.body, std::move(rest)), c.store}};
            } else if constexpr (std::is_same_v<T, Stmt::If>) {
                Value v = eval_expr(n.cond, c.store);
                const StmtSeq& branch = v.as_bool() ? n.then_branch : n.else_branch;
                return {Config{detail::splice(branch, std::move(rest)), c.store}};
            } else if constexpr (std::is_same_v<T, Stmt::While>) {
                // while t do p  ⟶  if t then p; while t do p else skip
                StmtSeq unrolled = n.body;
                unrolled.push_back(c.program.front());
                StmtPtr unfold = make_if(n.cond, std::move(unrolled), {make_skip()});
                StmtSeq next{std::move(unfold)};
                next.insert(next.end(), rest.begin(), rest.end());
                return {Config{std::move(next), c.store}};
            } else {
                Value v = eval_expr(n.expr, c.store);
                std::vector<Config> out;
                for (const Int& p : detail::pow2_divisors(v.as_int()))
                    out.push_back(Config{rest, c.store.with(n.var, Value(p))});
                return out;
            }
        },
        head.node);
}

// ---------------------------------------------------------------------
// Erasure: drop the program, keep selected variable values in order.

// keep = nullopt keeps every variable in allocation order; names in the
// keep list that are not (yet) bound are skipped.
inline ErasedState erase(const Config& c,
                         const std::optional<std::vector<std::string>>& keep = {}) {
    std::vector<Value> values;
    if (!keep) {
        for (const auto& [name, v] : c.store.bindings()) values.push_back(v);
    } else {
        for (const std::string& name : *keep)
            if (const Value* v = c.store.lookup(name)) values.push_back(*v);
    }
    return ErasedState::tuple(std::move(values));
}

// ---------------------------------------------------------------------
// Rendering (source-like syntax)

namespace detail {

// Precedence levels, loosest first: or < and < comparison < additive
// < multiplicative < atom.
inline int precedence(BinOp op) {
    switch (op) {
        case BinOp::logical_or: return 1;
        case BinOp::logical_and: return 2;
        case BinOp::eq:
        case BinOp::lt:
        case BinOp::le: return 3;
        case BinOp::add:
        case BinOp::sub: return 4;
        case BinOp::mul:
        case BinOp::div: return 5;
    }
    return 6;
}

inline std::string op_text(BinOp op) {
    switch (op) {
        case BinOp::add: return "+";
        case BinOp::sub: return "-";
        case BinOp::mul: return "*";
        case BinOp::div: return "/";
        case BinOp::eq: return "=";
        case BinOp::lt: return "<";
        case BinOp::le: return "<=";
        case BinOp::logical_and: return "and";
        case BinOp::logical_or: return "or";
    }
    return "?";
}

inline std::string render_expr(const Expr& e, int parent_level, bool right_operand) {
    return std::visit(
        [&](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Expr::IntLit>) {
                return n.value.str();
            } else if constexpr (std::is_same_v<T, Expr::BoolLit>) {
                return n.value ? "true" : "false";
            } else if constexpr (std::is_same_v<T, Expr::Var>) {
                return n.name;
            } else if constexpr (std::is_same_v<T, Expr::Binary>) {
                int level = precedence(n.op);
                std::string text = render_expr(*n.lhs, level, false) + " " +
                                   op_text(n.op) + " " +
                                   render_expr(*n.rhs, level, true);
                // Left-associative operators: a right operand at the same
                // level needs parentheses, a left one does not.
                bool parens = level < parent_level ||
                              (level == parent_level && right_operand);
                return parens ? "(" + text + ")" : text;
            } else {
                std::string name = n.op == UnOp::even ? "even" : "not";
                return name + "(" + render_expr(*n.operand, 0, false) + ")";
            }
        },
        e.node);
}

}  // namespace detail

inline std::string to_string(const Expr& e) { return detail::render_expr(e, 0, false); }

std::string to_string(const StmtSeq& seq);

inline std::string to_string(const Stmt& s) {
    return std::visit(
        [](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Stmt::Skip>) {
                return "skip";
            } else if constexpr (std::is_same_v<T, Stmt::Assign>) {
                return n.var + " := " + to_string(*n.expr);
            } else if constexpr (std::is_same_v<T, Stmt::Block>) {
                return "{" + to_string(n.body) + "}";
            } else if constexpr (std::is_same_v<T, Stmt::If>) {
                std::string t = n.then_branch.empty() ? "skip" : to_string(n.then_branch);
                std::string e = n.else_branch.empty() ? "skip" : to_string(n.else_branch);
                return "if " + to_string(*n.cond) + " then " + t + " else " + e;
            } else if constexpr (std::is_same_v<T, Stmt::While>) {
                std::string b = n.body.empty() ? "skip" : to_string(n.body);
                return "while " + to_string(*n.cond) + " do " + b;
            } else {
                return n.var + " :∈ pow2div(" + to_string(*n.expr) + ")";
            }
        },
        s.node);
}

inline std::string to_string(const StmtSeq& seq) {
    std::string out;
    for (size_t i = 0; i < seq.size(); ++i) {
        if (i) out += "; ";
        out += to_string(*seq[i]);
    }
    return out;
}

inline std::string to_string(const Config& c) {
    return "⟨" + to_string(c.program) + ", " + c.store.to_string() + "⟩";
}

// ---------------------------------------------------------------------
// Parsing

namespace detail {

using tracelab::detail::Token;

inline const std::vector<std::string>& symbols() {
    static const std::vector<std::string> syms = {
        ":=", ":∈", ":in", ";", "{", "}", "(", ")", ",",
        "+", "-", "*", "/", "<=", "<", "=",
    };
    return syms;
}

class Parser {
  public:
    explicit Parser(const std::string& source) : lex_(source, symbols()) {}

    StmtSeq program() {
        StmtSeq seq = statements();
        if (!lex_.at_end()) lex_.fail("expected end of program");
        return seq;
    }

    ExprPtr full_expr() {
        ExprPtr e = expr();
        if (!lex_.at_end()) lex_.fail("expected end of expression");
        return e;
    }

  private:
    StmtSeq statements() {
        StmtSeq seq;
        seq.push_back(statement());
        while (lex_.peek().is_symbol(";")) {
            lex_.next();
            seq.push_back(statement());
        }
        return seq;
    }

    StmtPtr statement() {
        const Token& t = lex_.peek();
        if (t.is_ident("skip")) {
            lex_.next();
            return make_skip();
        }
        if (t.is_symbol("{")) {
            lex_.next();
            StmtSeq body = statements();
            lex_.expect_symbol("}");
            return make_block(std::move(body));
        }
        if (t.is_ident("if")) {
            lex_.next();
            ExprPtr cond = expr();
            lex_.expect_keyword("then");
            StmtPtr then_branch = statement();
            lex_.expect_keyword("else");
            StmtPtr else_branch = statement();
            return make_if(std::move(cond), {std::move(then_branch)},
                           {std::move(else_branch)});
        }
        if (t.is_ident("while")) {
            lex_.next();
            ExprPtr cond = expr();
            lex_.expect_keyword("do");
            StmtPtr body = statement();
            return make_while(std::move(cond), {std::move(body)});
        }
        if (t.kind == Token::Kind::Ident && !reserved(t.text)) {
            std::string var = lex_.next().text;
            if (lex_.peek().is_symbol(":=")) {
                lex_.next();
                return make_assign(std::move(var), expr());
            }
            if (lex_.peek().is_symbol(":∈") || lex_.peek().is_symbol(":in")) {
                lex_.next();
                lex_.expect_keyword("pow2div");
                lex_.expect_symbol("(");
                ExprPtr e = expr();
                lex_.expect_symbol(")");
                return make_choose_pow2div(std::move(var), std::move(e));
            }
            lex_.fail("expected ':=' or ':∈' after variable");
        }
        lex_.fail("expected a statement");
    }

    ExprPtr expr() { return or_expr(); }

    ExprPtr or_expr() {
        ExprPtr e = and_expr();
        while (lex_.peek().is_ident("or")) {
            lex_.next();
            e = make_binary(BinOp::logical_or, std::move(e), and_expr());
        }
        return e;
    }

    ExprPtr and_expr() {
        ExprPtr e = cmp_expr();
        while (lex_.peek().is_ident("and")) {
            lex_.next();
            e = make_binary(BinOp::logical_and, std::move(e), cmp_expr());
        }
        return e;
    }

    ExprPtr cmp_expr() {
        ExprPtr e = add_expr();
        for (;;) {
            BinOp op;
            if (lex_.peek().is_symbol("=")) op = BinOp::eq;
            else if (lex_.peek().is_symbol("<=")) op = BinOp::le;
            else if (lex_.peek().is_symbol("<")) op = BinOp::lt;
            else break;
            lex_.next();
            e = make_binary(op, std::move(e), add_expr());
        }
        return e;
    }

    ExprPtr add_expr() {
        ExprPtr e = mul_expr();
        for (;;) {
            BinOp op;
            if (lex_.peek().is_symbol("+")) op = BinOp::add;
            else if (lex_.peek().is_symbol("-")) op = BinOp::sub;
            else break;
            lex_.next();
            e = make_binary(op, std::move(e), mul_expr());
        }
        return e;
    }

    ExprPtr mul_expr() {
        ExprPtr e = atom();
        for (;;) {
            BinOp op;
            if (lex_.peek().is_symbol("*")) op = BinOp::mul;
            else if (lex_.peek().is_symbol("/")) op = BinOp::div;
            else break;
            lex_.next();
            e = make_binary(op, std::move(e), atom());
        }
        return e;
    }

    ExprPtr atom() {
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
        if (t.is_ident("even") || t.is_ident("not")) {
            UnOp op = t.text == "even" ? UnOp::even : UnOp::logical_not;
            lex_.next();
            lex_.expect_symbol("(");
            ExprPtr e = expr();
            lex_.expect_symbol(")");
            return make_unary(op, std::move(e));
        }
        if (t.is_symbol("(")) {
            lex_.next();
            ExprPtr e = expr();
            lex_.expect_symbol(")");
            return e;
        }
        if (t.kind == Token::Kind::Ident && !reserved(t.text))
            return make_var(lex_.next().text);
        lex_.fail("expected an expression");
    }

    static bool reserved(const std::string& s) {
        static const char* words[] = {"skip", "if",  "then", "else",    "while", "do",
                                      "even", "not", "and",  "or",      "true",  "false",
                                      "pow2div"};
        for (const char* w : words)
            if (s == w) return true;
        return false;
    }

    tracelab::detail::Lexer lex_;
};

}  // namespace detail

inline StmtSeq parse(const std::string& source) {
    return detail::Parser(source).program();
}

inline ExprPtr parse_expr(const std::string& source) {
    return detail::Parser(source).full_expr();
}

// "x=12,y=1" → store with that allocation order. Empty text gives the
// empty store.
inline Store parse_store(const std::string& text) {
    std::vector<std::pair<std::string, Value>> bindings;
    size_t pos = 0;
    auto skip_space = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    };
    skip_space();
    while (pos < text.size()) {
        size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        if (pos == start) throw ParseError("expected a variable name in store");
        std::string name = text.substr(start, pos - start);
        skip_space();
        if (pos >= text.size() || text[pos] != '=')
            throw ParseError("expected '=' after '" + name + "' in store");
        ++pos;
        skip_space();
        start = pos;
        while (pos < text.size() && text[pos] != ',') ++pos;
        std::string value_text = text.substr(start, pos - start);
        while (!value_text.empty() && std::isspace(static_cast<unsigned char>(value_text.back())))
            value_text.pop_back();
        if (value_text.empty())
            throw ParseError("missing value for '" + name + "' in store");
        Value v(false);
        if (value_text == "true") v = Value(true);
        else if (value_text == "false") v = Value(false);
        else {
            try {
                v = Value(Int(value_text));
            } catch (const std::exception&) {
                throw ParseError("bad store value '" + value_text + "'");
            }
        }
        bindings.emplace_back(std::move(name), std::move(v));
        if (pos < text.size()) {
            ++pos;  // ','
            skip_space();
            if (pos == text.size()) throw ParseError("trailing ',' in store");
        }
    }
    return Store(std::move(bindings));
}

}  // namespace tracelab::imp
