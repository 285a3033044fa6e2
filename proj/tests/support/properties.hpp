#pragma once

// Randomized property suites, shared between the unit tests and the
// acceptance runner. Fixed seeds keep every run reproducible.

#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tracelab/tracelab.hpp"

#include "oracles.hpp"

namespace testsupport {

struct PropResult {
    size_t cases = 0;
    size_t failures = 0;
    std::string first_failure;

    bool ok() const { return failures > 0 ? false : cases > 0; }

    void fail(const std::string& detail) {
        if (failures == 0) first_failure = detail;
        ++failures;
    }
};

// ---------------------------------------------------------------------
// Random traces

inline tracelab::Trace random_trace(std::mt19937& rng, size_t max_len,
                                    int alphabet = 4) {
    std::uniform_int_distribution<size_t> len_dist(1, max_len);
    std::uniform_int_distribution<int> val_dist(1, alphabet);
    tracelab::Trace t;
    size_t len = len_dist(rng);
    for (size_t i = 0; i < len; ++i)
        t.states.push_back(
            tracelab::ErasedState::tuple({tracelab::Value(val_dist(rng))}));
    return t;
}

// A trace plus a genuine subsequence of it that keeps the first and last
// positions, so an embedding always exists.
inline std::pair<tracelab::Trace, tracelab::Trace> embedded_pair(std::mt19937& rng,
                                                                 size_t max_len) {
    tracelab::Trace a = random_trace(rng, max_len);
    std::bernoulli_distribution keep(0.5);
    tracelab::Trace b;
    for (size_t i = 0; i < a.states.size(); ++i)
        if (i == 0 || i + 1 == a.states.size() || keep(rng))
            b.states.push_back(a.states[i]);
    return {std::move(b), std::move(a)};
}

// DP result == exhaustive-search result, on both embeddable and
// arbitrary pairs.
inline PropResult prop_gap_bound_matches_brute_force(size_t cases, unsigned seed) {
    std::mt19937 rng(seed);
    PropResult result;
    for (size_t i = 0; i < cases; ++i) {
        tracelab::Trace a, b;
        if (i % 2 == 0) {
            auto [bb, aa] = embedded_pair(rng, 12);
            b = std::move(bb);
            a = std::move(aa);
        } else {
            a = random_trace(rng, 12);
            b = random_trace(rng, a.states.size());
        }
        ++result.cases;
        auto dp = tracelab::minimal_gap_bound(b, a);
        auto brute = brute_force_gap_bound(b, a);
        if (dp != brute) {
            std::ostringstream msg;
            msg << "gap bound mismatch: dp="
                << (dp ? std::to_string(*dp) : std::string("none")) << " brute="
                << (brute ? std::to_string(*brute) : std::string("none")) << " b="
                << tracelab::to_string(b) << " a=" << tracelab::to_string(a);
            result.fail(msg.str());
        }
    }
    return result;
}

// dedup is idempotent, leaves no adjacent duplicates, and its output
// always embeds back into its input; a set is a k=0 speed-up of itself.
inline PropResult prop_dedup_idempotent_and_speedup(size_t cases, unsigned seed) {
    std::mt19937 rng(seed);
    PropResult result;
    for (size_t i = 0; i < cases; ++i) {
        ++result.cases;
        tracelab::Trace t = random_trace(rng, 20, 3);
        tracelab::Trace d = tracelab::dedup(t);
        bool ok = true;
        for (size_t j = 0; j + 1 < d.states.size(); ++j)
            if (d.states[j] == d.states[j + 1]) ok = false;
        if (!tracelab::same_states(tracelab::dedup(d), d)) ok = false;
        if (!tracelab::minimal_gap_bound(d, t)) ok = false;
        if (!ok) {
            result.fail("dedup misbehaved on " + tracelab::to_string(t));
            continue;
        }
        if (i % 16 == 0) {
            tracelab::TraceSet set;
            set.insert(t);
            set.insert(d);
            auto k = tracelab::speedup_check(set, set);
            if (!k || *k != 0)
                result.fail("speedup_check(S,S) != 0 for " + tracelab::to_string(t));
        }
    }
    return result;
}

// ---------------------------------------------------------------------
// Random loop-free imp programs: deterministic, well-formed stores.

namespace detail {

class ImpGen {
  public:
    explicit ImpGen(std::mt19937& rng) : rng_(rng) {}

    tracelab::imp::StmtSeq program() { return sequence(2); }

    tracelab::imp::ExprPtr int_expr(int depth) {
        using namespace tracelab::imp;
        if (depth <= 0 || chance(3)) {
            if (chance(2)) return make_int(tracelab::Int(pick(0, 9)));
            return make_var(pick(0, 1) == 0 ? "x" : "y");
        }
        switch (pick(0, 3)) {
            case 0: return make_binary(BinOp::add, int_expr(depth - 1), int_expr(depth - 1));
            case 1: return make_binary(BinOp::sub, int_expr(depth - 1), int_expr(depth - 1));
            case 2: return make_binary(BinOp::mul, int_expr(depth - 1), int_expr(depth - 1));
            default:
                // Literal divisor: division by zero is not the property
                // under test here.
                return make_binary(BinOp::div, int_expr(depth - 1),
                                   make_int(tracelab::Int(pick(1, 4))));
        }
    }

    tracelab::imp::ExprPtr bool_expr(int depth) {
        using namespace tracelab::imp;
        if (depth <= 0 || chance(4)) {
            if (chance(2)) return make_bool(pick(0, 1) == 0);
            return make_unary(UnOp::even, int_expr(depth - 1));
        }
        switch (pick(0, 4)) {
            case 0: return make_binary(BinOp::lt, int_expr(depth - 1), int_expr(depth - 1));
            case 1: return make_binary(BinOp::le, int_expr(depth - 1), int_expr(depth - 1));
            case 2: return make_binary(BinOp::eq, int_expr(depth - 1), int_expr(depth - 1));
            case 3:
                return make_binary(BinOp::logical_and, bool_expr(depth - 1),
                                   bool_expr(depth - 1));
            default: return make_unary(UnOp::logical_not, bool_expr(depth - 1));
        }
    }

    tracelab::imp::StmtPtr statement(int depth) {
        using namespace tracelab::imp;
        switch (depth <= 0 ? pick(0, 1) : pick(0, 3)) {
            case 0: return make_skip();
            case 1: {
                static const char* targets[] = {"x", "y", "z"};
                return make_assign(targets[pick(0, 2)], int_expr(2));
            }
            case 2: return make_block(sequence(depth - 1));
            default:
                return make_if(bool_expr(2), sequence(depth - 1), sequence(depth - 1));
        }
    }

    tracelab::imp::StmtSeq sequence(int depth) {
        tracelab::imp::StmtSeq seq;
        int len = pick(1, 3);
        for (int i = 0; i < len; ++i) seq.push_back(statement(depth));
        return seq;
    }

  private:
    bool chance(int one_in) { return pick(1, one_in) == 1; }
    int pick(int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng_);
    }

    std::mt19937& rng_;
};

}  // namespace detail

// Choice-free programs are deterministic: the unique run exists, matches
// the exhaustive enumeration, re-validates against the step function,
// and keeps the store well-formed.
inline PropResult prop_imp_choice_free_deterministic(size_t cases, unsigned seed) {
    using namespace tracelab;
    std::mt19937 rng(seed);
    PropResult result;
    std::uniform_int_distribution<int> val(0, 20);
    for (size_t i = 0; i < cases; ++i) {
        ++result.cases;
        detail::ImpGen gen(rng);
        imp::StmtSeq program = gen.program();
        imp::Config initial{program,
                            imp::Store({{"x", Value(val(rng))}, {"y", Value(val(rng))}})};
        auto step_fn = [](const imp::Config& c) { return imp::step(c); };
        try {
            auto seq = run_deterministic(initial, step_fn, 2000);
            auto all = enumerate_sequences<imp::Config>({initial}, step_fn, 2000);
            bool ok = seq.status == SeqStatus::terminal && all.size() == 1 &&
                      all.front().configs == seq.configs &&
                      validate_sequence(seq, step_fn);
            const auto& bindings = seq.configs.back().store.bindings();
            ok = ok && bindings.size() >= 2 && bindings[0].first == "x" &&
                 bindings[1].first == "y";
            for (size_t a = 0; a < bindings.size() && ok; ++a)
                for (size_t b = a + 1; b < bindings.size(); ++b)
                    if (bindings[a].first == bindings[b].first) ok = false;
            if (!ok)
                result.fail("determinism violated for: " + imp::to_string(program));
        } catch (const std::exception& e) {
            result.fail(std::string("unexpected error: ") + e.what() + " in " +
                        imp::to_string(program));
        }
    }
    return result;
}

// Running the halving loop from ⟨x = n⟩ ends with the largest odd
// divisor of n.
inline PropResult prop_imp_odd_divisor_oracle(size_t max_n) {
    using namespace tracelab;
    PropResult result;
    imp::StmtSeq program = imp::parse("while even(x) do x := x / 2");
    for (size_t n = 1; n <= max_n; ++n) {
        ++result.cases;
        imp::Config initial{program, imp::Store({{"x", Value(Int(n))}})};
        auto seq = run_deterministic(
            initial, [](const imp::Config& c) { return imp::step(c); });
        const Value* x = seq.configs.back().store.lookup("x");
        if (seq.status != SeqStatus::terminal || !x ||
            x->as_int() != largest_odd_divisor(Int(n)))
            result.fail("wrong result for n=" + std::to_string(n));
    }
    return result;
}

// ---------------------------------------------------------------------
// Mirrored random functional terms: the eqn and lam step functions are
// deterministic and their erased traces coincide step for step.

namespace detail {

class FunGen {
  public:
    explicit FunGen(std::mt19937& rng) : rng_(rng) {}

    std::pair<tracelab::eqn::TermPtr, tracelab::lam::TermPtr> int_term(int depth) {
        namespace e = tracelab::eqn;
        namespace l = tracelab::lam;
        if (depth <= 0 || chance(3)) {
            tracelab::Int v(pick(0, 99));
            return {e::make_int(v), l::make_int(v)};
        }
        switch (pick(0, 3)) {
            case 0: {
                auto [ea, la] = int_term(depth - 1);
                auto [eb, lb] = int_term(depth - 1);
                return {e::make_app("+", {ea, eb}),
                        l::make_app(l::make_app(l::make_prim(l::Prim::add), la), lb)};
            }
            case 1: {
                auto [ea, la] = int_term(depth - 1);
                auto [eb, lb] = int_term(depth - 1);
                return {e::make_app("*", {ea, eb}),
                        l::make_app(l::make_app(l::make_prim(l::Prim::mul), la), lb)};
            }
            case 2: {
                auto [ea, la] = int_term(depth - 1);
                tracelab::Int d(pick(1, 9));
                return {e::make_app("/", {ea, e::make_int(d)}),
                        l::make_app(l::make_app(l::make_prim(l::Prim::divide), la),
                                    l::make_int(d))};
            }
            default: {
                auto [ec, lc] = bool_term(depth - 1);
                auto [ea, la] = int_term(depth - 1);
                auto [eb, lb] = int_term(depth - 1);
                return {e::make_app("if", {ec, ea, eb}), l::make_if(lc, la, lb)};
            }
        }
    }

    std::pair<tracelab::eqn::TermPtr, tracelab::lam::TermPtr> bool_term(int depth) {
        namespace e = tracelab::eqn;
        namespace l = tracelab::lam;
        if (depth <= 0 || chance(3)) {
            bool v = pick(0, 1) == 0;
            return {e::make_bool(v), l::make_bool(v)};
        }
        auto [ea, la] = int_term(depth - 1);
        return {e::make_app("even", {ea}),
                l::make_app(l::make_prim(l::Prim::even), la)};
    }

  private:
    bool chance(int one_in) { return pick(1, one_in) == 1; }
    int pick(int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng_);
    }

    std::mt19937& rng_;
};

}  // namespace detail

inline PropResult prop_fun_deterministic_and_coincident(size_t cases, unsigned seed) {
    using namespace tracelab;
    std::mt19937 rng(seed);
    PropResult result;
    auto empty_program = std::make_shared<eqn::Program>();
    for (size_t i = 0; i < cases; ++i) {
        ++result.cases;
        detail::FunGen gen(rng);
        auto [et, lt] = gen.int_term(4);
        eqn::Config ec{empty_program, et};
        lam::Config lc{lt};
        auto eqn_step = [](const eqn::Config& c) { return eqn::step(c); };
        auto lam_step = [](const lam::Config& c) { return lam::step(c); };
        try {
            auto es = run_deterministic(ec, eqn_step, 5000);
            auto ls = run_deterministic(lc, lam_step, 5000);
            bool ok = es.status == SeqStatus::terminal &&
                      ls.status == SeqStatus::terminal &&
                      es.configs.size() == ls.configs.size();
            for (size_t j = 0; ok && j < es.configs.size(); ++j)
                ok = eqn::erase(es.configs[j].term) == lam::erase(ls.configs[j].term);
            ok = ok && enumerate_sequences<eqn::Config>({ec}, eqn_step, 5000).size() == 1;
            ok = ok && enumerate_sequences<lam::Config>({lc}, lam_step, 5000).size() == 1;
            if (!ok)
                result.fail("trace mismatch for " + eqn::to_string(et) + " vs " +
                            lam::to_string(lt));
        } catch (const std::exception& e) {
            result.fail(std::string("unexpected error: ") + e.what() + " on " +
                        eqn::to_string(et));
        }
    }
    return result;
}

}  // namespace testsupport
