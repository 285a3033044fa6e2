#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tracelab/erased.hpp"
#include "tracelab/errors.hpp"
#include "tracelab/kernel.hpp"

namespace tracelab {

// Provenance of a trace. Carried for reporting only: comparisons and the
// file format ignore it, so equal sets always serialize identically.
struct TraceOrigin {
    std::string language;
    std::string program_digest;
    std::string input;
};

struct Trace {
    std::vector<ErasedState> states;  // nonempty
    TraceOrigin origin;
};

inline std::string to_string(const Trace& t) {
    std::string out;
    for (size_t i = 0; i < t.states.size(); ++i) {
        if (i) out += '|';
        out += to_string(t.states[i]);
    }
    return out;
}

inline bool same_states(const Trace& a, const Trace& b) {
    return a.states == b.states;
}

// A finite set of traces. Stored keyed by the canonical rendering, which
// is injective, so key order doubles as the serialization order and key
// equality as state-wise trace equality. The description records how the
// set was produced (program, input range); like per-trace origins it is
// ignored by comparisons and by the file format.
class TraceSet {
  public:
    TraceSet() = default;

    const std::string& description() const { return description_; }
    void set_description(std::string text) { description_ = std::move(text); }

    void insert(Trace t) {
        if (t.states.empty()) throw Error("a trace must have at least one state");
        std::string key = tracelab::to_string(t);
        traces_.emplace(std::move(key), std::move(t));
    }

    size_t size() const { return traces_.size(); }
    bool empty() const { return traces_.empty(); }

    bool contains(const Trace& t) const {
        return traces_.count(tracelab::to_string(t)) > 0;
    }

    std::vector<const Trace*> traces() const {
        std::vector<const Trace*> out;
        out.reserve(traces_.size());
        for (const auto& [key, t] : traces_) out.push_back(&t);
        return out;
    }

    std::vector<std::string> lines() const {
        std::vector<std::string> out;
        out.reserve(traces_.size());
        for (const auto& [key, t] : traces_) out.push_back(key);
        return out;
    }

    friend bool operator==(const TraceSet& a, const TraceSet& b) {
        return a.lines() == b.lines();
    }
    friend bool operator!=(const TraceSet& a, const TraceSet& b) { return !(a == b); }

  private:
    std::map<std::string, Trace> traces_;
    std::string description_;
};

// ---------------------------------------------------------------------
// Projection

// Pointwise image of a completed reduction sequence. Truncated sequences
// carry no final state, so they are rejected rather than projected.
template <typename Config, typename EraseFn>
Trace project(const ReductionSequence<Config>& seq, EraseFn&& erase_fn,
              TraceOrigin origin = {}) {
    if (seq.status != SeqStatus::terminal)
        throw LimitError("cannot project a truncated reduction sequence");
    Trace t;
    t.origin = std::move(origin);
    t.states.reserve(seq.configs.size());
    for (const Config& c : seq.configs) t.states.push_back(erase_fn(c));
    return t;
}

// ---------------------------------------------------------------------
// Canonical speed-up: collapse runs of consecutive equal states.

inline Trace dedup(const Trace& t) {
    Trace out;
    out.origin = t.origin;
    for (const ErasedState& s : t.states)
        if (out.states.empty() || !(out.states.back() == s)) out.states.push_back(s);
    return out;
}

// ---------------------------------------------------------------------
// The speed-up relation

// Least k such that b embeds index-monotonically into a with b[0] at
// a[0], equal last values, and every omitted run (including the omitted
// suffix) of length ≤ k. nullopt when no such embedding exists.
inline std::optional<size_t> minimal_gap_bound(const Trace& b, const Trace& a) {
    const auto& bs = b.states;
    const auto& as = a.states;
    if (bs.empty() || as.empty()) return std::nullopt;
    if (!(bs.front() == as.front())) return std::nullopt;
    if (!(bs.back() == as.back())) return std::nullopt;
    if (bs.size() > as.size()) return std::nullopt;

    const size_t m = bs.size();
    const size_t n = as.size();
    const size_t INF = std::numeric_limits<size_t>::max();

    // best[j][i]: minimum over embeddings of b[0..j] with b[j] ↦ a[i] of
    // the largest omitted run so far.
    std::vector<std::vector<size_t>> best(m, std::vector<size_t>(n, INF));
    best[0][0] = 0;  // b[0] is anchored to a[0]
    for (size_t j = 1; j < m; ++j) {
        for (size_t i = j; i < n; ++i) {
            if (!(bs[j] == as[i])) continue;
            size_t acc = INF;
            for (size_t prev = j - 1; prev < i; ++prev) {
                if (best[j - 1][prev] == INF) continue;
                acc = std::min(acc, std::max(best[j - 1][prev], i - prev - 1));
            }
            best[j][i] = acc;
        }
    }
    size_t result = INF;
    for (size_t i = m - 1; i < n; ++i) {
        if (best[m - 1][i] == INF) continue;
        result = std::min(result, std::max(best[m - 1][i], n - 1 - i));
    }
    if (result == INF) return std::nullopt;
    return result;
}

// B is a speed-up of A with bound k iff every trace of B embeds in some
// trace of A; k is the worst of the per-trace best bounds.
inline std::optional<size_t> speedup_check(const TraceSet& B, const TraceSet& A) {
    size_t k = 0;
    for (const Trace* b : B.traces()) {
        std::optional<size_t> best;
        for (const Trace* a : A.traces()) {
            std::optional<size_t> bound = minimal_gap_bound(*b, *a);
            if (bound && (!best || *bound < *best)) best = bound;
        }
        if (!best) return std::nullopt;
        k = std::max(k, *best);
    }
    return k;
}

// ---------------------------------------------------------------------
// Algorithm identity: exact trace-set equality, metadata ignored.

inline bool algorithm_equal(const TraceSet& A, const TraceSet& B) { return A == B; }

// ---------------------------------------------------------------------
// Serialization. One trace per line, states joined by '|', lines sorted
// lexicographically; '#' starts a comment on read.

inline std::string serialize_trace_set(const TraceSet& set) {
    std::string out;
    for (const std::string& line : set.lines()) {
        out += line;
        out += '\n';
    }
    return out;
}

inline TraceSet parse_trace_set(const std::string& text) {
    TraceSet set;
    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string line =
            text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
        ++line_no;
        pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;

        Trace t;
        size_t field_start = 0;
        while (field_start <= line.size()) {
            size_t bar = line.find('|', field_start);
            std::string field = line.substr(
                field_start, bar == std::string::npos ? std::string::npos
                                                      : bar - field_start);
            if (field.empty())
                throw ParseError("empty state", line_no,
                                 static_cast<int>(field_start) + 1);
            t.states.push_back(parse_erased_state(field, line_no));
            if (bar == std::string::npos) break;
            field_start = bar + 1;
        }
        for (size_t i = 1; i < t.states.size(); ++i)
            if (t.states[i].is_tuple() != t.states[0].is_tuple())
                throw ParseError("mixed state kinds within one trace", line_no, 1);
        set.insert(std::move(t));
    }
    return set;
}

}  // namespace tracelab
