#pragma once

// Test-only oracles. Each one recomputes a library result by a separate,
// simpler route (exhaustive search, breadth-first expansion, the obvious
// loop) and must stay independent of the implementation it checks.

#include <functional>
#include <optional>
#include <vector>

#include "tracelab/trace.hpp"
#include "tracelab/value.hpp"

namespace testsupport {

// Minimum over all index-monotone embeddings (b[0] anchored at a[0],
// last values equal) of the largest omitted run, trailing run included.
// Plain exhaustive recursion; usable for |a| up to a dozen or so.
inline std::optional<size_t> brute_force_gap_bound(const tracelab::Trace& b,
                                                   const tracelab::Trace& a) {
    const auto& bs = b.states;
    const auto& as = a.states;
    if (bs.empty() || as.empty()) return std::nullopt;
    if (!(bs.front() == as.front())) return std::nullopt;
    if (!(bs.back() == as.back())) return std::nullopt;
    const size_t m = bs.size();
    const size_t n = as.size();

    std::optional<size_t> best;
    std::function<void(size_t, size_t, size_t)> search = [&](size_t j, size_t prev,
                                                             size_t worst_gap) {
        if (j == m) {
            size_t total = std::max(worst_gap, n - 1 - prev);
            if (!best || total < *best) best = total;
            return;
        }
        for (size_t i = prev + 1; i < n; ++i)
            if (bs[j] == as[i]) search(j + 1, i, std::max(worst_gap, i - prev - 1));
    };
    search(1, 0, 0);
    return best;
}

// Breadth-first expansion of every maximal path from `initial`. Only
// terminal paths are returned; callers pick systems that terminate well
// inside max_steps.
template <typename Config, typename StepFn>
std::vector<std::vector<Config>> bfs_enumerate(const Config& initial, StepFn&& step,
                                               size_t max_steps = 10'000) {
    std::vector<std::vector<Config>> done;
    std::vector<std::vector<Config>> frontier{{initial}};
    while (!frontier.empty()) {
        std::vector<std::vector<Config>> next;
        for (const auto& path : frontier) {
            auto successors = step(path.back());
            if (successors.empty()) {
                done.push_back(path);
                continue;
            }
            if (path.size() - 1 >= max_steps) continue;
            for (auto& s : successors) {
                auto extended = path;
                extended.push_back(std::move(s));
                next.push_back(std::move(extended));
            }
        }
        frontier = std::move(next);
    }
    return done;
}

// Divide by two until odd.
inline tracelab::Int largest_odd_divisor(tracelab::Int n) {
    while (n != 0 && n % 2 == 0) n /= 2;
    return n;
}

}  // namespace testsupport
