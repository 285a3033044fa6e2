#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "tracelab/errors.hpp"

namespace tracelab {

// A maximal chain of configurations under a step function. `terminal`
// means the last configuration has no successor; `truncated` means the
// per-sequence step budget ran out first.
enum class SeqStatus { terminal, truncated };

template <typename Config>
struct ReductionSequence {
    std::vector<Config> configs;  // nonempty; configs[i+1] ∈ step(configs[i])
    SeqStatus status = SeqStatus::terminal;

    std::size_t size() const { return configs.size(); }
    const Config& front() const { return configs.front(); }
    const Config& back() const { return configs.back(); }
};

// Enumeration of everything reachable from a set of initial
// configurations. `step` must be pure and return a finite successor set
// in a canonical order; the empty set marks a terminal configuration.
template <typename Config>
struct EnumerationTask {
    std::vector<Config> initials;
    std::function<std::vector<Config>(const Config&)> step;
    std::size_t max_steps = 10'000;       // transitions per sequence
    std::size_t max_sequences = 100'000;  // total across all initials
};

namespace detail {

// Depth-first expansion of one initial configuration. `emit` receives
// every maximal sequence; successor order follows the step function, so
// the output order is canonical. Pure in `initial` and `step`.
template <typename Config, typename StepFn, typename EmitFn>
void expand_initial(const Config& initial, StepFn&& step, std::size_t max_steps,
                    EmitFn&& emit) {
    struct Frame {
        std::vector<Config> successors;
        std::size_t next;
    };
    std::vector<Frame> stack;
    std::vector<Config> path{initial};

    for (;;) {
        std::vector<Config> successors = step(path.back());
        if (successors.empty()) {
            emit(ReductionSequence<Config>{path, SeqStatus::terminal});
        } else if (path.size() - 1 >= max_steps) {
            emit(ReductionSequence<Config>{path, SeqStatus::truncated});
        } else {
            path.push_back(successors.front());
            stack.push_back(Frame{std::move(successors), 1});
            continue;
        }
        while (!stack.empty() && stack.back().next == stack.back().successors.size()) {
            stack.pop_back();
            path.pop_back();
        }
        if (stack.empty()) return;
        path.back() = stack.back().successors[stack.back().next++];
    }
}

}  // namespace detail

// All maximal reduction sequences from the task's initial set, by
// exhaustive depth-first expansion of the (finitely branching) step
// relation. Sequences that hit max_steps come back as `truncated`;
// producing more than max_sequences sequences in total is a LimitError,
// which is a distinct condition from truncation.
template <typename Config>
std::vector<ReductionSequence<Config>> enumerate_sequences(
    const EnumerationTask<Config>& task) {
    if (task.max_steps == 0) throw Error("max_steps must be positive");
    if (task.max_sequences == 0) throw Error("max_sequences must be positive");
    if (!task.step) throw Error("enumeration task has no step function");

    // Initials form a set; drop duplicates but keep first-occurrence order.
    std::vector<Config> initials;
    for (const Config& c : task.initials)
        if (std::find(initials.begin(), initials.end(), c) == initials.end())
            initials.push_back(c);

    std::vector<ReductionSequence<Config>> out;
    for (const Config& initial : initials) {
        detail::expand_initial(initial, task.step, task.max_steps,
                               [&](ReductionSequence<Config> seq) {
                                   if (out.size() >= task.max_sequences)
                                       throw LimitError(
                                           "enumeration exceeded max_sequences = " +
                                           std::to_string(task.max_sequences));
                                   out.push_back(std::move(seq));
                               });
    }
    return out;
}

template <typename Config, typename StepFn>
std::vector<ReductionSequence<Config>> enumerate_sequences(
    std::vector<Config> initials, StepFn&& step, std::size_t max_steps = 10'000,
    std::size_t max_sequences = 100'000) {
    EnumerationTask<Config> task;
    task.initials = std::move(initials);
    task.step = std::forward<StepFn>(step);
    task.max_steps = max_steps;
    task.max_sequences = max_sequences;
    return enumerate_sequences(task);
}

// The unique maximal sequence from `initial`. Every reachable
// configuration must have at most one successor; a branch point raises
// NondeterminismError. Truncation is reported via the status flag, as in
// enumerate_sequences.
template <typename Config, typename StepFn>
ReductionSequence<Config> run_deterministic(const Config& initial, StepFn&& step,
                                            std::size_t max_steps = 10'000) {
    if (max_steps == 0) throw Error("max_steps must be positive");
    ReductionSequence<Config> seq;
    seq.configs.push_back(initial);
    for (;;) {
        std::vector<Config> successors = step(seq.configs.back());
        if (successors.empty()) {
            seq.status = SeqStatus::terminal;
            return seq;
        }
        if (successors.size() > 1)
            throw NondeterminismError("configuration has " +
                                      std::to_string(successors.size()) +
                                      " successors in a deterministic run");
        if (seq.configs.size() - 1 >= max_steps) {
            seq.status = SeqStatus::truncated;
            return seq;
        }
        seq.configs.push_back(std::move(successors.front()));
    }
}

// Re-checks the defining invariants of a sequence against a step
// function: adjacent membership and the terminal/truncated flag.
template <typename Config, typename StepFn>
bool validate_sequence(const ReductionSequence<Config>& seq, StepFn&& step) {
    if (seq.configs.empty()) return false;
    for (std::size_t i = 0; i + 1 < seq.configs.size(); ++i) {
        std::vector<Config> successors = step(seq.configs[i]);
        if (std::find(successors.begin(), successors.end(), seq.configs[i + 1]) ==
            successors.end())
            return false;
    }
    bool last_terminal = step(seq.configs.back()).empty();
    return (seq.status == SeqStatus::terminal) == last_terminal;
}

}  // namespace tracelab
