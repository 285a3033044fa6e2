#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tracelab/config.hpp"
#include "tracelab/kernel.hpp"
#include "tracelab/trace.hpp"

// Glue from program text to trace sets: parse, build initial
// configurations for a list of inputs, enumerate, project, dedup.
namespace tracelab {

namespace detail {

inline std::string fnv1a_digest(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = hex[h & 0xf];
        h >>= 4;
    }
    return out;
}

}  // namespace detail

// A program parsed once, reusable across inputs.
struct ParsedProgram {
    Language lang;
    std::string source;
    std::string digest;
    imp::StmtSeq imp_program;
    eqn::ProgramPtr eqn_program;
    lam::TermPtr lam_term;
};

inline ParsedProgram parse_program(Language lang, const std::string& source) {
    ParsedProgram p;
    p.lang = lang;
    p.source = source;
    p.digest = detail::fnv1a_digest(source);
    switch (lang) {
        case Language::imp: p.imp_program = imp::parse(source); break;
        case Language::eqn: p.eqn_program = eqn::parse(source); break;
        case Language::lam: p.lam_term = lam::parse(source); break;
    }
    return p;
}

// One run's input: a store for the imperative language, a literal to
// apply the program to for the functional ones (or nothing, to reduce a
// lam term as written).
struct Input {
    imp::Store store;
    std::optional<Value> literal;

    static Input for_store(imp::Store s) { return Input{std::move(s), std::nullopt}; }
    static Input for_literal(Value v) { return Input{imp::Store{}, std::move(v)}; }
    static Input none() { return Input{}; }

    std::string describe(Language lang) const {
        if (lang == Language::imp) {
            std::string out;
            for (const auto& [name, v] : store.bindings()) {
                if (!out.empty()) out += ',';
                out += name + "=" + v.to_string();
            }
            return out;
        }
        return literal ? literal->to_string() : std::string();
    }
};

inline Config make_initial(const ParsedProgram& program, const Input& input,
                           const std::string& entry = "f") {
    switch (program.lang) {
        case Language::imp:
            return Config(imp::Config{program.imp_program, input.store});
        case Language::eqn: {
            if (!input.literal)
                throw Error("an input value is required to run an equations program");
            eqn::TermPtr call =
                eqn::make_call(*program.eqn_program, entry, {*input.literal});
            return Config(eqn::Config{program.eqn_program, std::move(call)});
        }
        case Language::lam: {
            lam::TermPtr term = program.lam_term;
            if (input.literal)
                term = lam::make_app(term, lam::make_literal(*input.literal));
            return Config(lam::Config{std::move(term)});
        }
    }
    throw Error("unknown language");
}

struct RunLimits {
    std::size_t max_steps = 10'000;
    std::size_t max_sequences = 100'000;
};

// How to turn one program plus inputs into a trace set.
struct RunSpec {
    Language lang = Language::imp;
    std::string source;
    std::string entry = "f";
    ProjectionSpec projection;
    bool dedup_traces = false;
    RunLimits limits;
};

inline std::vector<ReductionSequence<Config>> enumerate_runs(
    const ParsedProgram& program, const std::vector<Input>& inputs,
    const std::string& entry, const RunLimits& limits) {
    EnumerationTask<Config> task;
    for (const Input& in : inputs) task.initials.push_back(make_initial(program, in, entry));
    task.step = [](const Config& c) { return step(c); };
    task.max_steps = limits.max_steps;
    task.max_sequences = limits.max_sequences;
    return enumerate_sequences(task);
}

// Full pipeline. Any sequence still running at max_steps poisons the
// set: the completed traces alone would misstate the algorithm. The
// max_sequences budget is global across inputs.
inline TraceSet build_trace_set(const RunSpec& spec, const std::vector<Input>& inputs) {
    ParsedProgram program = parse_program(spec.lang, spec.source);
    TraceSet set;
    {
        std::string inputs_text;
        for (const Input& in : inputs) {
            if (!inputs_text.empty()) inputs_text += "; ";
            inputs_text += in.describe(spec.lang);
        }
        set.set_description(to_string(spec.lang) + " " + program.digest +
                            " inputs={" + inputs_text + "}" +
                            (spec.dedup_traces ? " dedup" : ""));
    }
    std::size_t produced = 0;
    for (const Input& input : inputs) {
        if (produced >= spec.limits.max_sequences)
            throw LimitError("enumeration exceeded max_sequences = " +
                             std::to_string(spec.limits.max_sequences));
        RunLimits remaining = spec.limits;
        remaining.max_sequences = spec.limits.max_sequences - produced;
        std::vector<ReductionSequence<Config>> sequences =
            enumerate_runs(program, {input}, spec.entry, remaining);
        produced += sequences.size();
        TraceOrigin origin{to_string(spec.lang), program.digest,
                           input.describe(spec.lang)};
        for (const ReductionSequence<Config>& seq : sequences) {
            if (seq.status != SeqStatus::terminal)
                throw LimitError("a run did not terminate within max_steps = " +
                                 std::to_string(spec.limits.max_steps));
            Trace t = project(
                seq, [&](const Config& c) { return erase(c, spec.projection); }, origin);
            set.insert(spec.dedup_traces ? dedup(t) : std::move(t));
        }
    }
    return set;
}

}  // namespace tracelab
