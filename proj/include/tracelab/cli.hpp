#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tracelab/config.hpp"
#include "tracelab/kernel.hpp"
#include "tracelab/pipeline.hpp"
#include "tracelab/trace.hpp"

// Command-line surface: run | enumerate | speedup | equal | compare.
//
// Exit codes: 0 success (equal / is-a-speedup); 1 parse or I/O error;
// 2 stuck configuration; 3 limit exceeded; 4 not-a-speedup;
// 5 different; 6 nondeterministic program in a single-run command.
namespace tracelab::cli {

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Write-then-rename so readers never observe a half-written file.
inline void write_file_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write '" + tmp + "'");
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

inline Value parse_literal(const std::string& text) {
    if (text == "true") return Value(true);
    if (text == "false") return Value(false);
    try {
        return Value(Int(text));
    } catch (const std::exception&) {
        throw ParseError("bad input value '" + text + "'");
    }
}

inline std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t next = text.find(sep, pos);
        out.push_back(text.substr(
            pos, next == std::string::npos ? std::string::npos : next - pos));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

// "1..20" → 1,2,...,20; "7,8,12" → those values; "true,false" likewise.
inline std::vector<Value> parse_value_list(const std::string& text) {
    size_t dots = text.find("..");
    if (dots != std::string::npos) {
        Int lo, hi;
        try {
            lo = Int(text.substr(0, dots));
            hi = Int(text.substr(dots + 2));
        } catch (const std::exception&) {
            throw ParseError("bad range '" + text + "'");
        }
        if (lo > hi) throw ParseError("empty range '" + text + "'");
        std::vector<Value> out;
        for (Int v = lo; v <= hi; ++v) out.push_back(Value(v));
        return out;
    }
    std::vector<Value> out;
    for (const std::string& field : split(text, ','))
        out.push_back(parse_literal(field));
    return out;
}

inline Input parse_single_input(Language lang, const std::string& text) {
    if (lang == Language::imp) return Input::for_store(imp::parse_store(text));
    if (text.empty()) {
        if (lang == Language::lam) return Input::none();
        throw ParseError("an input value is required");
    }
    return Input::for_literal(parse_literal(text));
}

// For the imperative language the inputs spec names one variable:
// "x=1..20" or "x=7,8,12". For the functional ones it is a bare list or
// range of literals.
inline std::vector<Input> parse_inputs(Language lang, const std::string& text) {
    std::vector<Input> out;
    if (lang == Language::imp) {
        size_t eq = text.find('=');
        if (eq == std::string::npos)
            throw ParseError("imp inputs look like \"x=1..20\" or \"x=7,8,12\"");
        std::string name = text.substr(0, eq);
        for (const Value& v : parse_value_list(text.substr(eq + 1)))
            out.push_back(Input::for_store(imp::Store({{name, v}})));
        return out;
    }
    for (const Value& v : parse_value_list(text)) out.push_back(Input::for_literal(v));
    return out;
}

inline std::optional<std::vector<std::string>> parse_keep(const std::string& text) {
    if (text.empty()) return std::nullopt;
    std::vector<std::string> names = split(text, ',');
    for (const std::string& n : names)
        if (n.empty()) throw ParseError("empty name in keep list");
    return names;
}

struct ProgramArgs {
    std::string lang_name;
    std::string path;
    std::string entry = "f";
    std::string keep;

    RunSpec to_spec(bool dedup, const RunLimits& limits) const {
        auto lang = parse_language(lang_name);
        if (!lang) throw ParseError("unknown language '" + lang_name + "'");
        RunSpec spec;
        spec.lang = *lang;
        spec.source = read_file(path);
        spec.entry = entry;
        spec.projection.keep = parse_keep(keep);
        spec.dedup_traces = dedup;
        spec.limits = limits;
        return spec;
    }
};

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
    CLI::App app{"execution-trace workbench for three toy languages"};
    app.require_subcommand(1);

    detail::ProgramArgs prog;
    detail::ProgramArgs prog2;
    std::string input_text;
    std::string inputs_text;
    std::string out_path;
    bool dedup_flag = false;
    RunLimits limits;

    auto add_program_flags = [](CLI::App* cmd, detail::ProgramArgs& p, bool second) {
        const std::string suffix = second ? "2" : "";
        cmd->add_option("--lang" + suffix, p.lang_name, "imp, eqn or lam")->required();
        cmd->add_option("--program" + suffix, p.path, "program file")->required();
        cmd->add_option("--entry" + suffix, p.entry,
                        "entry function for eqn programs (default f)");
        cmd->add_option("--keep" + suffix, p.keep,
                        "comma-separated variables kept by the imp projection "
                        "(default: all, in allocation order)");
    };

    CLI::App* cmd_run = app.add_subcommand("run", "print one reduction sequence");
    add_program_flags(cmd_run, prog, false);
    cmd_run->add_option("--input", input_text,
                        "store bindings \"x=12\" (imp) or a literal (eqn/lam)");
    cmd_run->add_option("--max-steps", limits.max_steps, "per-sequence step budget");

    CLI::App* cmd_enumerate =
        app.add_subcommand("enumerate", "write the trace set over a list of inputs");
    add_program_flags(cmd_enumerate, prog, false);
    cmd_enumerate->add_option("--input", input_text, "a single input");
    cmd_enumerate->add_option("--inputs", inputs_text,
                              "\"x=1..20\", \"x=7,8,12\" (imp) or \"1..20\", "
                              "\"true,false\" (eqn/lam)");
    cmd_enumerate->add_flag("--dedup", dedup_flag,
                            "collapse consecutive equal states in each trace");
    cmd_enumerate->add_option("--max-steps", limits.max_steps, "per-sequence step budget");
    cmd_enumerate->add_option("--max-seqs", limits.max_sequences,
                              "total sequence budget");
    cmd_enumerate->add_option("--out", out_path, "output .traces file")->required();

    CLI::App* cmd_speedup = app.add_subcommand(
        "speedup", "is the first trace set a speed-up of the second?");
    std::string file_b, file_a;
    cmd_speedup->add_option("sped-up", file_b, "candidate speed-up .traces file")
        ->required();
    cmd_speedup->add_option("original", file_a, "original .traces file")->required();

    CLI::App* cmd_equal =
        app.add_subcommand("equal", "do two trace-set files express the same algorithm?");
    std::string file_1, file_2;
    cmd_equal->add_option("first", file_1, "first .traces file")->required();
    cmd_equal->add_option("second", file_2, "second .traces file")->required();

    CLI::App* cmd_compare = app.add_subcommand(
        "compare", "do two programs express the same algorithm over shared inputs?");
    add_program_flags(cmd_compare, prog, false);
    add_program_flags(cmd_compare, prog2, true);
    cmd_compare->add_option("--input", input_text, "a single shared input");
    cmd_compare->add_option("--inputs", inputs_text, "shared inputs, as in enumerate");
    cmd_compare->add_flag("--dedup", dedup_flag,
                          "collapse consecutive equal states in each trace");
    cmd_compare->add_option("--max-steps", limits.max_steps, "per-sequence step budget");
    cmd_compare->add_option("--max-seqs", limits.max_sequences, "total sequence budget");

    std::vector<const char*> argv;
    argv.push_back("tracelab");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (cmd_run->parsed()) {
            RunSpec spec = prog.to_spec(false, limits);
            ParsedProgram parsed = parse_program(spec.lang, spec.source);
            Input input = detail::parse_single_input(spec.lang, input_text);
            Config initial = make_initial(parsed, input, spec.entry);
            ReductionSequence<Config> seq = run_deterministic(
                initial, [](const Config& c) { return step(c); }, limits.max_steps);
            if (seq.status != SeqStatus::terminal)
                throw LimitError("the program did not terminate within max_steps = " +
                                 std::to_string(limits.max_steps));
            for (const Config& c : seq.configs) out << to_string(c) << "\n";
            return 0;
        }
        if (cmd_enumerate->parsed()) {
            RunSpec spec = prog.to_spec(dedup_flag, limits);
            std::vector<Input> inputs;
            if (!inputs_text.empty())
                inputs = detail::parse_inputs(spec.lang, inputs_text);
            else
                inputs.push_back(detail::parse_single_input(spec.lang, input_text));
            TraceSet set = build_trace_set(spec, inputs);
            detail::write_file_atomic(out_path, serialize_trace_set(set));
            return 0;
        }
        if (cmd_speedup->parsed()) {
            TraceSet B = parse_trace_set(detail::read_file(file_b));
            TraceSet A = parse_trace_set(detail::read_file(file_a));
            std::optional<size_t> k = speedup_check(B, A);
            if (!k) {
                out << "not-a-speedup\n";
                return 4;
            }
            out << "k=" << *k << "\n";
            return 0;
        }
        if (cmd_equal->parsed()) {
            TraceSet A = parse_trace_set(detail::read_file(file_1));
            TraceSet B = parse_trace_set(detail::read_file(file_2));
            bool eq = algorithm_equal(A, B);
            out << (eq ? "equal" : "different") << "\n";
            return eq ? 0 : 5;
        }
        if (cmd_compare->parsed()) {
            RunSpec spec1 = prog.to_spec(dedup_flag, limits);
            RunSpec spec2 = prog2.to_spec(dedup_flag, limits);
            if ((spec1.lang == Language::imp) != (spec2.lang == Language::imp))
                throw ParseError("shared inputs across imp and a functional "
                                 "language are not comparable");
            std::vector<Input> inputs;
            if (!inputs_text.empty())
                inputs = detail::parse_inputs(spec1.lang, inputs_text);
            else
                inputs.push_back(detail::parse_single_input(spec1.lang, input_text));
            std::vector<Input> inputs2 = inputs;
            TraceSet A = build_trace_set(spec1, inputs);
            TraceSet B = build_trace_set(spec2, inputs2);
            bool eq = algorithm_equal(A, B);
            out << (eq ? "equal" : "different") << "\n";
            return eq ? 0 : 5;
        }
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const StuckError& e) {
        err << "error: stuck configuration: " << e.what() << "\n";
        return 2;
    } catch (const LimitError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const NondeterminismError& e) {
        err << "error: " << e.what() << "\n";
        err << "hint: use 'enumerate' for nondeterministic programs\n";
        return 6;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 70;
    }
    return 70;
}

}  // namespace tracelab::cli
