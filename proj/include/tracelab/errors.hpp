#pragma once

#include <stdexcept>
#include <string>

namespace tracelab {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed source text (programs, stores, trace files).
struct ParseError : Error {
    ParseError(const std::string& msg, int line, int column)
        : Error(msg + " at line " + std::to_string(line) + ", column " +
                std::to_string(column)),
          line(line),
          column(column) {}

    explicit ParseError(const std::string& msg) : Error(msg), line(0), column(0) {}

    int line;
    int column;
};

// A configuration the step function cannot handle: unbound variable,
// type mismatch, division by zero, a call matching no rule, an empty
// choice set.
struct StuckError : Error {
    using Error::Error;
};

// The enumeration budget ran out: either more maximal sequences than
// max_sequences, or (at the pipeline level) a sequence that hit
// max_steps without terminating.
struct LimitError : Error {
    using Error::Error;
};

// A deterministic run found a configuration with two or more successors.
struct NondeterminismError : Error {
    using Error::Error;
};

}  // namespace tracelab
