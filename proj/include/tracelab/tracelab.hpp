#pragma once

// Umbrella header for the tracelab library: three small-step
// interpreters, a generic enumeration kernel, and the trace algebra
// (projection, dedup, speed-up, algorithm identity, serialization).
//
// The command-line layer lives in tracelab/cli.hpp and is not included
// here, so library users do not pull in the argument parser.

#include "tracelab/config.hpp"
#include "tracelab/eqn.hpp"
#include "tracelab/erased.hpp"
#include "tracelab/errors.hpp"
#include "tracelab/imp.hpp"
#include "tracelab/kernel.hpp"
#include "tracelab/lam.hpp"
#include "tracelab/pipeline.hpp"
#include "tracelab/trace.hpp"
#include "tracelab/value.hpp"
