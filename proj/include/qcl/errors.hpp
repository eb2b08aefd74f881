#pragma once

#include <stdexcept>
#include <string>

namespace qcl {

// Exit-code contract shared by the CLI and the experiment runners:
// 0 pass, 2 precondition/config, 3 assertion failure, 4 solver non-convergence.
enum class ExitCode : int {
    Ok = 0,
    Precondition = 2,
    Assertion = 3,
    Solver = 4,
};

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
    virtual ExitCode exit_code() const { return ExitCode::Precondition; }
};

// Bad argument to an operation (out-of-range index, shape mismatch, ...).
struct ArgumentError : Error {
    using Error::Error;
};

// Invalid or inconsistent configuration, including violated preconditions
// such as an inadequate Fock cutoff.
struct ConfigError : Error {
    using Error::Error;
};

// Non-finite or malformed input data.
struct DataError : Error {
    using Error::Error;
};

// Requested problem exceeds the configured memory budget.
struct ResourceError : Error {
    using Error::Error;
};

// A run-time invariant check failed.
struct AssertionError : Error {
    using Error::Error;
    ExitCode exit_code() const override { return ExitCode::Assertion; }
};

// Iterative solver did not converge; carries the best estimate found.
struct SolverError : Error {
    SolverError(const std::string& msg, double best, double residual)
        : Error(msg), best_estimate(best), residual(residual) {}
    ExitCode exit_code() const override { return ExitCode::Solver; }
    double best_estimate = 0.0;
    double residual = 0.0;
};

}  // namespace qcl
