#pragma once

#include <stdexcept>
#include <string>

namespace collatz {

/// Base for every error raised by the library. `exit_code()` is what the CLI
/// returns when the error escapes a subcommand.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual int exit_code() const noexcept { return 2; }
};

/// Bad caller input (wrong lengths, out-of-domain arguments).
class invalid_argument : public error {
public:
    using error::error;
    int exit_code() const noexcept override { return 1; }
};

class not_a_power_residue : public error {
public:
    using error::error;
};

class not_admissible : public error {
public:
    using error::error;
};

class c1_violated : public error {
public:
    using error::error;
};

class step_budget_exceeded : public error {
public:
    using error::error;
};

class non_convergence : public error {
public:
    using error::error;
};

/// Table-size or enumeration caps.
class resource_cap_exceeded : public error {
public:
    using error::error;
    int exit_code() const noexcept override { return 3; }
};

/// Internal invariant broken; always a bug or a counterexample worth reporting.
class invariant_violation : public error {
public:
    using error::error;
};

} // namespace collatz
