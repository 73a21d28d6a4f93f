#pragma once

#include <stdexcept>
#include <string>

namespace slitwave {

// Base class for everything thrown by this library.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// A value passed to an operation violates that operation's contract
// (negative mass, mode index out of range, infeasible bounds, ...).
class invalid_parameter_error : public error {
public:
    using error::error;
};

// A parsed configuration is structurally valid but semantically wrong
// (missing required key, value out of range for the chosen mode, ...).
class validation_error : public error {
public:
    using error::error;
};

// Raised while reading a config or CSV stream; carries the 1-based line
// number where parsing stopped.
class parse_error : public error {
public:
    parse_error(const std::string& what, long line)
        : error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    long line() const noexcept { return line_; }

private:
    long line_;
};

// A mathematical operation was asked to evaluate outside its domain,
// e.g. the Rayleigh obliquity radical going negative or interpolation
// outside the sampled range.
class domain_error : public error {
public:
    using error::error;
};

// An iterative procedure exhausted its budget without meeting its target.
class convergence_error : public error {
public:
    using error::error;
};

// A pattern analysis (extremum search, visibility) found no usable structure.
class analysis_error : public error {
public:
    using error::error;
};

// File system failures when loading or writing artifacts.
class io_error : public error {
public:
    using error::error;
};

}  // namespace slitwave
