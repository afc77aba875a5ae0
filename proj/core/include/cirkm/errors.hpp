#pragma once

#include <stdexcept>
#include <string>

namespace cirkm {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A precondition on caller-supplied values was violated.
class InvalidInputError : public Error {
public:
    using Error::Error;
};

// A file (CSV dataset, model file, accuracy matrix) could not be parsed.
// Messages include the offending row/column where known.
class LoadError : public Error {
public:
    using Error::Error;
};

// The bordered system could not be factorized: a pivot fell below the
// singularity threshold after row equilibration.
class SingularSystemError : public Error {
public:
    SingularSystemError(const std::string& msg, double pivot)
        : Error(msg), pivot_(pivot) {}
    double pivot() const noexcept { return pivot_; }

private:
    double pivot_;
};

// Requested statistic falls outside the embedded critical-value tables.
class UnsupportedInputError : public Error {
public:
    using Error::Error;
};

// An evaluation run could not produce a usable result (e.g. every grid
// configuration was singular, or benchmark cells failed).
class EvalError : public Error {
public:
    using Error::Error;
};

}  // namespace cirkm
