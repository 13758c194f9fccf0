#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace netgc {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// Zero-norm vectors and other inputs that cannot be normalized.
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// NaN/Inf entries, malformed arguments.
class InvalidInputError : public Error {
public:
    using Error::Error;
};

class SingularMatrixError : public Error {
public:
    SingularMatrixError(const std::string& what, double abs_det)
        : Error(what), abs_det_(abs_det) {}
    double abs_det() const noexcept { return abs_det_; }

private:
    double abs_det_;
};

/// Principal submatrix used to condition a surrogate is not positive definite.
class SubmatrixSingularError : public Error {
public:
    SubmatrixSingularError(const std::string& what, std::vector<std::size_t> indices)
        : Error(what), indices_(std::move(indices)) {}
    /// 0-based indices of the offending principal submatrix.
    const std::vector<std::size_t>& indices() const noexcept { return indices_; }

private:
    std::vector<std::size_t> indices_;
};

/// The known entries admit no positive definite completion.
class InfeasiblePartialMatrixError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double last_residual)
        : Error(what), last_residual_(last_residual) {}
    double last_residual() const noexcept { return last_residual_; }

private:
    double last_residual_;
};

class InvalidPermutationError : public Error {
public:
    using Error::Error;
};

class InvalidThresholdError : public Error {
public:
    using Error::Error;
};

/// A result escaped its mathematically admissible range by more than roundoff.
class InternalConsistencyError : public Error {
public:
    using Error::Error;
};

/// Too many Monte Carlo trials were excluded for numerical failures.
class BatchFailureError : public Error {
public:
    using Error::Error;
};

/// Text input could not be parsed. Line and column are 1-based, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
        : Error(what), line_(line), column_(column) {}
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace netgc
