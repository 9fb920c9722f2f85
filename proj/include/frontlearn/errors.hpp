#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace frontlearn {

// Base for every error raised by the library. The CLI maps subclasses
// onto exit codes: InvalidInput/FormatError -> 2, numerical failures -> 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

/// Numerical failures share a base so callers can catch them together.
class NumericalError : public Error {
public:
    using Error::Error;
};

class IntegrationFailure : public NumericalError {
public:
    IntegrationFailure(const std::string& what, double last_time)
        : NumericalError(what + " (last valid t = " + std::to_string(last_time) + ")"),
          last_time_(last_time) {}

    double last_time() const noexcept { return last_time_; }

private:
    double last_time_;
};

class NoFrontCrossing : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class FitDiverged : public NumericalError {
public:
    FitDiverged(const std::string& what, double c, double d, double residual)
        : NumericalError(what), c_(c), d_(d), residual_(residual) {}

    double c() const noexcept { return c_; }
    double d() const noexcept { return d_; }
    double residual() const noexcept { return residual_; }

private:
    double c_, d_, residual_;
};

class ExtractionFailure : public NumericalError {
public:
    ExtractionFailure(const std::string& what, std::size_t column)
        : NumericalError(what + " (column " + std::to_string(column) + ")"), column_(column) {}

    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

class FrontTooCloseToBoundary : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

class TrainingDiverged : public NumericalError {
public:
    TrainingDiverged(const std::string& what, std::size_t epoch)
        : NumericalError(what + " (epoch " + std::to_string(epoch) + ")"), epoch_(epoch) {}

    std::size_t epoch() const noexcept { return epoch_; }

private:
    std::size_t epoch_;
};

class EvaluationError : public NumericalError {
public:
    EvaluationError(const std::string& what, std::size_t x_index)
        : NumericalError(what + " (x index " + std::to_string(x_index) + ")"), x_index_(x_index) {}

    std::size_t x_index() const noexcept { return x_index_; }

private:
    std::size_t x_index_;
};

}  // namespace frontlearn
