#pragma once

#include <stdexcept>
#include <string>

namespace fuelcast {

/// Broad failure classes. The CLI maps these onto process exit codes.
enum class ErrorKind {
    Usage,     ///< bad configuration or arguments
    Data,      ///< malformed or incomplete input data
    Numerical  ///< estimation or optimisation failure
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorKind::Usage, what) {}
};

// ingest

class MalformedRow : public DataError {
public:
    MalformedRow(std::size_t line, const std::string& detail)
        : DataError("line " + std::to_string(line) + ": " + detail), line_(line) {}
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class MissingColumn : public DataError {
public:
    explicit MissingColumn(const std::string& name)
        : DataError("missing column '" + name + "'"), column_(name) {}
    [[nodiscard]] const std::string& column() const noexcept { return column_; }

private:
    std::string column_;
};

class IncompleteHub : public DataError {
public:
    explicit IncompleteHub(const std::string& month)
        : DataError("hub price series has no value for " + month) {}
};

// series

class EmptyOverlap : public DataError {
public:
    EmptyOverlap() : DataError("series spans do not overlap") {}
};

class IncompleteSeries : public DataError {
public:
    explicit IncompleteSeries(const std::string& month)
        : DataError("series has a gap at " + month) {}
};

class NonPositiveArgument : public DataError {
public:
    explicit NonPositiveArgument(const std::string& month)
        : DataError("log transform argument is not positive at " + month) {}
};

class TooShort : public DataError {
public:
    explicit TooShort(const std::string& what) : DataError(what) {}
};

class HeadMismatch : public DataError {
public:
    explicit HeadMismatch(const std::string& what) : DataError(what) {}
};

// arima

class ZeroVariance : public NumericalError {
public:
    ZeroVariance() : NumericalError("series has zero variance") {}
};

class NonStationaryParams : public NumericalError {
public:
    explicit NonStationaryParams(const std::string& what) : NumericalError(what) {}
};

class SeriesTooShort : public NumericalError {
public:
    explicit SeriesTooShort(const std::string& what) : NumericalError(what) {}
};

class OptimizerFailed : public NumericalError {
public:
    explicit OptimizerFailed(const std::string& diagnostic)
        : NumericalError("optimizer failed: " + diagnostic) {}
};

/// Raised by the ARIMA fitter when the differenced series is constant; the
/// likelihood has no finite maximum there.
class DegenerateSeries : public OptimizerFailed {
public:
    DegenerateSeries() : OptimizerFailed("differenced series is constant (sigma2 -> 0)") {}
};

class AllFitsFailed : public NumericalError {
public:
    explicit AllFitsFailed(const std::string& what) : NumericalError(what) {}
};

// distfit

class TooFewValues : public NumericalError {
public:
    explicit TooFewValues(std::size_t n)
        : NumericalError("normal fit needs at least 2 values, got " + std::to_string(n)) {}
};

class DegenerateDistribution : public NumericalError {
public:
    DegenerateDistribution() : NumericalError("all values equal; standard deviation would be 0") {}
};

}  // namespace fuelcast
