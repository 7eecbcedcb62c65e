#ifndef REGRESSLAB_ERRORS_HPP
#define REGRESSLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace regresslab {

// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad dimensions or malformed containers.
class ShapeError : public Error {
public:
    using Error::Error;
};

// Caller-supplied argument violates a documented precondition.
class ParameterError : public Error {
public:
    using Error::Error;
};

// Text that could not be turned into a value (carries row/column context).
class ParseError : public Error {
public:
    using Error::Error;
};

// A file whose structure (header, columns) does not match expectations.
class SchemaError : public Error {
public:
    using Error::Error;
};

class EmptyInputError : public Error {
public:
    using Error::Error;
};

// Index outside its valid range (e.g. class id >= class count).
class RangeError : public Error {
public:
    using Error::Error;
};

// Inconsistent run configuration (bad loss/output pairing, invalid config file).
class ConfigError : public Error {
public:
    using Error::Error;
};

// A basis enumeration would produce an unreasonable number of terms.
class CombinatorialBlowupError : public Error {
public:
    using Error::Error;
};

// Root for failures of the numerics themselves (CLI maps these to exit 3).
class NumericError : public Error {
public:
    using Error::Error;
};

class NotPositiveDefiniteError : public NumericError {
public:
    using NumericError::NumericError;
};

class SingularError : public NumericError {
public:
    using NumericError::NumericError;
};

class MulticollinearError : public NumericError {
public:
    using NumericError::NumericError;
};

class UndefinedMetricError : public NumericError {
public:
    using NumericError::NumericError;
};

} // namespace regresslab

#endif
