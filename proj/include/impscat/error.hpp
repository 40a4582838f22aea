#pragma once

#include <stdexcept>
#include <string>

namespace impscat {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration, experiment spec or malformed input document.
class SpecError : public Error {
public:
    using Error::Error;
};

/// Measurement data missing or inconsistent with the requested run.
class DataError : public Error {
public:
    using Error::Error;
};

/// Numerical failure (singular system, non-convergent iteration, ...).
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace impscat
