#pragma once

#include <stdexcept>
#include <string>

namespace qbd {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A zero factor was met inside a q-product (x = q^{-j} or q^{-j-a}).
class PoleError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A truncated series or product did not settle within the term cap.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// The request is valid but beyond what the implementation supports.
class CapabilityError : public Error {
public:
    using Error::Error;
};

/// Invalid experiment or command-line configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Output could not be written.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace qbd
