#pragma once

#include <stdexcept>
#include <string>

namespace pftl {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation (bad radicand, zero inverse, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// x^d - a factors over the rationals.
class ReducibilityError : public DomainError {
public:
    using DomainError::DomainError;
};

class UnsupportedDegreeError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A documented precondition (parameter range) was violated.
class PreconditionError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A configured size or magnitude limit would be exceeded.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// A computation could not reach the certification it promises.
class RigorError : public Error {
public:
    using Error::Error;
};

}  // namespace pftl
