#pragma once

#include <stdexcept>
#include <string>

namespace suranyi {

// Base of every error raised by the library. Callers that only care about
// "something failed" catch this; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (ln of a
// non-positive interval, division through zero, x < 35 for phi1, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// A configured resource cap (factorial digit cap) would be exceeded.
class ResourceError : public Error {
public:
    using Error::Error;
};

// An internal identity that must hold did not; indicates a bug.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class CorruptCheckpoint : public Error {
public:
    using Error::Error;
};

// A certified inequality could not be established, even after precision
// escalation. what() names the inequality.
class CertificationFailure : public Error {
public:
    using Error::Error;
};

class NotFound : public Error {
public:
    using Error::Error;
};

}  // namespace suranyi
