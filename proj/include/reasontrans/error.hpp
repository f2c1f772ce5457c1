#pragma once

#include <stdexcept>
#include <string>

namespace reasontrans {

/// Base error for harness failures that callers are expected to handle.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input file or record does not match the documented schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// A required external tool (compiler, interpreter) is missing.
class EnvironmentError : public Error {
public:
    using Error::Error;
};

/// Transport-level failure talking to a generation endpoint (retries exhausted).
class TransportError : public Error {
public:
    using Error::Error;
};

/// Non-retryable endpoint response (HTTP 4xx).
class ApiError : public Error {
public:
    ApiError(int status, const std::string& what) : Error(what), status_(status) {}
    int status() const { return status_; }

private:
    int status_;
};

}  // namespace reasontrans
