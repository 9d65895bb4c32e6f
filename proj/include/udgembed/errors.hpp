#pragma once

#include <stdexcept>
#include <string>

namespace udg {

// Base class so callers can catch toolkit errors as one family.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Unparseable or inconsistent input documents (bad edge lists, CSV, profiles).
class MalformedInputError : public Error {
public:
    using Error::Error;
};

// Mathematical preconditions violated (zero laser drive, nonpositive distance).
class DomainError : public Error {
public:
    using Error::Error;
};

// Coordinates outside the register frame where a translation is defined.
class OutOfRegisterError : public Error {
public:
    using Error::Error;
};

// Instance too small for the requested computation (no vertex pairs).
class DegenerateInstanceError : public Error {
public:
    using Error::Error;
};

// Necessary embedding conditions failed before training started.
class PrecheckError : public Error {
public:
    using Error::Error;
};

// More vertices than available positions.
class CapacityError : public Error {
public:
    using Error::Error;
};

// Randomized generator exhausted its sampling budget.
class GenerationError : public Error {
public:
    using Error::Error;
};

// Exact search requested beyond its enforced size limit.
class SizeLimitError : public Error {
public:
    using Error::Error;
};

} // namespace udg
