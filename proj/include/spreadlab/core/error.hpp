#pragma once

#include <stdexcept>
#include <string>

namespace spreadlab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or out-of-contract input; maps to CLI exit status 1.
class InputError : public Error {
public:
    using Error::Error;
};

class NoSquaresError : public InputError {
public:
    using InputError::InputError;
};

class ConditioningError : public InputError {
public:
    using InputError::InputError;
};

// Exact computation would exceed a configured work limit; maps to exit status 2.
class BudgetError : public Error {
public:
    using Error::Error;
};

// A computed object failed its own verification; maps to exit status 3.
class PostconditionError : public Error {
public:
    using Error::Error;
};

inline void require(bool condition, const std::string& message) {
    if (!condition) throw InputError(message);
}

} // namespace spreadlab
