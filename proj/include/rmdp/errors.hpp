#pragma once

#include <stdexcept>
#include <string>

namespace rmdp {

/// Caller violated a precondition (bad dimensions, out-of-range parameter, ...).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical routine could not produce a usable result.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rmdp
