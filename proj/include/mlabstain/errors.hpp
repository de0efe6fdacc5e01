#pragma once

#include <stdexcept>
#include <string>

namespace mlabstain {

// Bad arguments: out-of-range values, mismatched dimensions, malformed specs.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Problem size exceeds what an exhaustive routine is allowed to enumerate.
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

// Unreadable or syntactically malformed file content.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Well-formed file content that violates a data invariant (e.g. a label of 2).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mlabstain
