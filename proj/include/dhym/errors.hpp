#pragma once

#include <stdexcept>
#include <string>

namespace dhym {

/// Malformed or out-of-range input to a public operation.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A checked mathematical property failed beyond its tolerance. Signals a
/// construction bug rather than bad input.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace dhym
