#pragma once

#include <stdexcept>
#include <string>

namespace qkd3 {

/// Input outside the region where a formula is defined (e.g. e_b > 1/2).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Attack whose rate denominators vanish.
class DegenerateAttack : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Rejection sampling ran out of budget.
class SamplingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Protocol run produced fewer sifted rounds than the check/data split needs.
class InsufficientSift : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Decoy channel yields no positive key rate even at zero distance.
class NoSecureDistance : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed text input (attack strings, parameter files).
class ParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace qkd3
