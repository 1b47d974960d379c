#pragma once

/**
 * @file errors.hpp
 * @brief Exception hierarchy shared by every oddsym module.
 *
 * Errors fall into three families that the command-line tool maps onto exit
 * codes: structural misuse (mismatched tables, unknown variables), parse
 * failures, and mathematical domain failures (non-Lagrangian input,
 * divergent integrals, non-transversal compositions).
 */

#include <stdexcept>
#include <string>

namespace oddsym {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Mismatched variable tables, unknown variables, malformed operators.
class StructuralError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

/// Base of every "the mathematics says no" failure.
class DomainError : public Error {
public:
    using Error::Error;
};

class ParityError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Rewriting ran past its step budget.
class ConsistencyError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A stated precondition on the input (symplectomorphism, Lagrangian) fails.
class ContractError : public DomainError {
public:
    using DomainError::DomainError;
};

class UnsupportedMapError : public DomainError {
public:
    using DomainError::DomainError;
};

class SingularityError : public DomainError {
public:
    using DomainError::DomainError;
};

class DivergenceError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Linearly dependent delta arguments in a product of distributions.
class WavefrontError : public DomainError {
public:
    using DomainError::DomainError;
};

class CompositionUndefinedError : public DomainError {
public:
    using DomainError::DomainError;
};

class TransversalityError : public CompositionUndefinedError {
public:
    using CompositionUndefinedError::CompositionUndefinedError;
};

}  // namespace oddsym
