#pragma once

#include <stdexcept>
#include <string>

namespace confluence {

// Base of every error raised by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input could not be parsed or violates a documented invariant.
class InputError : public Error {
public:
    using Error::Error;
};

class ParseError : public InputError {
public:
    using InputError::InputError;
};

class ValidationError : public InputError {
public:
    using InputError::InputError;
};

// A numerical procedure failed to deliver its contract.
class SolverError : public Error {
public:
    using Error::Error;
};

class NonConvergence : public SolverError {
public:
    using SolverError::SolverError;
};

class BracketFailure : public SolverError {
public:
    using SolverError::SolverError;
};

class NoContact : public SolverError {
public:
    using SolverError::SolverError;
};

class NoConfluence : public SolverError {
public:
    using SolverError::SolverError;
};

class CflViolation : public SolverError {
public:
    using SolverError::SolverError;
};

class Instability : public SolverError {
public:
    using SolverError::SolverError;
};

class ResolutionError : public SolverError {
public:
    using SolverError::SolverError;
};

class DegenerateFit : public SolverError {
public:
    using SolverError::SolverError;
};

}  // namespace confluence
