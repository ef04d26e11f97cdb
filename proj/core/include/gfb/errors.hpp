#pragma once

#include <stdexcept>
#include <string>

namespace gfb {

// Base for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or out-of-range caller input (bad vertex id, unparsable file, ...).
class InvalidInputError : public Error {
public:
    using Error::Error;
};

// An exact search was asked to run above its configured cap.
class SizeLimitError : public Error {
public:
    using Error::Error;
};

// A sequential-game move violated the game rules.
class RuleViolationError : public Error {
public:
    using Error::Error;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// A self-check failed; indicates a bug, not bad input.
class InternalError : public Error {
public:
    using Error::Error;
};

// The operation needs structure (e.g. grid labels) the graph does not carry.
class UnsupportedGraphError : public Error {
public:
    using Error::Error;
};

// Argument outside the mathematical domain of a function.
class DomainError : public Error {
public:
    using Error::Error;
};

// Config schema violation; message lists the offending fields.
class ValidationError : public Error {
public:
    using Error::Error;
};

} // namespace gfb
