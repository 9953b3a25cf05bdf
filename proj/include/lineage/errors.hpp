#pragma once

#include <stdexcept>
#include <string>

namespace lineage {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exact division by a zero scalar; signals a degenerate configuration upstream.
class DivisionByZero : public Error {
public:
    DivisionByZero() : Error("division by zero") {}
};

/// Join of equal points, meet of equal/parallel lines, or a vanishing
/// denominator anywhere in a construction.  Whole-instance resampling is the
/// intended recovery.
class DegenerateConfiguration : public Error {
public:
    using Error::Error;
    DegenerateConfiguration() : Error("degenerate configuration") {}
};

/// Could not produce a generic seed set within the resample budget.
class SeedFailure : public Error {
public:
    using Error::Error;
};

/// Independent verification instances disagree on the generation counts.
class VerificationMismatch : public Error {
public:
    using Error::Error;
};

/// child(A,B) = child(A,C) observed while child(B,C) differs.  Impossible
/// over an exact field, so this always indicates an arithmetic bug.
class CogenyViolation : public Error {
public:
    using Error::Error;
};

class FormatMismatch : public Error {
public:
    using Error::Error;
};

class ConfigDigestMismatch : public Error {
public:
    using Error::Error;
};

class UnknownId : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace lineage
