#pragma once

#include <stdexcept>
#include <string>

namespace qstep {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Gate references a qubit that does not exist, repeats a qubit, or has the wrong arity.
class InvalidGateError : public Error {
public:
    using Error::Error;
};

/// State and circuit widths disagree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Dense oracle asked to materialize a unitary that is too wide.
class OracleRefusalError : public Error {
public:
    using Error::Error;
};

/// The post-selected pattern has zero probability; the conditional probability is undefined.
class PostSelectionImpossibleError : public Error {
public:
    using Error::Error;
};

/// Malformed builder or rotation specification (angle counts, depth range, ...).
class SpecError : public Error {
public:
    using Error::Error;
};

class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Series values or loader amplitudes outside [0, 1].
class NormalizationError : public Error {
public:
    using Error::Error;
};

/// Non-finite function samples or other bad numeric input.
class InputError : public Error {
public:
    using Error::Error;
};

} // namespace qstep
