#pragma once

#include <stdexcept>
#include <string>

namespace hyperstat {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed or ambiguous input data (files, serialized reports).
struct ParseError : Error {
    using Error::Error;
};

/// A caller violated an operation's contract: sizes, ranges, domains,
/// duplicate or degenerate inputs, mismatched spaces.
struct PreconditionError : Error {
    using Error::Error;
};

/// A value left the mathematical domain of an operation (invalid point,
/// non-finite intermediate, failed eigensolve).
struct NumericError : Error {
    using Error::Error;
};

}  // namespace hyperstat
