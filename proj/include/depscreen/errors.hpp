#pragma once

#include <stdexcept>
#include <string>

namespace depscreen {

// Base class for every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateColumn : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct AlreadyCentered : Error { using Error::Error; };
struct NonConvergence : Error { using Error::Error; };
struct InsufficientSample : Error { using Error::Error; };
struct EmptyGrid : Error { using Error::Error; };
struct ZeroSum : Error { using Error::Error; };
struct AlphaOutOfRange : Error { using Error::Error; };
struct NegativeEigenvalue : Error { using Error::Error; };
struct InsufficientResamples : Error { using Error::Error; };
struct NonPositiveVariance : Error { using Error::Error; };
struct UnsupportedMeasure : Error { using Error::Error; };
struct DegeneratePredictor : Error { using Error::Error; };
struct ZeroModel : Error { using Error::Error; };
struct InternalConsistency : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct SchemaError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct UsageError : Error { using Error::Error; };

}  // namespace depscreen
