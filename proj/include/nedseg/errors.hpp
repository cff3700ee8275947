#pragma once

#include <stdexcept>
#include <string>

namespace nedseg {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operands do not share width/height/levels, or a constructor argument
// disagrees with the declared dimensions.
struct DimensionMismatchError : Error {
    using Error::Error;
};

// A pixel or scalar intensity falls outside [0, levels).
struct PixelRangeError : Error {
    using Error::Error;
};

// levels is not a power of two >= 2.
struct InvalidLevelsError : Error {
    using Error::Error;
};

// File missing, malformed header, truncated payload, bad field value.
struct IoError : Error {
    using Error::Error;
};

// npri is undefined when the expected index equals 1.
struct DegenerateNormalizationError : Error {
    using Error::Error;
};

} // namespace nedseg
