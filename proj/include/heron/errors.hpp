#pragma once

#include <stdexcept>
#include <string>

namespace heron {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
    using Error::Error;
};

// Parameter outside its admissible range (q, efficiencies, truncations, ...).
struct RangeError : Error {
    using Error::Error;
};

// Target state has no |3> component; unreachable by the three-click scheme.
struct DegenerateTarget : Error {
    using Error::Error;
};

// All coefficients vanish; no state to normalize.
struct ZeroState : Error {
    using Error::Error;
};

struct EmptyRecords : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

}  // namespace heron
