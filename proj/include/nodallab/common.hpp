#pragma once
#include <stdexcept>
#include <string>

namespace nodallab {

// Error taxonomy used across the library. Everything derives from Error so
// callers can catch the whole family at the CLI boundary.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad sizes, probabilities, seeds, experiment tags, quadrature orders.
struct ConfigError : Error {
    using Error::Error;
};

// Non-finite input data, dimension mismatches.
struct DataError : Error {
    using Error::Error;
};

// Solver failures; message carries a digest of the offending matrix.
struct NumericError : Error {
    using Error::Error;
};

// Evaluation requested at (or too close to) a pole of a Green function.
struct SingularityError : Error {
    using Error::Error;
};

// Detection system with a 2-dimensional null space.
struct MultiplicityError : Error {
    using Error::Error;
};

// Sign formula with a vanishing denominator; excluded from statistics.
struct DegenerateSignError : Error {
    using Error::Error;
};

}  // namespace nodallab
