// SPDX-License-Identifier: Apache-2.0
#ifndef BDRIS_ERRORS_HPP
#define BDRIS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bdris {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularNetwork : Error {
    using Error::Error;
};
struct ShapeMismatch : Error {
    using Error::Error;
};
struct OutOfRangeCapacitance : Error {
    using Error::Error;
};
struct OutOfRangeTheta : Error {
    using Error::Error;
};
struct ZeroResistance : Error {
    using Error::Error;
};
struct NonMonotoneArc : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};
struct DegenerateGroupChannel : Error {
    using Error::Error;
};
struct SingularSubproblem : Error {
    using Error::Error;
};
struct BisectionFailure : Error {
    using Error::Error;
};

} // namespace bdris

#endif
