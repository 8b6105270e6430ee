#pragma once

#include <stdexcept>
#include <string>

namespace calib {

// Input data violates a structural contract (shape, range, row sums).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A caller-supplied parameter is out of its domain.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Every prediction was filtered out before binning.
class EmptyMeasurementError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An iterative fit produced a non-finite loss.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace calib
