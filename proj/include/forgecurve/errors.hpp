#pragma once

#include <stdexcept>

namespace forgecurve {

// Error taxonomy used across the library. Each class maps to one failure
// category that the CLI reports and converts into a nonzero exit status.

// Mismatched vector lengths or empty inputs where data was required.
class ShapeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Non-finite or out-of-domain numeric values (NaN/inf losses, negative norms).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Operation called in a state that does not support it (e.g. querying the
// instability ratio before warm-up calibration, sampling an empty buffer).
class StateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Degenerate calibration inputs (tau_day <= 0, bad schedule parameters).
class CalibrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input files (CSV traces, matrices); message carries line numbers.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid run configuration; message names the offending field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace forgecurve
