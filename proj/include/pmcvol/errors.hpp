#pragma once

#include <stdexcept>
#include <string>

namespace pmcvol {

/// Malformed or out-of-contract input data (bad prices, short series, ...).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Inconsistent configuration (split fractions, model/N combinations, ...).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Data that cannot be normalized or conditioned on (zero variance, zero evidence).
class DegenerateData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A nonfinite or all-zero quantity appeared during a numerical recursion.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace pmcvol
