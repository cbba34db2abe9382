#pragma once

#include <stdexcept>
#include <string>

namespace qclab {

/// Bad inputs: malformed scenario files, violated preconditions, invalid
/// parameter combinations. Maps to CLI exit code 2.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Failures detected while a computation is running: NaN amplitudes,
/// boundary leakage, singularity approach, level-tracking loss.
/// Maps to CLI exit code 3.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qclab
