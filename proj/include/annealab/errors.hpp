#pragma once

#include <stdexcept>
#include <string>

namespace annealab {

// Construction-time rejection: the requested problem cannot be posed
// (e.g. parity-infeasible balanced-partition target).
struct InfeasibleConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Requested state space exceeds the dense enumeration cap.
struct SizeCapError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Time integration violated a hard numerical contract (norm drift etc.).
struct IntegrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input data violates a precondition that indicates corruption
// (probabilities outside [0,1], undefined rescaling, constant series).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A root search or calibration produced no admissible solution.
struct CalibrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Experiment configuration is malformed or inconsistent.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace annealab
