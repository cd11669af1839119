#pragma once

#include <numbers>
#include <stdexcept>
#include <string>

namespace hhsim {

// Internal units: angular frequency in rad/us, time in us.
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline constexpr double mhz_to_angular(double mhz) { return kTwoPi * mhz; }
inline constexpr double angular_to_mhz(double omega) { return omega / kTwoPi; }

/// Invalid or incomplete input (bad configuration, missing protocol parameter).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A simulation or analysis step could not produce a trustworthy result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hhsim
