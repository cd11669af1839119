#pragma once

#include <span>
#include <utility>
#include <vector>

namespace hhsim {

struct SpectrumPoint {
  double frequency = 0.0;  // MHz
  double magnitude = 0.0;
};

/// |X_k| / N of the discrete Fourier transform for k = 0 .. N/2, at f_k = k / (N dt).
std::vector<SpectrumPoint> dft_magnitude(std::span<const double> series, double sample_dt);

// |sum_n x_n exp(-2 pi i f n dt)| / N at an arbitrary frequency f (MHz).
double dtft_magnitude(std::span<const double> series, double sample_dt, double frequency);

struct SpectralPeak {
  double frequency = 0.0;
  double magnitude = 0.0;
  double fwhm = 0.0;  // full width at half maximum in MHz, from the continuous transform
};

/// Local maxima of the DFT magnitude above `relative_threshold` of the largest one, strongest
/// first, refined on the continuous transform. A peak at zero frequency is treated as
/// symmetric, so its width counts both sides.
std::vector<SpectralPeak> find_peaks(std::span<const double> series, double sample_dt, std::size_t max_peaks,
                                     double relative_threshold = 0.2);

}  // namespace hhsim
