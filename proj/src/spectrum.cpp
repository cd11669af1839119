#include "hhsim/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "hhsim/common.hpp"

namespace hhsim {

double dtft_magnitude(std::span<const double> series, double sample_dt, double frequency) {
  if (series.empty()) return 0.0;
  // Recurrence on the phasor keeps this O(N) without repeated trig calls.
  const std::complex<double> step = std::polar(1.0, -kTwoPi * frequency * sample_dt);
  std::complex<double> phasor{1.0, 0.0};
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t n = 0; n < series.size(); ++n) {
    acc += series[n] * phasor;
    phasor *= step;
    if (n % 64 == 63) phasor = std::polar(1.0, -kTwoPi * frequency * sample_dt * static_cast<double>(n + 1));
  }
  return std::abs(acc) / static_cast<double>(series.size());
}

std::vector<SpectrumPoint> dft_magnitude(std::span<const double> series, double sample_dt) {
  if (!(sample_dt > 0.0)) throw ConfigError("sample interval must be positive");
  const std::size_t n = series.size();
  std::vector<SpectrumPoint> out;
  if (n == 0) return out;
  const double duration = static_cast<double>(n) * sample_dt;
  out.reserve(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    const double f = static_cast<double>(k) / duration;
    out.push_back({f, dtft_magnitude(series, sample_dt, f)});
  }
  return out;
}

namespace {

// Frequency on one side of `f0` where the continuous magnitude drops to `level`.
double half_level_crossing(std::span<const double> series, double dt, double f0, double level, double direction,
                           double bin) {
  double inside = f0;
  double outside = f0;
  const double probe = 0.05 * bin;
  for (int k = 1; k <= 400; ++k) {
    outside = f0 + direction * probe * k;
    if (dtft_magnitude(series, dt, outside) < level) break;
    inside = outside;
  }
  for (int it = 0; it < 50; ++it) {
    const double mid = 0.5 * (inside + outside);
    if (dtft_magnitude(series, dt, mid) >= level) {
      inside = mid;
    } else {
      outside = mid;
    }
  }
  return 0.5 * (inside + outside);
}

}  // namespace

std::vector<SpectralPeak> find_peaks(std::span<const double> series, double sample_dt, std::size_t max_peaks,
                                     double relative_threshold) {
  const auto spectrum = dft_magnitude(series, sample_dt);
  const std::size_t m = spectrum.size();
  if (m < 3) return {};
  const double bin = spectrum[1].frequency;

  std::vector<std::size_t> candidates;
  for (std::size_t k = 0; k < m; ++k) {
    const double left = k == 0 ? spectrum[1].magnitude : spectrum[k - 1].magnitude;
    const double right = k + 1 < m ? spectrum[k + 1].magnitude : 0.0;
    if (spectrum[k].magnitude >= left && spectrum[k].magnitude > right) candidates.push_back(k);
  }
  if (candidates.empty()) return {};
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](std::size_t a, std::size_t b) { return spectrum[a].magnitude > spectrum[b].magnitude; });
  const double top = spectrum[candidates.front()].magnitude;

  std::vector<SpectralPeak> peaks;
  for (std::size_t k : candidates) {
    if (peaks.size() >= max_peaks) break;
    if (spectrum[k].magnitude < relative_threshold * top) break;

    SpectralPeak peak;
    if (k == 0) {
      peak.frequency = 0.0;
    } else {
      // golden-section refinement within one bin
      const double r = 0.5 * (std::sqrt(5.0) - 1.0);
      double a = spectrum[k].frequency - bin, b = spectrum[k].frequency + bin;
      double c = b - r * (b - a), d = a + r * (b - a);
      for (int it = 0; it < 60; ++it) {
        if (dtft_magnitude(series, sample_dt, c) > dtft_magnitude(series, sample_dt, d)) {
          b = d;
        } else {
          a = c;
        }
        c = b - r * (b - a);
        d = a + r * (b - a);
      }
      peak.frequency = 0.5 * (a + b);
    }
    peak.magnitude = dtft_magnitude(series, sample_dt, peak.frequency);
    const double level = 0.5 * peak.magnitude;
    const double hi = half_level_crossing(series, sample_dt, peak.frequency, level, 1.0, bin);
    const double lo = k == 0 ? -hi : half_level_crossing(series, sample_dt, peak.frequency, level, -1.0, bin);
    peak.fwhm = hi - lo;
    peaks.push_back(peak);
  }
  return peaks;
}

}  // namespace hhsim
