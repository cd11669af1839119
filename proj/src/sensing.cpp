#include "hhsim/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "hhsim/common.hpp"
#include "hhsim/noise.hpp"
#include "hhsim/propagator.hpp"

namespace hhsim {

namespace {

struct Probe {
  Eigen::Vector2cd state;
  Operator measured;  // single-site electron operator
  Axis coupling;      // electron operator of the effective interaction
};

Probe probe_for(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::Sense_PM:
      return {spinor_plus_x(), pauli(Axis::y), Axis::z};
    case ProtocolKind::Sense_AM:
      return {spinor_up(), pauli(Axis::y), Axis::x};
    default:
      throw ConfigError("sensing needs protocol Sense_PM or Sense_AM, got " + std::string(to_string(kind)));
  }
}

// rho = |probe><probe| (x) rho_nuclear
Operator prepare(const Eigen::Vector2cd& probe, const Operator& rho_nuclear) {
  const Eigen::Index d = rho_nuclear.rows();
  Operator rho(2 * d, 2 * d);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) rho.block(a * d, b * d, d, d) = probe(a) * std::conj(probe(b)) * rho_nuclear;
  return rho;
}

Operator trace_out_electron(const Operator& rho) {
  const Eigen::Index d = rho.rows() / 2;
  return rho.block(0, 0, d, d) + rho.block(d, d, d, d);
}

double electron_expectation(const Operator& op, const Operator& rho) {
  const Eigen::Index d = rho.rows() / 2;
  Complex acc{0.0, 0.0};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) acc += op(a, b) * rho.block(b * d, a * d, d, d).trace();
  return acc.real();
}

Operator initial_nuclear_state(std::size_t n_nuclei) {
  std::vector<Eigen::Vector2cd> spinors(n_nuclei, spinor_plus_x());
  const StateVector psi = product_state(spinors);
  return psi * psi.adjoint();
}

}  // namespace

double SensingRecord::resolution() const {
  if (sample_times.size() < 2) return 0.0;
  const double dt = sample_times[1] - sample_times[0];
  return 1.0 / (static_cast<double>(sample_times.size()) * dt);
}

std::vector<double> sensing_detunings(const ProtocolParams& p, std::span<const Nucleus> nuclei) {
  const double resonance = resonance_condition(p);
  std::vector<double> out;
  for (const auto& nuc : nuclei) out.push_back(resonance - nuc.omega_l);
  return out;
}

FrameChain sensing_frame(const ProtocolParams& p, std::span<const Nucleus> nuclei) {
  probe_for(p.kind);
  const std::size_t n = 1 + nuclei.size();
  const Operator b = dressed_rotation(AxisMap::x_to_z, n);
  const Operator half_z = 0.5 * embed(Axis::z, 0, n);
  FrameChain chain;
  if (p.kind == ProtocolKind::Sense_PM) {
    const double o1 = p.require_omega1(), o2 = p.require_omega2(), os = p.require_omega_s();
    chain.basis_change(b)
        .rotation(half_z, [o1](double t) { return o1 * t; })
        .basis_change(b)
        .rotation(half_z, [o2](double t) { return o2 * t; })
        .basis_change(b)
        .rotation(half_z, [os](double t) { return -0.5 * os * t; });
  } else {
    const double o0 = p.require_omega0_drive(), o1 = p.require_omega1(), o2 = p.require_omega2();
    chain.basis_change(b).rotation(half_z, [=](double t) { return o0 * t + (o1 / o2) * std::sin(o2 * t); });
  }
  for (std::size_t k = 0; k < nuclei.size(); ++k) {
    const double wl = nuclei[k].omega_l;
    chain.rotation(0.5 * embed(Axis::z, k + 1, n), [wl](double t) { return wl * t; });
  }
  if (p.kind == ProtocolKind::Sense_AM) {
    const double os = p.require_omega_s();
    chain.rotation(0.5 * embed(Axis::x, 0, n), [os](double t) { return os * t; });
  }
  return chain;
}

SensingRecord sense_spectrum(const ProtocolParams& p, std::span<const Nucleus> nuclei,
                             const SensingOptions& options) {
  const Probe probe = probe_for(p.kind);
  if (nuclei.empty()) throw ConfigError("sensing needs at least one nucleus");
  if (nuclei.size() + 1 > kMaxSpins) throw ConfigError("at most 4 nuclei are supported");
  if (!(options.sample_dt > 0.0) || !(options.total_time > options.sample_dt))
    throw ConfigError("sensing needs 0 < sample_dt < total_time");
  if (options.substeps == 0) throw ConfigError("sensing substeps must be at least one");

  const auto detunings = sensing_detunings(p, nuclei);
  const double nyquist = 0.5 / options.sample_dt;
  for (std::size_t k = 0; k < detunings.size(); ++k) {
    if (std::abs(detunings[k]) / kTwoPi >= nyquist) {
      throw ConfigError("sample_dt " + std::to_string(options.sample_dt) + " us aliases the detuning of nucleus " +
                        std::to_string(k) + " (" + std::to_string(detunings[k] / kTwoPi) + " MHz)");
    }
  }

  const std::size_t n_spins = 1 + nuclei.size();
  const auto n_samples = static_cast<std::size_t>(std::llround(options.total_time / options.sample_dt));
  const double window = options.sample_dt;

  Operator rho_nuclear = initial_nuclear_state(nuclei.size());
  const Eigen::Index dim = static_cast<Eigen::Index>(dimension_for(n_spins));
  StepExponential step(dim);
  Operator h(dim, dim), u_window(dim, dim);

  // effective mode
  std::vector<Operator> couplings_x, couplings_y;
  std::vector<double> strengths;
  // full_drive mode
  std::optional<HamiltonianModel> model;
  std::optional<FrameChain> chain;
  TimeGrid grid;

  if (options.mode == SensingMode::effective) {
    const Operator nv = embed(probe.coupling, 0, n_spins);
    for (std::size_t k = 0; k < nuclei.size(); ++k) {
      couplings_x.push_back(nv * embed(Axis::x, k + 1, n_spins));
      couplings_y.push_back(nv * embed(Axis::y, k + 1, n_spins));
      strengths.push_back(effective_coupling(p, nuclei[k].g));
    }
    grid = {options.substeps, window / static_cast<double>(options.substeps)};
  } else {
    model.emplace(SystemParams{0.0, {nuclei.begin(), nuclei.end()}}, p);
    chain = sensing_frame(p, nuclei);
    const double dt_max = options.dt > 0.0 ? options.dt : model->default_dt();
    check_sampling(dt_max, model->fastest_frequency());
    grid = TimeGrid::covering(window, dt_max);
  }

  Rng rng = make_rng(options.seed, 0, 11);
  SensingRecord rec;
  rec.sample_times.reserve(n_samples);
  rec.series.reserve(n_samples);
  for (std::size_t s = 0; s < n_samples; ++s) {
    const double t0 = static_cast<double>(s) * window;
    u_window.setIdentity();
    for (std::size_t k = 0; k < grid.steps; ++k) {
      const double tm = t0 + (static_cast<double>(k) + 0.5) * grid.dt;
      if (model) {
        model->assemble(tm, {}, h);
      } else {
        h.setZero();
        for (std::size_t j = 0; j < strengths.size(); ++j) {
          const double phase = detunings[j] * tm;
          h += strengths[j] * (std::cos(phase) * couplings_x[j] - std::sin(phase) * couplings_y[j]);
        }
      }
      u_window = step.compute(h, grid.dt) * u_window;
    }

    Operator rho = prepare(probe.state, rho_nuclear);
    if (chain) {
      const Operator s_start = chain->to_outer(t0);
      const Operator s_end = chain->to_outer(t0 + window);
      const Operator total = s_end.adjoint() * u_window * s_start;
      rho = total * rho * total.adjoint();
    } else {
      rho = u_window * rho * u_window.adjoint();
    }

    double value = electron_expectation(probe.measured, rho);
    if (options.shot_noise) {
      const double prob = std::clamp(0.5 * (1.0 + value), 0.0, 1.0);
      std::size_t up = 0;
      for (std::size_t i = 0; i < options.shots; ++i) {
        const double u = static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
        if (u < prob) ++up;
      }
      value = 2.0 * static_cast<double>(up) / static_cast<double>(options.shots) - 1.0;
    }
    rho_nuclear = trace_out_electron(rho);
    rec.sample_times.push_back(t0 + window);
    rec.series.push_back(value);
  }
  rec.spectrum = dft_magnitude(rec.series, window);
  return rec;
}

}  // namespace hhsim
