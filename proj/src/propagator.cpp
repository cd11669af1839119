#include "hhsim/propagator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "hhsim/common.hpp"

namespace hhsim {

StepExponential::StepExponential(Eigen::Index dim)
    : u_(dim, dim), solver_(dim), phases_(dim), scratch_(dim) {}

const Operator& StepExponential::compute(const Operator& h, double dt) {
  const Complex I{0.0, 1.0};
  if (h.rows() == 2) {
    // H = a0 + a . sigma
    const double a0 = 0.5 * (h(0, 0).real() + h(1, 1).real());
    const double az = 0.5 * (h(0, 0).real() - h(1, 1).real());
    const double ax = h(1, 0).real();
    const double ay = h(1, 0).imag();
    const double norm = std::sqrt(ax * ax + ay * ay + az * az);
    const double c = std::cos(norm * dt);
    const double s = norm > 0.0 ? std::sin(norm * dt) / norm : dt;
    const Complex global = std::exp(-I * (a0 * dt));
    u_.resize(2, 2);
    u_(0, 0) = global * Complex{c, -s * az};
    u_(1, 1) = global * Complex{c, s * az};
    u_(0, 1) = global * (-I * s * Complex{ax, -ay});
    u_(1, 0) = global * (-I * s * Complex{ax, ay});
    return u_;
  }
  solver_.compute(h, Eigen::ComputeEigenvectors);
  if (solver_.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  const auto& values = solver_.eigenvalues();
  for (Eigen::Index k = 0; k < values.size(); ++k) phases_(k) = std::exp(-I * (values(k) * dt));
  const auto& v = solver_.eigenvectors();
  u_.noalias() = v * phases_.asDiagonal() * v.adjoint();
  return u_;
}

void StepExponential::apply(const Operator& h, double dt, StateVector& psi) {
  const Operator& u = compute(h, dt);
  scratch_.noalias() = u * psi;
  psi.swap(scratch_);
}

Operator expm_hermitian(const Operator& h, double dt) {
  StepExponential step(h.rows());
  return step.compute(h, dt);
}

TimeGrid TimeGrid::covering(double t_final, double dt_max) {
  if (!(t_final >= 0.0)) throw ConfigError("final time must be non-negative");
  if (!(dt_max > 0.0)) throw ConfigError("time step must be positive");
  if (t_final == 0.0) return {0, dt_max};
  const auto steps = static_cast<std::size_t>(std::ceil(t_final / dt_max - 1e-9));
  return {std::max<std::size_t>(steps, 1), t_final / static_cast<double>(std::max<std::size_t>(steps, 1))};
}

void check_sampling(double dt, double fastest_frequency) {
  if (!(fastest_frequency > 0.0)) return;
  const double limit = kTwoPi / fastest_frequency / 20.0;
  if (dt > limit * (1.0 + 1e-12)) {
    throw ConfigError("time step " + std::to_string(dt) + " us exceeds the sampling limit " +
                      std::to_string(limit) + " us");
  }
}

void propagate(const HamiltonianFn& hamiltonian, StateVector& psi, const TimeGrid& grid,
               const StepObserver& observer) {
  StepExponential step(psi.size());
  Operator h(psi.size(), psi.size());
  if (observer) observer(0, 0.0, psi);
  for (std::size_t k = 0; k < grid.steps; ++k) {
    const double t0 = static_cast<double>(k) * grid.dt;
    hamiltonian(t0 + 0.5 * grid.dt, h);
    step.apply(h, grid.dt, psi);
    if (observer) observer(k + 1, static_cast<double>(k + 1) * grid.dt, psi);
  }
}

namespace {

void record_states(const HamiltonianFn& hamiltonian, StateVector psi, const TimeGrid& grid,
                   std::size_t record_every, Trajectory& out) {
  if (record_every == 0) throw ConfigError("record interval must be at least one step");
  propagate(hamiltonian, psi, grid, [&](std::size_t k, double t, const StateVector& state) {
    if (k % record_every == 0 || k == grid.steps) {
      out.times.push_back(t);
      out.states.push_back(state);
    }
  });
}

}  // namespace

Trajectory evolve(const HamiltonianFn& hamiltonian, const StateVector& psi0, double t_final, double dt,
                  double fastest_frequency, std::size_t record_every) {
  check_sampling(dt, fastest_frequency);
  Trajectory out;
  record_states(hamiltonian, psi0, TimeGrid::covering(t_final, dt), record_every, out);
  return out;
}

Trajectory evolve(const HamiltonianModel& model, const StateVector& psi0, double t_final,
                  const EvolveOptions& options) {
  if (psi0.size() != model.dim()) throw ConfigError("initial state dimension does not match the model");
  const double dt = options.dt > 0.0 ? options.dt : model.default_dt();
  check_sampling(dt, model.fastest_frequency());
  const TimeGrid grid = TimeGrid::covering(t_final, dt);

  Trajectory out;
  out.realization_id = options.realization;
  if (options.noise && options.noise->enabled()) {
    NoiseSource source(*options.noise, options.master_seed, options.realization);
    HamiltonianFn h = [&](double t, Operator& m) {
      model.assemble(t, source.current(), m);
      source.advance(grid.dt);
    };
    record_states(h, psi0, grid, options.record_every, out);
  } else {
    HamiltonianFn h = [&](double t, Operator& m) { model.assemble(t, {}, m); };
    record_states(h, psi0, grid, options.record_every, out);
  }
  return out;
}

int hardware_threads() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t count = std::min(workers, n);
  pool.reserve(count);
  for (std::size_t w = 0; w < count; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

EnsembleResult run_ensemble(const HamiltonianModel& model, const NoiseConfig& noise, const StateVector& psi0,
                            double t_final, std::span<const Observable> observables,
                            const EnsembleOptions& options) {
  if (options.n_realizations == 0) throw ConfigError("ensemble needs at least one realization");
  if (options.record_every == 0) throw ConfigError("record interval must be at least one step");
  if (psi0.size() != model.dim()) throw ConfigError("initial state dimension does not match the model");
  const double dt_max = options.dt > 0.0 ? options.dt : model.default_dt();
  check_sampling(dt_max, model.fastest_frequency());
  const TimeGrid grid = TimeGrid::covering(t_final, dt_max);

  EnsembleResult result;
  for (std::size_t k = 0; k <= grid.steps; ++k)
    if (k % options.record_every == 0 || k == grid.steps) result.times.push_back(static_cast<double>(k) * grid.dt);
  const std::size_t n_obs = observables.size();
  const std::size_t n_times = result.times.size();
  result.n_realizations = options.n_realizations;

  // Noise-free ensembles are a single deterministic trajectory.
  const bool stochastic = noise.enabled();
  const std::size_t distinct = stochastic ? options.n_realizations : 1;

  auto run_one = [&](std::size_t realization, std::vector<double>& values) {
    values.assign(n_obs * n_times, 0.0);
    StateVector psi = psi0;
    std::size_t slot = 0;
    auto observe = [&](std::size_t k, double t, const StateVector& state) {
      if (k % options.record_every != 0 && k != grid.steps) return;
      for (std::size_t j = 0; j < n_obs; ++j) values[j * n_times + slot] = observables[j](t, state);
      ++slot;
    };
    if (stochastic) {
      NoiseSource source(noise, options.master_seed, realization);
      propagate(
          [&](double t, Operator& m) {
            model.assemble(t, source.current(), m);
            source.advance(grid.dt);
          },
          psi, grid, observe);
    } else {
      propagate([&](double t, Operator& m) { model.assemble(t, {}, m); }, psi, grid, observe);
    }
  };

  // Welford accumulation in realization order.
  std::vector<double> mean(n_obs * n_times, 0.0), m2(n_obs * n_times, 0.0);
  const std::size_t block = std::max<std::size_t>(64, 4 * static_cast<std::size_t>(std::max(1, options.threads)));
  std::vector<std::vector<double>> buffers(std::min(block, distinct));
  std::size_t seen = 0;
  for (std::size_t start = 0; start < distinct; start += block) {
    const std::size_t count = std::min(block, distinct - start);
    parallel_for(count, options.threads, [&](std::size_t i) { run_one(start + i, buffers[i]); });
    for (std::size_t i = 0; i < count; ++i) {
      ++seen;
      const auto& v = buffers[i];
      for (std::size_t q = 0; q < v.size(); ++q) {
        const double d = v[q] - mean[q];
        mean[q] += d / static_cast<double>(seen);
        m2[q] += d * (v[q] - mean[q]);
      }
    }
  }

  result.mean.assign(n_obs, std::vector<double>(n_times));
  result.std_error.assign(n_obs, std::vector<double>(n_times, 0.0));
  for (std::size_t j = 0; j < n_obs; ++j) {
    for (std::size_t k = 0; k < n_times; ++k) {
      const std::size_t q = j * n_times + k;
      result.mean[j][k] = mean[q];
      if (seen > 1) {
        const double var = m2[q] / static_cast<double>(seen - 1);
        result.std_error[j][k] = std::sqrt(var / static_cast<double>(seen));
      }
    }
  }
  return result;
}

}  // namespace hhsim
