#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hhsim/hamiltonian.hpp"
#include "hhsim/noise.hpp"
#include "hhsim/spin_algebra.hpp"

namespace hhsim {

/// exp(-i H dt) for Hermitian H. 2x2 matrices use the closed form, larger ones an
/// eigendecomposition with workspace reused across calls.
class StepExponential {
 public:
  explicit StepExponential(Eigen::Index dim);

  const Operator& compute(const Operator& h, double dt);
  // psi <- exp(-i H dt) psi
  void apply(const Operator& h, double dt, StateVector& psi);

 private:
  Operator u_;
  Eigen::SelfAdjointEigenSolver<Operator> solver_;
  Eigen::VectorXcd phases_;
  StateVector scratch_;
};

Operator expm_hermitian(const Operator& h, double dt);

/// Uniform grid of `steps` steps of length `dt` covering [0, t_final].
struct TimeGrid {
  std::size_t steps = 0;
  double dt = 0.0;

  static TimeGrid covering(double t_final, double dt_max);
};

// Refuses dt > (1/20) of the fastest period.
void check_sampling(double dt, double fastest_frequency);

// Called once per step, in step order, with the midpoint time of the step.
using HamiltonianFn = std::function<void(double t_mid, Operator& out)>;
// Called for the initial state (step 0) and after every completed step.
using StepObserver = std::function<void(std::size_t step, double t, const StateVector& psi)>;

void propagate(const HamiltonianFn& hamiltonian, StateVector& psi, const TimeGrid& grid,
               const StepObserver& observer = {});

struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
  std::uint64_t realization_id = 0;
};

struct EvolveOptions {
  double dt = 0.0;  // 0 selects the model default
  std::size_t record_every = 1;
  const NoiseConfig* noise = nullptr;
  std::uint64_t master_seed = 0;
  std::uint64_t realization = 0;
};

Trajectory evolve(const HamiltonianFn& hamiltonian, const StateVector& psi0, double t_final, double dt,
                  double fastest_frequency, std::size_t record_every = 1);
Trajectory evolve(const HamiltonianModel& model, const StateVector& psi0, double t_final,
                  const EvolveOptions& options = {});

// Evaluates an observable on one state; `t` is the time of the state.
using Observable = std::function<double(double t, const StateVector& psi)>;

struct EnsembleOptions {
  std::size_t n_realizations = 1;
  std::uint64_t master_seed = 1;
  double dt = 0.0;
  std::size_t record_every = 1;
  int threads = 1;
};

struct EnsembleResult {
  std::vector<double> times;
  // mean[j][k], std_error[j][k] for observable j at times[k]
  std::vector<std::vector<double>> mean;
  std::vector<std::vector<double>> std_error;
  std::size_t n_realizations = 0;
};

/// Mean and standard error of each observable over independent noise realizations.
/// Realization i uses noise streams derived from (master_seed, i); results are reduced
/// in realization order, so the output does not depend on `threads`.
EnsembleResult run_ensemble(const HamiltonianModel& model, const NoiseConfig& noise, const StateVector& psi0,
                            double t_final, std::span<const Observable> observables,
                            const EnsembleOptions& options);

// Runs fn(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

int hardware_threads();

}  // namespace hhsim
