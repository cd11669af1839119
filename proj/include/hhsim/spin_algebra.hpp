#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string_view>

#include <Eigen/Dense>

namespace hhsim {

using Complex = std::complex<double>;

// Dense operator on the joint space of one electron and N nuclear qubits.
// Site 0 is the electron and is the most significant bit of the basis index;
// spin up (sigma_z = +1) is bit value 0.
using Operator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

inline constexpr std::size_t kMaxSpins = 5;

enum class Axis { x, y, z, plus, minus };

enum class PmNormalization { half, full };

/// Normalization of the ladder operators. `half` is sigma_pm = (sigma_x +- i sigma_y)/2,
/// `full` is sigma_pm = sigma_x +- i sigma_y.
struct SpinConvention {
  PmNormalization pm = PmNormalization::half;

  std::string_view name() const { return pm == PmNormalization::half ? "half" : "full"; }

  // <up| sigma_+ |down> for this convention.
  double ladder_element() const { return pm == PmNormalization::half ? 1.0 : 2.0; }

  // Matrix element of sigma_+ I_- between |down,up> and |up,down>.
  double flip_flop_element() const { return ladder_element() * ladder_element(); }
};

SpinConvention parse_convention(std::string_view text);

Operator pauli(Axis axis, SpinConvention convention = {});

/// Single-site operator tensored with identities on every other site.
/// Throws std::out_of_range when site >= n_spins.
Operator embed(Axis axis, std::size_t site, std::size_t n_spins, SpinConvention convention = {});
Operator embed(const Operator& single_site, std::size_t site, std::size_t n_spins);

Operator identity(std::size_t n_spins);

enum class AxisMap {
  x_to_z,  // x -> z, z -> -x, y -> y
  z_to_x,  // inverse of x_to_z
};

AxisMap parse_axis_map(std::string_view text);

/// Single-qubit unitary B such that B * op * B^dagger relabels the axes per `map`.
Operator dressed_rotation(AxisMap map);

/// B applied to the electron site only.
Operator dressed_rotation(AxisMap map, std::size_t n_spins);

// Product state from per-site Bloch spinors.
StateVector product_state(std::span<const Eigen::Vector2cd> spinors);

// Computational basis state; spins_up[i] is true when site i is |up_z>.
StateVector basis_state(std::initializer_list<bool> spins_up);

Eigen::Vector2cd spinor_up();
Eigen::Vector2cd spinor_down();
Eigen::Vector2cd spinor_plus_x();
Eigen::Vector2cd spinor_plus_y();

double expectation(const Operator& op, const StateVector& psi);
Complex expectation_complex(const Operator& op, const StateVector& psi);

double max_abs(const Operator& op);
double hermiticity_error(const Operator& op);
double unitarity_error(const Operator& op);

inline std::size_t dimension_for(std::size_t n_spins) { return std::size_t{1} << n_spins; }

}  // namespace hhsim
