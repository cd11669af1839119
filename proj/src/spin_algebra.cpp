#include "hhsim/spin_algebra.hpp"

#include <cmath>
#include <initializer_list>
#include <string>
#include <vector>

namespace hhsim {

namespace {

const Complex I{0.0, 1.0};

Operator kron(const Operator& a, const Operator& b) {
  Operator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace

SpinConvention parse_convention(std::string_view text) {
  if (text == "half") return {PmNormalization::half};
  if (text == "full") return {PmNormalization::full};
  throw std::invalid_argument("unknown sigma_pm normalization '" + std::string(text) + "'");
}

Operator pauli(Axis axis, SpinConvention convention) {
  Operator m = Operator::Zero(2, 2);
  const double ladder = convention.ladder_element();
  switch (axis) {
    case Axis::x:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case Axis::y:
      m(0, 1) = -I;
      m(1, 0) = I;
      break;
    case Axis::z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    case Axis::plus:
      m(0, 1) = ladder;
      break;
    case Axis::minus:
      m(1, 0) = ladder;
      break;
  }
  return m;
}

Operator identity(std::size_t n_spins) {
  const auto dim = static_cast<Eigen::Index>(dimension_for(n_spins));
  return Operator::Identity(dim, dim);
}

Operator embed(const Operator& single_site, std::size_t site, std::size_t n_spins) {
  if (n_spins == 0 || n_spins > kMaxSpins) {
    throw std::out_of_range("number of spins must be in [1, " + std::to_string(kMaxSpins) + "]");
  }
  if (site >= n_spins) {
    throw std::out_of_range("site " + std::to_string(site) + " out of range for " +
                            std::to_string(n_spins) + " spins");
  }
  Operator out = Operator::Identity(1, 1);
  const Operator eye = Operator::Identity(2, 2);
  for (std::size_t s = 0; s < n_spins; ++s) {
    out = kron(out, s == site ? single_site : eye);
  }
  return out;
}

Operator embed(Axis axis, std::size_t site, std::size_t n_spins, SpinConvention convention) {
  return embed(pauli(axis, convention), site, n_spins);
}

AxisMap parse_axis_map(std::string_view text) {
  if (text == "x->z") return AxisMap::x_to_z;
  if (text == "z->x") return AxisMap::z_to_x;
  throw std::invalid_argument("unknown axis map '" + std::string(text) + "'");
}

Operator dressed_rotation(AxisMap map) {
  // exp(+i pi/4 sigma_y) sends sigma_x -> sigma_z and sigma_z -> -sigma_x.
  const double c = std::sqrt(0.5);
  Operator b(2, 2);
  b << c, c, -c, c;
  switch (map) {
    case AxisMap::x_to_z:
      return b;
    case AxisMap::z_to_x:
      return b.adjoint();
  }
  throw std::invalid_argument("unknown axis map");
}

Operator dressed_rotation(AxisMap map, std::size_t n_spins) {
  return embed(dressed_rotation(map), 0, n_spins);
}

Eigen::Vector2cd spinor_up() { return {1.0, 0.0}; }
Eigen::Vector2cd spinor_down() { return {0.0, 1.0}; }
Eigen::Vector2cd spinor_plus_x() { return Eigen::Vector2cd(1.0, 1.0) * std::sqrt(0.5); }
Eigen::Vector2cd spinor_plus_y() { return Eigen::Vector2cd(1.0, I) * std::sqrt(0.5); }

StateVector product_state(std::span<const Eigen::Vector2cd> spinors) {
  StateVector out = StateVector::Ones(1);
  for (const auto& s : spinors) {
    StateVector next(out.size() * 2);
    for (Eigen::Index i = 0; i < out.size(); ++i) {
      next(2 * i) = out(i) * s(0);
      next(2 * i + 1) = out(i) * s(1);
    }
    out = std::move(next);
  }
  return out;
}

StateVector basis_state(std::initializer_list<bool> spins_up) {
  std::vector<Eigen::Vector2cd> spinors;
  for (bool up : spins_up) spinors.push_back(up ? spinor_up() : spinor_down());
  return product_state(spinors);
}

Complex expectation_complex(const Operator& op, const StateVector& psi) {
  return psi.dot(op * psi);
}

double expectation(const Operator& op, const StateVector& psi) {
  return expectation_complex(op, psi).real();
}

double max_abs(const Operator& op) { return op.cwiseAbs().maxCoeff(); }

double hermiticity_error(const Operator& op) { return max_abs(op - op.adjoint()); }

double unitarity_error(const Operator& op) {
  return max_abs(op.adjoint() * op - Operator::Identity(op.rows(), op.cols()));
}

}  // namespace hhsim
