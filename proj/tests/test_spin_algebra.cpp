#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "hhsim/spin_algebra.hpp"

using namespace hhsim;

namespace {
const Complex I{0.0, 1.0};
}

TEST_CASE("embed sigma_z on the electron of two spins") {
  Operator expected = Operator::Zero(4, 4);
  expected.diagonal() << 1.0, 1.0, -1.0, -1.0;
  CHECK(max_abs(embed(Axis::z, 0, 2) - expected) == 0.0);
}

TEST_CASE("pauli involution and commutator") {
  const Operator x1 = embed(Axis::x, 1, 2);
  CHECK(max_abs(x1 * x1 - identity(2)) == 0.0);
  const Operator x = embed(Axis::x, 0, 1), y = embed(Axis::y, 0, 1), z = embed(Axis::z, 0, 1);
  CHECK(max_abs(x * y - y * x - 2.0 * I * z) < 1e-15);
}

TEST_CASE("distinct sites commute") {
  for (Axis a : {Axis::x, Axis::y, Axis::z, Axis::plus, Axis::minus})
    for (Axis b : {Axis::x, Axis::y, Axis::z, Axis::plus, Axis::minus}) {
      const Operator p = embed(a, 0, 2), q = embed(b, 1, 2);
      CHECK(max_abs(p * q - q * p) < 1e-14);
    }
}

TEST_CASE("ladder operators follow the convention") {
  const SpinConvention half{PmNormalization::half}, full{PmNormalization::full};
  const Operator x = embed(Axis::x, 1, 3);
  CHECK(max_abs(embed(Axis::plus, 1, 3, half) + embed(Axis::minus, 1, 3, half) - x) == 0.0);
  CHECK(max_abs(embed(Axis::plus, 1, 3, full) + embed(Axis::minus, 1, 3, full) - 2.0 * x) == 0.0);
  // full: sigma_+ = sigma_x + i sigma_y
  CHECK(max_abs(pauli(Axis::plus, full) - (pauli(Axis::x) + I * pauli(Axis::y))) < 1e-15);
  CHECK(half.flip_flop_element() == 1.0);
  CHECK(full.flip_flop_element() == 4.0);
  CHECK(parse_convention("full").pm == PmNormalization::full);
  CHECK_THROWS_AS(parse_convention("quarter"), std::invalid_argument);
}

TEST_CASE("embed rejects bad sites") {
  CHECK_THROWS_AS(embed(Axis::x, 2, 2), std::out_of_range);
  CHECK_THROWS_AS(embed(Axis::x, 0, 0), std::out_of_range);
  CHECK_THROWS_AS(embed(Axis::x, 0, kMaxSpins + 1), std::out_of_range);
}

TEST_CASE("dressed rotation relabels axes") {
  const Operator b = dressed_rotation(AxisMap::x_to_z);
  const Operator x = pauli(Axis::x), y = pauli(Axis::y), z = pauli(Axis::z);
  CHECK(max_abs(b * x * b.adjoint() - z) < 1e-12);
  CHECK(max_abs(b * z * b.adjoint() + x) < 1e-12);
  CHECK(max_abs(b * y * b.adjoint() - y) < 1e-12);
  CHECK(unitarity_error(b) < 1e-15);
  const Operator inv = dressed_rotation(parse_axis_map("z->x"));
  CHECK(max_abs(inv * b - Operator::Identity(2, 2)) < 1e-15);
  CHECK_THROWS_AS(parse_axis_map("x->y"), std::invalid_argument);
  const Operator b2 = dressed_rotation(AxisMap::x_to_z, 2);
  CHECK(max_abs(b2 * embed(Axis::x, 0, 2) * b2.adjoint() - embed(Axis::z, 0, 2)) < 1e-12);
}

TEST_CASE("generated terms are hermitian") {
  for (std::size_t n = 1; n <= 4; ++n)
    for (std::size_t s = 0; s < n; ++s) {
      CHECK(hermiticity_error(embed(Axis::x, s, n)) < 1e-12);
      CHECK(hermiticity_error(embed(Axis::y, s, n)) < 1e-12);
      if (n > 1) CHECK(hermiticity_error(embed(Axis::z, s, n) * embed(Axis::x, (s + 1) % n, n)) < 1e-12);
    }
}

TEST_CASE("product and basis states") {
  const StateVector du = basis_state({false, true});
  CHECK(du.size() == 4);
  CHECK(std::abs(du(2) - 1.0) == 0.0);  // index 0b10: electron down, nucleus up
  const Eigen::Vector2cd s[] = {spinor_plus_x(), spinor_plus_y()};
  const StateVector psi = product_state(s);
  CHECK(std::abs(psi.norm() - 1.0) < 1e-15);
  CHECK(expectation(embed(Axis::x, 0, 2), psi) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(expectation(embed(Axis::y, 1, 2), psi) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(expectation(embed(Axis::z, 0, 2), psi)) < 1e-15);
}
