#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "hhsim/frames.hpp"
#include "hhsim/propagator.hpp"
#include "hhsim/spin_algebra.hpp"

using namespace hhsim;

TEST_CASE("empty chain") { CHECK_THROWS_AS(FrameChain().to_outer(0.0), std::logic_error); }

TEST_CASE("basis change stores the adjoint") {
  const Operator b = dressed_rotation(AxisMap::x_to_z);
  FrameChain chain;
  chain.basis_change(b);
  CHECK(max_abs(chain.to_outer(3.0) - b.adjoint()) == 0.0);
}

TEST_CASE("rotation frame matches free evolution") {
  // a state at rest in the frame of H0 = (w/2) sigma_z is the free evolution of the outer state
  const double w = 1.7;
  const Operator half_z = 0.5 * pauli(Axis::z);
  FrameChain chain;
  chain.rotation(half_z, [w](double t) { return w * t; });
  StateVector psi = product_state(std::array{spinor_plus_x()});
  const StateVector inner = psi;
  const double t = 0.9;
  const auto tr = evolve([&](double, Operator& m) { m = w * half_z; }, psi, t, t / 50, w);
  CHECK((chain.to_outer(t) * inner - tr.states.back()).norm() < 1e-12);
}

TEST_CASE("composition order") {
  const Operator b = dressed_rotation(AxisMap::x_to_z);
  const Operator gx = 0.5 * pauli(Axis::x);
  FrameChain chain;
  chain.basis_change(b).rotation(gx, [](double t) { return 2.0 * t; });
  CHECK(chain.size() == 2);
  const Operator expected = b.adjoint() * expm_hermitian(gx, 0.6);
  CHECK(max_abs(chain.to_outer(0.3) - expected) < 1e-14);
  CHECK(unitarity_error(chain.to_outer(0.3)) < 1e-14);
}
