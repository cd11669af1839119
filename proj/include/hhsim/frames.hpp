#pragma once

#include <functional>
#include <vector>

#include "hhsim/spin_algebra.hpp"

namespace hhsim {

/// A composition of time-dependent basis changes from an inner frame to an outer one:
/// psi_outer = S_1(t) S_2(t) ... S_n(t) psi_inner.
class FrameChain {
 public:
  // Step S = B^dagger, for operators transformed as B H B^dagger.
  FrameChain& basis_change(const Operator& b);
  // Step S = exp(-i angle(t) G), the interaction picture of H0 = angle'(t) G.
  FrameChain& rotation(const Operator& generator, std::function<double(double)> angle);

  Operator to_outer(double t) const;
  std::size_t size() const { return steps_.size(); }

 private:
  struct Step {
    Operator fixed;
    Operator generator;
    std::function<double(double)> angle;
  };
  std::vector<Step> steps_;
};

}  // namespace hhsim
