#include "hhsim/frames.hpp"

#include <stdexcept>

#include "hhsim/propagator.hpp"

namespace hhsim {

FrameChain& FrameChain::basis_change(const Operator& b) {
  steps_.push_back({b.adjoint(), {}, {}});
  return *this;
}

FrameChain& FrameChain::rotation(const Operator& generator, std::function<double(double)> angle) {
  steps_.push_back({{}, generator, std::move(angle)});
  return *this;
}

Operator FrameChain::to_outer(double t) const {
  if (steps_.empty()) throw std::logic_error("empty frame chain");
  Operator out;
  for (const auto& step : steps_) {
    Operator s = step.angle ? expm_hermitian(step.generator, step.angle(t)) : step.fixed;
    out = out.size() == 0 ? s : Operator(out * s);
  }
  return out;
}

}  // namespace hhsim
