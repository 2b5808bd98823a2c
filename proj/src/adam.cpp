#include "rover/adam.hpp"

#include <cmath>

namespace rover {

namespace {

void update_tensor(std::vector<double>& value, const std::vector<double>& grad,
                   AdamTensor& state, const AdamParams& p, double bc1, double bc2) {
  for (size_t i = 0; i < value.size(); ++i) {
    const double g = grad[i];
    if (!std::isfinite(g)) throw NonFiniteGradientError("non-finite gradient entry");
    state.m[i] = p.beta1 * state.m[i] + (1.0 - p.beta1) * g;
    state.v[i] = p.beta2 * state.v[i] + (1.0 - p.beta2) * g * g;
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    value[i] -= p.lr * mhat / (std::sqrt(vhat) + p.eps);
  }
}

}  // namespace

AdamState make_adam(const Mlp& net, const AdamParams& params) {
  AdamState s;
  s.params = params;
  s.w.resize(net.layer_count());
  s.b.resize(net.layer_count());
  for (size_t l = 0; l < net.layer_count(); ++l) {
    s.w[l].m.assign(net.w[l].size(), 0.0);
    s.w[l].v.assign(net.w[l].size(), 0.0);
    s.b[l].m.assign(net.b[l].size(), 0.0);
    s.b[l].v.assign(net.b[l].size(), 0.0);
  }
  return s;
}

void adam_step(Mlp& net, const MlpGrads& grads, AdamState& state) {
  if (grads.w.size() != net.layer_count())
    throw DimensionMismatchError("gradient/network layer mismatch");
  ++state.t;
  const double bc1 = 1.0 - std::pow(state.params.beta1, state.t);
  const double bc2 = 1.0 - std::pow(state.params.beta2, state.t);
  for (size_t l = 0; l < net.layer_count(); ++l) {
    update_tensor(net.w[l], grads.w[l], state.w[l], state.params, bc1, bc2);
    update_tensor(net.b[l], grads.b[l], state.b[l], state.params, bc1, bc2);
  }
}

void adam_scalar_step(double& value, double grad, AdamScalar& state) {
  if (!std::isfinite(grad)) throw NonFiniteGradientError("non-finite scalar gradient");
  ++state.t;
  const double bc1 = 1.0 - std::pow(state.params.beta1, state.t);
  const double bc2 = 1.0 - std::pow(state.params.beta2, state.t);
  state.m = state.params.beta1 * state.m + (1.0 - state.params.beta1) * grad;
  state.v = state.params.beta2 * state.v + (1.0 - state.params.beta2) * grad * grad;
  const double mhat = state.m / bc1;
  const double vhat = state.v / bc2;
  value -= state.params.lr * mhat / (std::sqrt(vhat) + state.params.eps);
}

}  // namespace rover
