#pragma once

#include <stdexcept>
#include <vector>

#include "rover/mlp.hpp"

namespace rover {

struct NonFiniteGradientError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Moment-adaptive first-order optimizer with bias correction.
struct AdamParams {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// State for one flat parameter tensor.
struct AdamTensor {
  std::vector<double> m;
  std::vector<double> v;
};

// Optimizer state covering every tensor of one network.
struct AdamState {
  AdamParams params;
  std::vector<AdamTensor> w;
  std::vector<AdamTensor> b;
  long long t = 0;
};

AdamState make_adam(const Mlp& net, const AdamParams& params);

// One update of the network from accumulated gradients.  Throws
// NonFiniteGradientError if any gradient entry is NaN or infinite.
void adam_step(Mlp& net, const MlpGrads& grads, AdamState& state);

// Scalar variant (used for the entropy temperature).
struct AdamScalar {
  AdamParams params;
  double m = 0.0;
  double v = 0.0;
  long long t = 0;
};

void adam_scalar_step(double& value, double grad, AdamScalar& state);

}  // namespace rover
