#pragma once

#include <stdexcept>
#include <vector>

#include "rover/rng.hpp"

namespace rover {

struct DimensionMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fully connected network with rectifier hidden layers and an identity
// output layer.  Weights are row-major (out x in).
struct Mlp {
  std::vector<size_t> sizes;               // e.g. {8, 64, 64, 1}
  std::vector<std::vector<double>> w;      // one matrix per layer
  std::vector<std::vector<double>> b;      // one bias vector per layer

  size_t input_size() const { return sizes.front(); }
  size_t output_size() const { return sizes.back(); }
  size_t layer_count() const { return w.size(); }
  size_t param_count() const;
};

// Fan-in scaled uniform initialization; the final layer is additionally
// multiplied by final_scale (small for policy heads).
Mlp make_mlp(const std::vector<size_t>& sizes, Rng& rng, double final_scale = 1.0);

// Post-activation values per layer, kept for the backward pass.
struct MlpCache {
  std::vector<std::vector<double>> act;  // act[0] = input, act.back() = output
};

std::vector<double> mlp_forward(const Mlp& net, const std::vector<double>& input,
                                MlpCache* cache = nullptr);

// Parameter gradients plus the gradient with respect to the input.
struct MlpGrads {
  std::vector<std::vector<double>> w;
  std::vector<std::vector<double>> b;

  void zero();
};

MlpGrads make_grads(const Mlp& net);

// Reverse-mode pass.  Accumulates parameter gradients into `grads` (callers
// zero them between batches) and returns d(loss)/d(input).  `grads` may be
// null when only the input gradient is needed.
std::vector<double> mlp_backward(const Mlp& net, const MlpCache& cache,
                                 const std::vector<double>& d_output,
                                 MlpGrads* grads);

void scale_grads(MlpGrads& grads, double factor);

}  // namespace rover
