#include "rover/mlp.hpp"

#include <cmath>

namespace rover {

size_t Mlp::param_count() const {
  size_t n = 0;
  for (size_t l = 0; l < w.size(); ++l) n += w[l].size() + b[l].size();
  return n;
}

Mlp make_mlp(const std::vector<size_t>& sizes, Rng& rng, double final_scale) {
  if (sizes.size() < 2) throw DimensionMismatchError("network needs at least one layer");
  for (size_t s : sizes)
    if (s == 0) throw DimensionMismatchError("layer sizes must be positive");

  Mlp net;
  net.sizes = sizes;
  net.w.resize(sizes.size() - 1);
  net.b.resize(sizes.size() - 1);
  for (size_t l = 0; l + 1 < sizes.size(); ++l) {
    const size_t fan_in = sizes[l];
    const size_t fan_out = sizes[l + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    const double scale = (l + 2 == sizes.size()) ? final_scale : 1.0;
    net.w[l].resize(fan_out * fan_in);
    net.b[l].assign(fan_out, 0.0);
    for (double& v : net.w[l]) v = scale * rng.uniform(-bound, bound);
  }
  return net;
}

std::vector<double> mlp_forward(const Mlp& net, const std::vector<double>& input,
                                MlpCache* cache) {
  if (input.size() != net.input_size())
    throw DimensionMismatchError("input size does not match the network");

  if (cache) {
    cache->act.resize(net.layer_count() + 1);
    cache->act[0] = input;
  }
  std::vector<double> cur = input;
  std::vector<double> next;
  for (size_t l = 0; l < net.layer_count(); ++l) {
    const size_t in = net.sizes[l];
    const size_t out = net.sizes[l + 1];
    next.assign(out, 0.0);
    const double* w = net.w[l].data();
    for (size_t o = 0; o < out; ++o) {
      double acc = net.b[l][o];
      const double* row = w + o * in;
      for (size_t i = 0; i < in; ++i) acc += row[i] * cur[i];
      next[o] = acc;
    }
    if (l + 1 < net.layer_count())
      for (double& v : next) v = v > 0.0 ? v : 0.0;
    if (cache) cache->act[l + 1] = next;
    cur.swap(next);
  }
  return cur;
}

void MlpGrads::zero() {
  for (auto& m : w) std::fill(m.begin(), m.end(), 0.0);
  for (auto& v : b) std::fill(v.begin(), v.end(), 0.0);
}

MlpGrads make_grads(const Mlp& net) {
  MlpGrads g;
  g.w.resize(net.layer_count());
  g.b.resize(net.layer_count());
  for (size_t l = 0; l < net.layer_count(); ++l) {
    g.w[l].assign(net.w[l].size(), 0.0);
    g.b[l].assign(net.b[l].size(), 0.0);
  }
  return g;
}

std::vector<double> mlp_backward(const Mlp& net, const MlpCache& cache,
                                 const std::vector<double>& d_output, MlpGrads* grads) {
  if (cache.act.size() != net.layer_count() + 1)
    throw DimensionMismatchError("cache does not match the network");
  if (d_output.size() != net.output_size())
    throw DimensionMismatchError("output gradient size mismatch");

  std::vector<double> delta = d_output;
  std::vector<double> prev;
  for (size_t li = net.layer_count(); li-- > 0;) {
    const size_t in = net.sizes[li];
    const size_t out = net.sizes[li + 1];
    const std::vector<double>& a_in = cache.act[li];

    if (li + 1 < net.layer_count()) {
      // Rectifier mask of this layer's output.
      const std::vector<double>& a_out = cache.act[li + 1];
      for (size_t o = 0; o < out; ++o)
        if (a_out[o] <= 0.0) delta[o] = 0.0;
    }

    if (grads) {
      double* gw = grads->w[li].data();
      for (size_t o = 0; o < out; ++o) {
        const double d = delta[o];
        if (d == 0.0) continue;
        double* row = gw + o * in;
        for (size_t i = 0; i < in; ++i) row[i] += d * a_in[i];
        grads->b[li][o] += d;
      }
    }

    prev.assign(in, 0.0);
    const double* w = net.w[li].data();
    for (size_t o = 0; o < out; ++o) {
      const double d = delta[o];
      if (d == 0.0) continue;
      const double* row = w + o * in;
      for (size_t i = 0; i < in; ++i) prev[i] += d * row[i];
    }
    delta.swap(prev);
  }
  return delta;
}

void scale_grads(MlpGrads& grads, double factor) {
  for (auto& m : grads.w)
    for (double& v : m) v *= factor;
  for (auto& v : grads.b)
    for (double& x : v) x *= factor;
}

}  // namespace rover
