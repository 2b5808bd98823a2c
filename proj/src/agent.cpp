#include "rover/agent.hpp"

#include <cmath>

#include "rover/ddpg.hpp"
#include "rover/sac.hpp"
#include "rover/td3.hpp"

namespace rover {

void RlConfig::validate() const {
  if (obs_dim == 0 || act_dim == 0 || hidden == 0)
    throw std::invalid_argument("network dimensions must be positive");
  if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("gamma must be in [0,1]");
  if (tau < 0.0 || tau > 1.0) throw std::invalid_argument("tau must be in [0,1]");
  if (lr <= 0.0) throw std::invalid_argument("learning rate must be positive");
  if (batch_size == 0) throw std::invalid_argument("batch size must be positive");
  if (replay_capacity < batch_size)
    throw std::invalid_argument("replay capacity must be at least one batch");
  if (init_alpha <= 0.0) throw std::invalid_argument("initial temperature must be positive");
  if (explore_noise < 0.0 || policy_noise < 0.0 || noise_clip < 0.0)
    throw std::invalid_argument("noise magnitudes must be nonnegative");
  if (policy_delay == 0) throw std::invalid_argument("policy delay must be positive");
}

std::unique_ptr<Agent> make_agent(const std::string& algo, const RlConfig& cfg, Rng& rng) {
  if (algo == "sac") return std::make_unique<SacAgent>(cfg, rng);
  if (algo == "ddpg") return std::make_unique<DdpgAgent>(cfg, rng);
  if (algo == "td3") return std::make_unique<Td3Agent>(cfg, rng);
  throw UnsupportedAlgorithmError("unsupported algorithm: " + algo);
}

std::vector<double> bellman_targets(const std::vector<const Transition*>& batch,
                                    const std::vector<double>& next_values, double gamma) {
  if (batch.size() != next_values.size())
    throw std::invalid_argument("batch/value size mismatch");
  std::vector<double> y(batch.size());
  for (size_t i = 0; i < batch.size(); ++i) {
    const double mask = batch[i]->done ? 0.0 : 1.0;
    y[i] = batch[i]->reward + gamma * mask * next_values[i];
  }
  return y;
}

}  // namespace rover
