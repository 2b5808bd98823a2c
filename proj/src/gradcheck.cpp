#include "rover/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "rover/ddpg.hpp"
#include "rover/mlp.hpp"
#include "rover/rng.hpp"
#include "rover/sac.hpp"

namespace rover {

namespace {

double rel_err(double analytic, double fd) {
  return std::abs(analytic - fd) / std::max(1e-4, std::abs(analytic) + std::abs(fd));
}

// Central finite differences over every parameter of `net` against the
// analytic gradient already accumulated in `grads`.
double max_param_rel_err(Mlp& net, const MlpGrads& grads,
                         const std::function<double()>& loss, double h) {
  double worst = 0.0;
  for (size_t l = 0; l < net.layer_count(); ++l) {
    for (std::vector<double>* tensor : {&net.w[l], &net.b[l]}) {
      const std::vector<double>& g =
          tensor == &net.w[l] ? grads.w[l] : grads.b[l];
      for (size_t i = 0; i < tensor->size(); ++i) {
        const double saved = (*tensor)[i];
        (*tensor)[i] = saved + h;
        const double up = loss();
        (*tensor)[i] = saved - h;
        const double down = loss();
        (*tensor)[i] = saved;
        worst = std::max(worst, rel_err(g[i], (up - down) / (2.0 * h)));
      }
    }
  }
  return worst;
}

std::vector<double> random_vec(size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

GradCheckResult check_mlp_backprop(bool inject_fault) {
  Rng rng(42);
  double worst = 0.0;
  for (int arch = 0; arch < 20; ++arch) {
    std::vector<size_t> sizes;
    const size_t depth = 2 + rng.below(3);
    sizes.push_back(1 + rng.below(6));
    for (size_t l = 0; l < depth; ++l) sizes.push_back(1 + rng.below(8));
    Mlp net = make_mlp(sizes, rng);
    const std::vector<double> input = random_vec(net.input_size(), rng);
    const std::vector<double> direction = random_vec(net.output_size(), rng);
    const auto loss = [&] {
      const std::vector<double> out = mlp_forward(net, input);
      double s = 0.0;
      for (size_t i = 0; i < out.size(); ++i) s += direction[i] * out[i];
      return s;
    };
    MlpCache cache;
    mlp_forward(net, input, &cache);
    MlpGrads grads = make_grads(net);
    mlp_backward(net, cache, direction, &grads);
    if (inject_fault && arch == 0) grads.w[0][0] += 1.0;
    worst = std::max(worst, max_param_rel_err(net, grads, loss, 1e-5));
  }
  return {"mlp_backprop", worst, 1e-4, worst < 1e-4};
}

GradCheckResult check_critic_mse() {
  Rng rng(7);
  Mlp critic = make_mlp({5, 8, 8, 1}, rng);
  std::vector<std::vector<double>> inputs;
  std::vector<double> targets;
  for (int i = 0; i < 6; ++i) {
    inputs.push_back(random_vec(5, rng));
    targets.push_back(rng.uniform(-2.0, 2.0));
  }
  MlpGrads grads = make_grads(critic);
  critic_mse_objective(critic, inputs, targets, &grads);
  const auto loss = [&] { return critic_mse_objective(critic, inputs, targets, nullptr); };
  const double worst = max_param_rel_err(critic, grads, loss, 1e-5);
  return {"critic_mse", worst, 1e-4, worst < 1e-4};
}

GradCheckResult check_policy_objective() {
  Rng rng(13);
  const size_t obs_dim = 3, act_dim = 2;
  Mlp policy = make_mlp({obs_dim, 8, 8, 2 * act_dim}, rng);
  Mlp q1 = make_mlp({obs_dim + act_dim, 8, 8, 1}, rng);
  Mlp q2 = make_mlp({obs_dim + act_dim, 8, 8, 1}, rng);
  const double alpha = 0.37;
  std::vector<std::vector<double>> obs_batch, eps_batch;
  for (int i = 0; i < 5; ++i) {
    obs_batch.push_back(random_vec(obs_dim, rng));
    std::vector<double> eps(act_dim);
    for (double& e : eps) e = rng.normal();
    eps_batch.push_back(eps);
  }
  MlpGrads grads = make_grads(policy);
  sac_policy_objective(policy, q1, q2, alpha, obs_batch, eps_batch, &grads);
  const auto loss = [&] {
    return sac_policy_objective(policy, q1, q2, alpha, obs_batch, eps_batch, nullptr);
  };
  const double worst = max_param_rel_err(policy, grads, loss, 1e-5);
  return {"policy_objective", worst, 1e-4, worst < 1e-4};
}

GradCheckResult check_ddpg_policy() {
  Rng rng(29);
  const size_t obs_dim = 3, act_dim = 2;
  Mlp policy = make_mlp({obs_dim, 8, 8, act_dim}, rng);
  Mlp critic = make_mlp({obs_dim + act_dim, 8, 8, 1}, rng);
  std::vector<std::vector<double>> obs_batch;
  for (int i = 0; i < 5; ++i) obs_batch.push_back(random_vec(obs_dim, rng));
  MlpGrads grads = make_grads(policy);
  deterministic_policy_objective(policy, critic, obs_batch, &grads);
  const auto loss = [&] {
    return deterministic_policy_objective(policy, critic, obs_batch, nullptr);
  };
  const double worst = max_param_rel_err(policy, grads, loss, 1e-5);
  return {"deterministic_policy_objective", worst, 1e-4, worst < 1e-4};
}

GradCheckResult check_temperature() {
  Rng rng(61);
  std::vector<double> log_probs(16);
  for (double& lp : log_probs) lp = rng.uniform(-8.0, 2.0);
  const double target_entropy = -4.0;
  double worst = 0.0;
  for (double log_alpha : {-2.0, -0.3, 0.0, 0.8}) {
    double analytic = 0.0;
    alpha_objective(log_alpha, log_probs, target_entropy, &analytic);
    const double h = 1e-6;
    const double up = alpha_objective(log_alpha + h, log_probs, target_entropy, nullptr);
    const double down = alpha_objective(log_alpha - h, log_probs, target_entropy, nullptr);
    worst = std::max(worst, rel_err(analytic, (up - down) / (2.0 * h)));
  }
  return {"temperature_dual", worst, 1e-6, worst < 1e-6};
}

}  // namespace

std::vector<GradCheckResult> run_gradient_checks(bool inject_fault) {
  std::vector<GradCheckResult> results;
  results.push_back(check_mlp_backprop(inject_fault));
  results.push_back(check_critic_mse());
  results.push_back(check_policy_objective());
  results.push_back(check_ddpg_policy());
  results.push_back(check_temperature());
  return results;
}

bool all_passed(const std::vector<GradCheckResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const GradCheckResult& r) { return r.pass; });
}

}  // namespace rover
