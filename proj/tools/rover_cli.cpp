// Command-line harness: train / eval / compare / gradcheck over the rover
// simulation and the three learners.

#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "rover/checkpoint.hpp"
#include "rover/config.hpp"
#include "rover/csv.hpp"
#include "rover/gradcheck.hpp"
#include "rover/rollout.hpp"
#include "rover/trainer.hpp"

namespace {

using namespace rover;

struct CliArgs {
  std::string config_path;
  std::string algo, suspension, out, save, load;
  uint64_t steps = 0, seed = 0;
  double height = 0.0;
  bool has_steps = false, has_seed = false, has_height = false;
};

void add_common_flags(CLI::App* cmd, CliArgs& args) {
  cmd->add_option("--config", args.config_path, "Config file of dotted key = value lines");
  cmd->add_option("--algo", args.algo, "Learning algorithm: sac, ddpg, td3");
  cmd->add_option("--suspension", args.suspension, "Suspension mode: active, passive");
  cmd->add_option("--steps", args.steps, "Training steps (train) or episodes (eval)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", args.seed, "Master random seed");
  cmd->add_option("--height", args.height, "Obstacle height in metres (eval/compare)");
  cmd->add_option("--out", args.out, "Output directory");
  cmd->add_option("--save", args.save, "Checkpoint path to write");
  cmd->add_option("--load", args.load, "Checkpoint path to read");
}

RunConfig resolve_config(const CLI::App* cmd, const CliArgs& args, bool steps_are_episodes) {
  RunConfig config;
  if (cmd->count("--config")) config = load_config_file(args.config_path);
  if (cmd->count("--algo")) config.algo = args.algo;
  if (cmd->count("--suspension")) config.suspension = args.suspension;
  if (cmd->count("--steps")) {
    if (steps_are_episodes)
      config.episodes = args.steps;
    else
      config.total_steps = args.steps;
  }
  if (cmd->count("--seed")) config.seed = args.seed;
  if (cmd->count("--height")) config.height = args.height;
  if (cmd->count("--out")) config.out_dir = args.out;
  config.validate();
  return config;
}

std::string out_path(const RunConfig& config, const std::string& name) {
  std::filesystem::create_directories(config.out_dir);
  return (std::filesystem::path(config.out_dir) / name).string();
}

void write_resolved_config(const RunConfig& config) {
  write_file_atomic(out_path(config, "config.resolved"), render_config(config));
}

int cmd_train(const CLI::App* cmd, const CliArgs& args) {
  const RunConfig config = resolve_config(cmd, args, false);
  std::unique_ptr<Agent> agent;
  if (!args.load.empty()) {
    agent = load_checkpoint(args.load, config.rl);
    if (agent->algo() != config.algo)
      throw ConfigError("checkpoint algorithm '" + agent->algo() +
                        "' does not match requested '" + config.algo + "'");
  } else {
    Rng init_rng(mix_seed(config.seed, 100));
    agent = make_agent(config.algo, config.rl, init_rng);
  }

  const SuspensionMode mode =
      config.suspension == "active" ? SuspensionMode::active : SuspensionMode::passive;
  Environment env(config.mechanism, config.physics, config.episode, config.pid, mode);

  TrainOptions options;
  options.total_steps = config.total_steps;
  options.seed = config.seed;
  options.log_period = config.log_period;
  options.on_log = [](const MetricsRow& row) {
    std::printf("step %zu  ep_rew_mean %.2f  ep_len_mean %.1f  ent_coef %.4f\n", row.step,
                row.ep_rew_mean, row.ep_len_mean, row.ent_coef);
    std::fflush(stdout);
  };

  const RunMetrics metrics = train_agent(*agent, env, options);

  CsvTable table({"step", "ep_rew_mean", "ep_len_mean", "actor_loss", "critic_loss", "ent_coef"});
  for (const MetricsRow& row : metrics.rows)
    table.add_row({static_cast<double>(row.step), row.ep_rew_mean, row.ep_len_mean,
                   row.actor_loss, row.critic_loss, row.ent_coef});
  table.write_file(out_path(config, "metrics.csv"));

  const std::string ckpt = args.save.empty() ? out_path(config, "checkpoint.bin") : args.save;
  save_checkpoint(*agent, ckpt);
  write_resolved_config(config);

  std::printf("trained %llu steps, %zu episodes; wrote %s\n",
              static_cast<unsigned long long>(config.total_steps),
              metrics.episode_returns.size(), ckpt.c_str());
  return 0;
}

int cmd_eval(const CLI::App* cmd, const CliArgs& args) {
  const RunConfig config = resolve_config(cmd, args, true);
  if (args.load.empty()) throw ConfigError("eval requires --load <checkpoint>");
  std::unique_ptr<Agent> agent = load_checkpoint(args.load, config.rl);

  const EvalSummary summary = run_evaluation(*agent, config);
  for (size_t i = 0; i < summary.episodes.size(); ++i) {
    CsvTable table({"time", "pitch", "velocity", "q3", "q4", "reward"});
    for (const std::array<double, 6>& row : summary.episodes[i].trace)
      table.add_row({row[0], row[1], row[2], row[3], row[4], row[5]});
    table.write_file(out_path(config, "trace_" + std::to_string(i) + ".csv"));
  }
  write_resolved_config(config);

  std::printf("episodes %zu  success_rate %.3f  peak_pitch %.2f deg  mean_velocity %.3f m/s\n",
              summary.episodes.size(), summary.success_rate, summary.peak_pitch_deg,
              summary.mean_velocity);
  return 0;
}

int cmd_compare(const CLI::App* cmd, const CliArgs& args) {
  const RunConfig config = resolve_config(cmd, args, true);
  if (args.load.empty()) throw ConfigError("compare requires --load <checkpoint>");
  std::unique_ptr<Agent> agent = load_checkpoint(args.load, config.rl);

  const CompareTrace trace = run_comparison(*agent, config, config.seed);
  CsvTable table({"time", "pitch_active", "pitch_passive", "vel_active", "vel_passive"});
  for (size_t i = 0; i < trace.time.size(); ++i)
    table.add_row({trace.time[i], trace.pitch_active[i], trace.pitch_passive[i],
                   trace.vel_active[i], trace.vel_passive[i]});
  table.write_file(out_path(config, "compare.csv"));
  write_resolved_config(config);

  std::printf("peak_pitch_active %.2f deg  peak_pitch_passive %.2f deg  reduction %.2f deg\n",
              trace.peak_pitch_active_deg, trace.peak_pitch_passive_deg,
              trace.peak_pitch_passive_deg - trace.peak_pitch_active_deg);
  std::printf("mean_vel_active %.3f m/s  passive_rebound %s\n", trace.mean_vel_active,
              trace.passive_rebound ? "yes" : "no");
  return 0;
}

int cmd_gradcheck(bool inject_fault) {
  const std::vector<GradCheckResult> results = run_gradient_checks(inject_fault);
  for (const GradCheckResult& r : results)
    std::printf("%-32s max_rel_err %.3e  tol %.0e  %s\n", r.name.c_str(), r.max_rel_err,
                r.tolerance, r.pass ? "ok" : "FAIL");
  return all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planar rover suspension testbed: simulation, learners, harness"};
  app.require_subcommand(1);

  CliArgs train_args, eval_args, compare_args;
  bool inject_fault = false;

  CLI::App* train = app.add_subcommand("train", "Train a policy and write metrics + checkpoint");
  add_common_flags(train, train_args);
  CLI::App* eval = app.add_subcommand("eval", "Evaluate a checkpoint, write per-episode traces");
  add_common_flags(eval, eval_args);
  CLI::App* compare =
      app.add_subcommand("compare", "Paired active/passive rollouts from one checkpoint");
  add_common_flags(compare, compare_args);
  CLI::App* gradcheck = app.add_subcommand("gradcheck", "Finite-difference gradient audit");
  gradcheck->add_flag("--inject-fault", inject_fault,
                      "Corrupt one gradient to prove the audit can fail");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) return cmd_train(train, train_args);
    if (eval->parsed()) return cmd_eval(eval, eval_args);
    if (compare->parsed()) return cmd_compare(compare, compare_args);
    if (gradcheck->parsed()) return cmd_gradcheck(inject_fault);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
