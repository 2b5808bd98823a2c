#include "rover/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

namespace rover {

namespace {

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || !std::isfinite(v))
    throw ConfigError("malformed number: '" + s + "'");
  return v;
}

uint64_t parse_u64(const std::string& s) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0' || s.find('-') != std::string::npos)
    throw ConfigError("malformed integer: '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw ConfigError("malformed boolean: '" + s + "' (expected true/false)");
}

std::pair<double, double> parse_pair(const std::string& s) {
  const size_t comma = s.find(',');
  if (comma == std::string::npos) throw ConfigError("expected 'low,high' pair: '" + s + "'");
  return {parse_double(s.substr(0, comma)), parse_double(s.substr(comma + 1))};
}

std::string trim(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

struct Entry {
  const char* key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

Entry num(const char* key, double RunConfig::* field) {
  return {key, [field](RunConfig& c, const std::string& v) { c.*field = parse_double(v); },
          [field](const RunConfig& c) { return format_roundtrip(c.*field); }};
}

template <typename Sub>
Entry num(const char* key, Sub RunConfig::* sub, double Sub::* field) {
  return {key,
          [sub, field](RunConfig& c, const std::string& v) { c.*sub.*field = parse_double(v); },
          [sub, field](const RunConfig& c) { return format_roundtrip(c.*sub.*field); }};
}

template <typename Sub>
Entry uint(const char* key, Sub RunConfig::* sub, size_t Sub::* field) {
  return {key,
          [sub, field](RunConfig& c, const std::string& v) {
            c.*sub.*field = static_cast<size_t>(parse_u64(v));
          },
          [sub, field](const RunConfig& c) { return std::to_string(c.*sub.*field); }};
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = [] {
    std::vector<Entry> t;
    t.push_back({"run.algo", [](RunConfig& c, const std::string& v) { c.algo = v; },
                 [](const RunConfig& c) { return c.algo; }});
    t.push_back({"run.suspension", [](RunConfig& c, const std::string& v) { c.suspension = v; },
                 [](const RunConfig& c) { return c.suspension; }});
    t.push_back({"run.steps",
                 [](RunConfig& c, const std::string& v) { c.total_steps = parse_u64(v); },
                 [](const RunConfig& c) { return std::to_string(c.total_steps); }});
    t.push_back({"run.seed", [](RunConfig& c, const std::string& v) { c.seed = parse_u64(v); },
                 [](const RunConfig& c) { return std::to_string(c.seed); }});
    t.push_back({"run.out", [](RunConfig& c, const std::string& v) { c.out_dir = v; },
                 [](const RunConfig& c) { return c.out_dir; }});
    t.push_back({"run.log_period",
                 [](RunConfig& c, const std::string& v) { c.log_period = parse_u64(v); },
                 [](const RunConfig& c) { return std::to_string(c.log_period); }});
    t.push_back(num("run.height", &RunConfig::height));
    t.push_back({"run.episodes",
                 [](RunConfig& c, const std::string& v) { c.episodes = parse_u64(v); },
                 [](const RunConfig& c) { return std::to_string(c.episodes); }});

    t.push_back({"env.height_range",
                 [](RunConfig& c, const std::string& v) {
                   const auto [lo, hi] = parse_pair(v);
                   c.episode.height_min = lo;
                   c.episode.height_max = hi;
                 },
                 [](const RunConfig& c) {
                   return format_roundtrip(c.episode.height_min) + "," +
                          format_roundtrip(c.episode.height_max);
                 }});
    t.push_back(num("env.threshold_distance", &RunConfig::episode,
                    &EpisodeConfig::threshold_distance));
    t.push_back(num("env.control_interval", &RunConfig::episode,
                    &EpisodeConfig::control_interval));
    t.push_back(num("env.crossing_margin", &RunConfig::episode, &EpisodeConfig::crossing_margin));
    t.push_back({"env.disturbance.enabled",
                 [](RunConfig& c, const std::string& v) {
                   c.episode.disturbance_enabled = parse_bool(v);
                 },
                 [](const RunConfig& c) {
                   return c.episode.disturbance_enabled ? "true" : "false";
                 }});
    t.push_back(num("env.disturbance.amplitude", &RunConfig::episode,
                    &EpisodeConfig::disturbance_amplitude));

    t.push_back(num("pid.kp", &RunConfig::pid, &PidGains::kp));
    t.push_back(num("pid.ki", &RunConfig::pid, &PidGains::ki));
    t.push_back(num("pid.kd", &RunConfig::pid, &PidGains::kd));
    t.push_back(num("pid.torque_limit", &RunConfig::pid, &PidGains::torque_limit));
    t.push_back(num("pid.integral_limit", &RunConfig::pid, &PidGains::integral_limit));

    t.push_back(num("physics.dt", &RunConfig::physics, &BodyParams::dt));
    t.push_back(num("physics.gravity", &RunConfig::physics, &BodyParams::gravity));
    t.push_back(num("physics.chassis_mass", &RunConfig::physics, &BodyParams::chassis_mass));
    t.push_back(
        num("physics.chassis_inertia", &RunConfig::physics, &BodyParams::chassis_inertia));
    t.push_back(
        num("physics.control_link_mass", &RunConfig::physics, &BodyParams::control_link_mass));
    t.push_back(num("physics.bogie_mass", &RunConfig::physics, &BodyParams::bogie_mass));
    t.push_back(num("physics.wheel_mass", &RunConfig::physics, &BodyParams::wheel_mass));
    t.push_back(num("physics.joint_rotor_inertia", &RunConfig::physics,
                    &BodyParams::joint_rotor_inertia));
    t.push_back(num("physics.joint_damping", &RunConfig::physics, &BodyParams::joint_damping));
    t.push_back(
        num("physics.contact_stiffness", &RunConfig::physics, &BodyParams::contact_stiffness));
    t.push_back(
        num("physics.contact_damping", &RunConfig::physics, &BodyParams::contact_damping));
    t.push_back(num("physics.friction_coeff", &RunConfig::physics, &BodyParams::friction_coeff));
    t.push_back(num("physics.slip_ref", &RunConfig::physics, &BodyParams::slip_ref));
    t.push_back(num("physics.drive_speed", &RunConfig::physics, &BodyParams::drive_speed));
    t.push_back(num("physics.ext_stop_margin", &RunConfig::physics, &BodyParams::ext_stop_margin));
    t.push_back(
        num("physics.ext_stop_stiffness", &RunConfig::physics, &BodyParams::ext_stop_stiffness));
    t.push_back(
        num("physics.ext_stop_damping", &RunConfig::physics, &BodyParams::ext_stop_damping));

    t.push_back({"mechanism.pivot_front",
                 [](RunConfig& c, const std::string& v) {
                   const auto [x, z] = parse_pair(v);
                   c.mechanism.chassis_pivot_front = {x, z};
                 },
                 [](const RunConfig& c) {
                   return format_roundtrip(c.mechanism.chassis_pivot_front.x) + "," +
                          format_roundtrip(c.mechanism.chassis_pivot_front.z);
                 }});
    t.push_back({"mechanism.pivot_rear",
                 [](RunConfig& c, const std::string& v) {
                   const auto [x, z] = parse_pair(v);
                   c.mechanism.chassis_pivot_rear = {x, z};
                 },
                 [](const RunConfig& c) {
                   return format_roundtrip(c.mechanism.chassis_pivot_rear.x) + "," +
                          format_roundtrip(c.mechanism.chassis_pivot_rear.z);
                 }});
    t.push_back(num("mechanism.len_link1", &RunConfig::mechanism, &MechanismConfig::len_link1));
    t.push_back(num("mechanism.len_link2", &RunConfig::mechanism, &MechanismConfig::len_link2));
    t.push_back(num("mechanism.len_link3", &RunConfig::mechanism, &MechanismConfig::len_link3));
    t.push_back(num("mechanism.len_link4", &RunConfig::mechanism, &MechanismConfig::len_link4));
    t.push_back(num("mechanism.ext_link1", &RunConfig::mechanism, &MechanismConfig::ext_link1));
    t.push_back(num("mechanism.ext_link2", &RunConfig::mechanism, &MechanismConfig::ext_link2));
    t.push_back(
        num("mechanism.wheel_radius", &RunConfig::mechanism, &MechanismConfig::wheel_radius));
    t.push_back(num("mechanism.spring_rate_front", &RunConfig::mechanism,
                    &MechanismConfig::spring_rate_front));
    t.push_back(num("mechanism.spring_rate_rear", &RunConfig::mechanism,
                    &MechanismConfig::spring_rate_rear));
    t.push_back(num("mechanism.spring_rest_front", &RunConfig::mechanism,
                    &MechanismConfig::spring_rest_front));
    t.push_back(num("mechanism.spring_rest_rear", &RunConfig::mechanism,
                    &MechanismConfig::spring_rest_rear));
    t.push_back(
        num("mechanism.joint_limit", &RunConfig::mechanism, &MechanismConfig::joint_limit));

    t.push_back(uint("rl.hidden", &RunConfig::rl, &RlConfig::hidden));
    t.push_back(num("rl.gamma", &RunConfig::rl, &RlConfig::gamma));
    t.push_back(num("rl.tau", &RunConfig::rl, &RlConfig::tau));
    t.push_back(num("rl.lr", &RunConfig::rl, &RlConfig::lr));
    t.push_back(uint("rl.batch_size", &RunConfig::rl, &RlConfig::batch_size));
    t.push_back(uint("rl.replay_capacity", &RunConfig::rl, &RlConfig::replay_capacity));
    t.push_back(uint("rl.warmup_steps", &RunConfig::rl, &RlConfig::warmup_steps));
    t.push_back({"rl.auto_alpha",
                 [](RunConfig& c, const std::string& v) { c.rl.auto_alpha = parse_bool(v); },
                 [](const RunConfig& c) { return c.rl.auto_alpha ? "true" : "false"; }});
    t.push_back(num("rl.init_alpha", &RunConfig::rl, &RlConfig::init_alpha));
    t.push_back(num("rl.target_entropy", &RunConfig::rl, &RlConfig::target_entropy));
    t.push_back(num("rl.explore_noise", &RunConfig::rl, &RlConfig::explore_noise));
    t.push_back(num("rl.policy_noise", &RunConfig::rl, &RlConfig::policy_noise));
    t.push_back(num("rl.noise_clip", &RunConfig::rl, &RlConfig::noise_clip));
    t.push_back(uint("rl.policy_delay", &RunConfig::rl, &RlConfig::policy_delay));
    return t;
  }();
  return table;
}

}  // namespace

void RunConfig::validate() const {
  if (algo != "sac" && algo != "ddpg" && algo != "td3")
    throw ConfigError("unsupported algorithm: " + algo);
  if (suspension != "active" && suspension != "passive")
    throw ConfigError("unsupported suspension mode: " + suspension);
  if (total_steps == 0) throw ConfigError("run.steps must be positive");
  if (log_period == 0) throw ConfigError("run.log_period must be positive");
  if (episodes == 0) throw ConfigError("run.episodes must be positive");
  if (height <= 0.0 || height >= 1.0) throw ConfigError("run.height must be in (0,1) m");
  episode.validate();
  rl.validate();
}

void apply_config_kv(RunConfig& config, const std::string& key, const std::string& value) {
  for (const Entry& e : entries()) {
    if (key == e.key) {
      e.set(config, value);
      return;
    }
  }
  throw ConfigError("unknown config key: " + key);
}

void apply_config_text(RunConfig& config, const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
    try {
      apply_config_kv(config, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  RunConfig config;
  apply_config_text(config, buf.str(), path);
  return config;
}

std::string render_config(const RunConfig& config) {
  std::string out;
  for (const Entry& e : entries()) {
    out += e.key;
    out += " = ";
    out += e.get(config);
    out += "\n";
  }
  return out;
}

std::string format_roundtrip(double v) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace rover
