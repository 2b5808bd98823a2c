#include "rover/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace rover {

namespace {
constexpr char kMagic[8] = {'R', 'V', 'R', 'C', 'K', 'P', 'T', '\0'};
constexpr uint64_t kVersion = 1;
}  // namespace

void save_checkpoint(const Agent& agent, const std::string& path) {
  std::ostringstream out(std::ios::binary);
  out.write(kMagic, sizeof(kMagic));
  write_u64(out, kVersion);
  write_string(out, agent.algo());
  const RlConfig& cfg = agent.config();
  write_u64(out, cfg.obs_dim);
  write_u64(out, cfg.act_dim);
  write_u64(out, cfg.hidden);
  agent.save(out);

  const std::string bytes = out.str();
  const std::string tmp = path + ".tmp";
  {
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    if (!file) throw BadCheckpointError("cannot open for writing: " + tmp);
    file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!file) throw BadCheckpointError("short write: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw BadCheckpointError("cannot rename into place: " + path);
}

std::unique_ptr<Agent> load_checkpoint(const std::string& path, const RlConfig& cfg) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw BadCheckpointError("cannot open checkpoint: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::string(magic, 8) != std::string(kMagic, 8))
    throw BadCheckpointError("not a checkpoint file: " + path);
  const uint64_t version = read_u64(in);
  if (version != kVersion)
    throw BadCheckpointError("unsupported checkpoint version " + std::to_string(version));
  const std::string algo = read_string(in);
  RlConfig shaped = cfg;
  shaped.obs_dim = read_u64(in);
  shaped.act_dim = read_u64(in);
  shaped.hidden = read_u64(in);
  Rng scratch(0);
  std::unique_ptr<Agent> agent;
  try {
    agent = make_agent(algo, shaped, scratch);
  } catch (const UnsupportedAlgorithmError& e) {
    throw BadCheckpointError(std::string("checkpoint names an ") + e.what());
  }
  agent->load(in);
  return agent;
}

}  // namespace rover
