#pragma once

#include <memory>
#include <string>

#include "rover/agent.hpp"
#include "rover/serialize.hpp"

namespace rover {

// Checkpoint file: magic + version, algorithm name, network dimensions, then
// the agent's parameter arrays and optimizer state. Written atomically.
void save_checkpoint(const Agent& agent, const std::string& path);

// Rebuilds the agent recorded in the file. Hyperparameters not needed to
// reconstruct shapes (gamma, tau, ...) come from `cfg`; dimensions come from
// the file. Throws BadCheckpointError on version/shape mismatch.
std::unique_ptr<Agent> load_checkpoint(const std::string& path, const RlConfig& cfg);

}  // namespace rover
