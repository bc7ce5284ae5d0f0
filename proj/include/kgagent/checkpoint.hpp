#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "kgagent/policy.hpp"

namespace kgagent {

// Run-state recorded next to the parameters so a run can resume exactly:
// the schedule position, the driving rng mid-stream, and a digest of the
// snapshot pool. The learner's own Adam state is serialized alongside.
struct CheckpointMeta {
  std::int64_t updates_applied = 0;
  double epsilon = 1.0;           // schedule value at save time, for reports
  std::string rng_state;          // mt19937 stream text (operator<< format)
  std::string graph_pool_digest;  // empty until the trainer owns snapshots
};

struct LoadedCheckpoint {
  PolicyLearner learner;
  Ontology ontology;
  CheckpointMeta meta;
};

// Writes <dir>/params.bin (all tensors, row-major 64-bit floats, host
// little-endian) and <dir>/manifest.json (name/shape/offset per tensor plus
// config, ontology, and meta). Online nets, target nets, and Adam moments all
// go in, so training continues bit-for-bit after a reload. Update count and
// ε are read off the learner; the caller supplies only the trainer-owned
// strings.
void save_checkpoint(const std::filesystem::path& dir,
                     const PolicyLearner& learner, const Ontology& ontology,
                     const std::string& rng_state,
                     const std::string& graph_pool_digest = "");

// Rebuilds the learner from a saved directory. Throws CheckpointCorruptError
// on missing files, unreadable JSON, or any shape/size disagreement.
LoadedCheckpoint load_checkpoint(const std::filesystem::path& dir);

}  // namespace kgagent
