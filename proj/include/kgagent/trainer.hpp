#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "kgagent/checkpoint.hpp"
#include "kgagent/graph_metrics.hpp"
#include "kgagent/policy.hpp"
#include "kgagent/user_source.hpp"

namespace kgagent {

// Everything a training run needs, loadable from a JSON file. Defaults match
// the reference setup: 3 runs × 8 conversations × 20 turns (10 agent asks,
// 10 user answers, after an unsolicited user opener), one policy update per
// agent turn, a checkpoint per conversation, reset/shuffle alternating at
// every second conversation boundary.
struct ExperimentConfig {
  MetricKind intention = MetricKind::TotalTriples;
  int conversations = 8;
  int turns_per_conversation = 20;  // agent + user turns, opener not counted
  int runs = 3;
  int reset_every = 2;    // conversations between boundary events
  int shuffle_every = 2;  // must equal reset_every: events alternate
  std::vector<UserKind> user_kinds = {UserKind::Vanilla};  // cycled per conversation
  std::uint32_t base_seed = 1;
  int checkpoint_every = 1;  // conversations; checkpoints land under out_dir
  std::size_t replay_capacity = 500;
  std::size_t batch_size = 4;
  PolicyConfig policy;
  // Rigged-environment knob for learning smoke tests: actions of this pattern
  // earn reward 1, everything else 0, metrics logged but not rewarded.
  std::optional<AbstractPattern> reward_override_pattern;
  std::filesystem::path out_dir;  // empty: keep everything in memory

  int agent_turns() const { return turns_per_conversation / 2; }

  // Throws ConfigInvalidError on out-of-range values.
  void validate() const;

  nlohmann::json to_json() const;
  // Strict: unknown keys are rejected so typos can't silently revert to
  // defaults. Validates before returning.
  static ExperimentConfig from_json(const nlohmann::json& j);
};

// One agent turn as logged: the CSV row order starts with the seven core
// columns, extras follow.
struct TurnRecord {
  int run = 0;
  int conversation = 0;  // 1-based
  int turn = 0;          // agent turn within the conversation, 1-based
  AbstractPattern action = AbstractPattern::EntityNovelty;
  double m_prev = 0.0;
  double m_next = 0.0;
  double reward = 0.0;
  double epsilon = 0.0;
  double printed_reward = 0.0;  // audit form of the reward, never trained on
  UserKind user_kind = UserKind::Vanilla;
  double q_value = 0.0;  // composite Q of the chosen action, pre-update
  DesireInstance desire;
};

struct EpisodeLog {
  int run = 0;
  int conversation = 0;
  UserKind user_kind = UserKind::Vanilla;
  std::vector<TurnRecord> turns;
  std::map<std::string, double> final_profile;  // 5 structural metrics
};

// Snapshots of past eKGs, one per finished conversation; shuffle swaps the
// live eKG for a pool member of similar size (within ±25% of the current
// quad count, else the nearest), never the one just snapshotted.
class GraphPool {
 public:
  void add(const BeliefGraph& ekg);
  std::size_t size() const { return snapshots_.size(); }
  bool empty() const { return snapshots_.empty(); }

  // Pre: non-empty. The most recent snapshot (the live eKG itself) is only
  // eligible when it is the sole member.
  const QuadStore& pick_for_shuffle(std::size_t current_quads,
                                    std::mt19937& rng) const;

  std::string digest() const;  // content hash, goes into checkpoints

 private:
  struct Snapshot {
    QuadStore store;
    std::size_t quads = 0;
  };
  std::vector<Snapshot> snapshots_;
};

struct ExperimentReport {
  std::vector<EpisodeLog> episodes;  // run-major, then conversation order
  // Boundary events per run, in order: "reset@2", "shuffle@4", … A reset
  // fires at every odd boundary, including one that ends the run; a shuffle
  // with no conversation left to use the swapped graph is skipped.
  std::vector<std::vector<std::string>> boundary_events;
  // Analysis products, averaged across runs where that makes sense:
  std::vector<double> average_reward_per_step;     // one entry per update step
  std::vector<double> average_cumulative_reward;   // running sum of the above
  std::map<std::string, int> action_counts;        // pattern name → times chosen

  // One row per update: run, conversation, turn, action, m_prev, m_next,
  // reward, then the extras (epsilon, printed_reward, user_kind, q, desire).
  void write_csv(std::ostream& out) const;
  nlohmann::json summary() const;
};

// Ten ask-answer rounds (at defaults) against one user: metric before, desire
// selection, user capsule, integrate, metric after, reward, replay push, one
// td_update + soft update. `lifetime_ends` marks the conversation's last
// transition terminal (a reset/shuffle or the run's end follows). A pool, when
// given, receives the eKG snapshot at conversation end.
EpisodeLog run_conversation(PolicyLearner& learner, ReplayBuffer& replay,
                            BeliefGraph& ekg, const UserModel& user,
                            const ExperimentConfig& config, int run_index,
                            int conversation_index, bool lifetime_ends,
                            std::mt19937& rng, GraphPool* pool = nullptr);

// The full schedule: runs × conversations, users corrupted from `base_kb`
// per conversation, boundary events between conversations, a checkpoint per
// conversation when out_dir is set. Deterministic given config.base_seed.
ExperimentReport run_experiment(const ExperimentConfig& config,
                                const Ontology& ontology,
                                const QuadStore& base_kb);

// Q-value lens on a saved policy: softmax distributions of both heads on the
// seed eKG's state, normalized by subtracting each head's mean, plus the
// composite Q of every desire in the sample.
struct QValueReport {
  std::vector<std::pair<std::string, double>> abstract_normalized;
  std::vector<std::pair<std::string, double>> type_normalized;
  std::vector<std::pair<std::string, double>> desire_q;
};
QValueReport evaluate_policy(const std::filesystem::path& checkpoint_dir,
                             const BeliefGraph& seed_ekg,
                             const std::vector<DesireInstance>& desires_sample);

// The five structural metrics, keyed by metric name.
std::map<std::string, double> profile_knowledge(const BeliefGraph& ekg);

// Frozen-policy comparison: per user kind, one greedy (ε = 0, no updates)
// conversation per seed on a fresh eKG; tabulates the mean cumulative reward.
std::vector<std::pair<UserKind, double>> compare_users(
    const std::filesystem::path& checkpoint_dir, const QuadStore& base_kb,
    const std::vector<UserKind>& kinds, MetricKind intention,
    const std::vector<std::uint32_t>& seeds = {1, 2, 3});

}  // namespace kgagent
