#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "kgagent/qnet.hpp"

namespace kgagent {

// Just enough of a DesireInstance to price it: which pattern, which types.
// Bindings don't enter the Q-value, so transitions don't keep them.
struct ActionKey {
  AbstractPattern pattern = AbstractPattern::EntityNovelty;
  std::vector<std::string> involved_types;  // sorted

  friend bool operator==(const ActionKey&, const ActionKey&) = default;
};

inline ActionKey action_key_of(const DesireInstance& d) {
  return ActionKey{d.pattern, d.involved_types};
}

// One turn of experience. States are stored as SimplifiedGraphs, not vectors:
// the encoder keeps learning, so every replay re-encodes with fresh weights.
struct Transition {
  SimplifiedGraph graph;
  ActionKey action;
  Real reward = 0.0;
  SimplifiedGraph next_graph;
  std::vector<ActionKey> next_actions;  // what was instantiable afterwards
  bool terminal = false;
};

// FIFO ring of the most recent transitions, sampled uniformly.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity = 500) : capacity_(capacity) {}

  void push(Transition t);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& at(std::size_t i) const { return items_.at(i); }  // oldest first

  // Uniform draw of `batch` distinct transitions. Throws EmptyBatchError when
  // batch is zero or exceeds the current size.
  std::vector<const Transition*> sample(std::size_t batch,
                                        std::mt19937& rng) const;

 private:
  std::size_t capacity_;
  std::deque<Transition> items_;
};

// Exploration: linear 1.0 → 0.05 over the first 40 updates, flat after.
double epsilon_schedule(std::int64_t updates_applied);

struct PolicyConfig {
  int hidden = kEncoderHidden;  // encoder output width == trunk width
  double gamma = 0.99;
  double learning_rate = 1e-4;
  double tau = 0.005;
};

// Adam, one (m, v) pair per named tensor. Stateful across updates and part of
// every checkpoint, so a resumed run steps exactly like an uninterrupted one.
struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::int64_t step = 0;  // shared across tensors; bumped once per update
  std::map<std::string, std::pair<MatX, MatX>> moments;

  void begin_step() { ++step; }
  void apply(const std::string& name, MatX& param, const MatX& grad, double lr);
};

// θ' ← τ·θ + (1−τ)·θ' elementwise. Throws ShapeMismatchError when the two
// parameter sets disagree in shape.
void soft_update(EncoderParams& target, const EncoderParams& online, double tau);
void soft_update(QNetworkParams& target, const QNetworkParams& online, double tau);

// Owns the encoder + Q-network, their frozen target copies, and the optimizer.
// Action selection and TD learning both run through here.
class PolicyLearner {
 public:
  PolicyLearner(const Ontology& ont, const PolicyConfig& cfg, std::mt19937& rng);

  VecX encode_graph(const SimplifiedGraph& g) const;  // online encoder

  // ε-greedy over the candidate desires; returns an index into `desires`.
  std::size_t choose(const SimplifiedGraph& g,
                     const std::vector<DesireInstance>& desires, double epsilon,
                     std::mt19937& rng) const;

  // Mean squared TD error of the batch and its gradients, nothing applied.
  // Bootstrap targets come from the target networks. Throws EmptyBatchError.
  double td_loss(const std::vector<const Transition*>& batch,
                 EncoderParams& enc_grads, QNetworkParams& q_grads) const;

  // One Adam step on the batch's TD error, through the heads, the trunk, and
  // the encoder. Returns the pre-step loss and bumps the update count.
  double td_update(const std::vector<const Transition*>& batch);

  void soft_update_targets();  // τ from config, both networks

  double epsilon() const { return epsilon_schedule(updates_applied_); }
  std::int64_t updates_applied() const { return updates_applied_; }
  void set_updates_applied(std::int64_t n) { updates_applied_ = n; }

  const PolicyConfig& config() const { return cfg_; }
  const FeatureVocab& vocab() const { return vocab_; }
  const TypeVocab& type_vocab() const { return types_; }

  EncoderParams& encoder() { return enc_; }
  const EncoderParams& encoder() const { return enc_; }
  EncoderParams& target_encoder() { return enc_target_; }
  const EncoderParams& target_encoder() const { return enc_target_; }
  QNetworkParams& qnet() { return q_; }
  const QNetworkParams& qnet() const { return q_; }
  QNetworkParams& target_qnet() { return q_target_; }
  const QNetworkParams& target_qnet() const { return q_target_; }
  AdamState& adam() { return adam_; }
  const AdamState& adam() const { return adam_; }

 private:
  double target_value(const Transition& t) const;

  PolicyConfig cfg_;
  FeatureVocab vocab_;
  TypeVocab types_;
  EncoderParams enc_, enc_target_;
  QNetworkParams q_, q_target_;
  AdamState adam_;
  std::int64_t updates_applied_ = 0;
};

}  // namespace kgagent
