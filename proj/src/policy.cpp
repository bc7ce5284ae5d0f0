#include "kgagent/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "kgagent/errors.hpp"
#include "kgagent/rand.hpp"

namespace kgagent {

void ReplayBuffer::push(Transition t) {
  if (capacity_ == 0) return;
  items_.push_back(std::move(t));
  while (items_.size() > capacity_) {
    items_.pop_front();
  }
}

std::vector<const Transition*> ReplayBuffer::sample(std::size_t batch,
                                                    std::mt19937& rng) const {
  if (batch == 0) {
    throw EmptyBatchError("sample of zero transitions requested");
  }
  if (batch > items_.size()) {
    throw EmptyBatchError("sample of " + std::to_string(batch) +
                          " from a buffer holding " +
                          std::to_string(items_.size()));
  }
  // Partial Fisher-Yates: the first `batch` slots end up a uniform draw
  // without replacement.
  std::vector<std::size_t> order(items_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<const Transition*> picked;
  picked.reserve(batch);
  for (std::size_t i = 0; i < batch; ++i) {
    const std::size_t j =
        i + static_cast<std::size_t>(draw_below(rng, order.size() - i));
    std::swap(order[i], order[j]);
    picked.push_back(&items_[order[i]]);
  }
  return picked;
}

double epsilon_schedule(std::int64_t updates_applied) {
  constexpr double kStart = 1.0;
  constexpr double kFloor = 0.05;
  constexpr std::int64_t kHorizon = 40;
  if (updates_applied <= 0) return kStart;
  if (updates_applied >= kHorizon) return kFloor;
  return kStart - (kStart - kFloor) *
                      (static_cast<double>(updates_applied) / kHorizon);
}

void AdamState::apply(const std::string& name, MatX& param, const MatX& grad,
                      double lr) {
  auto& [m, v] = moments[name];
  if (m.size() == 0) {
    m = MatX::Zero(grad.rows(), grad.cols());
    v = MatX::Zero(grad.rows(), grad.cols());
  }
  m = beta1 * m + (1.0 - beta1) * grad;
  v = beta2 * v + (1.0 - beta2) * grad.cwiseProduct(grad);
  // step is bumped once per update, before any tensor is touched.
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step));
  param.array() -= lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + eps);
}

namespace {

template <class Params>
void blend_tensors(Params& target, const Params& online, double tau) {
  std::vector<MatX*> slots;
  for_each_tensor(target,
                  [&slots](const std::string&, MatX& t) { slots.push_back(&t); });
  std::size_t i = 0;
  for_each_tensor(online, [&](const std::string& name, const MatX& o) {
    MatX& t = *slots[i++];
    if (t.rows() != o.rows() || t.cols() != o.cols()) {
      throw ShapeMismatchError("soft update shape clash at " + name);
    }
    t = tau * o + (1.0 - tau) * t;
  });
}

}  // namespace

void soft_update(EncoderParams& target, const EncoderParams& online,
                 double tau) {
  blend_tensors(target, online, tau);
}

void soft_update(QNetworkParams& target, const QNetworkParams& online,
                 double tau) {
  blend_tensors(target, online, tau);
}

PolicyLearner::PolicyLearner(const Ontology& ont, const PolicyConfig& cfg,
                             std::mt19937& rng)
    : cfg_(cfg),
      vocab_(FeatureVocab::from_ontology(ont)),
      types_(TypeVocab::from_ontology(ont)) {
  enc_ = EncoderParams::init(vocab_.size(), cfg_.hidden, rng);
  q_ = QNetworkParams::init(cfg_.hidden, cfg_.hidden, types_.size(), rng);
  enc_target_ = enc_;  // targets start as exact copies of the online nets
  q_target_ = q_;
}

VecX PolicyLearner::encode_graph(const SimplifiedGraph& g) const {
  return encode(g, vocab_, enc_);
}

std::size_t PolicyLearner::choose(const SimplifiedGraph& g,
                                  const std::vector<DesireInstance>& desires,
                                  double epsilon, std::mt19937& rng) const {
  return select_action(q_, types_, encode_graph(g), desires, epsilon, rng);
}

double PolicyLearner::target_value(const Transition& t) const {
  if (t.terminal || t.next_actions.empty()) return t.reward;
  const VecX next_state = encode(t.next_graph, vocab_, enc_target_);
  const QOutput out = q_forward(q_target_, next_state);
  double best = -std::numeric_limits<double>::infinity();
  for (const ActionKey& a : t.next_actions) {
    best = std::max(best,
                    action_q_value(out, a.pattern, a.involved_types, types_));
  }
  return t.reward + cfg_.gamma * best;
}

double PolicyLearner::td_loss(const std::vector<const Transition*>& batch,
                              EncoderParams& enc_grads,
                              QNetworkParams& q_grads) const {
  if (batch.empty()) {
    throw EmptyBatchError("td update needs at least one transition");
  }
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  double loss = 0.0;
  for (const Transition* t : batch) {
    EncodeCache enc_cache;
    const VecX state = encode(t->graph, vocab_, enc_, &enc_cache);
    QCache q_cache;
    const QOutput out = q_forward(q_, state, &q_cache);
    const double predicted =
        action_q_value(out, t->action.pattern, t->action.involved_types, types_);
    const double diff = predicted - target_value(*t);
    loss += diff * diff * inv_b;

    const double g = 2.0 * diff * inv_b;
    VecX d_abstract = VecX::Zero(kNumPatterns);
    d_abstract(static_cast<int>(t->action.pattern)) = g;
    VecX d_type = VecX::Zero(types_.size());
    if (!t->action.involved_types.empty()) {
      const double share =
          g / static_cast<double>(t->action.involved_types.size());
      for (const std::string& type : t->action.involved_types) {
        d_type(types_.index_of(type)) += share;
      }
    }
    VecX d_state;
    q_backward(q_, q_cache, d_abstract, d_type, q_grads, d_state);
    encode_backward(t->graph, enc_, enc_cache, d_state, enc_grads);
  }
  return loss;
}

double PolicyLearner::td_update(const std::vector<const Transition*>& batch) {
  EncoderParams enc_grads = EncoderParams::zeros_like(enc_);
  QNetworkParams q_grads = QNetworkParams::zeros_like(q_);
  const double loss = td_loss(batch, enc_grads, q_grads);

  std::vector<const MatX*> grads;
  for_each_tensor(enc_grads, [&grads](const std::string&, const MatX& g) {
    grads.push_back(&g);
  });
  for_each_tensor(q_grads, [&grads](const std::string&, const MatX& g) {
    grads.push_back(&g);
  });

  adam_.begin_step();
  std::size_t i = 0;
  for_each_tensor(enc_, [&](const std::string& name, MatX& p) {
    adam_.apply(name, p, *grads[i++], cfg_.learning_rate);
  });
  for_each_tensor(q_, [&](const std::string& name, MatX& p) {
    adam_.apply(name, p, *grads[i++], cfg_.learning_rate);
  });
  ++updates_applied_;
  return loss;
}

void PolicyLearner::soft_update_targets() {
  soft_update(enc_target_, enc_, cfg_.tau);
  soft_update(q_target_, q_, cfg_.tau);
}

}  // namespace kgagent
