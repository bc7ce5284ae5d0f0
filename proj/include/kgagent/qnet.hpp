#pragma once

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "kgagent/desire.hpp"
#include "kgagent/encoder.hpp"
#include "kgagent/types.hpp"

namespace kgagent {

// Numerically safe softmax (max-shifted). Used for selection probabilities
// and reporting only — learning always works on the raw logits.
VecX softmax(const VecX& logits);

// Row order of the specific head: the ontology's entity types, sorted, so the
// head layout is reproducible no matter how the ontology file orders them.
struct TypeVocab {
  std::vector<std::string> types;  // sorted, unique

  int size() const { return static_cast<int>(types.size()); }
  // Throws UnknownEntityTypeError for a type outside the vocabulary.
  int index_of(const std::string& type) const;

  static TypeVocab from_ontology(const Ontology& ont);
};

// Shared two-layer trunk on the state vector, then two parallel linear heads:
// one logit per abstract pattern, one per entity type. The pre-softmax logits
// are the Q-values; softmax over a head is only ever a probability view.
struct QNetworkParams {
  MatX trunk1_w, trunk1_b;      // hidden × state_dim, hidden × 1
  MatX trunk2_w, trunk2_b;      // hidden × hidden, hidden × 1
  MatX abstract_w, abstract_b;  // kNumPatterns × hidden, kNumPatterns × 1
  MatX type_w, type_b;          // |T| × hidden, |T| × 1

  int state_dim() const { return static_cast<int>(trunk1_w.cols()); }
  int hidden_dim() const { return static_cast<int>(trunk1_w.rows()); }
  int num_types() const { return static_cast<int>(type_w.rows()); }

  // Uniform ±1/sqrt(fan_in) weights, zero biases — same recipe as the encoder.
  static QNetworkParams init(int state_dim, int hidden, int num_types,
                             std::mt19937& rng);
  static QNetworkParams zeros_like(const QNetworkParams& shape);
};

namespace detail {
template <class Params, class Fn>
void walk_qnet_tensors(Params& p, Fn&& fn) {
  fn("q.trunk1.w", p.trunk1_w);
  fn("q.trunk1.b", p.trunk1_b);
  fn("q.trunk2.w", p.trunk2_w);
  fn("q.trunk2.b", p.trunk2_b);
  fn("q.abstract.w", p.abstract_w);
  fn("q.abstract.b", p.abstract_b);
  fn("q.type.w", p.type_w);
  fn("q.type.b", p.type_b);
}
}  // namespace detail

template <class Fn>
void for_each_tensor(QNetworkParams& p, Fn&& fn) {
  detail::walk_qnet_tensors(p, std::forward<Fn>(fn));
}
template <class Fn>
void for_each_tensor(const QNetworkParams& p, Fn&& fn) {
  detail::walk_qnet_tensors(p, std::forward<Fn>(fn));
}

struct QOutput {
  VecX abstract_logits;  // kNumPatterns
  VecX type_logits;      // |T|
};

// Forward intermediates the backward pass replays.
struct QCache {
  VecX state;
  VecX t1_pre, t1;  // first trunk layer, before/after relu
  VecX t2_pre, t2;  // second trunk layer, before/after relu
};

// Throws ShapeMismatchError when the state length disagrees with the trunk.
QOutput q_forward(const QNetworkParams& params, const VecX& state,
                  QCache* cache = nullptr);

// Accumulates d(loss)/d(params) into `grads` and d(loss)/d(state) into
// `d_state` given the gradients on both heads' logits.
void q_backward(const QNetworkParams& params, const QCache& cache,
                const VecX& d_abstract, const VecX& d_type,
                QNetworkParams& grads, VecX& d_state);

// Mean of the involved types' entries of `per_type` — softmax scores when
// selecting, raw logits when learning. An instance with no typed entities
// (the synthetic fallback on an untyped subject) contributes nothing: 0.
double mean_over_types(const VecX& per_type,
                       const std::vector<std::string>& involved_types,
                       const TypeVocab& tv);

// How strongly the specific head backs this instance: the mean of its
// involved types' softmax values. Throws UnknownEntityTypeError.
double score_specific(const DesireInstance& desire, const VecX& type_softmax,
                      const TypeVocab& tv);

// Composite Q of one concrete action: abstract logit of its pattern plus the
// mean involved-type logit. This is the quantity TD learning regresses.
double action_q_value(const QOutput& out, AbstractPattern pattern,
                      const std::vector<std::string>& involved_types,
                      const TypeVocab& tv);

// ε-greedy pick over the candidate desires; returns an index into `desires`.
// Greedy path: highest abstract-softmax among patterns that have at least one
// instance (instance-less patterns are masked), then the instance of that
// pattern with the highest score_specific, ties falling to the earliest
// candidate. ε = 0 never touches the rng. Throws NoAvailableActionError when
// `desires` is empty.
std::size_t select_action(const QNetworkParams& params, const TypeVocab& tv,
                          const VecX& state,
                          const std::vector<DesireInstance>& desires,
                          double epsilon, std::mt19937& rng);

}  // namespace kgagent
