#include "kgagent/qnet.hpp"

#include <algorithm>
#include <cmath>

#include "kgagent/errors.hpp"
#include "kgagent/rand.hpp"

namespace kgagent {
namespace {

// Row-major fill, uniform ±1/sqrt(fan_in) — the same draw order the encoder
// uses, so seeded inits stay reproducible across refactors.
void fill_uniform(MatX& m, std::mt19937& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      m(r, c) = draw_range(rng, -bound, bound);
    }
  }
}

VecX relu(const VecX& v) { return v.cwiseMax(0.0); }

}  // namespace

VecX softmax(const VecX& logits) {
  if (logits.size() == 0) return logits;
  const double shift = logits.maxCoeff();
  VecX e = (logits.array() - shift).exp();
  return e / e.sum();
}

int TypeVocab::index_of(const std::string& type) const {
  auto it = std::lower_bound(types.begin(), types.end(), type);
  if (it == types.end() || *it != type) {
    throw UnknownEntityTypeError("entity type not in the ontology: " + type);
  }
  return static_cast<int>(it - types.begin());
}

TypeVocab TypeVocab::from_ontology(const Ontology& ont) {
  TypeVocab tv;
  tv.types = ont.types;
  std::sort(tv.types.begin(), tv.types.end());
  tv.types.erase(std::unique(tv.types.begin(), tv.types.end()), tv.types.end());
  return tv;
}

QNetworkParams QNetworkParams::init(int state_dim, int hidden, int num_types,
                                    std::mt19937& rng) {
  QNetworkParams p;
  p.trunk1_w.resize(hidden, state_dim);
  p.trunk2_w.resize(hidden, hidden);
  p.abstract_w.resize(kNumPatterns, hidden);
  p.type_w.resize(num_types, hidden);
  fill_uniform(p.trunk1_w, rng);
  fill_uniform(p.trunk2_w, rng);
  fill_uniform(p.abstract_w, rng);
  fill_uniform(p.type_w, rng);
  p.trunk1_b = MatX::Zero(hidden, 1);
  p.trunk2_b = MatX::Zero(hidden, 1);
  p.abstract_b = MatX::Zero(kNumPatterns, 1);
  p.type_b = MatX::Zero(num_types, 1);
  return p;
}

QNetworkParams QNetworkParams::zeros_like(const QNetworkParams& shape) {
  QNetworkParams p;
  p.trunk1_w = MatX::Zero(shape.trunk1_w.rows(), shape.trunk1_w.cols());
  p.trunk1_b = MatX::Zero(shape.trunk1_b.rows(), 1);
  p.trunk2_w = MatX::Zero(shape.trunk2_w.rows(), shape.trunk2_w.cols());
  p.trunk2_b = MatX::Zero(shape.trunk2_b.rows(), 1);
  p.abstract_w = MatX::Zero(shape.abstract_w.rows(), shape.abstract_w.cols());
  p.abstract_b = MatX::Zero(shape.abstract_b.rows(), 1);
  p.type_w = MatX::Zero(shape.type_w.rows(), shape.type_w.cols());
  p.type_b = MatX::Zero(shape.type_b.rows(), 1);
  return p;
}

QOutput q_forward(const QNetworkParams& params, const VecX& state,
                  QCache* cache) {
  if (state.size() != params.trunk1_w.cols()) {
    throw ShapeMismatchError(
        "state has " + std::to_string(state.size()) + " entries, trunk expects " +
        std::to_string(params.trunk1_w.cols()));
  }
  const VecX t1_pre = params.trunk1_w * state + params.trunk1_b.col(0);
  const VecX t1 = relu(t1_pre);
  const VecX t2_pre = params.trunk2_w * t1 + params.trunk2_b.col(0);
  const VecX t2 = relu(t2_pre);
  QOutput out;
  out.abstract_logits = params.abstract_w * t2 + params.abstract_b.col(0);
  out.type_logits = params.type_w * t2 + params.type_b.col(0);
  if (cache != nullptr) {
    cache->state = state;
    cache->t1_pre = t1_pre;
    cache->t1 = t1;
    cache->t2_pre = t2_pre;
    cache->t2 = t2;
  }
  return out;
}

void q_backward(const QNetworkParams& params, const QCache& cache,
                const VecX& d_abstract, const VecX& d_type,
                QNetworkParams& grads, VecX& d_state) {
  grads.abstract_w += d_abstract * cache.t2.transpose();
  grads.abstract_b.col(0) += d_abstract;
  grads.type_w += d_type * cache.t2.transpose();
  grads.type_b.col(0) += d_type;

  VecX d_t2 = params.abstract_w.transpose() * d_abstract +
              params.type_w.transpose() * d_type;
  const VecX d_t2_pre =
      (cache.t2_pre.array() > 0.0).select(d_t2, VecX::Zero(d_t2.size()));
  grads.trunk2_w += d_t2_pre * cache.t1.transpose();
  grads.trunk2_b.col(0) += d_t2_pre;

  const VecX d_t1 = params.trunk2_w.transpose() * d_t2_pre;
  const VecX d_t1_pre =
      (cache.t1_pre.array() > 0.0).select(d_t1, VecX::Zero(d_t1.size()));
  grads.trunk1_w += d_t1_pre * cache.state.transpose();
  grads.trunk1_b.col(0) += d_t1_pre;

  d_state = params.trunk1_w.transpose() * d_t1_pre;
}

double mean_over_types(const VecX& per_type,
                       const std::vector<std::string>& involved_types,
                       const TypeVocab& tv) {
  if (involved_types.empty()) return 0.0;
  double sum = 0.0;
  for (const std::string& type : involved_types) {
    sum += per_type(tv.index_of(type));
  }
  return sum / static_cast<double>(involved_types.size());
}

double score_specific(const DesireInstance& desire, const VecX& type_softmax,
                      const TypeVocab& tv) {
  return mean_over_types(type_softmax, desire.involved_types, tv);
}

double action_q_value(const QOutput& out, AbstractPattern pattern,
                      const std::vector<std::string>& involved_types,
                      const TypeVocab& tv) {
  return out.abstract_logits(static_cast<int>(pattern)) +
         mean_over_types(out.type_logits, involved_types, tv);
}

std::size_t select_action(const QNetworkParams& params, const TypeVocab& tv,
                          const VecX& state,
                          const std::vector<DesireInstance>& desires,
                          double epsilon, std::mt19937& rng) {
  if (desires.empty()) {
    throw NoAvailableActionError("no desires to select from");
  }
  // The ε = 0 path must be a pure function of (params, state, desires), so
  // not even the exploration coin is flipped then.
  if (epsilon > 0.0 && draw_unit(rng) < epsilon) {
    return static_cast<std::size_t>(draw_below(rng, desires.size()));
  }

  const QOutput out = q_forward(params, state);
  const VecX abstract_p = softmax(out.abstract_logits);
  const VecX type_p = softmax(out.type_logits);

  // Step one: best abstract pattern among those with at least one instance.
  bool available[kNumPatterns] = {};
  for (const DesireInstance& d : desires) {
    available[static_cast<int>(d.pattern)] = true;
  }
  int best_pattern = -1;
  for (int p = 0; p < kNumPatterns; ++p) {
    if (!available[p]) continue;
    if (best_pattern < 0 || abstract_p(p) > abstract_p(best_pattern)) {
      best_pattern = p;
    }
  }

  // Step two: best-scored instance of that pattern; earliest candidate wins
  // ties, and `desires` is already in canonical order.
  std::size_t best = desires.size();
  double best_score = 0.0;
  for (std::size_t i = 0; i < desires.size(); ++i) {
    if (static_cast<int>(desires[i].pattern) != best_pattern) continue;
    const double score = score_specific(desires[i], type_p, tv);
    if (best == desires.size() || score > best_score) {
      best = i;
      best_score = score;
    }
  }
  return best;
}

}  // namespace kgagent
