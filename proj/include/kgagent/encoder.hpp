#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "kgagent/belief.hpp"
#include "kgagent/types.hpp"

namespace kgagent {

// The eKG boiled down to what the policy looks at: claim nodes joined to
// their perspective values and to the instances standing in subject/object
// position. Everything else (ontology rows, turns, mentions) drops out.
struct SimplifiedGraph {
  enum class Role : int { Claim = 0, PerspectiveValue = 1, Instance = 2 };
  struct Node {
    Role role;
    std::string iri;
    auto operator<=>(const Node&) const = default;
  };
  // Typed, directed: claim→value carries the perspective, instance→claim
  // marks the subject, claim→instance marks an IRI object.
  enum Relation : int {
    kClaimToValue = 0,
    kSubjectToClaim = 1,
    kClaimToObject = 2,
    kSelfLoop = 3,  // never stored; every node gets one inside encode
  };
  struct Edge {
    int from;
    int to;
    int relation;
    auto operator<=>(const Edge&) const = default;
  };
  std::vector<Node> nodes;  // sorted by (role, iri)
  std::vector<Edge> edges;  // sorted, deduplicated

  bool empty() const { return nodes.empty(); }
};

SimplifiedGraph simplify(const BeliefGraph& ekg);

inline constexpr int kNumRelations = 4;
inline constexpr int kEncoderHidden = 64;

// One-hot feature identity. Indices 1..7 are the fixed perspective values,
// index 0 is UNK (claims, literals, anything never seen); instances follow.
// Built once from the ontology and frozen for the life of a policy.
struct FeatureVocab {
  std::vector<std::string> instances;  // sorted, unique

  int size() const { return 8 + static_cast<int>(instances.size()); }
  int index_of(const SimplifiedGraph::Node& node) const;

  static FeatureVocab from_ontology(const Ontology& ont);
};

// Two relational-attention layers plus a dense readout. All tensors are
// matrices (vectors are n×1) so the generic tensor walk below stays uniform.
struct EncoderParams {
  // weights[layer][relation]: H_out × H_in; attention[layer][relation]: 2H × 1,
  // scoring the concatenated (target, source) transformed pair.
  std::array<std::vector<MatX>, 2> weights;
  std::array<std::vector<MatX>, 2> attention;
  MatX dense_w;  // H × H
  MatX dense_b;  // H × 1

  int feature_dim() const { return static_cast<int>(weights[0][0].cols()); }
  int hidden_dim() const { return static_cast<int>(dense_w.rows()); }

  // Uniform ±1/sqrt(fan_in) weights, zero bias.
  static EncoderParams init(int feature_dim, int hidden, std::mt19937& rng);
  static EncoderParams zeros_like(const EncoderParams& shape);
};

// Visits every tensor with a stable name — the single hook Adam, soft
// updates, serialization, and the finite-difference harness all share.
namespace detail {
template <class Params, class Fn>
void walk_encoder_tensors(Params& p, Fn&& fn) {
  for (int layer = 0; layer < 2; ++layer) {
    for (int rel = 0; rel < kNumRelations; ++rel) {
      const std::string stem =
          "enc.l" + std::to_string(layer) + ".r" + std::to_string(rel);
      fn(stem + ".w", p.weights[layer][rel]);
      fn(stem + ".a", p.attention[layer][rel]);
    }
  }
  fn("enc.dense.w", p.dense_w);
  fn("enc.dense.b", p.dense_b);
}
}  // namespace detail

template <class Fn>
void for_each_tensor(EncoderParams& p, Fn&& fn) {
  detail::walk_encoder_tensors(p, std::forward<Fn>(fn));
}
template <class Fn>
void for_each_tensor(const EncoderParams& p, Fn&& fn) {
  detail::walk_encoder_tensors(p, std::forward<Fn>(fn));
}

// Everything the backward pass replays. Populated by encode when asked.
struct EncodeCache {
  struct Group {  // one (target node, relation) attention neighborhood
    int target = 0;
    int relation = 0;
    std::vector<int> sources;
    VecX alpha;  // softmax weights, aligned with sources
    VecX score;  // pre-leaky attention logits, aligned with sources
  };
  int node_count = 0;
  MatX features;                        // F × n, one column per node
  std::array<std::vector<MatX>, 2> z;   // per layer, per relation: H × n
  std::array<std::vector<Group>, 2> groups;
  std::array<MatX, 2> pre_activation;   // attention-summed input to the relu
  std::array<MatX, 2> activated;        // layer outputs (post-relu)
};

// Mean-pooled graph embedding; the empty graph is a zero vector. Throws
// ShapeMismatchError when the vocabulary and parameter widths disagree.
VecX encode(const SimplifiedGraph& graph, const FeatureVocab& vocab,
            const EncoderParams& params, EncodeCache* cache = nullptr);

// Accumulates d(loss)/d(params) into `grads` (shaped like `params`) given
// d(loss)/d(state). Requires the cache from the matching encode call.
void encode_backward(const SimplifiedGraph& graph, const EncoderParams& params,
                     const EncodeCache& cache, const VecX& upstream,
                     EncoderParams& grads);

}  // namespace kgagent
