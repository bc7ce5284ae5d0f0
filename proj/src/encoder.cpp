#include "kgagent/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "kgagent/errors.hpp"
#include "kgagent/rand.hpp"
#include "kgagent/vocab.hpp"

namespace kgagent {

namespace {

Term T(std::string_view sv) { return iri(std::string(sv)); }

TriplePattern row(Term s, Term p, Term o, Term g, Subgraph where = Subgraph::Any) {
  return TriplePattern{std::move(s), std::move(p), std::move(o), std::move(g), where};
}

}  // namespace

SimplifiedGraph simplify(const BeliefGraph& ekg) {
  using Node = SimplifiedGraph::Node;
  using Role = SimplifiedGraph::Role;

  std::set<Node> nodes;
  struct Pending {
    Node from, to;
    int relation;
  };
  std::vector<Pending> pending;

  for (const std::string& claim : ekg.claim_iris()) {
    const auto triple = ekg.claim_triple(claim);
    if (!triple) continue;
    const auto& [s, p, o] = *triple;

    const Node claim_node{Role::Claim, claim};
    const Node subject_node{Role::Instance, s.value};
    nodes.insert(claim_node);
    nodes.insert(subject_node);
    pending.push_back({subject_node, claim_node, SimplifiedGraph::kSubjectToClaim});
    if (is_iri(o)) {
      const Node object_node{Role::Instance, o.value};
      nodes.insert(object_node);
      pending.push_back({claim_node, object_node, SimplifiedGraph::kClaimToObject});
    }

    // Each stored perspective value on the claim becomes (or reuses) a node.
    const auto values = ekg.store().match(
        {row(var("?m"), T(vocab::kDenotes), iri(claim), var("?g1"), Subgraph::Perspectives),
         row(var("?m"), T(vocab::kHasAttribution), var("?a"), var("?g2"),
             Subgraph::Perspectives),
         row(var("?a"), T(vocab::kRdfValue), var("?v"), var("?g3"),
             Subgraph::Perspectives)});
    for (const Binding& b : values) {
      const Term& v = b.at("?v");
      if (!is_iri(v)) continue;
      const Node value_node{Role::PerspectiveValue, v.value};
      nodes.insert(value_node);
      pending.push_back({claim_node, value_node, SimplifiedGraph::kClaimToValue});
    }
  }

  SimplifiedGraph g;
  g.nodes.assign(nodes.begin(), nodes.end());
  std::map<Node, int> index;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    index.emplace(g.nodes[i], static_cast<int>(i));
  }
  std::set<SimplifiedGraph::Edge> edges;
  for (const Pending& e : pending) {
    edges.insert({index.at(e.from), index.at(e.to), e.relation});
  }
  g.edges.assign(edges.begin(), edges.end());
  return g;
}

int FeatureVocab::index_of(const SimplifiedGraph::Node& node) const {
  switch (node.role) {
    case SimplifiedGraph::Role::Claim:
      return 0;  // claims carry no identity of their own
    case SimplifiedGraph::Role::PerspectiveValue: {
      static const std::map<std::string_view, int> kValueSlots = {
          {vocab::kPolarityPositive, 1},   {vocab::kPolarityNegative, 2},
          {vocab::kCertaintyCertain, 3},   {vocab::kCertaintyUncertain, 4},
          {vocab::kSentimentPositive, 5},  {vocab::kSentimentNegative, 6},
          {vocab::kSentimentNeutral, 7},
      };
      const auto it = kValueSlots.find(node.iri);
      return it == kValueSlots.end() ? 0 : it->second;
    }
    case SimplifiedGraph::Role::Instance: {
      const auto it = std::lower_bound(instances.begin(), instances.end(), node.iri);
      if (it != instances.end() && *it == node.iri) {
        return 8 + static_cast<int>(it - instances.begin());
      }
      return 0;  // novel entity
    }
  }
  return 0;
}

FeatureVocab FeatureVocab::from_ontology(const Ontology& ont) {
  FeatureVocab v;
  for (const auto& [instance_iri, type] : ont.instances) {
    v.instances.push_back(instance_iri);
  }
  std::sort(v.instances.begin(), v.instances.end());
  v.instances.erase(std::unique(v.instances.begin(), v.instances.end()),
                    v.instances.end());
  return v;
}

EncoderParams EncoderParams::init(int feature_dim, int hidden, std::mt19937& rng) {
  EncoderParams p;
  const auto fill = [&rng](MatX& m, int fan_in) {
    const Real bound = 1.0 / std::sqrt(static_cast<Real>(fan_in));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        m(i, j) = draw_range(rng, -bound, bound);
      }
    }
  };
  for (int layer = 0; layer < 2; ++layer) {
    const int in = layer == 0 ? feature_dim : hidden;
    p.weights[layer].resize(kNumRelations);
    p.attention[layer].resize(kNumRelations);
    for (int rel = 0; rel < kNumRelations; ++rel) {
      p.weights[layer][rel].resize(hidden, in);
      fill(p.weights[layer][rel], in);
      p.attention[layer][rel].resize(2 * hidden, 1);
      fill(p.attention[layer][rel], 2 * hidden);
    }
  }
  p.dense_w.resize(hidden, hidden);
  fill(p.dense_w, hidden);
  p.dense_b = MatX::Zero(hidden, 1);
  return p;
}

EncoderParams EncoderParams::zeros_like(const EncoderParams& shape) {
  EncoderParams z = shape;
  for_each_tensor(z, [](const std::string&, MatX& m) { m.setZero(); });
  return z;
}

VecX encode(const SimplifiedGraph& graph, const FeatureVocab& vocab,
            const EncoderParams& params, EncodeCache* cache) {
  const int hidden = params.hidden_dim();
  const int feature_dim = params.feature_dim();
  if (vocab.size() != feature_dim) {
    throw ShapeMismatchError("feature vocabulary holds " +
                             std::to_string(vocab.size()) + " slots, encoder expects " +
                             std::to_string(feature_dim));
  }

  EncodeCache local;
  EncodeCache& c = cache ? *cache : local;
  c = EncodeCache{};

  const int n = static_cast<int>(graph.nodes.size());
  if (n == 0) return VecX::Zero(hidden);
  c.node_count = n;

  c.features = MatX::Zero(feature_dim, n);
  for (int i = 0; i < n; ++i) {
    c.features(vocab.index_of(graph.nodes[static_cast<std::size_t>(i)]), i) = 1.0;
  }

  // Attention neighborhoods, shared by both layers: (target, relation) →
  // ordered in-neighbors, plus one self-loop per node.
  std::map<std::pair<int, int>, std::vector<int>> neighborhoods;
  for (const SimplifiedGraph::Edge& e : graph.edges) {
    neighborhoods[{e.to, e.relation}].push_back(e.from);
  }
  for (int i = 0; i < n; ++i) {
    neighborhoods[{i, SimplifiedGraph::kSelfLoop}].push_back(i);
  }

  MatX h = c.features;
  for (int layer = 0; layer < 2; ++layer) {
    auto& z = c.z[layer];
    z.resize(kNumRelations);
    for (int rel = 0; rel < kNumRelations; ++rel) {
      z[rel] = params.weights[layer][rel] * h;
    }

    MatX summed = MatX::Zero(hidden, n);
    for (const auto& [key, sources] : neighborhoods) {
      const auto& [target, rel] = key;
      EncodeCache::Group group;
      group.target = target;
      group.relation = rel;
      group.sources = sources;
      const int fanin = static_cast<int>(sources.size());
      group.score.resize(fanin);

      const auto attn = params.attention[layer][rel].col(0);
      const Real target_part = attn.head(hidden).dot(z[rel].col(target));
      for (int k = 0; k < fanin; ++k) {
        group.score[k] = target_part + attn.tail(hidden).dot(z[rel].col(sources[k]));
      }
      VecX scored(fanin);
      for (int k = 0; k < fanin; ++k) {
        const Real s = group.score[k];
        scored[k] = s > 0 ? s : 0.2 * s;  // leaky rectifier on the logit
      }
      const VecX shifted = (scored.array() - scored.maxCoeff()).exp();
      group.alpha = shifted / shifted.sum();

      for (int k = 0; k < fanin; ++k) {
        summed.col(target) += group.alpha[k] * z[rel].col(sources[k]);
      }
      c.groups[layer].push_back(std::move(group));
    }

    c.pre_activation[layer] = summed;
    h = summed.cwiseMax(0.0);
    c.activated[layer] = h;
  }

  MatX readout = params.dense_w * h;
  readout.colwise() += VecX(params.dense_b.col(0));
  return readout.rowwise().mean();
}

void encode_backward(const SimplifiedGraph& graph, const EncoderParams& params,
                     const EncodeCache& cache, const VecX& upstream,
                     EncoderParams& grads) {
  (void)graph;  // the cache already carries the wiring
  const int n = cache.node_count;
  if (n == 0) return;  // nothing was used, nothing gets gradient
  const int hidden = params.hidden_dim();
  if (upstream.size() != hidden) {
    throw ShapeMismatchError("upstream gradient of length " +
                             std::to_string(upstream.size()) + ", state is " +
                             std::to_string(hidden));
  }

  // state = mean of dense columns.
  const VecX per_node = upstream / static_cast<Real>(n);
  const MatX d_readout = per_node.replicate(1, n);
  grads.dense_b.col(0) += upstream;
  grads.dense_w += d_readout * cache.activated[1].transpose();
  MatX d_h = params.dense_w.transpose() * d_readout;

  for (int layer = 1; layer >= 0; --layer) {
    const MatX mask =
        (cache.pre_activation[layer].array() > 0.0).cast<Real>().matrix();
    const MatX d_summed = d_h.cwiseProduct(mask);

    std::vector<MatX> d_z(kNumRelations, MatX::Zero(hidden, n));
    for (const EncodeCache::Group& group : cache.groups[layer]) {
      const int target = group.target;
      const int rel = group.relation;
      const MatX& z = cache.z[layer][rel];
      const int fanin = static_cast<int>(group.sources.size());

      const VecX d_target = d_summed.col(target);
      VecX d_alpha(fanin);
      for (int k = 0; k < fanin; ++k) {
        d_alpha[k] = d_target.dot(z.col(group.sources[k]));
        d_z[rel].col(group.sources[k]) += group.alpha[k] * d_target;
      }

      // Softmax: d_e = alpha ⊙ (d_alpha − <alpha, d_alpha>).
      const Real mixed = group.alpha.dot(d_alpha);
      VecX d_score(fanin);
      for (int k = 0; k < fanin; ++k) {
        const Real d_e = group.alpha[k] * (d_alpha[k] - mixed);
        d_score[k] = group.score[k] > 0 ? d_e : 0.2 * d_e;
      }

      const auto attn = params.attention[layer][rel].col(0);
      const Real total = d_score.sum();
      grads.attention[layer][rel].col(0).head(hidden) += total * z.col(target);
      d_z[rel].col(target) += total * attn.head(hidden);
      for (int k = 0; k < fanin; ++k) {
        grads.attention[layer][rel].col(0).tail(hidden) +=
            d_score[k] * z.col(group.sources[k]);
        d_z[rel].col(group.sources[k]) += d_score[k] * attn.tail(hidden);
      }
    }

    const MatX& layer_input = layer == 0 ? cache.features : cache.activated[0];
    MatX d_input = MatX::Zero(layer_input.rows(), n);
    for (int rel = 0; rel < kNumRelations; ++rel) {
      grads.weights[layer][rel] += d_z[rel] * layer_input.transpose();
      d_input += params.weights[layer][rel].transpose() * d_z[rel];
    }
    d_h = d_input;  // one-hot features absorb the final layer-0 gradient
  }
}

}  // namespace kgagent
