#include "kgagent/belief.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "kgagent/errors.hpp"

namespace kgagent {

namespace {

Term T(std::string_view sv) { return iri(std::string(sv)); }

TriplePattern row(Term s, Term p, Term o, Term g, Subgraph where = Subgraph::Any) {
  return TriplePattern{std::move(s), std::move(p), std::move(o), std::move(g), where};
}

}  // namespace

InteractionGraph build_interaction_graph(const Capsule& c, const std::string& chat_id,
                                         int turn_no) {
  validate_capsule(c);
  if (chat_id.empty()) throw MalformedCapsuleError("empty chat id");

  InteractionGraph ig;
  ig.subject = c.subject;
  ig.predicate = c.predicate;
  ig.object = c.object;
  ig.source = c.source;
  ig.polarity = c.polarity;
  ig.certainty = c.certainty;
  ig.sentiment = c.sentiment;
  ig.claim_iri = claim_graph_iri(c.subject, c.predicate, c.object);
  ig.turn_iri = turn_iri(chat_id, turn_no);
  ig.mention_iri = mention_iri(ig.turn_iri);
  ig.attribution_iri = attribution_iri(ig.mention_iri);

  const Term claim_g = iri(ig.claim_iri);
  const Term turn = iri(ig.turn_iri);
  const Term mention = iri(ig.mention_iri);
  const Term attribution = iri(ig.attribution_iri);
  const Term interactions = T(vocab::kInteractionsGraph);
  const Term perspectives = T(vocab::kPerspectivesGraph);

  ig.quads = {
      {c.subject, c.predicate, c.object, claim_g},
      {turn, T(vocab::kRdfType), T(vocab::kTurnClass), interactions},
      {turn, T(vocab::kHasActor), iri(c.source), interactions},
      {turn, T(vocab::kHasTime), iri(time_iri(c.timestamp)), interactions},
      {mention, T(vocab::kRdfType), T(vocab::kMentionClass), perspectives},
      {mention, T(vocab::kDenotes), claim_g, perspectives},
      {mention, T(vocab::kWasDerivedFrom), turn, perspectives},
      {mention, T(vocab::kHasAttribution), attribution, perspectives},
      {attribution, T(vocab::kRdfType), T(vocab::kAttributionClass), perspectives},
      {attribution, T(vocab::kRdfValue), polarity_term(c.polarity), perspectives},
      {attribution, T(vocab::kRdfValue), certainty_term(c.certainty), perspectives},
  };
  if (c.sentiment) {
    ig.quads.push_back(
        {attribution, T(vocab::kRdfValue), sentiment_term(*c.sentiment), perspectives});
  }
  return ig;
}

BeliefGraph::BeliefGraph(Ontology ontology) : ontology_(std::move(ontology)) {
  for (const Quad& q : ontology_.bootstrap_quads()) store_.insert(q);
}

void BeliefGraph::reset() {
  store_.clear();
  for (const Quad& q : ontology_.bootstrap_quads()) store_.insert(q);
}

void BeliefGraph::adopt_store(QuadStore replacement) { store_ = std::move(replacement); }

bool BeliefGraph::integrate(const InteractionGraph& ig) {
  bool duplicate = false;
  for (const Perspective& p : perspectives_of(ig.claim_iri)) {
    if (p.source == ig.source && p.polarity && *p.polarity == ig.polarity) {
      duplicate = true;
      break;
    }
  }

  // The claim itself and the typing it implies are source-independent.
  for (const Quad& q : ig.quads) {
    if (classify_graph(q.g.value) == Subgraph::Claims) store_.insert(q);
  }
  if (const PredicateSpec* spec = ontology_.find_predicate(ig.predicate.value)) {
    const Term instances = T(vocab::kInstancesGraph);
    store_.insert(Quad{ig.subject, T(vocab::kRdfType), iri(spec->domain_type), instances});
    if (is_iri(ig.object)) {
      store_.insert(Quad{ig.object, T(vocab::kRdfType), iri(spec->range_type), instances});
    }
  }

  if (duplicate) return false;
  for (const Quad& q : ig.quads) store_.insert(q);
  return true;
}

std::vector<std::string> BeliefGraph::claim_iris() const {
  std::set<std::string> seen;
  store_.for_each([&](const Quad& q) {
    if (classify_graph(q.g.value) == Subgraph::Claims) seen.insert(q.g.value);
  });
  return {seen.begin(), seen.end()};
}

std::vector<std::string> BeliefGraph::attribution_iris() const {
  std::set<std::string> seen;
  for (const Binding& b : store_.match({row(var("?a"), T(vocab::kRdfType),
                                            T(vocab::kAttributionClass), var("?g"),
                                            Subgraph::Perspectives)})) {
    seen.insert(b.at("?a").value);
  }
  return {seen.begin(), seen.end()};
}

std::optional<std::array<Term, 3>> BeliefGraph::claim_triple(
    const std::string& claim_iri) const {
  const auto rows =
      store_.match({row(var("?s"), var("?p"), var("?o"), iri(claim_iri))});
  if (rows.empty()) return std::nullopt;
  const Binding& b = rows.front();
  return std::array<Term, 3>{b.at("?s"), b.at("?p"), b.at("?o")};
}

std::vector<BeliefGraph::Perspective> BeliefGraph::perspectives_of(
    const std::string& claim_iri) const {
  std::vector<Perspective> out;
  const auto mentions = store_.match(
      {row(var("?m"), T(vocab::kDenotes), iri(claim_iri), var("?g"), Subgraph::Perspectives)});
  for (const Binding& mb : mentions) {
    const Term mention = mb.at("?m");
    const auto attrs = store_.match(
        {row(mention, T(vocab::kHasAttribution), var("?a"), var("?g"), Subgraph::Perspectives)});
    const auto turns = store_.match(
        {row(mention, T(vocab::kWasDerivedFrom), var("?t"), var("?g"), Subgraph::Perspectives)});

    Perspective base;
    base.mention = mention.value;
    if (!turns.empty()) {
      base.turn = turns.front().at("?t").value;
      const auto actors = store_.match({row(iri(base.turn), T(vocab::kHasActor), var("?src"),
                                            var("?g"), Subgraph::Interactions)});
      if (!actors.empty()) base.source = actors.front().at("?src").value;
    }
    for (const Binding& ab : attrs) {
      Perspective p = base;
      p.attribution = ab.at("?a").value;
      for (const Binding& vb : store_.match({row(iri(p.attribution), T(vocab::kRdfValue),
                                                 var("?v"), var("?g"),
                                                 Subgraph::Perspectives)})) {
        const Term& v = vb.at("?v");
        if (const auto pol = polarity_from_term(v)) p.polarity = *pol;
        if (const auto cer = certainty_from_term(v)) p.certainty = *cer;
        if (const auto sen = sentiment_from_term(v)) p.sentiment = *sen;
      }
      out.push_back(std::move(p));
    }
    if (attrs.empty()) out.push_back(base);  // corrupted scaffold still reported
  }
  return out;
}

int BeliefGraph::conflict_count() const {
  int conflicts = 0;

  const auto claims = claim_iris();
  for (const std::string& claim : claims) {
    bool pos = false, neg = false;
    for (const Perspective& p : perspectives_of(claim)) {
      if (p.polarity == Polarity::Positive) pos = true;
      if (p.polarity == Polarity::Negative) neg = true;
    }
    if (pos && neg) ++conflicts;
  }

  std::set<std::string> single_valued;
  for (const Binding& b : store_.match({row(var("?p"), T(vocab::kOwlCardinality),
                                            lit("1", std::string(vocab::kXsdInt)),
                                            T(vocab::kOntologyGraph))})) {
    single_valued.insert(b.at("?p").value);
  }
  std::map<std::pair<std::string, std::string>, std::set<std::string>> values;
  for (const std::string& claim : claims) {
    const auto triple = claim_triple(claim);
    if (!triple) continue;
    const auto& [s, p, o] = *triple;
    if (single_valued.count(p.value)) {
      values[{to_string(s), p.value}].insert(to_string(o));
    }
  }
  for (const auto& [key, objects] : values) {
    if (objects.size() >= 2) ++conflicts;
  }
  return conflicts;
}

std::vector<std::string> BeliefGraph::types_of(const Term& entity) const {
  std::vector<std::string> out;
  if (!is_iri(entity)) return out;
  for (const Binding& b : store_.match({row(entity, T(vocab::kRdfType), var("?t"),
                                            T(vocab::kInstancesGraph))})) {
    out.push_back(b.at("?t").value);
  }
  return out;  // match output is already sorted and deduplicated
}

std::vector<std::string> BeliefGraph::structural_issues() const {
  std::vector<std::string> issues;
  const auto complain = [&](const std::string& what) { issues.push_back(what); };

  std::map<std::string, std::size_t> claim_sizes;
  std::set<std::string> denoted;
  store_.for_each([&](const Quad& q) {
    if (classify_graph(q.g.value) == Subgraph::Claims) ++claim_sizes[q.g.value];
  });

  const auto mentions = store_.match({row(var("?m"), T(vocab::kRdfType),
                                          T(vocab::kMentionClass), var("?g"),
                                          Subgraph::Perspectives)});
  for (const Binding& mb : mentions) {
    const Term mention = mb.at("?m");
    const auto targets = store_.match(
        {row(mention, T(vocab::kDenotes), var("?c"), var("?g"), Subgraph::Perspectives)});
    if (targets.empty()) complain("mention without denotes: " + mention.value);
    for (const Binding& tb : targets) {
      const std::string target = tb.at("?c").value;
      denoted.insert(target);
      if (!claim_sizes.count(target)) {
        complain("mention denotes a missing claim graph: " + mention.value + " -> " + target);
      }
    }
    if (!store_.any_match({row(mention, T(vocab::kHasAttribution), var("?a"), var("?g"),
                               Subgraph::Perspectives)})) {
      complain("mention without attribution: " + mention.value);
    }
    const auto turns = store_.match(
        {row(mention, T(vocab::kWasDerivedFrom), var("?t"), var("?g"), Subgraph::Perspectives)});
    if (turns.empty()) {
      complain("mention without a source turn: " + mention.value);
    } else {
      for (const Binding& tb : turns) {
        if (!store_.contains(Quad{tb.at("?t"), T(vocab::kRdfType), T(vocab::kTurnClass),
                                  T(vocab::kInteractionsGraph)})) {
          complain("mention derived from an untyped turn: " + mention.value);
        }
      }
    }
  }

  for (const std::string& attribution : attribution_iris()) {
    bool recognized = false;
    for (const Binding& vb : store_.match({row(iri(attribution), T(vocab::kRdfValue),
                                               var("?v"), var("?g"),
                                               Subgraph::Perspectives)})) {
      const Term& v = vb.at("?v");
      if (polarity_from_term(v) || certainty_from_term(v) || sentiment_from_term(v)) {
        recognized = true;
      }
    }
    if (!recognized) complain("attribution without perspective values: " + attribution);
  }

  for (const auto& [claim, quad_count] : claim_sizes) {
    if (quad_count != 1) {
      complain("claim graph with " + std::to_string(quad_count) + " statements: " + claim);
    }
    if (!denoted.count(claim)) complain("claim never mentioned: " + claim);
  }
  return issues;
}

}  // namespace kgagent
