#include "kgagent/desire.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <set>

#include "kgagent/errors.hpp"

namespace kgagent {

namespace {

Term T(std::string_view sv) { return iri(std::string(sv)); }

TriplePattern row(Term s, Term p, Term o, Term g, Subgraph where = Subgraph::Any) {
  return TriplePattern{std::move(s), std::move(p), std::move(o), std::move(g), where};
}

bool instance_less(const DesireInstance& a, const DesireInstance& b) {
  if (a.pattern != b.pattern) return static_cast<int>(a.pattern) < static_cast<int>(b.pattern);
  return a.bindings < b.bindings;
}

// Entity types of the anchor's subject and object, merged and sorted.
std::vector<std::string> anchor_types(const BeliefGraph& ekg, const Term& s, const Term& o) {
  std::set<std::string> types;
  for (const auto& t : ekg.types_of(s)) types.insert(t);
  for (const auto& t : ekg.types_of(o)) types.insert(t);
  return {types.begin(), types.end()};
}

std::vector<std::pair<std::string, Term>> anchor_bindings(const InteractionGraph& ikg) {
  return {{"claim", iri(ikg.claim_iri)},
          {"object", ikg.object},
          {"predicate", ikg.predicate},
          {"subject", ikg.subject}};
}

}  // namespace

KnowledgeAspect aspect_of(AbstractPattern p) {
  switch (p) {
    case AbstractPattern::NegationConflict:
    case AbstractPattern::CardinalityConflict:
      return KnowledgeAspect::Correctness;
    case AbstractPattern::SubjectGap:
    case AbstractPattern::ObjectGap:
      return KnowledgeAspect::Completeness;
    case AbstractPattern::StatementNovelty:
    case AbstractPattern::EntityNovelty:
      return KnowledgeAspect::Redundancy;
    case AbstractPattern::SubjectOverlap:
    case AbstractPattern::ObjectOverlap:
      return KnowledgeAspect::Interconnectedness;
  }
  throw Error("unhandled pattern");
}

std::string to_string(AbstractPattern p) {
  switch (p) {
    case AbstractPattern::NegationConflict: return "negation-conflict";
    case AbstractPattern::CardinalityConflict: return "cardinality-conflict";
    case AbstractPattern::SubjectGap: return "subject-gap";
    case AbstractPattern::ObjectGap: return "object-gap";
    case AbstractPattern::StatementNovelty: return "statement-novelty";
    case AbstractPattern::EntityNovelty: return "entity-novelty";
    case AbstractPattern::SubjectOverlap: return "subject-overlap";
    case AbstractPattern::ObjectOverlap: return "object-overlap";
  }
  throw Error("unhandled pattern");
}

std::string to_string(KnowledgeAspect a) {
  switch (a) {
    case KnowledgeAspect::Correctness: return "correctness";
    case KnowledgeAspect::Completeness: return "completeness";
    case KnowledgeAspect::Redundancy: return "redundancy";
    case KnowledgeAspect::Interconnectedness: return "interconnectedness";
  }
  throw Error("unhandled aspect");
}

AbstractPattern pattern_from_string(const std::string& name) {
  for (int i = 0; i < kNumPatterns; ++i) {
    const auto p = static_cast<AbstractPattern>(i);
    if (to_string(p) == name) return p;
  }
  throw ParseError("unknown pattern: '" + name + "'");
}

const Term* DesireInstance::binding(const std::string& slot) const {
  for (const auto& [name, term] : bindings) {
    if (name == slot) return &term;
  }
  return nullptr;
}

nlohmann::json DesireInstance::to_json() const {
  nlohmann::json b = nlohmann::json::object();
  for (const auto& [name, term] : bindings) b[name] = to_string(term);
  nlohmann::json j{{"pattern", to_string(pattern)},
                   {"bindings", std::move(b)},
                   {"involved_types", involved_types}};
  if (free_slot) j["free_slot"] = *free_slot;
  return j;
}

std::vector<DesireInstance> generate_desires(const BeliefGraph& ekg,
                                             const InteractionGraph& ikg, std::size_t cap) {
  const QuadStore& store = ekg.store();
  const Term subject = ikg.subject;
  const Term object = ikg.object;
  const Term predicate = ikg.predicate;
  const Term claim = iri(ikg.claim_iri);
  const Term persp = T(vocab::kPerspectivesGraph);
  const Term ontology = T(vocab::kOntologyGraph);
  const Term instances = T(vocab::kInstancesGraph);

  std::vector<DesireInstance> out;
  const bool anchored = store.contains(Quad{subject, predicate, object, claim});

  const auto add = [&](AbstractPattern pattern,
                       std::vector<std::pair<std::string, Term>> bindings,
                       std::vector<std::string> involved,
                       std::optional<std::string> free_slot) {
    out.push_back(DesireInstance{pattern, std::move(bindings), std::move(involved),
                                 std::move(free_slot)});
  };

  if (anchored) {
    const auto base_types = anchor_types(ekg, subject, object);

    // Negation Conflict: the claim carries both a positive and a negative
    // attribution, each through its own mention chain.
    if (store.any_match({
            row(var("?m1"), T(vocab::kDenotes), claim, persp, Subgraph::Perspectives),
            row(var("?m1"), T(vocab::kHasAttribution), var("?a1"), persp, Subgraph::Perspectives),
            row(var("?a1"), T(vocab::kRdfValue), T(vocab::kPolarityPositive), persp,
                Subgraph::Perspectives),
            row(var("?m2"), T(vocab::kDenotes), claim, persp, Subgraph::Perspectives),
            row(var("?m2"), T(vocab::kHasAttribution), var("?a2"), persp, Subgraph::Perspectives),
            row(var("?a2"), T(vocab::kRdfValue), T(vocab::kPolarityNegative), persp,
                Subgraph::Perspectives),
        })) {
      add(AbstractPattern::NegationConflict, anchor_bindings(ikg), base_types, std::nullopt);
    }

    // Cardinality Conflict: single-valued predicate, and some other claim gives
    // the same subject a second object.
    {
      bool fires = false;
      if (store.contains(Quad{predicate, T(vocab::kOwlCardinality),
                              lit("1", std::string(vocab::kXsdInt)), ontology})) {
        for (const Binding& b : store.match({row(subject, predicate, var("?o2"), var("?c2"),
                                                 Subgraph::Claims)})) {
          if (b.at("?o2") != object) {
            fires = true;
            break;
          }
        }
      }
      if (fires) {
        add(AbstractPattern::CardinalityConflict, anchor_bindings(ikg), base_types, "object");
      }
    }

    // Gap patterns: a predicate applicable to the entity's type whose value is
    // not yet claimed for that entity.
    const auto gaps = [&](const Term& entity, AbstractPattern pattern) {
      for (const Binding& b : store.match({
               row(entity, T(vocab::kRdfType), var("?t1"), instances, Subgraph::Instances),
               row(var("?p2"), T(vocab::kRdfsDomain), var("?t1"), ontology, Subgraph::Ontology),
               row(var("?p2"), T(vocab::kRdfsRange), var("?t2"), ontology, Subgraph::Ontology),
           })) {
        const Term& p2 = b.at("?p2");
        if (store.any_match({row(entity, p2, var("?any"), var("?c"), Subgraph::Claims)})) {
          continue;  // already filled — not a gap
        }
        std::set<std::string> pair_types{b.at("?t1").value, b.at("?t2").value};
        add(pattern,
            {{"domain_type", b.at("?t1")},
             {"predicate", p2},
             {"range_type", b.at("?t2")},
             {"subject", entity}},
            {pair_types.begin(), pair_types.end()}, "object");
      }
    };
    gaps(subject, AbstractPattern::SubjectGap);
    if (is_iri(object)) gaps(object, AbstractPattern::ObjectGap);

    // Statement Novelty: the claim is denoted by two distinct mentions.
    {
      bool fires = false;
      for (const Binding& b : store.match({
               row(var("?m1"), T(vocab::kDenotes), claim, persp, Subgraph::Perspectives),
               row(var("?m2"), T(vocab::kDenotes), claim, persp, Subgraph::Perspectives),
           })) {
        if (b.at("?m1") != b.at("?m2")) {
          fires = true;
          break;
        }
      }
      if (fires) {
        add(AbstractPattern::StatementNovelty, anchor_bindings(ikg), base_types, std::nullopt);
      }
    }

    // Entity Novelty: an anchor entity occurs in ≥ 2 distinct mentions
    // (counting every claim the entity appears in, either position).
    {
      std::vector<Term> entities{subject};
      if (is_iri(object) && object != subject) entities.push_back(object);
      for (const Term& entity : entities) {
        std::set<Term> mentions;
        for (const Binding& b : store.match({
                 row(entity, var("?p"), var("?o"), var("?c"), Subgraph::Claims),
                 row(var("?m"), T(vocab::kDenotes), var("?c"), persp, Subgraph::Perspectives),
             })) {
          mentions.insert(b.at("?m"));
        }
        for (const Binding& b : store.match({
                 row(var("?s"), var("?p"), entity, var("?c"), Subgraph::Claims),
                 row(var("?m"), T(vocab::kDenotes), var("?c"), persp, Subgraph::Perspectives),
             })) {
          mentions.insert(b.at("?m"));
        }
        if (mentions.size() >= 2) {
          add(AbstractPattern::EntityNovelty, {{"entity", entity}},
              ekg.types_of(entity), std::nullopt);
        }
      }
    }

    // Subject Overlap: same subject and predicate, different object.
    for (const Binding& b :
         store.match({row(subject, predicate, var("?o2"), var("?c2"), Subgraph::Claims)})) {
      if (b.at("?o2") != object) {
        add(AbstractPattern::SubjectOverlap, anchor_bindings(ikg), base_types, std::nullopt);
        break;
      }
    }

    // Object Overlap: same predicate and object, different subject.
    for (const Binding& b :
         store.match({row(var("?s2"), predicate, object, var("?c2"), Subgraph::Claims)})) {
      if (b.at("?s2") != subject) {
        add(AbstractPattern::ObjectOverlap, anchor_bindings(ikg), base_types, std::nullopt);
        break;
      }
    }
  }

  std::sort(out.begin(), out.end(), instance_less);
  out.erase(std::unique(out.begin(), out.end(),
                        [](const DesireInstance& a, const DesireInstance& b) {
                          return a.pattern == b.pattern && a.bindings == b.bindings;
                        }),
            out.end());
  if (out.empty()) {
    // Degenerate state (nothing instantiates): keep the action set non-empty.
    out.push_back(DesireInstance{AbstractPattern::EntityNovelty,
                                 {{"entity", subject}},
                                 ekg.types_of(subject),
                                 std::nullopt});
  }
  if (out.size() > cap) out.resize(cap);
  return out;
}

PatternQuery render_user_query(const DesireInstance& d) {
  const Term persp = T(vocab::kPerspectivesGraph);
  switch (d.pattern) {
    case AbstractPattern::SubjectGap:
    case AbstractPattern::ObjectGap:
    case AbstractPattern::CardinalityConflict: {
      const Term* s = d.binding("subject");
      const Term* p = d.binding("predicate");
      if (s == nullptr || p == nullptr) throw Error("gap desire without subject/predicate");
      return {row(*s, *p, var("?object"), var("?claim"), Subgraph::Claims)};
    }
    case AbstractPattern::EntityNovelty: {
      const Term* e = d.binding("entity");
      if (e == nullptr) throw Error("entity-novelty desire without entity");
      return {row(*e, var("?predicate"), var("?object"), var("?claim"), Subgraph::Claims)};
    }
    default: {
      const Term* c = d.binding("claim");
      if (c == nullptr) throw Error("perspective desire without claim");
      return {
          row(var("?mention"), T(vocab::kDenotes), *c, persp, Subgraph::Perspectives),
          row(var("?mention"), T(vocab::kHasAttribution), var("?attribution"), persp,
              Subgraph::Perspectives),
      };
    }
  }
}

}  // namespace kgagent
