#include "kgagent/ontology.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

#include "kgagent/errors.hpp"
#include "kgagent/vocab.hpp"

namespace kgagent {

const PredicateSpec* Ontology::find_predicate(const std::string& iri) const {
  for (const auto& p : predicates) {
    if (p.iri == iri) return &p;
  }
  return nullptr;
}

bool Ontology::has_type(const std::string& iri) const {
  return std::find(types.begin(), types.end(), iri) != types.end();
}

void Ontology::add_instance(const std::string& inst, const std::string& type) {
  const auto entry = std::make_pair(inst, type);
  if (std::find(instances.begin(), instances.end(), entry) == instances.end()) {
    instances.push_back(entry);
  }
}

std::vector<Quad> Ontology::bootstrap_quads() const {
  const Term graph = iri(std::string(vocab::kOntologyGraph));
  std::vector<Quad> out;
  for (const auto& t : types) {
    out.push_back(Quad{iri(t), iri(std::string(vocab::kRdfType)),
                       iri(std::string(vocab::kRdfsClass)), graph});
  }
  for (const auto& p : predicates) {
    out.push_back(Quad{iri(p.iri), iri(std::string(vocab::kRdfsDomain)),
                       iri(p.domain_type), graph});
    out.push_back(Quad{iri(p.iri), iri(std::string(vocab::kRdfsRange)),
                       iri(p.range_type), graph});
    if (p.single_valued) {
      out.push_back(Quad{iri(p.iri), iri(std::string(vocab::kOwlCardinality)),
                         lit("1", std::string(vocab::kXsdInt)), graph});
    }
  }
  return out;
}

nlohmann::json Ontology::to_json() const {
  nlohmann::json preds = nlohmann::json::array();
  for (const auto& p : predicates) {
    preds.push_back({{"iri", p.iri},
                     {"domain", p.domain_type},
                     {"range", p.range_type},
                     {"single_valued", p.single_valued}});
  }
  nlohmann::json insts = nlohmann::json::array();
  for (const auto& [inst, type] : instances) {
    insts.push_back({{"iri", inst}, {"type", type}});
  }
  return {{"types", types}, {"predicates", preds}, {"instances", insts}};
}

Ontology Ontology::from_json(const nlohmann::json& j) {
  try {
    Ontology ont;
    ont.types = j.at("types").get<std::vector<std::string>>();
    for (const auto& p : j.at("predicates")) {
      ont.predicates.push_back(PredicateSpec{p.at("iri").get<std::string>(),
                                             p.at("domain").get<std::string>(),
                                             p.at("range").get<std::string>(),
                                             p.value("single_valued", false)});
    }
    for (const auto& e : j.at("instances")) {
      ont.instances.emplace_back(e.at("iri").get<std::string>(),
                                 e.at("type").get<std::string>());
    }
    return ont;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("ontology json: ") + e.what());
  }
}

}  // namespace kgagent
