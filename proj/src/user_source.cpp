#include "kgagent/user_source.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "kgagent/errors.hpp"
#include "kgagent/nquads.hpp"
#include "kgagent/rand.hpp"
#include "kgagent/vocab.hpp"

namespace kgagent {

namespace {

Term T(std::string_view sv) { return iri(std::string(sv)); }

TriplePattern row(Term s, Term p, Term o, Term g, Subgraph where = Subgraph::Any) {
  return TriplePattern{std::move(s), std::move(p), std::move(o), std::move(g), where};
}

}  // namespace

std::string to_string(UserKind k) {
  switch (k) {
    case UserKind::Vanilla: return "vanilla";
    case UserKind::Amateur: return "amateur";
    case UserKind::Doubtful: return "doubtful";
    case UserKind::Incoherent: return "incoherent";
    case UserKind::Confused: return "confused";
  }
  throw Error("unhandled user kind");
}

UserKind user_kind_from_string(const std::string& name) {
  for (const UserKind k : {UserKind::Vanilla, UserKind::Amateur, UserKind::Doubtful,
                           UserKind::Incoherent, UserKind::Confused}) {
    if (to_string(k) == name) return k;
  }
  throw ParseError("unknown user kind: '" + name + "'");
}

namespace {

// Every quad a claim's provenance hangs on: the mentions denoting it, their
// attributions, and the attributions' value rows.
void erase_claim_and_scaffold(BeliefGraph& kb, const std::string& claim) {
  const auto mentions = kb.store().match({row(var("?m"), T(vocab::kDenotes),
                                              iri(claim), var("?g"),
                                              Subgraph::Perspectives)});
  for (const Binding& mb : mentions) {
    const Term mention = mb.at("?m");
    const auto attrs =
        kb.store().match({row(mention, T(vocab::kHasAttribution), var("?a"),
                              var("?g"), Subgraph::Perspectives)});
    for (const Binding& ab : attrs) {
      const Term attribution = ab.at("?a");
      kb.store().erase_if([&](const Quad& q) { return q.s == attribution; });
    }
    kb.store().erase_if([&](const Quad& q) { return q.s == mention; });
  }
  kb.store().erase_if([&](const Quad& q) { return q.g.value == claim; });
}

std::vector<std::string> attributions_of_claim(const BeliefGraph& kb,
                                               const std::string& claim) {
  std::vector<std::string> out;
  for (const auto& p : kb.perspectives_of(claim)) {
    if (!p.attribution.empty()) out.push_back(p.attribution);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Forces one grasp value family on an attribution: drop whatever value of
// that family is stored, insert the wanted one.
void set_attribution_value(BeliefGraph& kb, const std::string& attribution,
                           const Term& unwanted, const Term& wanted) {
  const Term subject = iri(attribution);
  const Term value_pred = T(vocab::kRdfValue);
  kb.store().erase_if([&](const Quad& q) {
    return q.s == subject && q.p == value_pred && (q.o == unwanted || q.o == wanted);
  });
  kb.store().insert(Quad{subject, value_pred, wanted, T(vocab::kPerspectivesGraph)});
}

}  // namespace

UserModel corrupt(const QuadStore& base, UserKind kind, std::uint32_t seed) {
  UserModel user;
  user.kind = kind;
  user.rng_seed = seed;
  user.source = "lFriends:" + to_string(kind) + "-" + std::to_string(seed);
  user.kb.adopt_store(base);

  if (kind == UserKind::Vanilla) return user;

  const std::vector<std::string> all_claims = user.kb.claim_iris();
  if (all_claims.empty()) {
    throw EmptyKnowledgeBaseError("cannot corrupt a store without claims");
  }

  std::mt19937 rng(seed);
  std::vector<std::string> selected = all_claims;  // sorted, so draw order is stable
  shuffle_in_place(selected, rng);
  selected.resize(all_claims.size() / 2);

  switch (kind) {
    case UserKind::Amateur:
      for (const std::string& claim : selected) {
        erase_claim_and_scaffold(user.kb, claim);
      }
      break;

    case UserKind::Doubtful:
      for (const std::string& claim : selected) {
        for (const std::string& a : attributions_of_claim(user.kb, claim)) {
          set_attribution_value(user.kb, a, certainty_term(Certainty::Certain),
                                certainty_term(Certainty::Uncertain));
        }
      }
      break;

    case UserKind::Incoherent:
      for (const std::string& claim : selected) {
        for (const std::string& a : attributions_of_claim(user.kb, claim)) {
          set_attribution_value(user.kb, a, polarity_term(Polarity::Positive),
                                polarity_term(Polarity::Negative));
        }
      }
      break;

    case UserKind::Confused: {
      // Replacement objects come from the base's global claim-object pool.
      std::set<Term> pool_set;
      base.for_each([&](const Quad& q) {
        if (classify_graph(q.g.value) == Subgraph::Claims) pool_set.insert(q.o);
      });
      const std::vector<Term> pool(pool_set.begin(), pool_set.end());
      std::set<std::string> current_claims(all_claims.begin(), all_claims.end());

      for (const std::string& claim : selected) {
        const auto triple = user.kb.claim_triple(claim);
        if (!triple) continue;  // already rewritten into another claim? never in practice
        const auto& [s, p, o] = *triple;

        // Skip the original and anything that would collide with a claim that
        // already exists — a swap must yield a different, new statement.
        std::vector<Term> candidates;
        for (const Term& alt : pool) {
          if (alt == o) continue;
          if (current_claims.count(claim_graph_iri(s, p, alt))) continue;
          candidates.push_back(alt);
        }
        if (candidates.empty()) {
          throw EmptyKnowledgeBaseError(
              "no distinct replacement object available for " + claim);
        }
        const Term swapped = candidates[draw_below(rng, candidates.size())];
        const std::string new_claim = claim_graph_iri(s, p, swapped);

        user.kb.store().erase(Quad{s, p, o, iri(claim)});
        user.kb.store().insert(Quad{s, p, swapped, iri(new_claim)});
        const auto mentions = user.kb.store().match(
            {row(var("?m"), T(vocab::kDenotes), iri(claim), var("?g"),
                 Subgraph::Perspectives)});
        for (const Binding& mb : mentions) {
          user.kb.store().erase(
              Quad{mb.at("?m"), T(vocab::kDenotes), iri(claim), T(vocab::kPerspectivesGraph)});
          user.kb.store().insert(
              Quad{mb.at("?m"), T(vocab::kDenotes), iri(new_claim), T(vocab::kPerspectivesGraph)});
        }
        current_claims.erase(claim);
        current_claims.insert(new_claim);
      }
      break;
    }

    case UserKind::Vanilla:
      break;  // handled above
  }
  return user;
}

namespace {

// "lTime:14012022" carries a dd-mm-yyyy date with the hyphens squeezed out;
// anything else is passed through as-is.
std::string timestamp_from_time_iri(const std::string& time_iri) {
  std::string token = time_iri;
  if (token.rfind(vocab::kTimeNs, 0) == 0) {
    token = token.substr(std::string(vocab::kTimeNs).size());
  }
  const bool digits8 =
      token.size() == 8 && std::all_of(token.begin(), token.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c));
      });
  if (digits8) {
    return token.substr(0, 2) + "-" + token.substr(2, 2) + "-" + token.substr(4, 4);
  }
  return token;
}

}  // namespace

Capsule answer(const UserModel& user, const PatternQuery& query, std::mt19937& rng) {
  const std::vector<std::string> claims = user.kb.claim_iris();
  if (claims.empty()) {
    throw EmptyKnowledgeBaseError("user " + user.source + " holds no claims");
  }

  std::string claim;
  std::string preferred_attribution;
  if (!query.empty()) {
    const auto results = user.kb.store().match(query);
    if (!results.empty()) {
      const Binding& b = user.answer_random_among_matches
                             ? results[draw_below(rng, results.size())]
                             : results.front();
      if (const auto it = b.find("?claim"); it != b.end()) {
        claim = it->second.value;
      } else {
        // Perspective-shaped queries name the claim as a constant.
        for (const TriplePattern& tp : query) {
          if (is_iri(tp.p) && tp.p.value == vocab::kDenotes && is_iri(tp.o)) {
            claim = tp.o.value;
            break;
          }
        }
      }
      if (const auto it = b.find("?attribution"); it != b.end()) {
        preferred_attribution = it->second.value;
      }
    }
  }
  if (claim.empty()) {
    claim = claims[draw_below(rng, claims.size())];  // keep the dialogue going
  }

  auto triple = user.kb.claim_triple(claim);
  if (!triple) {
    claim = claims[draw_below(rng, claims.size())];
    triple = user.kb.claim_triple(claim);
  }
  const auto& [s, p, o] = *triple;

  BeliefGraph::Perspective stored;
  const auto perspectives = user.kb.perspectives_of(claim);
  if (!perspectives.empty()) {
    stored = perspectives.front();
    if (!preferred_attribution.empty()) {
      for (const auto& candidate : perspectives) {
        if (candidate.attribution == preferred_attribution) {
          stored = candidate;
          break;
        }
      }
    }
  }

  std::string timestamp = "01-01-2024";
  if (!stored.turn.empty()) {
    const auto times = user.kb.store().match(
        {row(iri(stored.turn), T(vocab::kHasTime), var("?t"), var("?g"),
             Subgraph::Interactions)});
    if (!times.empty()) timestamp = timestamp_from_time_iri(times.front().at("?t").value);
  }

  Capsule c;
  c.source = user.source;
  c.timestamp = timestamp;
  c.subject = s;
  c.predicate = p;
  c.object = o;
  c.polarity = stored.polarity.value_or(Polarity::Positive);
  c.certainty = stored.certainty.value_or(Certainty::Certain);
  validate_capsule(c);
  return c;
}

std::string kb_fingerprint(const QuadStore& store) {
  const std::string text = to_nquads(store);
  std::uint64_t h = 14695981039346656037ULL;  // FNV-1a 64
  for (const unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void save_population(const std::string& dir, const std::vector<UserModel>& users,
                     const std::string& base_hash) {
  std::filesystem::create_directories(dir);
  nlohmann::json manifest;
  manifest["base_hash"] = base_hash;
  manifest["users"] = nlohmann::json::array();
  for (std::size_t i = 0; i < users.size(); ++i) {
    const UserModel& u = users[i];
    const std::string file = "user-" + std::to_string(i) + ".nq";
    save_nquads(u.kb.store(), (std::filesystem::path(dir) / file).string());
    manifest["users"].push_back({{"kind", to_string(u.kind)},
                                 {"seed", u.rng_seed},
                                 {"source", u.source},
                                 {"file", file}});
  }
  std::ofstream out(std::filesystem::path(dir) / "manifest.json");
  out << manifest.dump(2) << "\n";
  if (!out) throw Error("cannot write population manifest in " + dir);
}

std::vector<UserModel> load_population(const std::string& dir) {
  const auto manifest_path = std::filesystem::path(dir) / "manifest.json";
  std::ifstream in(manifest_path);
  if (!in) throw ParseError("cannot open " + manifest_path.string());
  try {
    const auto manifest = nlohmann::json::parse(in);
    std::vector<UserModel> users;
    for (const auto& entry : manifest.at("users")) {
      UserModel u;
      u.kind = user_kind_from_string(entry.at("kind").get<std::string>());
      u.rng_seed = entry.at("seed").get<std::uint32_t>();
      u.source = entry.at("source").get<std::string>();
      u.kb.adopt_store(
          load_nquads((std::filesystem::path(dir) / entry.at("file").get<std::string>()).string()));
      users.push_back(std::move(u));
    }
    return users;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("population manifest: " + std::string(e.what()));
  }
}

}  // namespace kgagent
