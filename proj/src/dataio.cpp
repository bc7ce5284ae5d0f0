#include "kgagent/dataio.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <nlohmann/json.hpp>
#include <random>
#include <set>
#include <string_view>

#include "kgagent/belief.hpp"
#include "kgagent/capsule.hpp"
#include "kgagent/errors.hpp"
#include "kgagent/rand.hpp"

namespace kgagent {
namespace {

using nlohmann::json;

// Raw comma/semicolon pieces, uncleaned, so callers can count the drops.
std::vector<std::string> split_raw(const std::string& raw) {
  std::vector<std::string> pieces;
  std::string current;
  for (const char ch : raw) {
    if (ch == ',' || ch == ';') {
      pieces.push_back(current);
      current.clear();
    } else {
      current += ch;
    }
  }
  pieces.push_back(current);
  return pieces;
}

bool is_edge_junk(unsigned char ch) {
  if (std::isspace(ch)) return true;
  switch (ch) {
    case '.': case ',': case ';': case ':': case '!': case '?':
    case '\'': case '"': case '(': case ')': case '[': case ']':
    case '{': case '}':
      return true;
    default:
      return false;
  }
}

int parse_epoch(const std::string& text) {
  std::size_t used = 0;
  int epoch = 0;
  try {
    epoch = std::stoi(text, &used);
  } catch (const std::exception&) {
    throw ParseError("epoch is not a number: \"" + text + "\"");
  }
  if (used != text.size()) {
    throw ParseError("epoch is not a number: \"" + text + "\"");
  }
  return epoch;
}

}  // namespace

const HpdPredicate* find_hpd_predicate(const std::string& name) {
  for (const HpdPredicate& p : kHpdPredicates) {
    if (name == p.name) return &p;
  }
  return nullptr;
}

std::string hpd_entity_iri(const std::string& name) {
  std::string slug;
  bool gap = false;
  for (const char ch : name) {
    const auto u = static_cast<unsigned char>(ch);
    if (std::isalnum(u)) {
      if (gap && !slug.empty()) slug += '-';
      slug += static_cast<char>(std::tolower(u));
      gap = false;
    } else {
      gap = true;
    }
  }
  if (slug.empty()) {
    throw MalformedTermError("no name left to identify: \"" + name + "\"");
  }
  return "hpd:" + slug;
}

std::string clean_value(const std::string& raw) {
  std::size_t begin = 0;
  std::size_t end = raw.size();
  while (begin < end && is_edge_junk(static_cast<unsigned char>(raw[begin]))) {
    ++begin;
  }
  while (end > begin && is_edge_junk(static_cast<unsigned char>(raw[end - 1]))) {
    --end;
  }
  return raw.substr(begin, end - begin);
}

std::vector<std::string> split_values(const std::string& raw) {
  std::vector<std::string> out;
  for (const std::string& piece : split_raw(raw)) {
    std::string cleaned = clean_value(piece);
    if (!cleaned.empty()) out.push_back(std::move(cleaned));
  }
  return out;
}

json IngestStats::to_json() const {
  json per = json::object();
  for (const auto& [name, pp] : per_predicate) {
    per[name] = {{"claims", pp.claims},
                 {"distinct_subjects", pp.distinct_subjects},
                 {"distinct_objects", pp.distinct_objects}};
  }
  return {{"records", records},
          {"claims", claims},
          {"dropped_values", dropped_values},
          {"per_predicate", per}};
}

IngestResult ingest(const std::vector<AttributeRecord>& records) {
  BeliefGraph kb;  // no ontology: a knowledge source carries quads only
  IngestStats stats;
  std::map<std::string, std::set<std::string>> subjects;
  std::map<std::string, std::set<std::string>> objects;
  std::set<std::string> claim_keys;
  int turn = 0;

  for (const AttributeRecord& r : records) {
    ++stats.records;
    const HpdPredicate* pred = find_hpd_predicate(r.predicate);
    if (pred == nullptr) {
      throw UnknownPredicateError("not an attribute predicate: \"" +
                                  r.predicate + "\"");
    }
    if (r.epoch < 1 || r.epoch > 7) {
      throw ParseError("epoch outside books 1-7: " + std::to_string(r.epoch));
    }
    const std::string subject = hpd_entity_iri(r.character);

    for (const std::string& piece : split_raw(r.value)) {
      const std::string value = clean_value(piece);
      if (value.empty()) {
        ++stats.dropped_values;
        continue;
      }
      Capsule c;
      c.source = "hpd:canon";
      c.timestamp = "book-" + std::to_string(r.epoch);
      c.subject = iri(subject);
      c.predicate = iri(pred->iri);
      c.object = lit(value);
      c.polarity = Polarity::Positive;
      c.certainty = Certainty::Certain;
      kb.integrate(build_interaction_graph(c, "hpd-ingest", ++turn));

      if (claim_keys.insert(subject + '\x1f' + pred->iri + '\x1f' + value)
              .second) {
        ++stats.per_predicate[pred->name].claims;
        ++stats.claims;
        subjects[pred->name].insert(subject);
        objects[pred->name].insert(value);
      }
    }
  }
  for (auto& [name, pp] : stats.per_predicate) {
    pp.distinct_subjects = static_cast<int>(subjects[name].size());
    pp.distinct_objects = static_cast<int>(objects[name].size());
  }
  return {kb.store(), std::move(stats)};
}

Ontology hpd_ontology() {
  Ontology ont;
  ont.types.push_back("hpd:character");
  for (const HpdPredicate& p : kHpdPredicates) {
    const std::string range = std::string(p.iri) + "-value";
    ont.types.push_back(range);
    ont.predicates.push_back({p.iri, "hpd:character", range, p.single_valued});
  }
  return ont;
}

Ontology hpd_ontology(const QuadStore& kb) {
  Ontology ont = hpd_ontology();
  BeliefGraph view;
  view.adopt_store(kb);
  for (const std::string& claim : view.claim_iris()) {
    if (const auto triple = view.claim_triple(claim)) {
      ont.add_instance((*triple)[0].value, "hpd:character");
    }
  }
  return ont;
}

namespace {

int value_pool_size(const HpdPredicate& p, int characters) {
  if (std::string_view(p.iri) == "hpd:gender") return 2;
  // 124 is the widest domain in the reference export; a full-size cast would
  // roughly reproduce its pools.
  const int scaled = p.table_range * characters / 124;
  return std::clamp(scaled, 3, p.table_range);
}

std::string synth_value(const HpdPredicate& p, int index) {
  if (std::string_view(p.iri) == "hpd:gender") {
    return index == 0 ? "male" : "female";
  }
  // "hpd:looks" -> "looks 17"
  return std::string(p.iri).substr(4) + " " + std::to_string(index);
}

}  // namespace

QuadStore synth_kb(int characters, std::uint32_t seed) {
  if (characters < 1) {
    throw ConfigInvalidError("synth_kb needs at least one character");
  }
  std::mt19937 rng(seed);
  std::vector<AttributeRecord> records;
  records.reserve(static_cast<std::size_t>(characters) * kHpdPredicates.size());
  for (int i = 0; i < characters; ++i) {
    const std::string who = "character " + std::to_string(i);
    for (const HpdPredicate& p : kHpdPredicates) {
      const int pool = value_pool_size(p, characters);
      const int wanted =
          p.single_valued ? 1 : 1 + static_cast<int>(draw_below(rng, 2));
      std::string value;
      for (int v = 0; v < wanted; ++v) {
        if (v > 0) value += ", ";
        value += synth_value(p, static_cast<int>(draw_below(
                                    rng, static_cast<std::size_t>(pool))));
      }
      records.push_back(
          {who, p.name, value, 1 + static_cast<int>(draw_below(rng, 7))});
    }
  }
  return ingest(records).store;
}

std::vector<std::string> parse_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"' && field.empty()) {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += ch;
    }
  }
  if (quoted) throw ParseError("unterminated quote in csv row: " + line);
  fields.push_back(std::move(field));
  return fields;
}

namespace {

std::string chomp(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

std::vector<AttributeRecord> read_records_csv(
    std::istream& in, const std::map<std::string, std::string>& columns) {
  const auto file_name = [&columns](const std::string& canonical) {
    const auto hit = columns.find(canonical);
    return hit == columns.end() ? canonical : hit->second;
  };

  std::string line;
  if (!std::getline(in, line)) throw ParseError("csv without a header row");
  const std::vector<std::string> header = parse_csv_row(chomp(line));
  const auto column_index = [&header](const std::string& name) {
    const auto hit = std::find(header.begin(), header.end(), name);
    return hit == header.end() ? -1
                               : static_cast<int>(hit - header.begin());
  };
  const int character_col = column_index(file_name("character"));
  const int predicate_col = column_index(file_name("predicate"));
  const int value_col = column_index(file_name("value"));
  const int epoch_col = column_index(file_name("epoch"));  // optional
  if (character_col < 0 || predicate_col < 0 || value_col < 0) {
    throw ParseError("csv header lacks character/predicate/value columns: " +
                     line);
  }

  std::vector<AttributeRecord> records;
  while (std::getline(in, line)) {
    line = chomp(line);
    if (line.empty()) continue;
    const std::vector<std::string> row = parse_csv_row(line);
    const int needed = std::max({character_col, predicate_col, value_col,
                                 epoch_col});
    if (static_cast<int>(row.size()) <= needed) {
      throw ParseError("csv row is short a column: " + line);
    }
    AttributeRecord r;
    r.character = row[static_cast<std::size_t>(character_col)];
    r.predicate = row[static_cast<std::size_t>(predicate_col)];
    r.value = row[static_cast<std::size_t>(value_col)];
    r.epoch = epoch_col < 0
                  ? 1
                  : parse_epoch(row[static_cast<std::size_t>(epoch_col)]);
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<AttributeRecord> read_records_jsonl(std::istream& in) {
  std::vector<AttributeRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    line = chomp(line);
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      AttributeRecord r;
      r.character = j.at("character").get<std::string>();
      r.predicate = j.at("predicate").get<std::string>();
      r.value = j.at("value").get<std::string>();
      r.epoch = j.value("epoch", 1);
      records.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw ParseError(std::string("bad json-lines record: ") + e.what());
    }
  }
  return records;
}

}  // namespace kgagent
