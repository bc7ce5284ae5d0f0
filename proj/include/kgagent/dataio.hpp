#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "kgagent/ontology.hpp"
#include "kgagent/store.hpp"

namespace kgagent {

// The twelve character-attribute predicates, largest object range first. The
// range/domain columns are the distinct-entity counts of the reference
// export; the synthetic generator scales its value pools from them.
struct HpdPredicate {
  const char* name;   // record spelling, e.g. "Looks"
  const char* iri;    // claim predicate, e.g. "hpd:looks"
  int table_range;    // distinct objects in the reference export
  int table_domain;   // distinct subjects in the reference export
  bool single_valued; // one object per character at a time
};

inline constexpr std::array<HpdPredicate, 12> kHpdPredicates{{
    {"Looks", "hpd:looks", 428, 107, false},
    {"Spells", "hpd:spells", 200, 47, false},
    {"Belongings", "hpd:belongings", 189, 49, false},
    {"Title", "hpd:title", 101, 86, false},
    {"Personality", "hpd:personality", 39, 46, false},
    {"Affiliation", "hpd:affiliation", 27, 94, false},
    {"Hobbies", "hpd:hobbies", 23, 22, false},
    {"Export", "hpd:export", 16, 24, false},
    {"Talents", "hpd:talents", 15, 13, false},
    {"Lineage", "hpd:lineage", 11, 83, true},
    {"Age", "hpd:age", 11, 106, true},
    {"Gender", "hpd:gender", 2, 124, true},
}};

// Exact-name lookup; nullptr when the name is not one of the twelve.
const HpdPredicate* find_hpd_predicate(const std::string& name);

// One row of an attribute table. `value` may hold a comma/semicolon list;
// `epoch` is the book index the statement appears in.
struct AttributeRecord {
  std::string character;
  std::string predicate;  // one of the twelve names
  std::string value;
  int epoch = 1;  // 1..7
};

// "Ginny Weasley" -> "hpd:ginny-weasley" (lowercased, non-alphanumerics
// collapsed to single dashes). Throws MalformedTermError when nothing is
// left to name.
std::string hpd_entity_iri(const std::string& name);

// Strips surrounding whitespace and punctuation; interior text is kept as
// written. Returns "" when nothing survives.
std::string clean_value(const std::string& raw);

// Splits on ',' and ';', cleans each piece, drops empties.
std::vector<std::string> split_values(const std::string& raw);

struct IngestStats {
  struct PerPredicate {
    int claims = 0;
    int distinct_subjects = 0;
    int distinct_objects = 0;
  };
  int records = 0;
  int claims = 0;          // distinct claims materialized
  int dropped_values = 0;  // list pieces that cleaned down to nothing
  std::map<std::string, PerPredicate> per_predicate;  // keyed by record name

  nlohmann::json to_json() const;
};

struct IngestResult {
  QuadStore store;
  IngestStats stats;
};

// Reifies each record's values as positive/certain claims attributed to the
// canon source, timestamped by epoch. Splitting and cleaning happen here;
// restating an identical claim adds nothing. Throws UnknownPredicateError on
// a predicate outside the twelve, ParseError on an epoch outside 1..7, and
// MalformedTermError on a blank character name.
IngestResult ingest(const std::vector<AttributeRecord>& records);

// Schema for the character world: hpd:character plus one value type per
// predicate (13 types), domain/range wired so integration can type subjects.
// The overload also enumerates the store's claim subjects as instances, which
// widens the encoder vocabulary beyond UNK.
Ontology hpd_ontology();
Ontology hpd_ontology(const QuadStore& kb);

// Deterministic desk-scale substitute for the real export: `characters`
// characters, all twelve predicates each, value pools scaled from the
// reference range counts (Gender stays a two-value pool). Built through
// ingest(), so everything said about ingested stores holds here too.
QuadStore synth_kb(int characters, std::uint32_t seed);

// One CSV row into fields: commas split, double quotes group, "" escapes a
// quote. Throws ParseError on an unterminated quote. Shared by the record
// reader and the log-analysis tooling.
std::vector<std::string> parse_csv_row(const std::string& line);

// Line-based readers. CSV needs a header row; `columns` optionally maps the
// canonical field names (character/predicate/value/epoch) to the file's
// header spellings. A missing epoch column defaults every record to book 1.
// JSON-lines expects one object per line with the canonical field names.
// Both throw ParseError on malformed input.
std::vector<AttributeRecord> read_records_csv(
    std::istream& in, const std::map<std::string, std::string>& columns = {});
std::vector<AttributeRecord> read_records_jsonl(std::istream& in);

}  // namespace kgagent
