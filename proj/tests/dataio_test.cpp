#include "kgagent/dataio.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kgagent/belief.hpp"
#include "kgagent/errors.hpp"
#include "kgagent/user_source.hpp"

namespace kgagent {
namespace {

// (predicate IRI -> distinct object values) of every claim in a store.
std::map<std::string, std::set<std::string>> objects_by_predicate(
    const QuadStore& store) {
  BeliefGraph view;
  view.adopt_store(store);
  std::map<std::string, std::set<std::string>> out;
  for (const std::string& claim : view.claim_iris()) {
    if (const auto triple = view.claim_triple(claim)) {
      out[(*triple)[1].value].insert((*triple)[2].value);
    }
  }
  return out;
}

TEST(Vocabulary, TwelvePredicatesLargestRangeFirst) {
  ASSERT_EQ(kHpdPredicates.size(), 12u);
  EXPECT_STREQ(kHpdPredicates.front().name, "Looks");
  EXPECT_STREQ(kHpdPredicates.back().name, "Gender");
  for (std::size_t i = 1; i < kHpdPredicates.size(); ++i) {
    EXPECT_LE(kHpdPredicates[i].table_range, kHpdPredicates[i - 1].table_range);
  }

  const HpdPredicate* looks = find_hpd_predicate("Looks");
  ASSERT_NE(looks, nullptr);
  EXPECT_STREQ(looks->iri, "hpd:looks");
  EXPECT_EQ(looks->table_range, 428);
  EXPECT_EQ(looks->table_domain, 107);
  EXPECT_EQ(find_hpd_predicate("looks"), nullptr);  // names are exact
  EXPECT_EQ(find_hpd_predicate("Wand"), nullptr);

  std::set<std::string> single;
  for (const HpdPredicate& p : kHpdPredicates) {
    if (p.single_valued) single.insert(p.name);
  }
  EXPECT_EQ(single, (std::set<std::string>{"Lineage", "Age", "Gender"}));
  EXPECT_EQ(find_hpd_predicate("Gender")->table_range, 2);
}

TEST(Slugs, NameToIriAndValueCleaning) {
  EXPECT_EQ(hpd_entity_iri("Ginny Weasley"), "hpd:ginny-weasley");
  EXPECT_EQ(hpd_entity_iri("  Albus   Dumbledore "), "hpd:albus-dumbledore");
  EXPECT_EQ(hpd_entity_iri("Tom Riddle Jr."), "hpd:tom-riddle-jr");
  EXPECT_THROW(hpd_entity_iri("  ?! "), MalformedTermError);

  EXPECT_EQ(clean_value("brave."), "brave");
  EXPECT_EQ(clean_value("  'half-blood', "), "half-blood");
  EXPECT_EQ(clean_value("(quidditch)"), "quidditch");
  // Interior punctuation is content, only the edges get shaved.
  EXPECT_EQ(clean_value(" st. mungo's healer!"), "st. mungo's healer");
  EXPECT_EQ(clean_value(" .,; "), "");

  EXPECT_EQ(split_values("red hair, brown eyes; glasses"),
            (std::vector<std::string>{"red hair", "brown eyes", "glasses"}));
  EXPECT_TRUE(split_values(" , ; .").empty());
}

TEST(Ingest, SplitsCleansAndReifies) {
  const IngestResult result = ingest({
      {"Ginny Weasley", "Looks", "red hair, brown eyes", 1},
      {"Hermione Granger", "Personality", "brave.", 1},
  });
  EXPECT_EQ(result.stats.records, 2);
  EXPECT_EQ(result.stats.claims, 3);
  EXPECT_EQ(result.stats.dropped_values, 0);

  BeliefGraph view;
  view.adopt_store(result.store);
  std::set<std::string> objects;
  for (const std::string& claim : view.claim_iris()) {
    const auto triple = view.claim_triple(claim);
    ASSERT_TRUE(triple.has_value());
    EXPECT_TRUE(is_literal((*triple)[2]));
    objects.insert((*triple)[2].value);

    // Neutral canon attribution on every claim.
    const auto perspectives = view.perspectives_of(claim);
    ASSERT_EQ(perspectives.size(), 1u);
    EXPECT_EQ(perspectives[0].source, "hpd:canon");
    ASSERT_TRUE(perspectives[0].polarity.has_value());
    EXPECT_EQ(*perspectives[0].polarity, Polarity::Positive);
    ASSERT_TRUE(perspectives[0].certainty.has_value());
    EXPECT_EQ(*perspectives[0].certainty, Certainty::Certain);
  }
  EXPECT_EQ(objects,
            (std::set<std::string>{"red hair", "brown eyes", "brave"}));
}

TEST(Ingest, CountsDistinctRolesPerPredicate) {
  const IngestResult result = ingest({
      {"Ginny Weasley", "Looks", "red hair, brown eyes", 1},
      {"Harry Potter", "Looks", "green eyes,, ", 2},
      {"Harry Potter", "Gender", "male", 1},
      {"Ginny Weasley", "Gender", "female", 1},
      {"Luna Lovegood", "Gender", "female", 3},
      {"Ginny Weasley", "Looks", "red hair", 4},  // restated: adds nothing
  });

  EXPECT_EQ(result.stats.records, 6);
  EXPECT_EQ(result.stats.claims, 6);
  EXPECT_EQ(result.stats.dropped_values, 2);

  const IngestStats::PerPredicate& looks =
      result.stats.per_predicate.at("Looks");
  EXPECT_EQ(looks.claims, 3);
  EXPECT_EQ(looks.distinct_subjects, 2);
  EXPECT_EQ(looks.distinct_objects, 3);
  const IngestStats::PerPredicate& gender =
      result.stats.per_predicate.at("Gender");
  EXPECT_EQ(gender.claims, 3);
  EXPECT_EQ(gender.distinct_subjects, 3);
  EXPECT_EQ(gender.distinct_objects, 2);

  const auto j = result.stats.to_json();
  EXPECT_EQ(j.at("claims"), 6);
  EXPECT_EQ(j.at("per_predicate").at("Gender").at("distinct_objects"), 2);
}

TEST(Ingest, RejectsBadRecords) {
  EXPECT_THROW(ingest({{"Harry Potter", "Wand", "holly", 1}}),
               UnknownPredicateError);
  EXPECT_THROW(ingest({{"Harry Potter", "Looks", "green eyes", 0}}),
               ParseError);
  EXPECT_THROW(ingest({{"Harry Potter", "Looks", "green eyes", 8}}),
               ParseError);
  EXPECT_THROW(ingest({{"  ", "Looks", "green eyes", 1}}), MalformedTermError);
}

TEST(Ingest, SameRecordsSameStore) {
  const std::vector<AttributeRecord> records = {
      {"Ginny Weasley", "Looks", "red hair, brown eyes", 1},
      {"Harry Potter", "Gender", "male", 1},
  };
  EXPECT_EQ(kb_fingerprint(ingest(records).store),
            kb_fingerprint(ingest(records).store));

  // A restated claim leaves no trace in the store either.
  std::vector<AttributeRecord> with_dup = records;
  with_dup.push_back({"Harry Potter", "Gender", "male", 4});
  EXPECT_EQ(kb_fingerprint(ingest(with_dup).store),
            kb_fingerprint(ingest(records).store));
}

TEST(Ingest, SampleFixtureMatchesFrozenCounts) {
  std::ifstream in(std::string(KGAGENT_REPO_DIR) + "/data/hpd_sample.csv");
  ASSERT_TRUE(in.good());
  const std::vector<AttributeRecord> records = read_records_csv(in);
  ASSERT_EQ(records.size(), 10u);
  EXPECT_EQ(records[0].character, "Ginny Weasley");
  EXPECT_EQ(records[0].value, "red hair, brown eyes");

  const IngestResult result = ingest(records);
  EXPECT_EQ(result.stats.claims, 13);
  EXPECT_EQ(result.stats.dropped_values, 0);
  EXPECT_EQ(result.stats.per_predicate.size(), 8u);
  const IngestStats::PerPredicate& looks =
      result.stats.per_predicate.at("Looks");
  EXPECT_EQ(looks.claims, 4);
  EXPECT_EQ(looks.distinct_subjects, 2);
  EXPECT_EQ(looks.distinct_objects, 4);
  const IngestStats::PerPredicate& gender =
      result.stats.per_predicate.at("Gender");
  EXPECT_EQ(gender.claims, 2);
  EXPECT_EQ(gender.distinct_subjects, 2);
  EXPECT_EQ(gender.distinct_objects, 2);
}

TEST(Ontology, CharacterWorldSchema) {
  const Ontology ont = hpd_ontology();
  EXPECT_EQ(ont.types.size(), 13u);
  EXPECT_EQ(ont.types.front(), "hpd:character");
  ASSERT_EQ(ont.predicates.size(), 12u);
  const PredicateSpec* gender = ont.find_predicate("hpd:gender");
  ASSERT_NE(gender, nullptr);
  EXPECT_EQ(gender->domain_type, "hpd:character");
  EXPECT_EQ(gender->range_type, "hpd:gender-value");
  EXPECT_TRUE(gender->single_valued);
  EXPECT_FALSE(ont.find_predicate("hpd:looks")->single_valued);
  EXPECT_TRUE(ont.instances.empty());

  // The store-aware overload turns claim subjects into vocabulary entries.
  const Ontology with_cast = hpd_ontology(ingest({
      {"Ginny Weasley", "Gender", "female", 1},
      {"Harry Potter", "Gender", "male", 1},
      {"Harry Potter", "Looks", "green eyes", 1},
  }).store);
  std::set<std::pair<std::string, std::string>> instances(
      with_cast.instances.begin(), with_cast.instances.end());
  EXPECT_EQ(instances,
            (std::set<std::pair<std::string, std::string>>{
                {"hpd:ginny-weasley", "hpd:character"},
                {"hpd:harry-potter", "hpd:character"},
            }));
}

TEST(Synth, DeterministicWithTheReferenceSkew) {
  // One character still touches all twelve predicates.
  BeliefGraph tiny;
  tiny.adopt_store(synth_kb(1, 7));
  EXPECT_GE(tiny.claim_iris().size(), 12u);
  EXPECT_TRUE(tiny.structural_issues().empty());

  EXPECT_EQ(kb_fingerprint(synth_kb(5, 11)), kb_fingerprint(synth_kb(5, 11)));
  EXPECT_NE(kb_fingerprint(synth_kb(5, 11)), kb_fingerprint(synth_kb(5, 12)));

  const auto objects = objects_by_predicate(synth_kb(50, 11));
  EXPECT_EQ(objects.at("hpd:gender"),
            (std::set<std::string>{"male", "female"}));
  EXPECT_GT(objects.at("hpd:looks").size(), objects.at("hpd:gender").size());
  // The wide-range predicate keeps a wider pool than the narrow ones.
  EXPECT_GT(objects.at("hpd:looks").size(), objects.at("hpd:talents").size());
}

TEST(Readers, CsvQuotingHeaderMappingAndJsonl) {
  std::istringstream csv(
      "name,attr,val,book\r\n"
      "Ginny Weasley,Looks,\"red hair, brown eyes\",1\r\n"
      "\r\n"
      "Harry Potter,Title,\"the \"\"chosen\"\" one\",4\r\n");
  const auto records = read_records_csv(csv, {{"character", "name"},
                                              {"predicate", "attr"},
                                              {"value", "val"},
                                              {"epoch", "book"}});
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].value, "red hair, brown eyes");
  EXPECT_EQ(records[1].value, "the \"chosen\" one");
  EXPECT_EQ(records[1].epoch, 4);

  // Epoch column is optional and defaults to the first book.
  std::istringstream no_epoch(
      "character,predicate,value\nLuna Lovegood,Hobbies,painting\n");
  EXPECT_EQ(read_records_csv(no_epoch)[0].epoch, 1);

  std::istringstream missing_column("character,value\na,b\n");
  EXPECT_THROW(read_records_csv(missing_column), ParseError);
  std::istringstream short_row(
      "character,predicate,value,epoch\nGinny Weasley,Looks\n");
  EXPECT_THROW(read_records_csv(short_row), ParseError);
  std::istringstream bad_quote(
      "character,predicate,value\nGinny Weasley,Looks,\"red hair\n");
  EXPECT_THROW(read_records_csv(bad_quote), ParseError);
  std::istringstream bad_epoch(
      "character,predicate,value,epoch\nGinny Weasley,Looks,red hair,one\n");
  EXPECT_THROW(read_records_csv(bad_epoch), ParseError);
  std::istringstream empty;
  EXPECT_THROW(read_records_csv(empty), ParseError);

  std::istringstream jsonl(
      R"({"character": "Ginny Weasley", "predicate": "Looks", "value": "red hair", "epoch": 2})"
      "\n\n"
      R"({"character": "Harry Potter", "predicate": "Gender", "value": "male"})"
      "\n");
  const auto jl = read_records_jsonl(jsonl);
  ASSERT_EQ(jl.size(), 2u);
  EXPECT_EQ(jl[0].epoch, 2);
  EXPECT_EQ(jl[1].epoch, 1);

  std::istringstream bad_json("{\"character\": \"Ginny\"\n");
  EXPECT_THROW(read_records_jsonl(bad_json), ParseError);
  std::istringstream wrong_field(R"({"character": "Ginny", "value": "x"})");
  EXPECT_THROW(read_records_jsonl(wrong_field), ParseError);
}

// The real export is not redistributable; point KGAGENT_HPD_CSV at a local
// copy (character,predicate,value,epoch columns) to check the published
// distinct-entity counts end to end.
TEST(Ingest, FullExportMatchesPublishedCounts) {
  const char* path = std::getenv("KGAGENT_HPD_CSV");
  if (path == nullptr || *path == '\0') {
    GTEST_SKIP() << "KGAGENT_HPD_CSV not set";
  }
  std::ifstream in(path);
  ASSERT_TRUE(in.good()) << "cannot read " << path;

  const IngestResult result = ingest(read_records_csv(in));
  for (const HpdPredicate& p : kHpdPredicates) {
    ASSERT_TRUE(result.stats.per_predicate.count(p.name)) << p.name;
    const IngestStats::PerPredicate& pp = result.stats.per_predicate.at(p.name);
    EXPECT_EQ(pp.distinct_objects, p.table_range) << p.name;
    EXPECT_EQ(pp.distinct_subjects, p.table_domain) << p.name;
  }
}

}  // namespace
}  // namespace kgagent
