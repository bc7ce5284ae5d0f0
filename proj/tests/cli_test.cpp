// End-to-end checks of the kga binary: every subcommand through a real
// process, asserting on exit codes, emitted files, and printed text.

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "kgagent/belief.hpp"
#include "kgagent/dataio.hpp"
#include "kgagent/nquads.hpp"
#include "kgagent/ontology.hpp"
#include "kgagent/user_source.hpp"

namespace kgagent {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

fs::path fresh_dir(const std::string& leaf) {
  const fs::path dir = fs::path(testing::TempDir()) / leaf;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

CliResult run_cli(const std::string& args, const std::string& stdin_text = "") {
  static int invocation = 0;
  const fs::path scratch = fs::path(testing::TempDir()) / "cli-io";
  fs::create_directories(scratch);
  const fs::path in = scratch / ("in-" + std::to_string(++invocation) + ".txt");
  const fs::path out = scratch / ("out-" + std::to_string(invocation) + ".txt");
  {
    std::ofstream f(in);
    f << stdin_text;
  }
  const std::string cmd = std::string(KGAGENT_KGA_BIN) + " " + args + " < " +
                          in.string() + " > " + out.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  CliResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream f(out);
  std::stringstream buffer;
  buffer << f.rdbuf();
  result.output = buffer.str();
  return result;
}

std::string repo_file(const std::string& rel) {
  return (fs::path(KGAGENT_REPO_DIR) / rel).string();
}

int count_data_rows(const fs::path& csv) {
  std::ifstream in(csv);
  EXPECT_TRUE(in.good()) << csv;
  std::string line;
  int rows = -1;  // header doesn't count
  while (std::getline(in, line)) {
    if (!line.empty()) ++rows;
  }
  return rows;
}

TEST(CliExit, ZeroOneTwoConvention) {
  EXPECT_EQ(run_cli("--help").exit_code, 0);
  EXPECT_EQ(run_cli("").exit_code, 1);                        // no subcommand
  EXPECT_EQ(run_cli("train").exit_code, 1);                   // missing --config
  EXPECT_EQ(run_cli("train --config /nope.json").exit_code, 2);
  const CliResult eval = run_cli("eval --checkpoint /nowhere");
  EXPECT_EQ(eval.exit_code, 2);
  EXPECT_NE(eval.output.find("error:"), std::string::npos);
}

TEST(CliIngest, WritesStoreStatsAndSchema) {
  const fs::path out = fresh_dir("cli-ingest");
  const CliResult r =
      run_cli("ingest " + repo_file("data/hpd_sample.csv") + " --out " + out.string());
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("13 claims"), std::string::npos) << r.output;

  BeliefGraph kb;
  kb.adopt_store(load_nquads((out / "kb.nq").string()));
  EXPECT_EQ(kb.claim_iris().size(), 13u);

  std::ifstream stats_file(out / "stats.json");
  const json stats = json::parse(stats_file);
  EXPECT_EQ(stats.at("records"), 10);

  std::ifstream ont_file(out / "ontology.json");
  const Ontology ontology = Ontology::from_json(json::parse(ont_file));
  EXPECT_EQ(ontology.types.size(), 13u);
  EXPECT_EQ(ontology.predicates.size(), 12u);
  EXPECT_EQ(ontology.instances.size(), 5u);  // five distinct characters
}

TEST(CliMakeUsers, PopulationRoundTrips) {
  const fs::path out = fresh_dir("cli-users");
  const CliResult r = run_cli(
      "make-users --characters 4 --seed 3 --user-kind vanilla --user-kind confused --out " +
      out.string());
  ASSERT_EQ(r.exit_code, 0) << r.output;

  const std::vector<UserModel> users = load_population(out.string());
  ASSERT_EQ(users.size(), 2u);
  EXPECT_EQ(users[0].kind, UserKind::Vanilla);
  EXPECT_EQ(users[1].kind, UserKind::Confused);
  EXPECT_GT(users[1].kb.claim_iris().size(), 0u);
}

// One tiny world end to end: train, then eval, report, and chat against the
// artifacts it produced.
TEST(CliPipeline, TrainEvalReportChatRoundTrip) {
  const fs::path dir = fresh_dir("cli-pipeline");
  const fs::path train_dir = dir / "train";
  {
    std::ofstream config(dir / "config.json");
    config << R"({"conversations": 2, "turns_per_conversation": 4, "runs": 1,)"
           << R"( "hidden": 8, "out_dir": )" << json(train_dir.string()) << "}";
  }

  const CliResult train = run_cli("train --config " + (dir / "config.json").string() +
                                  " --characters 4 --seed 5");
  ASSERT_EQ(train.exit_code, 0) << train.output;
  EXPECT_TRUE(fs::exists(train_dir / "run-0" / "checkpoint-1"));
  EXPECT_TRUE(fs::exists(train_dir / "run-0" / "checkpoint-2"));
  EXPECT_EQ(count_data_rows(train_dir / "log.csv"), 4);  // 1 run x 2 conv x 2 asks

  const std::string checkpoint = (train_dir / "run-0" / "checkpoint-2").string();

  const CliResult eval = run_cli("eval --checkpoint " + checkpoint);
  ASSERT_EQ(eval.exit_code, 0) << eval.output;
  const json lens = json::parse(eval.output);
  ASSERT_EQ(lens.at("abstract_normalized").size(), 8u);
  EXPECT_EQ(lens.at("abstract_normalized")[0].at("label"), "negation-conflict");
  double sum = 0.0;
  for (const json& row : lens.at("abstract_normalized")) sum += row.at("value").get<double>();
  EXPECT_NEAR(sum, 0.0, 1e-9);  // the lens centres each head on its mean
  EXPECT_EQ(lens.at("updates_applied"), 4);

  const CliResult report = run_cli("report " + train_dir.string() + " --checkpoint " +
                                   checkpoint + " --characters 4 --seed 2");
  ASSERT_EQ(report.exit_code, 0) << report.output;
  EXPECT_EQ(count_data_rows(train_dir / "reward_curves.csv"), 4);
  EXPECT_EQ(count_data_rows(train_dir / "profiles.csv"), 10);  // 2 episodes x 5 metrics
  EXPECT_EQ(count_data_rows(train_dir / "user_comparison.csv"), 5);

  // The per-action counts sum back to the logged turns.
  std::ifstream counts(train_dir / "action_counts.csv");
  std::string line;
  std::getline(counts, line);
  EXPECT_EQ(line, "action,count");
  int actions = 0, total = 0;
  while (std::getline(counts, line)) {
    total += std::stoi(line.substr(line.rfind(',') + 1));
    ++actions;
  }
  EXPECT_EQ(actions, 8);
  EXPECT_EQ(total, 4);

  const fs::path ekg = dir / "chat.nq";
  const CliResult chat = run_cli(
      "chat --checkpoint " + checkpoint + " --ekg " + ekg.string() + " --templates " +
          repo_file("data/templates"),
      "karla | live | paris\n"
      "karla | live | lWorld:amsterdam | negative\n"
      "not a triple\n"
      "quit\n");
  ASSERT_EQ(chat.exit_code, 0) << chat.output;
  EXPECT_NE(chat.output.find("Tell me something"), std::string::npos);
  EXPECT_NE(chat.output.find("reward[total-triples]"), std::string::npos);
  EXPECT_NE(chat.output.find("could not read that"), std::string::npos);
  EXPECT_NE(chat.output.find("belief network saved"), std::string::npos);
  EXPECT_GT(load_nquads(ekg.string()).size(), 0u);

  // The saved network resumes, and quitting immediately keeps it intact.
  const std::uintmax_t saved_size = fs::file_size(ekg);
  const CliResult resume = run_cli(
      "chat --checkpoint " + checkpoint + " --ekg " + ekg.string() + " --templates " +
          repo_file("data/templates"),
      "quit\n");
  ASSERT_EQ(resume.exit_code, 0) << resume.output;
  EXPECT_NE(resume.output.find("(resumed belief network"), std::string::npos);
  EXPECT_EQ(fs::file_size(ekg), saved_size);
}

}  // namespace
}  // namespace kgagent
