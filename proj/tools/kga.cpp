// kga — operator entry point for the belief-network agent: ingest attribute
// records, build simulated user populations, train the desire policy,
// inspect checkpoints, converse as a knowledge source, and turn training
// logs into analysis tables.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kgagent/belief.hpp"
#include "kgagent/checkpoint.hpp"
#include "kgagent/dataio.hpp"
#include "kgagent/desire.hpp"
#include "kgagent/errors.hpp"
#include "kgagent/graph_metrics.hpp"
#include "kgagent/nquads.hpp"
#include "kgagent/prompts.hpp"
#include "kgagent/trainer.hpp"
#include "kgagent/user_source.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out.good()) throw kgagent::Error("cannot write " + path.string());
  out << text;
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in.good()) throw kgagent::Error("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw kgagent::ParseError(path.string() + ": " + e.what());
  }
}

std::vector<kgagent::UserKind> parse_kinds(const std::vector<std::string>& names) {
  std::vector<kgagent::UserKind> kinds;
  for (const std::string& name : names) kinds.push_back(kgagent::user_kind_from_string(name));
  return kinds;
}

std::vector<kgagent::UserKind> all_kinds() {
  return {kgagent::UserKind::Vanilla, kgagent::UserKind::Amateur, kgagent::UserKind::Doubtful,
          kgagent::UserKind::Incoherent, kgagent::UserKind::Confused};
}

// ---------------------------------------------------------------------------
// ingest: attribute records -> reified store + statistics + matching ontology

struct IngestArgs {
  std::string input;
  std::string out = "out/ingest";
  std::vector<std::string> column_mappings;  // canonical=header pairs
};

int cmd_ingest(const IngestArgs& args) {
  std::map<std::string, std::string> columns;
  for (const std::string& pair : args.column_mappings) {
    const auto eq = pair.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == pair.size()) {
      throw kgagent::ConfigInvalidError("--map expects canonical=header, got '" + pair + "'");
    }
    columns[pair.substr(0, eq)] = pair.substr(eq + 1);
  }

  std::ifstream in(args.input);
  if (!in.good()) throw kgagent::Error("cannot read " + args.input);
  const bool jsonl = fs::path(args.input).extension() == ".jsonl";
  const std::vector<kgagent::AttributeRecord> records =
      jsonl ? kgagent::read_records_jsonl(in) : kgagent::read_records_csv(in, columns);

  const kgagent::IngestResult result = kgagent::ingest(records);
  fs::create_directories(args.out);
  kgagent::save_nquads(result.store, (fs::path(args.out) / "kb.nq").string());
  write_text(fs::path(args.out) / "stats.json", result.stats.to_json().dump(2) + "\n");
  write_text(fs::path(args.out) / "ontology.json",
             kgagent::hpd_ontology(result.store).to_json().dump(2) + "\n");

  std::cout << "ingested " << result.stats.records << " records into "
            << result.stats.claims << " claims (" << result.stats.dropped_values
            << " blank values dropped) -> " << args.out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// make-users: base store (file or synthetic) -> one corrupted user per kind

struct MakeUsersArgs {
  std::string base;  // .nq path; empty means synthesize
  int characters = 50;
  std::uint32_t seed = 1;
  std::vector<std::string> kinds;
  std::string out = "out/users";
};

int cmd_make_users(const MakeUsersArgs& args) {
  const kgagent::QuadStore base = args.base.empty()
                                      ? kgagent::synth_kb(args.characters, args.seed)
                                      : kgagent::load_nquads(args.base);
  const std::vector<kgagent::UserKind> kinds =
      args.kinds.empty() ? all_kinds() : parse_kinds(args.kinds);

  std::vector<kgagent::UserModel> users;
  for (const kgagent::UserKind kind : kinds) {
    users.push_back(kgagent::corrupt(base, kind, args.seed));
  }
  fs::create_directories(args.out);
  kgagent::save_population(args.out, users, kgagent::kb_fingerprint(base));

  std::cout << "wrote " << users.size() << " users (seed " << args.seed << ") -> "
            << args.out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// train: config + world -> checkpoints, log.csv, summary.json

struct TrainArgs {
  std::string config;
  std::string kb;        // .nq; empty means synthesize
  std::string ontology;  // .json; empty means the character-world schema
  int characters = 50;
  std::optional<std::uint32_t> seed;
  std::optional<std::string> intention;
  std::optional<std::string> user_kind;
  std::optional<std::string> out;
};

int cmd_train(const TrainArgs& args) {
  kgagent::ExperimentConfig config =
      kgagent::ExperimentConfig::from_json(read_json_file(args.config));
  if (args.seed) config.base_seed = *args.seed;
  if (args.intention) config.intention = kgagent::metric_from_string(*args.intention);
  if (args.user_kind) config.user_kinds = {kgagent::user_kind_from_string(*args.user_kind)};
  if (args.out) config.out_dir = *args.out;
  config.validate();

  const kgagent::QuadStore base_kb =
      args.kb.empty() ? kgagent::synth_kb(args.characters, config.base_seed)
                      : kgagent::load_nquads(args.kb);
  const kgagent::Ontology ontology =
      args.ontology.empty() ? kgagent::hpd_ontology(base_kb)
                            : kgagent::Ontology::from_json(read_json_file(args.ontology));

  const kgagent::ExperimentReport report = kgagent::run_experiment(config, ontology, base_kb);

  int turns = 0;
  for (const kgagent::EpisodeLog& episode : report.episodes) {
    turns += static_cast<int>(episode.turns.size());
  }

  if (!config.out_dir.empty()) {
    fs::create_directories(config.out_dir);
    std::ofstream log(config.out_dir / "log.csv");
    report.write_csv(log);
    write_text(config.out_dir / "summary.json", report.summary().dump(2) + "\n");
    write_text(config.out_dir / "config.json", config.to_json().dump(2) + "\n");
    std::cout << "trained " << config.runs << " runs, " << turns << " updates -> "
              << config.out_dir.string() << "\n";
  } else {
    report.write_csv(std::cout);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// eval: checkpoint (+ optional eKG) -> Q-value lens + knowledge profile

struct EvalArgs {
  std::string checkpoint;
  std::string ekg;  // .nq; empty means a fresh belief network
  std::string out;  // .json; empty means stdout
};

json pairs_to_json(const std::vector<std::pair<std::string, double>>& pairs) {
  json rows = json::array();
  for (const auto& [label, value] : pairs) rows.push_back({{"label", label}, {"value", value}});
  return rows;
}

int cmd_eval(const EvalArgs& args) {
  const kgagent::LoadedCheckpoint loaded = kgagent::load_checkpoint(args.checkpoint);
  kgagent::BeliefGraph ekg(loaded.ontology);
  if (!args.ekg.empty()) ekg.adopt_store(kgagent::load_nquads(args.ekg));

  // Desires need an utterance to anchor on; probe with the first stored claim
  // (re-asserted by a neutral source) or, on an empty network, with nothing —
  // the fallback desire still prices the abstract head.
  std::vector<kgagent::DesireInstance> desires;
  const std::vector<std::string> claims = ekg.claim_iris();
  kgagent::InteractionGraph probe;
  if (!claims.empty()) {
    const auto triple = ekg.claim_triple(claims.front());
    kgagent::Capsule c;
    c.source = "lFriends:probe";
    c.timestamp = "probe-1";
    c.subject = (*triple)[0];
    c.predicate = (*triple)[1];
    c.object = (*triple)[2];
    probe = kgagent::build_interaction_graph(c, "probe", 1);
    ekg.integrate(probe);
    desires = kgagent::generate_desires(ekg, probe);
  }

  const kgagent::QValueReport q = kgagent::evaluate_policy(args.checkpoint, ekg, desires);
  const json out{{"checkpoint", args.checkpoint},
                 {"updates_applied", loaded.meta.updates_applied},
                 {"abstract_normalized", pairs_to_json(q.abstract_normalized)},
                 {"type_normalized", pairs_to_json(q.type_normalized)},
                 {"desire_q", pairs_to_json(q.desire_q)},
                 {"profile", kgagent::profile_knowledge(ekg)}};
  if (args.out.empty()) {
    std::cout << out.dump(2) << "\n";
  } else {
    if (fs::path(args.out).has_parent_path()) {
      fs::create_directories(fs::path(args.out).parent_path());
    }
    write_text(args.out, out.dump(2) + "\n");
    std::cout << "wrote " << args.out << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// chat: the human plays the knowledge source; the policy picks the questions

struct ChatArgs {
  std::string checkpoint;
  std::string ekg = "out/chat_ekg.nq";
  std::string templates = "data/templates";
  std::string intention = "total-triples";
  std::uint32_t seed = 1;
};

int cmd_chat(const ChatArgs& args) {
  const kgagent::LoadedCheckpoint loaded = kgagent::load_checkpoint(args.checkpoint);
  const kgagent::PromptTemplates templates = kgagent::load_prompt_templates(args.templates);
  const kgagent::MetricKind intention = kgagent::metric_from_string(args.intention);
  std::mt19937 rng(args.seed);

  kgagent::BeliefGraph ekg(loaded.ontology);
  if (fs::exists(args.ekg)) {
    ekg.adopt_store(kgagent::load_nquads(args.ekg));
    std::cout << "(resumed belief network from " << args.ekg << ")\n";
  }

  const auto save_and_report = [&ekg, &args] {
    if (fs::path(args.ekg).has_parent_path()) {
      fs::create_directories(fs::path(args.ekg).parent_path());
    }
    kgagent::save_nquads(ekg.store(), args.ekg);
    std::cout << "\nbelief network saved to " << args.ekg << "\n";
  };

  std::cout << "Replies: subject | predicate | object [| polarity [| certainty]]\n"
            << "         'quit' (or end of input) saves and exits.\n\n"
            << "Tell me something to get us started.\n> " << std::flush;

  double metric = kgagent::evaluate_metric_or_zero(intention, ekg);
  kgagent::InteractionGraph last_ikg;
  int turn = 0;
  std::string line;
  while (std::getline(std::cin, line)) {
    if (line == "quit" || line == "exit") break;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      std::cout << "> " << std::flush;
      continue;
    }

    kgagent::Capsule reply;
    try {
      reply = kgagent::parse_reply(line);
      reply.source = "lFriends:human";
      reply.timestamp = "turn-" + std::to_string(turn + 1);
      kgagent::validate_capsule(reply);
    } catch (const kgagent::Error& e) {
      std::cout << "could not read that (" << e.what() << ") — try again.\n> " << std::flush;
      continue;  // same turn, same question
    }

    ++turn;
    last_ikg = kgagent::build_interaction_graph(reply, "chat", turn);
    ekg.integrate(last_ikg);

    const double next_metric = kgagent::evaluate_metric_or_zero(intention, ekg);
    std::cout << "reward[" << kgagent::to_string(intention)
              << "] = " << kgagent::reward_delta(metric, next_metric) << "\n";
    metric = next_metric;

    const std::vector<kgagent::DesireInstance> desires =
        kgagent::generate_desires(ekg, last_ikg);
    const std::size_t pick =
        loaded.learner.choose(kgagent::simplify(ekg), desires, 0.0, rng);
    std::cout << "\n[" << kgagent::to_string(desires[pick].pattern) << "] "
              << kgagent::render_prompt(templates, desires[pick]) << "\n> " << std::flush;
  }

  save_and_report();
  return kExitOk;
}

// ---------------------------------------------------------------------------
// report: training log -> the four analysis tables as CSV

struct ReportArgs {
  std::string train_dir;
  std::string out;         // default: alongside the log
  std::string checkpoint;  // enables the user-comparison table
  std::string kb;          // base store for the comparison; empty = synthetic
  int characters = 50;
  std::uint32_t seed = 1;
  std::string intention = "average-population";
};

int cmd_report(const ReportArgs& args) {
  const fs::path train_dir(args.train_dir);
  const fs::path out_dir = args.out.empty() ? train_dir : fs::path(args.out);
  fs::create_directories(out_dir);

  std::ifstream log(train_dir / "log.csv");
  if (!log.good()) throw kgagent::Error("cannot read " + (train_dir / "log.csv").string());

  std::string line;
  if (!std::getline(log, line)) throw kgagent::ParseError("empty training log");
  const std::vector<std::string> header = kgagent::parse_csv_row(line);
  const auto column = [&header](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw kgagent::ParseError("training log lacks column '" + name + "'");
  };
  const std::size_t run_col = column("run");
  const std::size_t conv_col = column("conversation");
  const std::size_t turn_col = column("turn");
  const std::size_t action_col = column("action");
  const std::size_t reward_col = column("reward");

  // Curves average over runs at each schedule step (conversation, turn).
  std::map<std::pair<int, int>, std::pair<double, int>> step_rewards;
  std::map<std::string, int> action_counts;
  std::set<int> runs;
  int rows = 0;
  while (std::getline(log, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> row = kgagent::parse_csv_row(line);
    if (row.size() < header.size()) {
      throw kgagent::ParseError("short row in training log: " + line);
    }
    ++rows;
    runs.insert(std::stoi(row[run_col]));
    auto& [sum, n] = step_rewards[{std::stoi(row[conv_col]), std::stoi(row[turn_col])}];
    sum += std::stod(row[reward_col]);
    n += 1;
    ++action_counts[row[action_col]];
  }
  if (rows == 0) throw kgagent::ParseError("training log has no data rows");

  {
    std::ofstream curves(out_dir / "reward_curves.csv");
    curves << "step,conversation,turn,average_reward,average_cumulative\n";
    curves.precision(17);
    int step = 0;
    double cumulative = 0.0;
    for (const auto& [key, acc] : step_rewards) {  // map order == schedule order
      const double mean = acc.first / acc.second;
      cumulative += mean;
      curves << ++step << ',' << key.first << ',' << key.second << ',' << mean << ','
             << cumulative << "\n";
    }
  }
  {
    std::ofstream counts(out_dir / "action_counts.csv");
    counts << "action,count\n";
    for (int i = 0; i < kgagent::kNumPatterns; ++i) {
      const std::string name = kgagent::to_string(static_cast<kgagent::AbstractPattern>(i));
      const auto hit = action_counts.find(name);
      counts << name << ',' << (hit == action_counts.end() ? 0 : hit->second) << "\n";
    }
  }

  int profile_rows = 0;
  if (fs::exists(train_dir / "summary.json")) {
    const json summary = read_json_file(train_dir / "summary.json");
    std::ofstream profiles(out_dir / "profiles.csv");
    profiles << "run,conversation,user_kind,metric,value\n";
    profiles.precision(17);
    for (const json& episode : summary.at("final_profiles")) {
      for (const auto& [metric, value] : episode.at("profile").items()) {
        profiles << episode.at("run").get<int>() << ','
                 << episode.at("conversation").get<int>() << ','
                 << episode.at("user_kind").get<std::string>() << ',' << metric << ','
                 << value.get<double>() << "\n";
        ++profile_rows;
      }
    }
  } else {
    std::cout << "no summary.json next to the log; skipping profiles.csv\n";
  }

  int comparison_rows = 0;
  if (!args.checkpoint.empty()) {
    const kgagent::QuadStore base = args.kb.empty()
                                        ? kgagent::synth_kb(args.characters, args.seed)
                                        : kgagent::load_nquads(args.kb);
    const auto comparison = kgagent::compare_users(
        args.checkpoint, base, all_kinds(), kgagent::metric_from_string(args.intention),
        {args.seed, args.seed + 1, args.seed + 2});
    std::ofstream table(out_dir / "user_comparison.csv");
    table << "user_kind,mean_cumulative_reward\n";
    table.precision(17);
    for (const auto& [kind, mean] : comparison) {
      table << kgagent::to_string(kind) << ',' << mean << "\n";
      ++comparison_rows;
    }
  } else {
    std::cout << "no --checkpoint given; skipping user_comparison.csv\n";
  }

  std::cout << "report over " << rows << " turns, " << runs.size() << " runs -> "
            << out_dir.string() << "\n"
            << "  reward_curves.csv: " << step_rewards.size() << " steps\n"
            << "  action_counts.csv: " << rows << " actions total\n";
  if (profile_rows > 0) std::cout << "  profiles.csv: " << profile_rows << " rows\n";
  if (comparison_rows > 0) {
    std::cout << "  user_comparison.csv: " << comparison_rows << " rows\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"belief-network agent workbench"};
  app.require_subcommand(1);

  IngestArgs ingest_args;
  CLI::App* ingest = app.add_subcommand("ingest", "reify attribute records into a store");
  ingest->add_option("input", ingest_args.input, "records file (.csv or .jsonl)")->required();
  ingest->add_option("--out", ingest_args.out, "output directory");
  ingest->add_option("--map", ingest_args.column_mappings,
                     "column mapping canonical=header (repeatable)");

  MakeUsersArgs users_args;
  CLI::App* users = app.add_subcommand("make-users", "build a graded user population");
  users->add_option("base", users_args.base, "base store (.nq); omit to synthesize");
  users->add_option("--characters", users_args.characters, "synthetic world size");
  users->add_option("--seed", users_args.seed, "corruption seed");
  users->add_option("--user-kind", users_args.kinds, "kind to include (repeatable; default all)");
  users->add_option("--out", users_args.out, "output directory");

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "run the training schedule");
  train->add_option("--config", train_args.config, "experiment config (.json)")->required();
  train->add_option("--kb", train_args.kb, "base store (.nq); omit to synthesize");
  train->add_option("--ontology", train_args.ontology, "schema (.json); omit for character world");
  train->add_option("--characters", train_args.characters, "synthetic world size");
  train->add_option("--seed", train_args.seed, "override base_seed");
  train->add_option("--intention", train_args.intention, "override the reward metric");
  train->add_option("--user-kind", train_args.user_kind, "override the user population");
  train->add_option("--out", train_args.out, "override the output directory");

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "Q-value lens on a checkpoint");
  eval->add_option("--checkpoint", eval_args.checkpoint, "checkpoint directory")->required();
  eval->add_option("--ekg", eval_args.ekg, "belief network to evaluate on (.nq)");
  eval->add_option("--out", eval_args.out, "write the report here instead of stdout");

  ChatArgs chat_args;
  CLI::App* chat = app.add_subcommand("chat", "converse with the agent as its source");
  chat->add_option("--checkpoint", chat_args.checkpoint, "checkpoint directory")->required();
  chat->add_option("--ekg", chat_args.ekg, "belief network file, resumed when present");
  chat->add_option("--templates", chat_args.templates, "prompt template directory");
  chat->add_option("--intention", chat_args.intention, "metric whose reward is printed");
  chat->add_option("--seed", chat_args.seed, "tie-break seed");

  ReportArgs report_args;
  CLI::App* report = app.add_subcommand("report", "training log -> analysis tables");
  report->add_option("train_dir", report_args.train_dir, "directory holding log.csv")->required();
  report->add_option("--out", report_args.out, "output directory (default: train_dir)");
  report->add_option("--checkpoint", report_args.checkpoint,
                     "checkpoint for the user-comparison table");
  report->add_option("--kb", report_args.kb, "base store for the comparison (.nq)");
  report->add_option("--characters", report_args.characters, "synthetic world size");
  report->add_option("--seed", report_args.seed, "comparison seeds start here");
  report->add_option("--intention", report_args.intention, "comparison reward metric");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exits 0
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*ingest) return cmd_ingest(ingest_args);
    if (*users) return cmd_make_users(users_args);
    if (*train) return cmd_train(train_args);
    if (*eval) return cmd_eval(eval_args);
    if (*chat) return cmd_chat(chat_args);
    if (*report) return cmd_report(report_args);
  } catch (const kgagent::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;  // unreachable given require_subcommand(1)
}
