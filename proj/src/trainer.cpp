#include "kgagent/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <ostream>
#include <set>
#include <sstream>

#include "kgagent/desire.hpp"
#include "kgagent/errors.hpp"
#include "kgagent/rand.hpp"

namespace kgagent {
namespace {

using nlohmann::json;

constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void fnv_mix(std::uint64_t& h, const std::string& text) {
  for (const char ch : text) {
    h ^= static_cast<unsigned char>(ch);
    h *= kFnvPrime;
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  const auto bad = [](const std::string& why) {
    throw ConfigInvalidError("experiment config: " + why);
  };
  if (conversations < 1) bad("conversations must be >= 1");
  if (runs < 1) bad("runs must be >= 1");
  if (turns_per_conversation < 2) bad("turns_per_conversation must be >= 2");
  if (turns_per_conversation % 2 != 0) {
    bad("turns_per_conversation must be even (agent and user alternate)");
  }
  if (reset_every < 1) bad("reset_every must be >= 1");
  if (shuffle_every != reset_every) {
    bad("shuffle_every must equal reset_every: boundary events share one "
        "cadence and alternate reset/shuffle");
  }
  if (user_kinds.empty()) bad("user_kinds must name at least one kind");
  if (checkpoint_every < 1) bad("checkpoint_every must be >= 1");
  if (replay_capacity < 1) bad("replay_capacity must be >= 1");
  if (batch_size < 1) bad("batch_size must be >= 1");
  if (batch_size > replay_capacity) bad("batch_size exceeds replay_capacity");
  if (policy.hidden < 1) bad("hidden must be >= 1");
  if (policy.gamma < 0.0 || policy.gamma > 1.0) bad("gamma must be in [0, 1]");
  if (policy.learning_rate <= 0.0) bad("learning_rate must be positive");
  if (policy.tau <= 0.0 || policy.tau > 1.0) bad("tau must be in (0, 1]");
}

json ExperimentConfig::to_json() const {
  json kinds = json::array();
  for (const UserKind k : user_kinds) kinds.push_back(to_string(k));
  json j = {
      {"intention", to_string(intention)},
      {"conversations", conversations},
      {"turns_per_conversation", turns_per_conversation},
      {"runs", runs},
      {"reset_every", reset_every},
      {"shuffle_every", shuffle_every},
      {"user_kinds", kinds},
      {"base_seed", base_seed},
      {"checkpoint_every", checkpoint_every},
      {"replay_capacity", replay_capacity},
      {"batch_size", batch_size},
      {"hidden", policy.hidden},
      {"gamma", policy.gamma},
      {"learning_rate", policy.learning_rate},
      {"tau", policy.tau},
      {"out_dir", out_dir.string()},
  };
  j["reward_override_pattern"] =
      reward_override_pattern ? json(to_string(*reward_override_pattern))
                              : json(nullptr);
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  static const std::set<std::string> known = {
      "intention",      "conversations", "turns_per_conversation",
      "runs",           "reset_every",   "shuffle_every",
      "user_kinds",     "base_seed",     "checkpoint_every",
      "replay_capacity", "batch_size",   "hidden",
      "gamma",          "learning_rate", "tau",
      "out_dir",        "reward_override_pattern",
  };
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!known.count(key)) {
      throw ConfigInvalidError("experiment config: unknown key \"" + key +
                               "\"");
    }
  }

  ExperimentConfig c;
  try {
    if (j.contains("intention")) {
      c.intention = metric_from_string(j.at("intention").get<std::string>());
    }
    if (j.contains("conversations")) c.conversations = j.at("conversations");
    if (j.contains("turns_per_conversation")) {
      c.turns_per_conversation = j.at("turns_per_conversation");
    }
    if (j.contains("runs")) c.runs = j.at("runs");
    if (j.contains("reset_every")) c.reset_every = j.at("reset_every");
    if (j.contains("shuffle_every")) c.shuffle_every = j.at("shuffle_every");
    if (j.contains("user_kinds")) {
      c.user_kinds.clear();
      for (const json& name : j.at("user_kinds")) {
        c.user_kinds.push_back(user_kind_from_string(name.get<std::string>()));
      }
    }
    if (j.contains("base_seed")) c.base_seed = j.at("base_seed");
    if (j.contains("checkpoint_every")) {
      c.checkpoint_every = j.at("checkpoint_every");
    }
    if (j.contains("replay_capacity")) {
      c.replay_capacity = j.at("replay_capacity");
    }
    if (j.contains("batch_size")) c.batch_size = j.at("batch_size");
    if (j.contains("hidden")) c.policy.hidden = j.at("hidden");
    if (j.contains("gamma")) c.policy.gamma = j.at("gamma");
    if (j.contains("learning_rate")) {
      c.policy.learning_rate = j.at("learning_rate");
    }
    if (j.contains("tau")) c.policy.tau = j.at("tau");
    if (j.contains("out_dir")) {
      c.out_dir = j.at("out_dir").get<std::string>();
    }
    if (j.contains("reward_override_pattern") &&
        !j.at("reward_override_pattern").is_null()) {
      c.reward_override_pattern = pattern_from_string(
          j.at("reward_override_pattern").get<std::string>());
    }
  } catch (const json::exception& e) {
    throw ConfigInvalidError(std::string("experiment config: ") + e.what());
  } catch (const ParseError& e) {
    throw ConfigInvalidError(std::string("experiment config: ") + e.what());
  }
  c.validate();
  return c;
}

void GraphPool::add(const BeliefGraph& ekg) {
  snapshots_.push_back({ekg.store(), ekg.store().size()});
}

const QuadStore& GraphPool::pick_for_shuffle(std::size_t current_quads,
                                             std::mt19937& rng) const {
  if (snapshots_.empty()) {
    throw Error("graph pool: shuffle requested before any snapshot exists");
  }
  // The newest snapshot is the live eKG itself; "swap with another" means
  // skipping it whenever there is a choice.
  const std::size_t eligible =
      snapshots_.size() > 1 ? snapshots_.size() - 1 : 1;

  std::vector<std::size_t> similar;
  const double tolerance = 0.25 * static_cast<double>(current_quads);
  for (std::size_t i = 0; i < eligible; ++i) {
    const double gap = std::abs(static_cast<double>(snapshots_[i].quads) -
                                static_cast<double>(current_quads));
    if (gap <= tolerance) similar.push_back(i);
  }
  if (!similar.empty()) {
    return snapshots_[similar[draw_below(rng, similar.size())]].store;
  }
  std::size_t nearest = 0;
  double nearest_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < eligible; ++i) {
    const double gap = std::abs(static_cast<double>(snapshots_[i].quads) -
                                static_cast<double>(current_quads));
    if (gap < nearest_gap) {
      nearest_gap = gap;
      nearest = i;
    }
  }
  return snapshots_[nearest].store;
}

std::string GraphPool::digest() const {
  std::uint64_t h = kFnvOffset;
  for (const Snapshot& s : snapshots_) {
    fnv_mix(h, kb_fingerprint(s.store));
    fnv_mix(h, "|");
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

EpisodeLog run_conversation(PolicyLearner& learner, ReplayBuffer& replay,
                            BeliefGraph& ekg, const UserModel& user,
                            const ExperimentConfig& config, int run_index,
                            int conversation_index, bool lifetime_ends,
                            std::mt19937& rng, GraphPool* pool) {
  EpisodeLog log;
  log.run = run_index;
  log.conversation = conversation_index;
  log.user_kind = user.kind;

  const std::string chat_id = "run" + std::to_string(run_index) + "-conv" +
                              std::to_string(conversation_index);

  // The user opens unprompted (turn 0) so the first desires have an iKG to
  // anchor on.
  InteractionGraph last_ikg =
      build_interaction_graph(opening_statement(user, rng), chat_id, 0);
  ekg.integrate(last_ikg);

  SimplifiedGraph state_graph = simplify(ekg);
  std::vector<DesireInstance> desires = generate_desires(ekg, last_ikg);

  const int rounds = config.agent_turns();
  for (int turn = 1; turn <= rounds; ++turn) {
    const double m_prev = evaluate_metric_or_zero(config.intention, ekg);
    const double eps = learner.epsilon();
    const std::size_t pick = learner.choose(state_graph, desires, eps, rng);
    const DesireInstance chosen = desires[pick];

    const Capsule reply = answer(user, render_user_query(chosen), rng);
    last_ikg = build_interaction_graph(reply, chat_id, turn);
    ekg.integrate(last_ikg);

    const double m_next = evaluate_metric_or_zero(config.intention, ekg);
    double reward = reward_delta(m_prev, m_next);
    if (config.reward_override_pattern) {
      reward =
          chosen.pattern == *config.reward_override_pattern ? 1.0 : 0.0;
    }

    SimplifiedGraph next_graph = simplify(ekg);
    std::vector<DesireInstance> next_desires = generate_desires(ekg, last_ikg);

    Transition tr;
    tr.graph = std::move(state_graph);
    tr.action = action_key_of(chosen);
    tr.reward = reward;
    tr.next_graph = next_graph;
    for (const DesireInstance& d : next_desires) {
      const ActionKey key = action_key_of(d);
      if (std::find(tr.next_actions.begin(), tr.next_actions.end(), key) ==
          tr.next_actions.end()) {
        tr.next_actions.push_back(key);
      }
    }
    tr.terminal = lifetime_ends && turn == rounds;

    // Logged Q is the composite value of the chosen action before this
    // turn's update touches the parameters.
    const double q = action_q_value(
        q_forward(learner.qnet(), learner.encode_graph(tr.graph)),
        chosen.pattern, chosen.involved_types, learner.type_vocab());

    replay.push(std::move(tr));
    const std::size_t batch_n = std::min(config.batch_size, replay.size());
    learner.td_update(replay.sample(batch_n, rng));
    learner.soft_update_targets();

    TurnRecord rec;
    rec.run = run_index;
    rec.conversation = conversation_index;
    rec.turn = turn;
    rec.action = chosen.pattern;
    rec.m_prev = m_prev;
    rec.m_next = m_next;
    rec.reward = reward;
    rec.epsilon = eps;
    rec.printed_reward = reward_printed_form(m_prev, m_next);
    rec.user_kind = user.kind;
    rec.q_value = q;
    rec.desire = chosen;
    log.turns.push_back(std::move(rec));

    state_graph = std::move(next_graph);
    desires = std::move(next_desires);
  }

  log.final_profile = profile_knowledge(ekg);
  if (pool != nullptr) pool->add(ekg);
  return log;
}

ExperimentReport run_experiment(const ExperimentConfig& config,
                                const Ontology& ontology,
                                const QuadStore& base_kb) {
  config.validate();
  ExperimentReport report;
  const int updates_per_run = config.conversations * config.agent_turns();
  report.average_reward_per_step.assign(
      static_cast<std::size_t>(updates_per_run), 0.0);

  for (int r = 0; r < config.runs; ++r) {
    std::mt19937 rng(config.base_seed +
                     7919u * static_cast<std::uint32_t>(r));
    PolicyLearner learner(ontology, config.policy, rng);
    ReplayBuffer replay(config.replay_capacity);
    BeliefGraph ekg(ontology);
    GraphPool pool;
    std::vector<std::string> events;
    std::size_t step = 0;

    for (int c = 1; c <= config.conversations; ++c) {
      const UserKind kind =
          config.user_kinds[static_cast<std::size_t>(c - 1) %
                            config.user_kinds.size()];
      const std::uint32_t user_seed =
          config.base_seed + 104729u * static_cast<std::uint32_t>(r + 1) +
          31u * static_cast<std::uint32_t>(c);
      UserModel user = corrupt(base_kb, kind, user_seed);
      user.source = "lFriends:" + to_string(kind) + "-" + std::to_string(c);

      const bool boundary = c % config.reset_every == 0;
      const bool lifetime_ends = boundary || c == config.conversations;

      EpisodeLog log = run_conversation(learner, replay, ekg, user, config, r,
                                        c, lifetime_ends, rng, &pool);
      for (const TurnRecord& t : log.turns) {
        report.average_reward_per_step[step++] += t.reward;
        ++report.action_counts[to_string(t.action)];
      }
      report.episodes.push_back(std::move(log));

      if (!config.out_dir.empty() && c % config.checkpoint_every == 0) {
        std::ostringstream rng_text;
        rng_text << rng;
        save_checkpoint(config.out_dir / ("run-" + std::to_string(r)) /
                            ("checkpoint-" + std::to_string(c)),
                        learner, ontology, rng_text.str(), pool.digest());
      }

      if (boundary) {
        // Boundary events alternate: reset after the 1st, shuffle after the
        // 2nd, reset after the 3rd… A reset still counts when it coincides
        // with the run's end (it is what ends the lifetime); a shuffle there
        // would swap in a graph nobody ever sees, so it is dropped.
        const bool is_reset = (c / config.reset_every) % 2 == 1;
        if (is_reset) {
          events.push_back("reset@" + std::to_string(c));
          ekg.reset();
        } else if (c != config.conversations) {
          events.push_back("shuffle@" + std::to_string(c));
          ekg.adopt_store(pool.pick_for_shuffle(ekg.store().size(), rng));
        }
      }
    }
    report.boundary_events.push_back(std::move(events));
  }

  for (double& x : report.average_reward_per_step) {
    x /= static_cast<double>(config.runs);
  }
  report.average_cumulative_reward.reserve(
      report.average_reward_per_step.size());
  double running = 0.0;
  for (const double x : report.average_reward_per_step) {
    running += x;
    report.average_cumulative_reward.push_back(running);
  }
  return report;
}

namespace {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (const char ch : field) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  quoted += '"';
  return quoted;
}

}  // namespace

void ExperimentReport::write_csv(std::ostream& out) const {
  out << "run,conversation,turn,action,m_prev,m_next,reward,"
         "epsilon,printed_reward,user_kind,q,desire\n";
  out << std::setprecision(17);
  for (const EpisodeLog& episode : episodes) {
    for (const TurnRecord& t : episode.turns) {
      out << t.run << ',' << t.conversation << ',' << t.turn << ','
          << to_string(t.action) << ',' << t.m_prev << ',' << t.m_next << ','
          << t.reward << ',' << t.epsilon << ',' << t.printed_reward << ','
          << to_string(t.user_kind) << ',' << t.q_value << ','
          << csv_escape(t.desire.to_json().dump()) << '\n';
    }
  }
}

json ExperimentReport::summary() const {
  json profiles = json::array();
  for (const EpisodeLog& e : episodes) {
    profiles.push_back({{"run", e.run},
                        {"conversation", e.conversation},
                        {"user_kind", to_string(e.user_kind)},
                        {"profile", e.final_profile}});
  }
  std::size_t updates = 0;
  for (const EpisodeLog& e : episodes) updates += e.turns.size();
  return {
      {"updates", updates},
      {"episodes", episodes.size()},
      {"boundary_events", boundary_events},
      {"action_counts", action_counts},
      {"average_reward_per_step", average_reward_per_step},
      {"average_cumulative_reward", average_cumulative_reward},
      {"final_profiles", profiles},
  };
}

QValueReport evaluate_policy(
    const std::filesystem::path& checkpoint_dir, const BeliefGraph& seed_ekg,
    const std::vector<DesireInstance>& desires_sample) {
  const LoadedCheckpoint loaded = load_checkpoint(checkpoint_dir);
  const QOutput out = q_forward(loaded.learner.qnet(),
                                loaded.learner.encode_graph(simplify(seed_ekg)));

  QValueReport report;
  const VecX pa = softmax(out.abstract_logits);
  const double pa_mean = pa.mean();
  for (int p = 0; p < kNumPatterns; ++p) {
    report.abstract_normalized.emplace_back(
        to_string(static_cast<AbstractPattern>(p)), pa[p] - pa_mean);
  }
  const VecX pt = softmax(out.type_logits);
  const double pt_mean = pt.size() > 0 ? pt.mean() : 0.0;
  const TypeVocab& tv = loaded.learner.type_vocab();
  for (int i = 0; i < tv.size(); ++i) {
    report.type_normalized.emplace_back(tv.types[static_cast<std::size_t>(i)],
                                        pt[i] - pt_mean);
  }
  for (const DesireInstance& d : desires_sample) {
    std::string label = to_string(d.pattern);
    for (const std::string& type : d.involved_types) label += "|" + type;
    report.desire_q.emplace_back(
        std::move(label),
        action_q_value(out, d.pattern, d.involved_types, tv));
  }
  return report;
}

std::map<std::string, double> profile_knowledge(const BeliefGraph& ekg) {
  std::map<std::string, double> profile;
  for (const MetricKind m :
       {MetricKind::AverageDegree, MetricKind::Sparseness,
        MetricKind::ShortestPath, MetricKind::TotalTriples,
        MetricKind::AveragePopulation}) {
    profile[to_string(m)] = evaluate_metric_or_zero(m, ekg);
  }
  return profile;
}

std::vector<std::pair<UserKind, double>> compare_users(
    const std::filesystem::path& checkpoint_dir, const QuadStore& base_kb,
    const std::vector<UserKind>& kinds, MetricKind intention,
    const std::vector<std::uint32_t>& seeds) {
  const LoadedCheckpoint loaded = load_checkpoint(checkpoint_dir);

  std::vector<std::pair<UserKind, double>> table;
  for (const UserKind kind : kinds) {
    double total = 0.0;
    for (const std::uint32_t seed : seeds) {
      const UserModel user = corrupt(base_kb, kind, seed);
      BeliefGraph ekg(loaded.ontology);
      std::mt19937 rng(seed * 2654435761u + 17u);

      InteractionGraph last_ikg = build_interaction_graph(
          opening_statement(user, rng), "frozen-" + to_string(kind), 0);
      ekg.integrate(last_ikg);
      std::vector<DesireInstance> desires = generate_desires(ekg, last_ikg);

      for (int turn = 1; turn <= 10; ++turn) {
        const double m_prev = evaluate_metric_or_zero(intention, ekg);
        const std::size_t pick =
            loaded.learner.choose(simplify(ekg), desires, 0.0, rng);
        const Capsule reply =
            answer(user, render_user_query(desires[pick]), rng);
        last_ikg = build_interaction_graph(
            reply, "frozen-" + to_string(kind), turn);
        ekg.integrate(last_ikg);
        total += reward_delta(m_prev,
                              evaluate_metric_or_zero(intention, ekg));
        desires = generate_desires(ekg, last_ikg);
      }
    }
    table.emplace_back(kind, total / static_cast<double>(seeds.size()));
  }
  return table;
}

}  // namespace kgagent
