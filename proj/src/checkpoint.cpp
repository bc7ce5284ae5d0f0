#include "kgagent/checkpoint.hpp"

#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <utility>
#include <vector>

#include "kgagent/errors.hpp"

namespace kgagent {
namespace {

using nlohmann::json;

struct NamedTensor {
  std::string name;
  const MatX* tensor;
};

// Archive order: online nets, target nets (same names under tgt.), then the
// Adam moments. The map already iterates moments sorted by name.
std::vector<NamedTensor> archive_order(const PolicyLearner& learner) {
  std::vector<NamedTensor> out;
  const auto grab = [&out](const std::string& prefix) {
    return [&out, prefix](const std::string& name, const MatX& m) {
      out.push_back({prefix + name, &m});
    };
  };
  for_each_tensor(learner.encoder(), grab(""));
  for_each_tensor(learner.qnet(), grab(""));
  for_each_tensor(learner.target_encoder(), grab("tgt."));
  for_each_tensor(learner.target_qnet(), grab("tgt."));
  for (const auto& [name, mv] : learner.adam().moments) {
    out.push_back({"adam.m." + name, &mv.first});
    out.push_back({"adam.v." + name, &mv.second});
  }
  return out;
}

void write_row_major(std::ofstream& bin, const MatX& m) {
  std::vector<double> buffer;
  buffer.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      buffer.push_back(m(r, c));
    }
  }
  bin.write(reinterpret_cast<const char*>(buffer.data()),
            static_cast<std::streamsize>(buffer.size() * sizeof(double)));
}

MatX read_row_major(const std::vector<char>& blob, std::uint64_t offset,
                    Eigen::Index rows, Eigen::Index cols) {
  MatX m(rows, cols);
  const double* at = reinterpret_cast<const double*>(blob.data() + offset);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = *at++;
    }
  }
  return m;
}

[[noreturn]] void corrupt(const std::filesystem::path& dir,
                          const std::string& why) {
  throw CheckpointCorruptError("checkpoint " + dir.string() + ": " + why);
}

}  // namespace

void save_checkpoint(const std::filesystem::path& dir,
                     const PolicyLearner& learner, const Ontology& ontology,
                     const std::string& rng_state,
                     const std::string& graph_pool_digest) {
  std::filesystem::create_directories(dir);

  const std::vector<NamedTensor> order = archive_order(learner);
  std::ofstream bin(dir / "params.bin", std::ios::binary | std::ios::trunc);
  if (!bin) {
    throw CheckpointCorruptError("checkpoint " + dir.string() +
                                 ": cannot open params.bin for writing");
  }
  json tensors = json::array();
  std::uint64_t offset = 0;
  for (const NamedTensor& nt : order) {
    write_row_major(bin, *nt.tensor);
    tensors.push_back({{"name", nt.name},
                       {"rows", nt.tensor->rows()},
                       {"cols", nt.tensor->cols()},
                       {"offset", offset}});
    offset += static_cast<std::uint64_t>(nt.tensor->size()) * sizeof(double);
  }
  bin.close();

  const PolicyConfig& cfg = learner.config();
  const json manifest = {
      {"format", 1},
      {"config",
       {{"hidden", cfg.hidden},
        {"gamma", cfg.gamma},
        {"learning_rate", cfg.learning_rate},
        {"tau", cfg.tau}}},
      {"ontology", ontology.to_json()},
      {"meta",
       {{"updates_applied", learner.updates_applied()},
        {"epsilon", learner.epsilon()},
        {"adam_step", learner.adam().step},
        {"rng_state", rng_state},
        {"graph_pool_digest", graph_pool_digest}}},
      {"tensors", tensors},
  };
  std::ofstream out(dir / "manifest.json", std::ios::trunc);
  out << manifest.dump(2) << "\n";
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) corrupt(dir, "manifest.json missing");
  json manifest;
  try {
    in >> manifest;
  } catch (const json::exception& e) {
    corrupt(dir, std::string("manifest unreadable: ") + e.what());
  }

  try {
    if (manifest.at("format").get<int>() != 1) {
      corrupt(dir, "unknown format " + manifest.at("format").dump());
    }
    const Ontology ontology = Ontology::from_json(manifest.at("ontology"));
    const json& jcfg = manifest.at("config");
    PolicyConfig cfg;
    cfg.hidden = jcfg.at("hidden").get<int>();
    cfg.gamma = jcfg.at("gamma").get<double>();
    cfg.learning_rate = jcfg.at("learning_rate").get<double>();
    cfg.tau = jcfg.at("tau").get<double>();

    // Shapes come from the config + ontology; the archive must fill exactly
    // the tensors that combination implies (Adam moments being optional).
    std::mt19937 scratch(0);
    PolicyLearner learner(ontology, cfg, scratch);

    std::map<std::string, MatX*> slots;
    const auto offer = [&slots](const std::string& prefix) {
      return [&slots, prefix](const std::string& name, MatX& m) {
        slots[prefix + name] = &m;
      };
    };
    for_each_tensor(learner.encoder(), offer(""));
    for_each_tensor(learner.qnet(), offer(""));
    for_each_tensor(learner.target_encoder(), offer("tgt."));
    for_each_tensor(learner.target_qnet(), offer("tgt."));

    std::ifstream bin(dir / "params.bin", std::ios::binary);
    if (!bin) corrupt(dir, "params.bin missing");
    std::vector<char> blob((std::istreambuf_iterator<char>(bin)),
                           std::istreambuf_iterator<char>());

    std::set<std::string> filled;
    for (const json& jt : manifest.at("tensors")) {
      const std::string name = jt.at("name").get<std::string>();
      const auto rows = jt.at("rows").get<Eigen::Index>();
      const auto cols = jt.at("cols").get<Eigen::Index>();
      const auto offset = jt.at("offset").get<std::uint64_t>();
      if (rows < 0 || cols < 0 ||
          offset + static_cast<std::uint64_t>(rows) *
                       static_cast<std::uint64_t>(cols) * sizeof(double) >
              blob.size()) {
        corrupt(dir, "tensor " + name + " runs past the end of params.bin");
      }

      if (name.rfind("adam.m.", 0) == 0 || name.rfind("adam.v.", 0) == 0) {
        const bool is_m = name[5] == 'm';
        const std::string base = name.substr(7);
        const auto slot = slots.find(base);
        if (slot == slots.end() || base.rfind("tgt.", 0) == 0) {
          corrupt(dir, "moment for unknown tensor " + base);
        }
        if (slot->second->rows() != rows || slot->second->cols() != cols) {
          corrupt(dir, "moment " + name + " shaped unlike its tensor");
        }
        auto& mv = learner.adam().moments[base];
        (is_m ? mv.first : mv.second) = read_row_major(blob, offset, rows, cols);
        continue;
      }

      const auto slot = slots.find(name);
      if (slot == slots.end()) corrupt(dir, "unexpected tensor " + name);
      if (slot->second->rows() != rows || slot->second->cols() != cols) {
        corrupt(dir, "tensor " + name + " has shape " + std::to_string(rows) +
                         "x" + std::to_string(cols) + ", expected " +
                         std::to_string(slot->second->rows()) + "x" +
                         std::to_string(slot->second->cols()));
      }
      *slot->second = read_row_major(blob, offset, rows, cols);
      filled.insert(name);
    }
    if (filled.size() != slots.size()) {
      corrupt(dir, "archive fills " + std::to_string(filled.size()) + " of " +
                       std::to_string(slots.size()) + " network tensors");
    }

    const json& jmeta = manifest.at("meta");
    CheckpointMeta meta;
    meta.updates_applied = jmeta.at("updates_applied").get<std::int64_t>();
    meta.epsilon = jmeta.at("epsilon").get<double>();
    meta.rng_state = jmeta.at("rng_state").get<std::string>();
    meta.graph_pool_digest = jmeta.at("graph_pool_digest").get<std::string>();
    learner.set_updates_applied(meta.updates_applied);
    learner.adam().step = jmeta.at("adam_step").get<std::int64_t>();

    return {std::move(learner), ontology, meta};
  } catch (const json::exception& e) {
    corrupt(dir, std::string("manifest field missing or mistyped: ") + e.what());
  } catch (const ParseError& e) {
    corrupt(dir, std::string("embedded ontology unreadable: ") + e.what());
  }
}

}  // namespace kgagent
