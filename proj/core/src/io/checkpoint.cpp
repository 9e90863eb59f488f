#include "tracerl/io/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace tracerl {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'T', 'R', 'A', 'C', 'E', 'R', 'L', '\0'};

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

std::uint64_t get_u64(std::string_view in, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return v;
}

template <typename Net, typename F>
void visit_mlp(const std::string& prefix, Net& net, F&& f) {
  for (int l = 0; l < net.num_layers(); ++l) {
    f(prefix + ".W" + std::to_string(l), net.weight(l));
    f(prefix + ".b" + std::to_string(l), net.bias(l));
  }
}

// Declaration order of every trace parameter block.
template <typename A, typename F>
void visit_trace(A& a, F&& f) {
  visit_mlp("actor", a.agent.actor, f);
  visit_mlp("critic1", a.agent.critic1, f);
  visit_mlp("critic2", a.agent.critic2, f);
  visit_mlp("target1", a.agent.target1, f);
  visit_mlp("target2", a.agent.target2, f);
  if (a.model.latent()) visit_mlp("transition.encoder", a.model.encoder(), f);
  visit_mlp("transition.decoder", a.model.decoder(), f);
  if (a.model.latent()) f(std::string("transition.z_weight"), a.model.z_weight());
  f(std::string("action_embeddings"), a.table.rows());
  if (a.embedder.learned()) visit_mlp("state_embedder", a.embedder.net(), f);
}

template <typename A, typename F>
void visit_discrete(A& a, F&& f) {
  visit_mlp("actor", a.actor, f);
  visit_mlp("critic1", a.critic1, f);
  visit_mlp("critic2", a.critic2, f);
  visit_mlp("target1", a.target1, f);
  visit_mlp("target2", a.target2, f);
}

Checkpoint base(const ExperimentConfig& config, std::uint64_t seed, const TrainingSummary& summary) {
  Checkpoint c;
  c.config_json = json::parse(config_to_json(config, -1)).dump();
  c.seed = seed;
  c.episode = summary.episodes;
  c.total_steps = summary.total_steps;
  c.rng_state = summary.update_rng_state;
  return c;
}

void load_into(const Checkpoint& c, const std::string& name, Eigen::MatrixXd& target) {
  const Eigen::MatrixXd& v = c.array(name);
  if (v.rows() != target.rows() || v.cols() != target.cols()) {
    throw std::runtime_error("checkpoint array " + name + " is " + std::to_string(v.rows()) + "x" +
                             std::to_string(v.cols()) + ", config expects " + std::to_string(target.rows()) + "x" +
                             std::to_string(target.cols()));
  }
  target = v;
}

void expect_complete(const Checkpoint& c, std::size_t visited) {
  if (visited != c.arrays.size()) {
    throw std::runtime_error("checkpoint holds " + std::to_string(c.arrays.size()) + " arrays, config expects " +
                             std::to_string(visited));
  }
}

double scalar(const Checkpoint& c, const std::string& key) {
  const auto it = c.scalars.find(key);
  if (it == c.scalars.end()) throw std::runtime_error("checkpoint lacks scalar " + key);
  return it->second;
}

}  // namespace

const Eigen::MatrixXd& Checkpoint::array(const std::string& name) const {
  for (const auto& a : arrays) {
    if (a.name == name) return a.value;
  }
  throw std::runtime_error("checkpoint lacks array " + name);
}

std::string serialize_checkpoint(const Checkpoint& c) {
  json header;
  header["format_version"] = c.format_version;
  header["kind"] = c.kind == CheckpointKind::kTrace ? "trace" : "discrete";
  header["config"] = json::parse(c.config_json);
  header["seed"] = c.seed;
  header["episode"] = c.episode;
  header["total_steps"] = c.total_steps;
  header["rng_state"] = c.rng_state;
  header["scalars"] = c.scalars;
  auto arrays = json::array();
  for (const auto& a : c.arrays) arrays.push_back({{"name", a.name}, {"rows", a.value.rows()}, {"cols", a.value.cols()}});
  header["arrays"] = arrays;
  const std::string text = header.dump();

  std::string out(kMagic, sizeof kMagic);
  put_u64(out, text.size());
  out += text;
  for (const auto& a : c.arrays) {
    for (Eigen::Index r = 0; r < a.value.rows(); ++r) {
      for (Eigen::Index col = 0; col < a.value.cols(); ++col) put_u64(out, std::bit_cast<std::uint64_t>(a.value(r, col)));
    }
  }
  return out;
}

Checkpoint deserialize_checkpoint(std::string_view bytes) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw std::runtime_error("not a tracerl checkpoint (bad magic)");
  }
  const std::uint64_t header_len = get_u64(bytes, 8);
  if (header_len > bytes.size() - 16) throw std::runtime_error("checkpoint truncated in header");
  Checkpoint c;
  std::size_t at = 16 + header_len;
  try {
    const json h = json::parse(bytes.substr(16, header_len));
    c.format_version = h.at("format_version").get<int>();
    if (c.format_version != Checkpoint::kFormatVersion) {
      throw std::runtime_error("unsupported checkpoint format_version " + std::to_string(c.format_version));
    }
    const auto kind = h.at("kind").get<std::string>();
    if (kind != "trace" && kind != "discrete") throw std::runtime_error("unknown checkpoint kind " + kind);
    c.kind = kind == "trace" ? CheckpointKind::kTrace : CheckpointKind::kDiscrete;
    c.config_json = h.at("config").dump();
    c.seed = h.at("seed").get<std::uint64_t>();
    c.episode = h.at("episode").get<int>();
    c.total_steps = h.at("total_steps").get<long>();
    c.rng_state = h.at("rng_state").get<std::string>();
    c.scalars = h.at("scalars").get<std::map<std::string, double>>();
    for (const auto& a : h.at("arrays")) {
      NamedArray na{a.at("name").get<std::string>(), Eigen::MatrixXd(a.at("rows").get<Eigen::Index>(),
                                                                     a.at("cols").get<Eigen::Index>())};
      const auto count = static_cast<std::size_t>(na.value.size());
      if (bytes.size() < at || (bytes.size() - at) / 8 < count) {
        throw std::runtime_error("checkpoint truncated in array " + na.name);
      }
      for (Eigen::Index r = 0; r < na.value.rows(); ++r) {
        for (Eigen::Index col = 0; col < na.value.cols(); ++col) {
          na.value(r, col) = std::bit_cast<double>(get_u64(bytes, at));
          at += 8;
        }
      }
      c.arrays.push_back(std::move(na));
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed checkpoint header: ") + e.what());
  }
  if (at != bytes.size()) throw std::runtime_error("checkpoint has trailing bytes");
  return c;
}

void save_checkpoint(const std::string& path, const Checkpoint& checkpoint) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  const std::string bytes = serialize_checkpoint(checkpoint);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("failed writing " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read checkpoint " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return deserialize_checkpoint(buf.str());
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

Checkpoint make_checkpoint(const ExperimentConfig& config, std::uint64_t seed, const TraceArtifacts& artifacts,
                           const TrainingSummary& summary) {
  Checkpoint c = base(config, seed, summary);
  c.kind = CheckpointKind::kTrace;
  c.scalars = {{"alpha", artifacts.agent.alpha},
               {"gamma", artifacts.agent.gamma},
               {"tau", artifacts.agent.tau},
               {"proto_bound", artifacts.agent.proto_bound},
               {"transition_frozen", artifacts.model.frozen ? 1.0 : 0.0},
               {"table_frozen", artifacts.table.frozen ? 1.0 : 0.0}};
  visit_trace(artifacts, [&](const std::string& name, const Eigen::MatrixXd& m) { c.arrays.push_back({name, m}); });
  return c;
}

Checkpoint make_checkpoint(const ExperimentConfig& config, std::uint64_t seed, const DiscreteSacAgent& agent,
                           const TrainingSummary& summary) {
  Checkpoint c = base(config, seed, summary);
  c.kind = CheckpointKind::kDiscrete;
  c.scalars = {{"alpha", agent.alpha}, {"gamma", agent.gamma}, {"tau", agent.tau}};
  visit_discrete(agent, [&](const std::string& name, const Eigen::MatrixXd& m) { c.arrays.push_back({name, m}); });
  return c;
}

ExperimentConfig checkpoint_config(const Checkpoint& checkpoint) {
  try {
    return parse_config(checkpoint.config_json);
  } catch (const ConfigError& e) {
    throw std::runtime_error(std::string("checkpoint config invalid: ") + e.what());
  }
}

TraceArtifacts restore_trace_artifacts(const Checkpoint& c) {
  if (c.kind != CheckpointKind::kTrace) throw std::runtime_error("checkpoint holds a discrete SAC agent, not TRACE");
  const ExperimentConfig config = checkpoint_config(c);
  TraceArtifacts a = make_trace_artifacts(config.shape, 0);
  std::size_t visited = 0;
  visit_trace(a, [&](const std::string& name, Eigen::MatrixXd& m) {
    load_into(c, name, m);
    ++visited;
  });
  expect_complete(c, visited);
  a.agent.alpha = scalar(c, "alpha");
  a.agent.gamma = scalar(c, "gamma");
  a.agent.tau = scalar(c, "tau");
  a.agent.proto_bound = scalar(c, "proto_bound");
  a.model.frozen = scalar(c, "transition_frozen") != 0.0;
  a.table.frozen = scalar(c, "table_frozen") != 0.0;
  return a;
}

DiscreteSacAgent restore_discrete_agent(const Checkpoint& c) {
  if (c.kind != CheckpointKind::kDiscrete) throw std::runtime_error("checkpoint holds TRACE artifacts, not discrete SAC");
  const ExperimentConfig config = checkpoint_config(c);
  Rng rng(0);
  DiscreteSacAgent a = DiscreteSacAgent::create(config.shape.state_dim, config.shape.action_count, config.shape.sac, rng);
  std::size_t visited = 0;
  visit_discrete(a, [&](const std::string& name, Eigen::MatrixXd& m) {
    load_into(c, name, m);
    ++visited;
  });
  expect_complete(c, visited);
  a.alpha = scalar(c, "alpha");
  a.gamma = scalar(c, "gamma");
  a.tau = scalar(c, "tau");
  return a;
}

}  // namespace tracerl
