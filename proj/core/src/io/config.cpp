#include "tracerl/io/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace tracerl {

using nlohmann::json;

namespace {

// Line of the first occurrence of "key" in the source text, 0 if absent.
int find_key_line(std::string_view text, const std::string& key) {
  const std::string quoted = "\"" + key + "\"";
  const auto pos = text.find(quoted);
  if (pos == std::string_view::npos) return 0;
  int line = 1;
  for (std::size_t i = 0; i < pos; ++i) line += text[i] == '\n' ? 1 : 0;
  return line;
}

// Reads one JSON object, remembering which keys were consumed so that any
// leftover key can be reported as unknown.
class Section {
 public:
  Section(const json& obj, std::string path, std::string_view text) : obj_(obj), path_(std::move(path)), text_(text) {
    if (!obj_.is_object()) fail(path_.empty() ? "config" : path_, "must be a JSON object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return obj_.contains(key) && !obj_.at(key).is_null();
  }

  const json& raw(const std::string& key) {
    if (!has(key)) fail(full(key), "missing required field");
    return obj_.at(key);
  }

  template <typename T>
  void get(const std::string& key, T& out) {
    if (!has(key)) return;
    out = convert<T>(key, obj_.at(key));
  }

  template <typename T>
  T require(const std::string& key) {
    return convert<T>(key, raw(key));
  }

  Section child(const std::string& key) { return Section(raw(key), full(key), text_); }

  void finish() const {
    for (const auto& [key, _] : obj_.items()) {
      if (!seen_.contains(key)) fail(full(key), "unknown key");
    }
  }

  [[noreturn]] void fail(const std::string& field, const std::string& what) const {
    const std::string leaf = field.substr(field.find_last_of('.') + 1);
    const int line = find_key_line(text_, leaf);
    throw ConfigError((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) + field + ": " + what);
  }

  std::string full(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  template <typename T>
  T convert(const std::string& key, const json& value) const {
    try {
      if constexpr (std::is_same_v<T, int>) {
        if (!value.is_number_integer()) throw std::invalid_argument("expected an integer");
      } else if constexpr (std::is_same_v<T, double>) {
        if (!value.is_number()) throw std::invalid_argument("expected a number");
      } else if constexpr (std::is_same_v<T, bool>) {
        if (!value.is_boolean()) throw std::invalid_argument("expected true or false");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!value.is_string()) throw std::invalid_argument("expected a string");
      } else if constexpr (std::is_same_v<T, std::vector<int>>) {
        if (!value.is_array()) throw std::invalid_argument("expected an array of integers");
        for (const auto& v : value) {
          if (!v.is_number_integer() || v.get<int>() <= 0) {
            throw std::invalid_argument("expected an array of positive integers");
          }
        }
      }
      return value.get<T>();
    } catch (const std::invalid_argument& e) {
      fail(full(key), e.what());
    } catch (const json::exception& e) {
      fail(full(key), e.what());
    }
  }

  const json& obj_;
  std::string path_;
  std::string_view text_;
  std::set<std::string> seen_;
};

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "trace") return Algorithm::kTrace;
  if (s == "trace-no-transfer") return Algorithm::kTraceNoTransfer;
  if (s == "sac-discrete") return Algorithm::kSacDiscrete;
  if (s == "bt") return Algorithm::kBt;
  throw std::invalid_argument("expected one of trace, trace-no-transfer, sac-discrete, bt");
}

void parse_env(Section s, EnvConfig& env) {
  const auto family = s.require<std::string>("family");
  if (family == "gridworld") {
    env.family = EnvFamily::kGridworld;
    auto& g = env.gridworld;
    s.get("grid_size", g.grid_size);
    s.get("n_steps", g.n_steps);
    s.get("max_actions", g.max_actions);
    s.get("step_reward", g.step_reward);
    s.get("goal_reward", g.goal_reward);
    if (s.has("encoding")) {
      const auto enc = s.require<std::string>("encoding");
      if (enc == "coords") {
        g.encoding = StateEncoding::kCoords;
      } else if (enc == "onehot") {
        g.encoding = StateEncoding::kOneHot;
      } else {
        s.fail(s.full("encoding"), "expected coords or onehot");
      }
    }
    try {
      g.validate();
    } catch (const std::invalid_argument& e) {
      s.fail(s.full("family"), e.what());
    }
  } else if (family == "cartpole") {
    env.family = EnvFamily::kCartPole;
    auto& c = env.cartpole;
    s.get("force_levels", c.force_levels);
    s.get("force_min", c.force_min);
    s.get("force_max", c.force_max);
    s.get("max_steps", c.max_steps);
    s.get("gravity", c.gravity);
    s.get("cart_mass", c.cart_mass);
    s.get("pole_mass", c.pole_mass);
    s.get("half_length", c.half_length);
    s.get("dt", c.dt);
    s.get("angle_limit_deg", c.angle_limit_deg);
    s.get("position_limit", c.position_limit);
    try {
      c.validate();
    } catch (const std::invalid_argument& e) {
      s.fail(s.full("family"), e.what());
    }
  } else {
    s.fail(s.full("family"), "expected gridworld or cartpole");
  }
  s.finish();
}

void parse_sac(Section s, ExperimentConfig& cfg) {
  auto& shape = cfg.shape;
  auto& sac = shape.sac;
  if (s.has("state_embed_dim")) {
    shape.embedder_mode = EmbedderMode::kLearned;
    shape.state_embed_dim = s.require<int>("state_embed_dim");
    if (shape.state_embed_dim < 1) s.fail(s.full("state_embed_dim"), "must be positive");
  } else {
    shape.embedder_mode = EmbedderMode::kIdentity;
  }
  s.get("state_embed_hiddens", shape.state_embed_hiddens);
  s.get("ac_hiddens", sac.hiddens);
  s.get("actor_lr", sac.actor_lr);
  s.get("critic_lr", sac.critic_lr);
  s.get("state_embed_lr", sac.state_embed_lr);
  s.get("tau", sac.tau);
  s.get("alpha", sac.alpha);
  s.get("gamma", sac.gamma);
  if (sac.tau < 0.0 || sac.tau > 1.0) s.fail(s.full("tau"), "must lie in [0, 1]");
  if (sac.gamma < 0.0 || sac.gamma > 1.0) s.fail(s.full("gamma"), "must lie in [0, 1]");
  if (sac.alpha < 0.0) s.fail(s.full("alpha"), "must be non-negative");
  const auto positive = [&](const char* key, double v) {
    if (!(v > 0.0)) s.fail(s.full(key), "must be positive");
  };
  positive("actor_lr", sac.actor_lr);
  positive("critic_lr", sac.critic_lr);
  positive("state_embed_lr", sac.state_embed_lr);
  s.finish();
}

void parse_transition(Section s, ExperimentConfig& cfg) {
  auto& t = cfg.shape.transition;
  s.get("action_embed_dim", cfg.shape.action_dim);
  s.get("hiddens", t.hiddens);
  s.get("lr", cfg.training.embed_lr);
  if (s.has("mode")) {
    const auto mode = s.require<std::string>("mode");
    if (mode == "deterministic") {
      t.mode = TransitionMode::kDeterministic;
    } else if (mode == "latent") {
      t.mode = TransitionMode::kLatent;
    } else {
      s.fail(s.full("mode"), "expected deterministic or latent");
    }
  }
  s.get("z_dim", t.z_dim);
  s.get("z_hiddens", t.z_hiddens);
  s.get("beta", t.beta);
  if (cfg.shape.action_dim < 1) s.fail(s.full("action_embed_dim"), "must be positive");
  if (t.z_dim < 1) s.fail(s.full("z_dim"), "must be positive");
  if (t.beta < 0.0) s.fail(s.full("beta"), "must be non-negative");
  if (!(cfg.training.embed_lr > 0.0)) s.fail(s.full("lr"), "must be positive");
  s.finish();
}

void parse_training(Section s, ExperimentConfig& cfg) {
  auto& t = cfg.training;
  s.get("warmup_steps", t.warmup_steps);
  s.get("batch_size", t.batch_size);
  int capacity = static_cast<int>(t.buffer_capacity);
  s.get("buffer_capacity", capacity);
  s.get("embedding_init_scale", cfg.shape.embedding_init_scale);
  s.get("proto_bound_factor", cfg.shape.proto_bound_factor);
  s.get("track_proto_bound", t.track_proto_bound);
  if (t.warmup_steps < 0) s.fail(s.full("warmup_steps"), "must be non-negative");
  if (t.batch_size < 2) s.fail(s.full("batch_size"), "must be at least 2");
  if (capacity < t.batch_size) s.fail(s.full("buffer_capacity"), "must be at least batch_size");
  if (!(cfg.shape.embedding_init_scale > 0.0)) s.fail(s.full("embedding_init_scale"), "must be positive");
  if (!(cfg.shape.proto_bound_factor > 0.0)) s.fail(s.full("proto_bound_factor"), "must be positive");
  if (t.track_proto_bound < 0.0) s.fail(s.full("track_proto_bound"), "must be non-negative");
  t.buffer_capacity = static_cast<std::size_t>(capacity);
  s.finish();
}

void parse_embed(Section s, ExperimentConfig& cfg) {
  auto& e = cfg.embed;
  s.get("samples", e.samples);
  s.get("epochs", e.fit.epochs);
  s.get("batch_size", e.fit.batch_size);
  s.get("save_transitions", e.save_transitions);
  if (e.samples < 1) s.fail(s.full("samples"), "must be positive");
  if (e.fit.epochs < 0) s.fail(s.full("epochs"), "must be non-negative");
  if (e.fit.batch_size < 2) s.fail(s.full("batch_size"), "must be at least 2");
  s.finish();
}

void parse_transfer(Section s, TransferConfig& t) {
  s.get("transfer_policy", t.transfer_policy);
  s.get("transfer_transition", t.transfer_transition);
  s.get("freeze_transition", t.freeze_transition);
  if (s.has("baseline")) {
    try {
      t.baseline = baseline_from_string(s.require<std::string>("baseline"));
    } catch (const std::invalid_argument& e) {
      s.fail(s.full("baseline"), e.what());
    }
  }
  try {
    t.validate();
  } catch (const std::invalid_argument& e) {
    s.fail(s.full("freeze_transition"), e.what());
  }
  s.finish();
}

void sync_shape(ExperimentConfig& cfg) {
  const EnvSpec spec = cfg.env.spec();
  cfg.shape.state_dim = spec.state_dim;
  cfg.shape.action_count = spec.action_count;
  cfg.shape.transition.action_dim = cfg.shape.action_dim;
  cfg.training.sac = cfg.shape.sac;
}

}  // namespace

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kTrace:
      return "trace";
    case Algorithm::kTraceNoTransfer:
      return "trace-no-transfer";
    case Algorithm::kSacDiscrete:
      return "sac-discrete";
    case Algorithm::kBt:
      return "bt";
  }
  return "trace";
}

EnvSpec EnvConfig::spec() const {
  if (family == EnvFamily::kGridworld) {
    return {gridworld.state_dim(), gridworld.action_count(), gridworld.max_actions};
  }
  return {4, cartpole.force_levels, cartpole.max_steps};
}

std::unique_ptr<Environment> make_environment(const EnvConfig& config) {
  if (config.family == EnvFamily::kGridworld) return std::make_unique<Gridworld>(config.gridworld);
  return std::make_unique<CartPole>(config.cartpole);
}

TransferConfig ExperimentConfig::effective_transfer() const {
  switch (algorithm) {
    case Algorithm::kTraceNoTransfer:
    case Algorithm::kSacDiscrete:
      return TransferConfig::no_transfer();
    case Algorithm::kBt:
      return TransferConfig::bt();
    case Algorithm::kTrace:
      break;
  }
  return transfer;
}

ExperimentConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // nlohmann reports "parse error at line L, column C: ..."
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  if (doc.is_object() && doc.contains("manifest_version")) {
    if (!doc.contains("config")) throw ConfigError("manifest has no config section");
    const std::string inner = doc.at("config").dump(2);
    ExperimentConfig cfg = parse_config(inner);
    if (doc.contains("source_checkpoint") && doc.at("source_checkpoint").is_string()) {
      cfg.source_checkpoint = doc.at("source_checkpoint").get<std::string>();
    }
    return cfg;
  }

  ExperimentConfig cfg;
  Section root(doc, "", text);
  parse_env(root.child("env"), cfg.env);
  try {
    cfg.algorithm = algorithm_from_string(root.require<std::string>("algorithm"));
  } catch (const std::invalid_argument& e) {
    root.fail("algorithm", e.what());
  }
  if (root.has("transfer")) parse_transfer(root.child("transfer"), cfg.transfer);
  if (root.has("sac")) parse_sac(root.child("sac"), cfg);
  if (root.has("transition_model")) parse_transition(root.child("transition_model"), cfg);
  if (root.has("training")) parse_training(root.child("training"), cfg);
  if (root.has("embed")) parse_embed(root.child("embed"), cfg);

  const json& seeds = root.raw("seeds");
  if (!seeds.is_array() || seeds.empty()) root.fail("seeds", "expected a non-empty array of non-negative integers");
  for (const auto& s : seeds) {
    if (!s.is_number_integer() || s.get<long long>() < 0) {
      root.fail("seeds", "expected a non-empty array of non-negative integers");
    }
    cfg.seeds.push_back(s.get<std::uint64_t>());
  }
  cfg.budget = root.require<int>("budget");
  if (cfg.budget < 0) root.fail("budget", "must be non-negative");
  cfg.output_dir = root.require<std::string>("output_dir");
  if (cfg.output_dir.empty()) root.fail("output_dir", "must not be empty");
  root.get("source_checkpoint", cfg.source_checkpoint);
  root.finish();

  cfg.embed.fit.lr = cfg.training.embed_lr;
  sync_shape(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string config_to_json(const ExperimentConfig& c, int indent) {
  json env;
  if (c.env.family == EnvFamily::kGridworld) {
    const auto& g = c.env.gridworld;
    env = {{"family", "gridworld"},
           {"grid_size", g.grid_size},
           {"n_steps", g.n_steps},
           {"encoding", g.encoding == StateEncoding::kCoords ? "coords" : "onehot"},
           {"max_actions", g.max_actions},
           {"step_reward", g.step_reward},
           {"goal_reward", g.goal_reward}};
  } else {
    const auto& p = c.env.cartpole;
    env = {{"family", "cartpole"},       {"force_levels", p.force_levels},
           {"force_min", p.force_min},   {"force_max", p.force_max},
           {"max_steps", p.max_steps},   {"gravity", p.gravity},
           {"cart_mass", p.cart_mass},   {"pole_mass", p.pole_mass},
           {"half_length", p.half_length}, {"dt", p.dt},
           {"angle_limit_deg", p.angle_limit_deg}, {"position_limit", p.position_limit}};
  }
  const auto& s = c.shape;
  json sac = {{"state_embed_hiddens", s.state_embed_hiddens},
              {"ac_hiddens", s.sac.hiddens},
              {"actor_lr", s.sac.actor_lr},
              {"critic_lr", s.sac.critic_lr},
              {"state_embed_lr", s.sac.state_embed_lr},
              {"tau", s.sac.tau},
              {"alpha", s.sac.alpha},
              {"gamma", s.sac.gamma}};
  sac["state_embed_dim"] = s.embedder_mode == EmbedderMode::kLearned ? json(s.state_embed_dim) : json(nullptr);
  const auto& t = s.transition;
  json transition = {{"action_embed_dim", s.action_dim},
                     {"hiddens", t.hiddens},
                     {"lr", c.training.embed_lr},
                     {"mode", t.mode == TransitionMode::kLatent ? "latent" : "deterministic"},
                     {"z_dim", t.z_dim},
                     {"z_hiddens", t.z_hiddens},
                     {"beta", t.beta}};
  json training = {{"warmup_steps", c.training.warmup_steps},
                   {"batch_size", c.training.batch_size},
                   {"buffer_capacity", c.training.buffer_capacity},
                   {"embedding_init_scale", s.embedding_init_scale},
                   {"proto_bound_factor", s.proto_bound_factor},
                   {"track_proto_bound", c.training.track_proto_bound}};
  json embed = {{"samples", c.embed.samples},
                {"epochs", c.embed.fit.epochs},
                {"batch_size", c.embed.fit.batch_size},
                {"save_transitions", c.embed.save_transitions}};
  json transfer = {{"transfer_policy", c.transfer.transfer_policy},
                   {"transfer_transition", c.transfer.transfer_transition},
                   {"freeze_transition", c.transfer.freeze_transition},
                   {"baseline", to_string(c.transfer.baseline)}};
  json doc = {{"env", env},
              {"algorithm", to_string(c.algorithm)},
              {"transfer", transfer},
              {"sac", sac},
              {"transition_model", transition},
              {"training", training},
              {"embed", embed},
              {"seeds", c.seeds},
              {"budget", c.budget},
              {"output_dir", c.output_dir}};
  if (!c.source_checkpoint.empty()) doc["source_checkpoint"] = c.source_checkpoint;
  return doc.dump(indent);
}

}  // namespace tracerl
