#include "windml/eval/config_json.hpp"

#include <set>

#include "windml/error.hpp"

namespace windml::eval {

using nlohmann::json;

namespace {

json size_or_null(std::size_t v) { return v == trees::kUnlimited ? json(nullptr) : json(v); }

json tree_json(const trees::TreeConfig& c) {
  return {{"max_depth", size_or_null(c.max_depth)},
          {"max_leaf_nodes", size_or_null(c.max_leaf_nodes)},
          {"min_samples_leaf", c.min_samples_leaf}};
}

json forest_json(const trees::ForestConfig& c) {
  return {{"n_trees", c.n_trees},
          {"n_features_per_split", c.n_features_per_split},
          {"max_depth", size_or_null(c.max_depth)},
          {"bootstrap", c.bootstrap},
          {"seed", c.seed}};
}

json boost_json(const trees::BoostConfig& c) {
  return {{"gamma", c.gamma},         {"learning_rate", c.learning_rate}, {"max_depth", c.max_depth},
          {"subsample", c.subsample}, {"n_trees", c.n_trees},             {"l1_reg", c.l1_reg},
          {"l2_reg", c.l2_reg},       {"base_score", c.base_score},       {"seed", c.seed}};
}

json gan_json(const gans::GanConfig& c) {
  return {{"alpha", c.alpha},   {"batch_size", c.batch_size},
          {"epochs", c.epochs}, {"lr0", c.lr0},
          {"decay_start_epoch", c.decay_start_epoch}, {"seed", c.seed},
          {"sincos_theta", c.sincos_theta}};
}

// Reads the keys of one section, rejecting anything unrecognized.
class Reader {
 public:
  Reader(const json& j, std::string section) : j_(j), section_(std::move(section)) {
    if (!j_.is_object()) fail(ErrorKind::Config, "config section '" + section_ + "' must be an object");
  }

  ~Reader() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, _] : j_.items()) {
      if (!seen_.count(key)) fail(ErrorKind::Config, "unknown config key '" + section_ + "." + key + "'");
    }
  }

  void size(const char* key, std::size_t& out, bool nullable = false) {
    const json* v = get(key);
    if (!v) return;
    if (nullable && v->is_null()) {
      out = trees::kUnlimited;
    } else if (v->is_number_unsigned()) {
      out = v->get<std::size_t>();
    } else if (v->is_number_integer() && v->get<std::int64_t>() >= 0) {
      out = static_cast<std::size_t>(v->get<std::int64_t>());
    } else {
      bad(key, nullable ? "a non-negative integer or null" : "a non-negative integer");
    }
  }

  void seed(const char* key, std::uint64_t& out) {
    std::size_t v = out;
    size(key, v);
    out = v;
  }

  void real(const char* key, double& out) {
    const json* v = get(key);
    if (!v) return;
    if (!v->is_number()) bad(key, "a number");
    out = v->get<double>();
  }

  void flag(const char* key, bool& out) {
    const json* v = get(key);
    if (!v) return;
    if (!v->is_boolean()) bad(key, "a boolean");
    out = v->get<bool>();
  }

 private:
  const json* get(const char* key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  [[noreturn]] void bad(const char* key, const char* what) {
    fail(ErrorKind::Config, "config key '" + section_ + "." + key + "' must be " + what);
  }

  const json& j_;
  std::string section_;
  std::set<std::string> seen_;
};

void read_tree(const json& j, const std::string& name, trees::TreeConfig& c) {
  Reader r(j, name);
  r.size("max_depth", c.max_depth, true);
  r.size("max_leaf_nodes", c.max_leaf_nodes, true);
  r.size("min_samples_leaf", c.min_samples_leaf);
}

void read_forest(const json& j, const std::string& name, trees::ForestConfig& c) {
  Reader r(j, name);
  r.size("n_trees", c.n_trees);
  r.size("n_features_per_split", c.n_features_per_split);
  r.size("max_depth", c.max_depth, true);
  r.flag("bootstrap", c.bootstrap);
  r.seed("seed", c.seed);
}

void read_boost(const json& j, const std::string& name, trees::BoostConfig& c) {
  Reader r(j, name);
  r.real("gamma", c.gamma);
  r.real("learning_rate", c.learning_rate);
  r.size("max_depth", c.max_depth);
  r.real("subsample", c.subsample);
  r.size("n_trees", c.n_trees);
  r.real("l1_reg", c.l1_reg);
  r.real("l2_reg", c.l2_reg);
  r.real("base_score", c.base_score);
  r.seed("seed", c.seed);
}

void read_gan(const json& j, gans::GanConfig& c) {
  Reader r(j, "gan");
  r.real("alpha", c.alpha);
  r.size("batch_size", c.batch_size);
  r.size("epochs", c.epochs);
  r.real("lr0", c.lr0);
  r.size("decay_start_epoch", c.decay_start_epoch);
  r.seed("seed", c.seed);
  r.flag("sincos_theta", c.sincos_theta);
}

}  // namespace

json to_json(const SurrogateConfig& cfg) {
  return {{"family", std::string(to_string(cfg.family))},
          {"dtr_mean", tree_json(cfg.dtr_mean)},
          {"dtr_rms", tree_json(cfg.dtr_rms)},
          {"rf_mean", forest_json(cfg.rf_mean)},
          {"rf_rms", forest_json(cfg.rf_rms)},
          {"xgb_mean", boost_json(cfg.xgb_mean)},
          {"xgb_rms", boost_json(cfg.xgb_rms)},
          {"gan", gan_json(cfg.gan)}};
}

SurrogateConfig config_from_json(const json& j) {
  if (!j.is_object()) fail(ErrorKind::Config, "config must be a JSON object");
  const auto fam = j.find("family");
  if (fam == j.end() || !fam->is_string()) fail(ErrorKind::Config, "config needs a string 'family'");
  SurrogateConfig cfg;
  try {
    cfg = SurrogateConfig::defaults(parse_family(fam->get<std::string>()));
  } catch (const Error& e) {
    fail(ErrorKind::Config, e.what());
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "family") continue;
    if (key == "dtr_mean") read_tree(value, key, cfg.dtr_mean);
    else if (key == "dtr_rms") read_tree(value, key, cfg.dtr_rms);
    else if (key == "rf_mean") read_forest(value, key, cfg.rf_mean);
    else if (key == "rf_rms") read_forest(value, key, cfg.rf_rms);
    else if (key == "xgb_mean") read_boost(value, key, cfg.xgb_mean);
    else if (key == "xgb_rms") read_boost(value, key, cfg.xgb_rms);
    else if (key == "gan") read_gan(value, cfg.gan);
    else fail(ErrorKind::Config, "unknown config key '" + key + "'");
  }
  return cfg;
}

std::string config_echo(const SurrogateConfig& cfg) {
  json j = to_json(cfg);
  // Only the active family's sections matter to the model.
  json out = {{"family", j["family"]}};
  switch (cfg.family) {
    case Family::Dtr: out["dtr_mean"] = j["dtr_mean"]; out["dtr_rms"] = j["dtr_rms"]; break;
    case Family::Rf: out["rf_mean"] = j["rf_mean"]; out["rf_rms"] = j["rf_rms"]; break;
    case Family::Xgb: out["xgb_mean"] = j["xgb_mean"]; out["xgb_rms"] = j["xgb_rms"]; break;
    case Family::Gan: out["gan"] = j["gan"]; break;
  }
  return out.dump();
}

}  // namespace windml::eval
