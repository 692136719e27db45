#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "manifest.hpp"
#include "map_io.hpp"
#include "windml/error.hpp"
#include "windml/eval/config_json.hpp"
#include "windml/eval/model_file.hpp"
#include "windml/eval/protocol.hpp"
#include "windml/ingest/dataset_io.hpp"
#include "windml/ingest/synth.hpp"
#include "windml/nn/ops.hpp"
#include "windml/parallel.hpp"

namespace fs = std::filesystem;

namespace windml::cli {

using eval::Family;
using eval::SurrogateConfig;

namespace {

// Collects artifacts for the manifest and writes it last.
class Run {
 public:
  Run(std::string command_line, fs::path dir) : dir_(std::move(dir)), t0_(std::chrono::steady_clock::now()) {
    manifest_.command_line = std::move(command_line);
    manifest_.started = std::chrono::system_clock::now();
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) fail(ErrorKind::Io, "cannot create output directory " + dir_.string());
  }

  const fs::path& dir() const { return dir_; }
  RunManifest& manifest() { return manifest_; }

  fs::path artifact(const fs::path& relative) {
    const fs::path p = dir_ / relative;
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    manifest_.artifacts.push_back(p);
    return p;
  }

  void dataset(const fs::path& path) {
    manifest_.dataset_path = path.string();
    manifest_.dataset_sha256 = sha256_file(path);
  }

  void finish() {
    manifest_.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    write_manifest(dir_, manifest_);
  }

 private:
  fs::path dir_;
  RunManifest manifest_;
  std::chrono::steady_clock::time_point t0_;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  out << text;
  out.close();
  if (!out) fail(ErrorKind::Io, "failed writing " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json parse_json_file(const fs::path& path) {
  try {
    return nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::Parse, path.string() + ": " + e.what());
  }
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(ErrorKind::Argument, std::string("bad ") + what + " value '" + item + "'");
    }
  }
  if (out.empty()) fail(ErrorKind::Argument, std::string("empty ") + what + " list");
  return out;
}

eval::Range parse_range(const std::string& text, const char* what) {
  std::string s = text;
  std::replace(s.begin(), s.end(), ':', ',');
  const auto v = parse_list(s, what);
  if (v.size() != 3) fail(ErrorKind::Argument, std::string(what) + " must be lo:hi:step, got '" + text + "'");
  return {v[0], v[1], v[2]};
}

std::vector<Location> parse_locations(const std::string& text) {
  std::vector<Location> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) fail(ErrorKind::Argument, "location '" + item + "' must be sx:sy");
    const auto v = parse_list(item.substr(0, colon) + "," + item.substr(colon + 1), "location");
    out.push_back({v[0], v[1]});
  }
  if (out.empty()) fail(ErrorKind::Argument, "empty location list");
  return out;
}

struct ModelOptions {
  std::string family;
  std::string preset;
  std::string config_path;
  std::size_t epochs = 0;
  double alpha = -1.0;
};

void add_model_options(CLI::App* sub, ModelOptions& o, bool family_required = true) {
  auto* fam = sub->add_option("--model", o.family, "Model family")->check(CLI::IsMember({"dtr", "rf", "xgb", "gan"}));
  if (family_required) fam->required();
  auto* preset = sub->add_option("--preset", o.preset, "mean, rms, or a named preset (dtr-mean, ..., gan-default)");
  sub->add_option("--config", o.config_path, "JSON config file")->excludes(preset)->check(CLI::ExistingFile);
  sub->add_option("--epochs", o.epochs, "GAN epoch budget (decay start keeps its fraction)");
  sub->add_option("--alpha", o.alpha, "GAN adversarial weight");
}

SurrogateConfig resolve_config(const ModelOptions& o) {
  const Family family = eval::parse_family(o.family);
  SurrogateConfig cfg;
  if (!o.config_path.empty()) {
    nlohmann::json j = parse_json_file(o.config_path);
    if (j.is_object() && !j.contains("family")) j["family"] = o.family;
    cfg = eval::config_from_json(j);
  } else if (!o.preset.empty()) {
    std::string name = o.preset;
    if (name == "mean" || name == "rms") {
      if (family == Family::Gan) fail(ErrorKind::Argument, "the gan family has a single preset, gan-default");
      name = o.family + "-" + name;
    }
    cfg = eval::preset_config(name);
  } else {
    cfg = SurrogateConfig::defaults(family);
  }
  if (cfg.family != family) {
    fail(ErrorKind::Argument, "config family " + std::string(eval::to_string(cfg.family)) + " does not match --model " +
                                  o.family);
  }
  if (o.epochs > 0 || o.alpha >= 0.0) {
    if (family != Family::Gan) fail(ErrorKind::Argument, "--epochs and --alpha apply to the gan family only");
    if (o.epochs > 0) cfg.gan = eval::with_epoch_budget(cfg.gan, o.epochs);
    if (o.alpha >= 0.0) cfg.gan.alpha = o.alpha;
  }
  cfg.validate();
  return cfg;
}

std::string joined(int argc, const char* const* argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i > 0) s += ' ';
    s += argv[i];
  }
  return s;
}

std::string report_text(const eval::Report& r) {
  std::ostringstream os;
  eval::write_report(r, os);
  return os.str();
}

void export_set_aside(Run& run, const std::vector<eval::SetAsideBundle>& bundles) {
  for (const auto& b : bundles) {
    write_map_csv(b.true_mean, run.artifact(fs::path("set_aside") / (b.id + "_mean_true.csv")));
    write_map_csv(b.pred_mean, run.artifact(fs::path("set_aside") / (b.id + "_mean_pred.csv")));
    write_map_csv(b.true_rms, run.artifact(fs::path("set_aside") / (b.id + "_rms_true.csv")));
    write_map_csv(b.pred_rms, run.artifact(fs::path("set_aside") / (b.id + "_rms_pred.csv")));
  }
}

void print_metrics(std::ostream& out, const eval::Report& r) {
  out << "test_r2_mean=" << r.test.mean.r2 << " test_r2_rms=" << r.test.rms.r2 << " test_mse_mean=" << r.test.mean.mse
      << " test_mse_rms=" << r.test.rms.mse << '\n';
}

// Writes model, report and set-aside maps of a finished TTV run.
void emit_ttv(Run& run, const eval::TtvResult& res, const eval::TrainContext& ctx, std::ostream& out) {
  eval::write_model_file(run.artifact("model.bin"), res.model, ctx);
  write_text(run.artifact("report.txt"), report_text(res.report));
  export_set_aside(run, res.report.set_aside);
  run.manifest().config = eval::to_json(res.model.config());
  print_metrics(out, res.report);
}

}  // namespace

std::vector<SurrogateConfig> default_grid(Family family) {
  std::vector<SurrogateConfig> grid;
  auto base = SurrogateConfig::defaults(family);
  switch (family) {
    case Family::Dtr:
      for (const trees::TreeConfig t : {trees::TreeConfig{20, 20000, 20}, trees::TreeConfig{25, 25000, 15},
                                        trees::TreeConfig{10, 20000, 5}, trees::TreeConfig{15, 20000, 10},
                                        trees::TreeConfig{25, 25000, 5}}) {
        base.dtr_mean = base.dtr_rms = t;
        grid.push_back(base);
      }
      break;
    case Family::Rf:
      for (const auto& [n, k, d] : {std::tuple{100, 3, 25}, std::tuple{150, 3, 25}, std::tuple{50, 2, 15},
                                   std::tuple{100, 5, 25}}) {
        trees::ForestConfig f;
        f.n_trees = n;
        f.n_features_per_split = k;
        f.max_depth = d;
        base.rf_mean = base.rf_rms = f;
        grid.push_back(base);
      }
      break;
    case Family::Xgb: {
      trees::BoostConfig shallow = base.xgb_mean;
      shallow.max_depth = 6;
      shallow.subsample = 1.0;
      shallow.n_trees = 100;
      trees::BoostConfig fast = base.xgb_mean;
      fast.learning_rate = 0.3;
      fast.max_depth = 8;
      fast.n_trees = 150;
      for (const auto& b : {base.xgb_mean, base.xgb_rms, shallow, fast}) {
        SurrogateConfig c = base;
        c.xgb_mean = c.xgb_rms = b;
        grid.push_back(c);
      }
      break;
    }
    case Family::Gan:
      grid.push_back(base);
      base.gan.alpha = 0.0;
      grid.push_back(base);
      break;
  }
  return grid;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interference pressure surrogates: tree ensembles and a conditional GAN"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "windml 0.1");

  struct {
    std::string out, locations, angles = "default";
    std::uint64_t seed = 0;
    double noise = 0.0;
  } synth;
  auto* c_synth = app.add_subcommand("synth", "Write a synthetic dataset");
  c_synth->add_option("--out", synth.out, "Output directory")->required();
  c_synth->add_option("--seed", synth.seed, "Noise seed");
  c_synth->add_option("--locations", synth.locations, "Comma-separated sx:sy pairs (default: 37 positions)");
  c_synth->add_option("--angles", synth.angles, "Comma-separated degrees, or 'default' (0..355 step 5)");
  c_synth->add_option("--noise", synth.noise, "Uniform noise amplitude")->check(CLI::NonNegativeNumber);

  struct {
    std::string data, out, grid;
    double portion = 0.3;
    std::uint64_t seed = 0;
    std::size_t n_set_aside = 6, folds = 10, gan_cv_epochs = 300;
    std::string portions;
    ModelOptions model;
  } tr;
  auto add_ttv = [&](CLI::App* sub) {
    sub->add_option("--data", tr.data, "Dataset file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", tr.out, "Output directory")->required();
    sub->add_option("--seed", tr.seed, "Run seed (split and model streams)");
    sub->add_option("--set-aside", tr.n_set_aside, "Validation cases held out before the portion draw");
    add_model_options(sub, tr.model);
  };
  auto* c_train = app.add_subcommand("train", "Split, train on the training split, report test and set-aside errors");
  add_ttv(c_train);
  c_train->add_option("--portion", tr.portion, "Fraction of the non-set-aside cases used");
  auto* c_tune = app.add_subcommand("tune", "Cross-validated grid search, then train the best config");
  add_ttv(c_tune);
  c_tune->add_option("--portion", tr.portion, "Fraction of the non-set-aside cases used");
  c_tune->add_option("--grid", tr.grid, "JSON array of configs (default: a small grid around the presets)")
      ->check(CLI::ExistingFile);
  c_tune->add_option("--folds", tr.folds, "Cross-validation folds");
  c_tune->add_option("--gan-cv-epochs", tr.gan_cv_epochs, "GAN epoch budget during cross-validation");
  auto* c_sweep = app.add_subcommand("sweep", "Test errors across data portions");
  add_ttv(c_sweep);
  c_sweep->add_option("--portions", tr.portions, "Comma-separated portions (default 0.1..0.9)");

  struct {
    std::string model, data, out, sx = "1.5:8:0.1", sy = "0:4:0.1", stat = "rms", reducer = "maxabs";
    double px = 0.0, py = 0.0, theta = 0.0;
  } mo;
  auto* c_eval = app.add_subcommand("evaluate", "Re-evaluate a saved model on its recorded split");
  c_eval->add_option("--model-file", mo.model, "Model file")->required()->check(CLI::ExistingFile);
  c_eval->add_option("--data", mo.data, "Dataset file")->required()->check(CLI::ExistingFile);
  c_eval->add_option("--out", mo.out, "Output directory")->required();
  auto* c_predict = app.add_subcommand("predict", "Predict mean and rms maps for one condition");
  c_predict->add_option("--model-file", mo.model, "Model file")->required()->check(CLI::ExistingFile);
  c_predict->add_option("--sx", mo.px, "Interfering building sx (breadths)")->required();
  c_predict->add_option("--sy", mo.py, "Interfering building sy (breadths)")->required();
  c_predict->add_option("--theta", mo.theta, "Wind angle (degrees)")->required();
  c_predict->add_option("--out", mo.out, "Output directory")->required();
  auto* c_ifmap = app.add_subcommand("ifmap", "Dense map of a reduced statistic over interfering positions");
  c_ifmap->add_option("--model-file", mo.model, "Model file")->required()->check(CLI::ExistingFile);
  c_ifmap->add_option("--theta", mo.theta, "Wind angle (degrees)")->required();
  c_ifmap->add_option("--sx", mo.sx, "sx range lo:hi:step");
  c_ifmap->add_option("--sy", mo.sy, "sy range lo:hi:step");
  c_ifmap->add_option("--stat", mo.stat, "mean or rms")->check(CLI::IsMember({"mean", "rms"}));
  c_ifmap->add_option("--reducer", mo.reducer, "maxabs, max, min, mean, front-mean, right-mean, back-mean, left-mean");
  c_ifmap->add_option("--out", mo.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << "windml 0.1\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error kind=usage message=" << std::quoted(msg) << '\n';
    return 2;
  }

  const std::string command_line = joined(argc, argv);
  try {
    nn::set_blas_threads(static_cast<int>(worker_count()));

    if (c_synth->parsed()) {
      SynthSpec spec;
      spec.seed = synth.seed;
      spec.noise_amp = synth.noise;
      if (!synth.locations.empty()) spec.locations = parse_locations(synth.locations);
      if (synth.angles != "default") spec.angles = parse_list(synth.angles, "angle");
      Run run(command_line, synth.out);
      run.manifest().seed = synth.seed;
      const Dataset ds = synth_generate(spec);
      const fs::path path = run.artifact("dataset.csv");
      write_dataset(ds, path);
      run.dataset(path);
      run.finish();
      out << "wrote " << ds.size() << " cases to " << path.string() << '\n';
      return 0;
    }

    if (c_train->parsed() || c_tune->parsed() || c_sweep->parsed()) {
      const SurrogateConfig cfg = resolve_config(tr.model);
      Run run(command_line, tr.out);
      run.dataset(tr.data);
      run.manifest().seed = tr.seed;
      run.manifest().config = eval::to_json(cfg);
      const Dataset ds = read_dataset(fs::path(tr.data));
      eval::TtvOptions opt;
      opt.seed = tr.seed;
      opt.portion = tr.portion;
      opt.n_set_aside = tr.n_set_aside;

      if (c_sweep->parsed()) {
        const auto portions = tr.portions.empty() ? eval::default_portions() : parse_list(tr.portions, "portion");
        const auto rows = eval::portion_sweep(ds, cfg, portions, opt);
        std::ostringstream os;
        eval::write_sweep_csv(rows, os);
        write_text(run.artifact("sweep.csv"), os.str());
        out << os.str();
      } else {
        if (c_tune->parsed()) {
          if (tr.grid.empty()) {
            opt.grid = default_grid(cfg.family);
          } else {
            const nlohmann::json g = parse_json_file(tr.grid);
            if (!g.is_array() || g.empty()) fail(ErrorKind::Config, "grid file must hold a non-empty JSON array");
            for (nlohmann::json point : g) {
              if (point.is_object() && !point.contains("family")) point["family"] = tr.model.family;
              opt.grid.push_back(eval::config_from_json(point));
            }
          }
          opt.tune.folds = tr.folds;
          opt.tune.gan_cv_epochs = tr.gan_cv_epochs;
          opt.tune.seed = tr.seed;
        }
        const auto res = eval::ttv_run(ds, cfg, opt);
        emit_ttv(run, res, {tr.portion, tr.seed, tr.n_set_aside}, out);
        if (c_tune->parsed()) {
          write_text(run.artifact("best_config.json"), eval::to_json(res.model.config()).dump(2) + "\n");
        }
      }
      run.finish();
      return 0;
    }

    const eval::ModelFile mf = eval::read_model_file(fs::path(mo.model));
    Run run(command_line, mo.out);
    run.manifest().seed = mf.context.seed;
    run.manifest().config = eval::to_json(mf.model.config());

    if (c_eval->parsed()) {
      run.dataset(mo.data);
      const Dataset ds = read_dataset(fs::path(mo.data));
      const auto plan = eval::make_split(ds, mf.context.portion, mf.context.seed, mf.context.n_set_aside);
      const auto report = eval::plan_report(mf.model, ds, plan);
      write_text(run.artifact("report.txt"), report_text(report));
      export_set_aside(run, report.set_aside);
      print_metrics(out, report);
    } else if (c_predict->parsed()) {
      const auto [mean, rms] = mf.model.predict(CaseCondition::make(mo.px, mo.py, mo.theta));
      write_map_csv(mean, run.artifact("mean.csv"));
      write_map_csv(rms, run.artifact("rms.csv"));
      const std::string heat = "mean\n" + ascii_render(mean) + "rms\n" + ascii_render(rms);
      write_text(run.artifact("heat.txt"), heat);
      out << heat;
    } else if (c_ifmap->parsed()) {
      const auto stat = mo.stat == "mean" ? MapKind::Mean : MapKind::Rms;
      const auto pts = eval::dense_map(mf.model, mo.theta, parse_range(mo.sx, "--sx"), parse_range(mo.sy, "--sy"), stat,
                                       eval::parse_reducer(mo.reducer));
      std::ostringstream os;
      eval::write_dense_csv(pts, os);
      write_text(run.artifact("ifmap.csv"), os.str());
      out << "wrote " << pts.size() << " points\n";
    }
    run.finish();
    return 0;
  } catch (const Error& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error kind=" << to_string(e.kind()) << " message=" << std::quoted(msg) << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error kind=internal message=" << std::quoted(std::string(e.what())) << '\n';
    return 1;
  }
}

}  // namespace windml::cli
