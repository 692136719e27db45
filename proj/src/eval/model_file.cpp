#include "windml/eval/model_file.hpp"

#include <cereal/archives/portable_binary.hpp>
#include <cereal/types/string.hpp>
#include <fstream>
#include <sstream>

#include "windml/error.hpp"
#include "windml/eval/config_json.hpp"
#include "windml/gans/serialize.hpp"
#include "windml/trees/serialize.hpp"

namespace windml::eval {

namespace {

constexpr std::uint32_t kVersion = 1;
const std::string kTag = "windml-model";

template <typename M>
std::string blob(const M& m) {
  std::ostringstream os(std::ios::binary);
  trees::write_model(os, m);
  return os.str();
}

std::string gan_blob(const gans::GanModel& m) {
  std::ostringstream os(std::ios::binary);
  gans::write_model(os, m);
  return os.str();
}

template <typename Reader>
auto from_blob(const std::string& s, Reader read) {
  std::istringstream is(s, std::ios::binary);
  return read(is);
}

}  // namespace

void write_model_file(std::ostream& out, const Surrogate& model, const TrainContext& ctx) {
  cereal::PortableBinaryOutputArchive ar(out);
  ar(kTag, kVersion, std::string(to_string(model.family())), to_json(model.config()).dump());
  ar(ctx.portion, ctx.seed, ctx.n_set_aside);
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, gans::GanModel>) {
          ar(gan_blob(m));
        } else {
          ar(blob(m.first), blob(m.second));
        }
      },
      model.models());
  if (!out) fail(ErrorKind::Io, "failed writing model file");
}

void write_model_file(const std::filesystem::path& path, const Surrogate& model, const TrainContext& ctx) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  write_model_file(out, model, ctx);
  out.close();
  if (!out) fail(ErrorKind::Io, "failed writing " + path.string());
}

ModelFile read_model_file(std::istream& in) {
  try {
    cereal::PortableBinaryInputArchive ar(in);
    std::string tag, family, config_text;
    std::uint32_t version = 0;
    ar(tag);
    if (tag != kTag) fail(ErrorKind::Parse, "not a model file (tag '" + tag + "')");
    ar(version);
    if (version != kVersion) fail(ErrorKind::Parse, "unsupported model file version " + std::to_string(version));
    ar(family, config_text);
    SurrogateConfig cfg = config_from_json(nlohmann::json::parse(config_text));
    if (std::string(to_string(cfg.family)) != family) fail(ErrorKind::Parse, "family tag disagrees with config");
    TrainContext ctx;
    ar(ctx.portion, ctx.seed, ctx.n_set_aside);

    auto pair = [&](auto read) {
      std::string a, b;
      ar(a, b);
      return std::make_pair(from_blob(a, read), from_blob(b, read));
    };
    switch (cfg.family) {
      case Family::Dtr: {
        auto p = pair([](std::istream& s) { return trees::read_tree_model(s); });
        return ModelFile{Surrogate(cfg, std::move(p)), ctx};
      }
      case Family::Rf: {
        auto p = pair([](std::istream& s) { return trees::read_forest_model(s); });
        return ModelFile{Surrogate(cfg, std::move(p)), ctx};
      }
      case Family::Xgb: {
        auto p = pair([](std::istream& s) { return trees::read_boosted_model(s); });
        return ModelFile{Surrogate(cfg, std::move(p)), ctx};
      }
      case Family::Gan: {
        std::string a;
        ar(a);
        return ModelFile{Surrogate(cfg, from_blob(a, [](std::istream& s) { return gans::read_gan_model(s); })), ctx};
      }
    }
    fail(ErrorKind::Parse, "unhandled family");
  } catch (const cereal::Exception& e) {
    fail(ErrorKind::Parse, std::string("truncated or corrupt model file: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("corrupt config in model file: ") + e.what());
  }
}

ModelFile read_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  return read_model_file(in);
}

}  // namespace windml::eval
