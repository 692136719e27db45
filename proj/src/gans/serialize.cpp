#include "windml/gans/serialize.hpp"

#include <cereal/archives/portable_binary.hpp>
#include <cereal/types/string.hpp>
#include <cereal/types/vector.hpp>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include "windml/error.hpp"

namespace windml::gans {

namespace {

constexpr std::uint32_t kFormatVersion = 1;
const std::string kTag = "gan";

template <class Archive>
void config_fields(Archive& ar, std::uint64_t& batch, std::uint64_t& epochs, std::uint64_t& decay, GanConfig& c) {
  ar(c.alpha, batch, epochs, c.lr0, decay, c.seed, c.sincos_theta);
}

}  // namespace

void write_model(std::ostream& out, const GanModel& model) {
  cereal::PortableBinaryOutputArchive ar(out);
  ar(kTag, kFormatVersion);
  GanConfig c = model.config;
  std::uint64_t batch = c.batch_size, epochs = c.epochs, decay = c.decay_start_epoch;
  config_fields(ar, batch, epochs, decay, c);
  ar(model.normalization.lo, model.normalization.hi);
  auto params = const_cast<GanModel&>(model).all_params();
  ar(static_cast<std::uint64_t>(params.size()));
  for (const auto* p : params) {
    std::vector<std::uint64_t> shape(p->value.shape().begin(), p->value.shape().end());
    std::vector<double> values(p->value.values().begin(), p->value.values().end());
    ar(p->name, shape, values);
  }
}

GanModel read_gan_model(std::istream& in) {
  try {
    cereal::PortableBinaryInputArchive ar(in);
    std::string tag;
    std::uint32_t version = 0;
    ar(tag, version);
    if (tag != kTag) fail(ErrorKind::Parse, "expected model blob '" + kTag + "', found '" + tag + "'");
    if (version != kFormatVersion) fail(ErrorKind::Parse, "unsupported gan version " + std::to_string(version));
    GanConfig c;
    std::uint64_t batch = 0, epochs = 0, decay = 0;
    config_fields(ar, batch, epochs, decay, c);
    c.batch_size = static_cast<std::size_t>(batch);
    c.epochs = static_cast<std::size_t>(epochs);
    c.decay_start_epoch = static_cast<std::size_t>(decay);
    InputNormalization norm;
    ar(norm.lo, norm.hi);
    GanModel model(c, std::move(norm));
    auto params = model.all_params();
    std::uint64_t count = 0;
    ar(count);
    if (count != params.size()) fail(ErrorKind::Parse, "gan blob holds " + std::to_string(count) + " tensors");
    for (auto* p : params) {
      std::string name;
      std::vector<std::uint64_t> shape;
      std::vector<double> values;
      ar(name, shape, values);
      if (name != p->name) fail(ErrorKind::Parse, "gan blob tensor '" + name + "' where '" + p->name + "' expected");
      if (nn::Shape(shape.begin(), shape.end()) != p->value.shape() || values.size() != p->value.size()) {
        fail(ErrorKind::Parse, "gan blob tensor '" + name + "' has the wrong shape");
      }
      p->value = nn::Tensor(p->value.shape(), std::move(values));
    }
    return model;
  } catch (const cereal::Exception& e) {
    fail(ErrorKind::Parse, std::string("truncated or corrupt model blob: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Parse) throw;
    fail(ErrorKind::Parse, std::string("invalid gan blob: ") + e.what());
  }
}

}  // namespace windml::gans
