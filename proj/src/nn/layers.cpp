#include "windml/nn/layers.hpp"

#include "windml/nn/optim.hpp"
#include "windml/rng.hpp"

namespace windml::nn {

std::uint64_t name_seed(std::uint64_t seed, const std::string& name) {
  // FNV-1a over the name, then mixed with the model seed.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return derive_seed(seed, h);
}

DenseLayer::DenseLayer(const std::string& name, std::size_t in, std::size_t out, std::uint64_t seed)
    : weight(name + ".weight", gaussian_init({in, out}, name_seed(seed, name + ".weight"))),
      bias(name + ".bias", gaussian_init({out}, name_seed(seed, name + ".bias"))) {}

ConvLayer::ConvLayer(const std::string& name, std::size_t in, std::size_t out, std::size_t k, std::uint64_t seed)
    : kernel(name + ".kernel", gaussian_init({out, in, k, k}, name_seed(seed, name + ".kernel"))),
      bias(name + ".bias", gaussian_init({out}, name_seed(seed, name + ".bias"))) {}

}  // namespace windml::nn
