#pragma once

#include <iosfwd>

#include "windml/gans/model.hpp"

namespace windml::gans {

// Tagged, versioned portable binary blob: config, normalization constants and
// every parameter tensor by name. Doubles are stored bit-exact.

void write_model(std::ostream& out, const GanModel& model);
GanModel read_gan_model(std::istream& in);

}  // namespace windml::gans
