#pragma once

#include <iosfwd>
#include <vector>

#include "windml/eval/surrogate.hpp"

namespace windml::cli {

/// Parses argv and runs one subcommand. Returns the process exit code:
/// 0 when every requested artifact was written, 2 on usage errors, 1 on
/// any other failure (reported as one "error kind=... message=..." line).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Grid searched by `tune` when no --grid file is given. Includes the
/// family's preset settings.
std::vector<eval::SurrogateConfig> default_grid(eval::Family family);

}  // namespace windml::cli
