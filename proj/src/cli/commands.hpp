#pragma once

#include <iosfwd>

namespace heatlab::cli {

/// Exit codes: 0 ok, 2 configuration or domain error, 3 numerical failure
/// (including a failed verify or scenario check).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace heatlab::cli
