#pragma once

#include <iosfwd>
#include <string>

#include "cli_support.hpp"

namespace gensol::cli {

json derive_defaults();
json verify_defaults();
json compare_defaults();
json gas_defaults();
json selftest_defaults();

/// Each command validates its effective config, writes its output files and
/// returns an ExitCode. Library exceptions propagate to the caller.
int run_derive(const json& config, std::ostream& log);
int run_verify(const json& config, std::ostream& log);
int run_compare(const json& config, std::ostream& log);
int run_gas(const json& config, std::ostream& log);
int run_selftest(const json& config, std::ostream& log);

}  // namespace gensol::cli
