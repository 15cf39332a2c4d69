#pragma once

// Parsing and serialization helpers shared by the gensol subcommands.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gensol/profile.hpp"
#include "gensol/transform.hpp"

namespace gensol::cli {

using json = nlohmann::json;

enum ExitCode : int {
    exit_pass = 0,
    exit_verification_failed = 1,
    exit_usage = 2,
    exit_numerical = 3,
};

/// Malformed configuration or flag value (exit code 2).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// "gaussian:center,width[,amplitude]", "sinusoid:frequency[,phase[,amplitude]]",
/// "poly:c0,c1,...", "exp:rate[,amplitude]" or "zero".
ProfileFunction parse_profile(const std::string& spec);

/// Step list separated by ';':
///   prop3[:c1=..,c2=..]
///   prop1:<h>
///   lemma2:<h>|<h>|...
/// with <h> one of prop2(c1=..,c2=..), ode(A=..,h0=..,dh0=..), exp(k=..,c=..,b=..).
std::vector<StepRecipe> parse_steps(const std::string& text);
std::vector<StepRecipe> parse_steps(const json& value);
inline std::vector<StepRecipe> parse_steps(const char* text) { return parse_steps(std::string(text)); }

/// "wave" or "epd:<n>" on the given domain.
EquationSpec parse_start_equation(const std::string& spec, const Interval& domain);

/// Comma-separated list converted to the element types of `like`.
json parse_like(const std::string& text, const json& like);

/// defaults <- file object <- overrides. Keys absent from `defaults` are
/// rejected so typos do not silently fall back to defaults.
json merge_config(const json& defaults, const json& file_object, const json& overrides);

/// Loads a JSON config file. A top-level member named after the command is
/// used if present, otherwise the whole object.
json load_config_file(const std::string& path, const std::string& command);

/// Flag, then config, then GENSOL_OUTPUT_DIR, then ".".
std::filesystem::path resolve_output_dir(const json& config);
/// config[key] resolved against the output directory unless absolute.
std::filesystem::path output_path(const json& config, const std::string& key);
std::filesystem::path output_file(const json& config, const std::string& name);

std::string format_double(double v);

/// Header comment lines "# gensol <version> <command>" and "# config: <json>"
/// (output_dir omitted), then a header row, then rows with 17 significant digits.
void write_csv(const std::filesystem::path& path, const std::string& command, const json& config,
               const std::vector<std::string>& columns, const std::vector<std::vector<double>>& rows);

/// Adds "tool", "version", "command" and "config" (output_dir omitted) members,
/// pretty-printed.
void write_json(const std::filesystem::path& path, const std::string& command, const json& config,
                json report);

double get_double(const json& config, const std::string& key);
int get_int(const json& config, const std::string& key);
Interval get_interval(const json& config, const std::string& key);

}  // namespace gensol::cli
