#include "cli_support.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "gensol/version.hpp"

namespace gensol::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\n");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        out.push_back(trim(item));
    }
    if (!s.empty() && s.back() == sep) {
        out.emplace_back();
    }
    return out;
}

double to_double(const std::string& text, const std::string& context) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size()) {
            return v;
        }
    } catch (const std::exception&) {
    }
    throw ConfigError("expected a number in " + context + ", got '" + text + "'");
}

std::vector<double> number_list(const std::string& text, const std::string& context) {
    std::vector<double> out;
    if (trim(text).empty()) {
        return out;
    }
    for (const auto& item : split(text, ',')) {
        out.push_back(to_double(item, context));
    }
    return out;
}

using KeyValues = std::map<std::string, double>;

KeyValues parse_key_values(const std::string& text, const std::vector<std::string>& allowed,
                           const std::string& context) {
    KeyValues out;
    if (trim(text).empty()) {
        return out;
    }
    for (const auto& item : split(text, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(context + ": expected key=value, got '" + item + "'");
        }
        const std::string key = trim(item.substr(0, eq));
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigError(context + ": unknown parameter '" + key + "'");
        }
        out[key] = to_double(trim(item.substr(eq + 1)), context);
    }
    return out;
}

double value_or(const KeyValues& kv, const std::string& key, double fallback) {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
}

HRecipe parse_h(const std::string& text) {
    const std::string spec = trim(text);
    std::string name = spec;
    std::string args;
    const auto open = spec.find('(');
    if (open != std::string::npos) {
        if (spec.back() != ')') {
            throw ConfigError("unbalanced parentheses in '" + spec + "'");
        }
        name = trim(spec.substr(0, open));
        args = spec.substr(open + 1, spec.size() - open - 2);
    }
    if (name == "prop2") {
        const auto kv = parse_key_values(args, {"c1", "c2"}, name);
        return HFromProp2{value_or(kv, "c1", 1.0), value_or(kv, "c2", 1.0)};
    }
    if (name == "ode") {
        const auto kv = parse_key_values(args, {"A", "h0", "dh0"}, name);
        return HFromOde{value_or(kv, "A", -1.0), value_or(kv, "h0", 1.0), value_or(kv, "dh0", 0.0)};
    }
    if (name == "exp") {
        const auto kv = parse_key_values(args, {"k", "c", "b"}, name);
        return HExponential{value_or(kv, "k", 1.0), value_or(kv, "c", 1.0), value_or(kv, "b", 0.0)};
    }
    throw ConfigError("unknown eigenfunction recipe '" + name + "' (expected prop2, ode or exp)");
}

json parse_scalar_like(const std::string& text, const json& like) {
    const std::string t = trim(text);
    if (like.is_boolean()) {
        if (t == "true" || t == "1") {
            return true;
        }
        if (t == "false" || t == "0") {
            return false;
        }
        throw ConfigError("expected true or false, got '" + t + "'");
    }
    if (like.is_number_integer()) {
        const double v = to_double(t, "integer option");
        if (v != static_cast<double>(static_cast<long long>(v))) {
            throw ConfigError("expected an integer, got '" + t + "'");
        }
        return static_cast<long long>(v);
    }
    if (like.is_number() || like.is_null()) {
        return to_double(t, "numeric option");
    }
    return t;
}

bool compatible(const json& like, const json& value) {
    if (like.is_null()) {
        return value.is_null() || value.is_number();
    }
    if (like.is_number()) {
        return value.is_number();
    }
    if (like.is_array()) {
        return value.is_array();
    }
    if (like.is_object()) {
        return value.is_object();
    }
    if (like.is_string() && value.is_array()) {
        return true;  // step lists may be given as arrays of strings
    }
    return like.type() == value.type();
}

void apply(json& target, const json& source, const std::string& origin) {
    if (source.is_null()) {
        return;
    }
    if (!source.is_object()) {
        throw ConfigError(origin + " must be a JSON object");
    }
    for (const auto& [key, value] : source.items()) {
        if (!target.contains(key)) {
            throw ConfigError("unknown config key '" + key + "' in " + origin);
        }
        if (!compatible(target[key], value)) {
            throw ConfigError("config key '" + key + "' in " + origin + " has the wrong type");
        }
        target[key] = value;
    }
}

}  // namespace

ProfileFunction parse_profile(const std::string& spec) {
    const std::string s = trim(spec);
    if (s == "zero") {
        return ProfileFunction::zero();
    }
    const auto colon = s.find(':');
    const std::string kind = trim(s.substr(0, colon));
    const std::vector<double> v =
        colon == std::string::npos ? std::vector<double>{} : number_list(s.substr(colon + 1), "profile '" + s + "'");
    auto need = [&](std::size_t lo, std::size_t hi) {
        if (v.size() < lo || v.size() > hi) {
            throw ConfigError("profile '" + s + "' has the wrong number of parameters");
        }
    };
    if (kind == "gaussian") {
        need(2, 3);
        if (!(v[1] > 0.0)) {
            throw ConfigError("gaussian width must be positive");
        }
        return ProfileFunction::gaussian(v[0], v[1], v.size() > 2 ? v[2] : 1.0);
    }
    if (kind == "sinusoid") {
        need(1, 3);
        return ProfileFunction::sinusoid(v[0], v.size() > 1 ? v[1] : 0.0, v.size() > 2 ? v[2] : 1.0);
    }
    if (kind == "poly") {
        return ProfileFunction::polynomial(v);
    }
    if (kind == "exp") {
        need(1, 2);
        return ProfileFunction::exponential(v[0], v.size() > 1 ? v[1] : 1.0);
    }
    throw ConfigError("unknown profile kind '" + kind + "' (expected gaussian, sinusoid, poly, exp or zero)");
}

std::vector<StepRecipe> parse_steps(const std::string& text) {
    std::vector<StepRecipe> out;
    if (trim(text).empty()) {
        return out;
    }
    for (const auto& item : split(text, ';')) {
        if (item.empty()) {
            continue;
        }
        const auto colon = item.find(':');
        const std::string kind = trim(item.substr(0, colon));
        const std::string args = colon == std::string::npos ? "" : trim(item.substr(colon + 1));
        if (kind == "prop3") {
            const auto kv = parse_key_values(args, {"c1", "c2"}, "prop3");
            out.emplace_back(Prop3Recipe{value_or(kv, "c1", 1.0), value_or(kv, "c2", 1.0)});
        } else if (kind == "prop1") {
            if (args.empty()) {
                throw ConfigError("prop1 needs an eigenfunction recipe, e.g. prop1:prop2(c1=1,c2=1)");
            }
            out.emplace_back(Prop1Recipe{parse_h(args)});
        } else if (kind == "lemma2") {
            Lemma2Recipe recipe;
            for (const auto& h : split(args, '|')) {
                recipe.hs.push_back(parse_h(h));
            }
            if (recipe.hs.empty() || args.empty()) {
                throw ConfigError("lemma2 needs at least one eigenfunction recipe");
            }
            out.emplace_back(std::move(recipe));
        } else {
            throw ConfigError("unknown step kind '" + kind + "' (expected prop3, prop1 or lemma2)");
        }
    }
    return out;
}

std::vector<StepRecipe> parse_steps(const json& value) {
    if (value.is_string()) {
        return parse_steps(value.get<std::string>());
    }
    if (!value.is_array()) {
        throw ConfigError("steps must be a string or an array of strings");
    }
    std::vector<StepRecipe> out;
    for (const auto& item : value) {
        if (!item.is_string()) {
            throw ConfigError("steps must be a string or an array of strings");
        }
        for (auto& step : parse_steps(item.get<std::string>())) {
            out.push_back(std::move(step));
        }
    }
    return out;
}

EquationSpec parse_start_equation(const std::string& spec, const Interval& domain) {
    const std::string s = trim(spec);
    if (s == "wave") {
        return EquationSpec::wave(domain);
    }
    if (s.rfind("epd:", 0) == 0) {
        return EquationSpec::epd(to_double(s.substr(4), "start equation"), domain);
    }
    throw ConfigError("unknown start equation '" + s + "' (expected wave or epd:<n>)");
}

json parse_like(const std::string& text, const json& like) {
    if (like.is_array()) {
        json out = json::array();
        const json element = like.empty() ? json(0.0) : like.front();
        if (trim(text).empty()) {
            return out;
        }
        for (const auto& item : split(text, ',')) {
            out.push_back(parse_scalar_like(item, element));
        }
        return out;
    }
    return parse_scalar_like(text, like);
}

json merge_config(const json& defaults, const json& file_object, const json& overrides) {
    json out = defaults;
    apply(out, file_object, "config file");
    apply(out, overrides, "command-line flags");
    return out;
}

json load_config_file(const std::string& path, const std::string& command) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError("config file '" + path + "' must hold a JSON object");
    }
    if (doc.contains(command) && doc[command].is_object()) {
        return doc[command];
    }
    return doc;
}

std::filesystem::path resolve_output_dir(const json& config) {
    std::filesystem::path dir = ".";
    if (config.contains("output_dir") && config["output_dir"].is_string() &&
        !config["output_dir"].get<std::string>().empty()) {
        dir = config["output_dir"].get<std::string>();
    } else if (const char* env = std::getenv("GENSOL_OUTPUT_DIR"); env != nullptr && *env != '\0') {
        dir = env;
    }
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
    }
    return dir;
}

std::filesystem::path output_file(const json& config, const std::string& name) {
    const std::filesystem::path p = name;
    return p.is_absolute() ? p : resolve_output_dir(config) / p;
}

std::filesystem::path output_path(const json& config, const std::string& key) {
    const json& v = config.at(key);
    if (!v.is_string() || v.get<std::string>().empty()) {
        throw ConfigError("config key '" + key + "' must name an output file");
    }
    return output_file(config, v.get<std::string>());
}

namespace {

/// The output directory only says where files go, so it is left out of the
/// echoed config to keep results byte-identical across locations.
json echoed(const json& config) {
    json out = config;
    out.erase("output_dir");
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(const std::filesystem::path& path, const std::string& command, const json& config,
               const std::vector<std::string>& columns, const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write '" + path.string() + "'");
    }
    out << "# gensol " << version() << " " << command << "\n";
    out << "# config: " << echoed(config).dump() << "\n";
    for (std::size_t c = 0; c < columns.size(); ++c) {
        out << (c ? "," : "") << columns[c];
    }
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c ? "," : "") << format_double(row[c]);
        }
        out << "\n";
    }
}

void write_json(const std::filesystem::path& path, const std::string& command, const json& config,
                json report) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write '" + path.string() + "'");
    }
    report["tool"] = "gensol";
    report["version"] = version();
    report["command"] = command;
    report["config"] = echoed(config);
    out << report.dump(2) << "\n";
}

double get_double(const json& config, const std::string& key) {
    const json& v = config.at(key);
    if (!v.is_number()) {
        throw ConfigError("config key '" + key + "' must be a number");
    }
    return v.get<double>();
}

int get_int(const json& config, const std::string& key) {
    const json& v = config.at(key);
    if (!v.is_number_integer()) {
        throw ConfigError("config key '" + key + "' must be an integer");
    }
    return v.get<int>();
}

Interval get_interval(const json& config, const std::string& key) {
    const json& v = config.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw ConfigError("config key '" + key + "' must be a pair [lo, hi]");
    }
    const Interval out{v[0].get<double>(), v[1].get<double>()};
    if (!(out.hi > out.lo)) {
        throw ConfigError("config key '" + key + "' needs lo < hi");
    }
    return out;
}

}  // namespace gensol::cli
