// gensol command-line driver. Every subcommand starts from built-in defaults,
// applies an optional JSON config file, then explicit flags.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "gensol/errors.hpp"
#include "gensol/version.hpp"

namespace {

using gensol::cli::json;

struct Subcommand {
    std::string name;
    std::string help;
    json defaults;
    int (*run)(const json&, std::ostream&) = nullptr;
    CLI::App* app = nullptr;
    std::string config_file;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
};

Subcommand make(std::string name, std::string help, json defaults, int (*run)(const json&, std::ostream&)) {
    Subcommand sub;
    sub.name = std::move(name);
    sub.help = std::move(help);
    sub.defaults = std::move(defaults);
    sub.run = run;
    return sub;
}

std::string flag_name(const std::string& key) {
    std::string out = key;
    for (char& c : out) {
        if (c == '_') {
            c = '-';
        }
    }
    return "--" + out;
}

void register_options(CLI::App& parent, Subcommand& sub) {
    sub.app = parent.add_subcommand(sub.name, sub.help);
    sub.app->add_option("--config", sub.config_file, "JSON config file (flags override it)");
    for (const auto& [key, value] : sub.defaults.items()) {
        const std::string name = flag_name(key);
        std::string& slot = sub.values[key];
        if (value.is_boolean()) {
            sub.options[key] = sub.app->add_flag(name + "{true}", slot, "boolean, default " + value.dump());
        } else {
            sub.options[key] = sub.app->add_option(name, slot, "default " + value.dump());
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    namespace cli = gensol::cli;
    CLI::App app{"gensol: exact general solutions of u_tt = u_xx + G(x) u_x and applications to gas dynamics"};
    app.set_version_flag("--version", std::string("gensol ") + gensol::version());
    app.require_subcommand(1);

    Subcommand subs[] = {
        make("derive", "build a transform chain and report the target coefficient and template",
             cli::derive_defaults(), cli::run_derive),
        make("verify", "exact-jet residual check of a shipped solution family", cli::verify_defaults(),
             cli::run_verify),
        make("compare", "leapfrog convergence study against an exact acoustics solution", cli::compare_defaults(),
             cli::run_compare),
        make("gas", "implicit gas-dynamics solutions: fields, identities, reference solver", cli::gas_defaults(),
             cli::run_gas),
        make("selftest", "quick built-in consistency checks", cli::selftest_defaults(), cli::run_selftest),
    };
    for (auto& sub : subs) {
        register_options(app, sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cli::exit_usage;
    }

    for (auto& sub : subs) {
        if (!sub.app->parsed()) {
            continue;
        }
        try {
            json overrides = json::object();
            for (const auto& [key, option] : sub.options) {
                if (option->count() > 0) {
                    overrides[key] = cli::parse_like(sub.values[key], sub.defaults[key]);
                }
            }
            const json file = sub.config_file.empty() ? json::object() : cli::load_config_file(sub.config_file, sub.name);
            const json config = cli::merge_config(sub.defaults, file, overrides);
            return sub.run(config, std::cout);
        } catch (const cli::ConfigError& e) {
            std::cerr << "gensol " << sub.name << ": configuration error: " << e.what() << "\n";
            return cli::exit_usage;
        } catch (const gensol::PreconditionError& e) {
            std::cerr << "gensol " << sub.name << ": invalid input: " << e.what() << "\n";
            return cli::exit_usage;
        } catch (const gensol::DomainError& e) {
            std::cerr << "gensol " << sub.name << ": domain error at " << e.location() << ": " << e.what() << "\n";
            return cli::exit_numerical;
        } catch (const std::exception& e) {
            std::cerr << "gensol " << sub.name << ": numerical failure: " << e.what() << "\n";
            return cli::exit_numerical;
        }
    }
    return cli::exit_usage;
}
