// Command-line front end: one subcommand per analysis, CSV on --out or stdout.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cogarq/commands.hpp"
#include "cogarq/config.hpp"

namespace {

struct CommonOptions {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> sets;
};

std::vector<std::pair<std::string, std::string>> overrides(const CommonOptions& o) {
    std::vector<std::pair<std::string, std::string>> kv;
    for (const auto& s : o.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw cogarq::ConfigError("--set expects key=value, got '" + s + "'");
        kv.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    if (o.seed) kv.emplace_back("seed", std::to_string(*o.seed));
    if (!o.out.empty()) kv.emplace_back("out", o.out);
    return kv;
}

int run(const cogarq::cli::CommandInfo& cmd, const CommonOptions& opts) {
    std::optional<std::filesystem::path> path;
    if (!opts.config.empty()) path = opts.config;
    const auto cfg = cogarq::load_config(path, overrides(opts));

    if (cfg.out.empty() || cfg.out == "-") {
        const auto summary = cmd.run(cfg, std::cout);
        std::cerr << summary << '\n';
        return 0;
    }
    std::ofstream file(cfg.out);
    if (!file) throw std::runtime_error("cannot open output file: " + cfg.out);
    const auto summary = cmd.run(cfg, file);
    file.close();
    if (!file) throw std::runtime_error("failed writing output file: " + cfg.out);
    std::cout << summary << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Secondary-user transmission policies from overheard primary ARQ feedback"};
    app.require_subcommand(1);

    CommonOptions opts;
    std::optional<cogarq::cli::CommandInfo> chosen;
    for (const auto& info : cogarq::cli::commands()) {
        auto* sub = app.add_subcommand(std::string(info.name), std::string(info.help));
        sub->add_option("--config", opts.config, "key = value config file");
        sub->add_option("--out", opts.out, "CSV output path (default: stdout)");
        sub->add_option("--seed", opts.seed, "base random seed");
        sub->add_option("--set", opts.sets, "override a config key, key=value (repeatable)");
        sub->callback([&chosen, info] { chosen = info; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        return run(*chosen, opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
