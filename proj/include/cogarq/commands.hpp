#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cogarq/config.hpp"

namespace cogarq::cli {

/// A command writes its CSV to `out` and returns a one-line summary.
using Command = std::string (*)(const ExperimentConfig& cfg, std::ostream& out);

std::string cmd_closed_form(const ExperimentConfig& cfg, std::ostream& out);
std::string cmd_optimal_m(const ExperimentConfig& cfg, std::ostream& out);
std::string cmd_rate_region(const ExperimentConfig& cfg, std::ostream& out);
std::string cmd_solve(const ExperimentConfig& cfg, std::ostream& out);
std::string cmd_simulate(const ExperimentConfig& cfg, std::ostream& out);
std::string cmd_sweep(const ExperimentConfig& cfg, std::ostream& out);
std::string cmd_oracle(const ExperimentConfig& cfg, std::ostream& out);

struct CommandInfo {
    std::string_view name;
    std::string_view help;
    Command run;
};

const std::vector<CommandInfo>& commands();
std::optional<CommandInfo> find_command(std::string_view name);

/// m_opt column text for a regime: M*, "inf" (always transmit) or "0".
std::string m_opt_text(const Regime& r);

}  // namespace cogarq::cli
