#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cogarq/belief.hpp"
#include "cogarq/channel.hpp"
#include "cogarq/dp.hpp"
#include "cogarq/sim.hpp"

namespace cogarq {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ModelKind { TwoState, ThreeState };

struct WeightRange {
    double start;
    double end;
    double step;

    /// start, start + step, ... up to end (inclusive within step * 1e-9).
    std::vector<double> values() const;
};

/// Everything a CLI command needs. Defaults reproduce the two-state
/// setting P_EE = 0.99, P_NE = 0.01, r_p = r_s = 1.
struct ExperimentConfig {
    ModelKind model = ModelKind::TwoState;
    double p_ee = 0.99;
    double p_ne = 0.01;
    Matrix3 matrix = {{{0.9, 0.05, 0.05}, {0.05, 0.9, 0.05}, {0.05, 0.05, 0.9}}};
    double r_p = 1.0;
    double r_s = 1.0;
    double w = 0.5;
    std::optional<WeightRange> w_range;
    double alpha = 0.999;
    std::optional<std::size_t> grid_n;  // model-dependent default
    double tol = 1e-9;
    std::size_t max_iter = 1'000'000;
    unsigned m_max = kDefaultMaxBurst;
    unsigned m = 1;
    std::uint64_t slots = 1'000'000;
    std::uint64_t warmup = 1'000;
    std::uint64_t seed = 1;
    std::vector<SweepPolicy> policies = {policy::Greedy{}, sweep_policy::Optimal{}};
    std::string out;
    unsigned horizon = 1;
    std::size_t oracle_points = 11;

    ChannelModel channel() const;
    RewardConfig rewards(double weight) const { return {weight, r_p, r_s}; }
    RewardConfig rewards() const { return rewards(w); }
    DPConfig dp() const;
    SimConfig sim() const;
    /// The w-range if one is set, otherwise just w.
    std::vector<double> weights() const;

    /// Re-checks every constraint; throws ConfigError naming the key.
    void validate() const;
};

inline constexpr std::string_view kConfigDirEnv = "COGARQ_CONFIG_DIR";

/// Applies one `key = value` assignment. Unknown keys and malformed values
/// throw ConfigError.
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// Parses flat `key = value` text with `#` comments.
void apply_text(ExperimentConfig& cfg, std::string_view text, std::string_view source);

/// Loads an optional config file, then applies overrides in order, then
/// validates. Relative paths missing from the working directory are looked
/// up under $COGARQ_CONFIG_DIR.
ExperimentConfig load_config(const std::optional<std::filesystem::path>& path,
                             const std::vector<std::pair<std::string, std::string>>& overrides);

SweepPolicy parse_policy(std::string_view text);

}  // namespace cogarq
