#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cogarq/belief.hpp"
#include "cogarq/channel.hpp"
#include "cogarq/closed_form.hpp"
#include "cogarq/dp.hpp"

namespace cogarq {

namespace policy {

struct AlwaysListen {};
struct AlwaysTransmit {};
/// Maximizes the instantaneous expected gain; ties go to Listen.
struct Greedy {};
/// Listen while ACKs arrive; after a NACK heard while listening, transmit
/// for exactly `m` slots, then listen again.
struct ConsecutiveM {
    unsigned m;
};
/// Two-state only: transmit iff the erasure belief is at least `p_star`.
struct Threshold {
    double p_star;
};
struct Dp2 {
    std::shared_ptr<const Solution2> solution;
};
struct Dp3 {
    std::shared_ptr<const Solution3> solution;
};

}  // namespace policy

using PolicySpec = std::variant<policy::AlwaysListen, policy::AlwaysTransmit, policy::Greedy,
                                policy::ConsecutiveM, policy::Threshold, policy::Dp2, policy::Dp3>;

std::string policy_name(const PolicySpec& p);

struct StationaryStart {};

struct SimConfig {
    std::uint64_t slots = 1'000'000;  // total, warmup included
    std::uint64_t warmup = 1'000;
    std::uint64_t seed = 1;
    std::variant<StationaryStart, TwoState, ThreeState> initial_state = StationaryStart{};

    void validate() const;
};

struct Metrics {
    std::uint64_t slots_counted = 0;
    std::uint64_t primary_successes = 0;
    std::uint64_t secondary_packets = 0;
    double r_p_hat = 0.0;
    double r_s_hat = 0.0;
    double weighted = 0.0;

    bool operator==(const Metrics&) const = default;
};

struct SlotOutcome {
    Feedback feedback;
    bool primary_success;
    bool secondary_success;
};

/// ARQ outcome of one slot. The secondary link is lossless, so the
/// secondary succeeds exactly when it transmits.
SlotOutcome feedback(TwoState s, Action a);
SlotOutcome feedback(ThreeState s, Action a);

struct SlotRecord {
    std::uint8_t state;  // TwoState or ThreeState as integer
    Action action;
    Feedback feedback;
    double p;  // belief held when the action was chosen
    double q;  // zero in the two-state model
};

struct Trace {
    Metrics metrics;
    std::vector<SlotRecord> slots;
};

/// Slot-level simulation. Deterministic for a given configuration; throws
/// std::invalid_argument when the policy does not fit the model.
Metrics run(const ChannelModel& model, const RewardConfig& rc, const PolicySpec& policy,
            const SimConfig& cfg);

/// As run(), also returning every slot (warmup included).
Trace run_traced(const ChannelModel& model, const RewardConfig& rc, const PolicySpec& policy,
                 const SimConfig& cfg);

namespace sweep_policy {

/// Best policy for each weight: the closed-form regime in the two-state
/// model, the converged DP policy in the three-state model.
struct Optimal {};
/// DP policy re-solved for each weight.
struct Dp {};

}  // namespace sweep_policy

using SweepPolicy = std::variant<policy::AlwaysListen, policy::AlwaysTransmit, policy::Greedy,
                                 policy::ConsecutiveM, policy::Threshold, sweep_policy::Optimal,
                                 sweep_policy::Dp>;

std::string policy_name(const SweepPolicy& p);

struct SweepSettings {
    double r_p = 1.0;
    double r_s = 1.0;
    SimConfig sim;  // sim.seed is the base seed
    DPConfig dp;
    unsigned m_max = kDefaultMaxBurst;
};

struct SweepRow {
    double w;
    std::string policy;
    Metrics metrics;
    std::uint64_t seed;             // seed the run actually used
    std::optional<Regime> regime;   // two-state Optimal only
};

/// Concrete policy for one weight. Optimal and Dp solve as needed; a DP
/// table solved once is cached in `dp_cache` for reuse at the same weight.
/// `regime` receives the closed-form regime for two-state Optimal.
PolicySpec resolve_policy(const ChannelModel& model, const RewardConfig& rc, const SweepPolicy& sp,
                          const SweepSettings& settings, std::optional<PolicySpec>& dp_cache,
                          std::optional<Regime>* regime = nullptr);

/// Seed of the run for the `index`-th weight.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

/// One run per (w, policy), rows ordered by w then by policy list order.
/// All policies at the same weight share one seed, so they see the same
/// channel realization.
std::vector<SweepRow> run_sweep(const ChannelModel& model, const std::vector<SweepPolicy>& policies,
                                const std::vector<double>& w_values, const SweepSettings& settings);

}  // namespace cogarq
