#pragma once

#include <string>
#include <vector>

#include "cogarq/belief.hpp"
#include "cogarq/channel.hpp"

namespace cogarq {

/// Erasure probability at the first listening slot after an erasure
/// followed by `m` secondary transmissions, i.e. an (m+1)-step E -> E
/// transition. Requires p_ee > p_ne.
double erasure_after_burst(const TwoStateChannel& ch, unsigned m);

/// Stationary occupancy of the listen-then-burst scheme chain
/// {N: listening in non-erasure, E: listening in erasure, S: M-slot burst}.
struct SchemeSteadyState {
    double listen_non_erasure;
    double listen_erasure;
    double burst;
    unsigned m;
};

SchemeSteadyState scheme_steady_state(const TwoStateChannel& ch, unsigned m);

struct RatePoint {
    double primary;
    double secondary;
    std::string label;
};

/// Long-run (R_p, R_s) of the scheme that listens until a NACK and then
/// transmits `m` consecutive packets.
RatePoint closed_form_rates(const TwoStateChannel& ch, const RewardConfig& rc, unsigned m);

/// w * R_p + (1 - w) * R_s for the burst-length-`m` scheme.
double weighted_throughput(const TwoStateChannel& ch, const RewardConfig& rc, unsigned m);

struct OptimalBurst {
    unsigned m;
    double throughput;
};

inline constexpr unsigned kDefaultMaxBurst = 10'000;

/// Scans m = 1, 2, ... and stops once three successive values fall below
/// the running candidate. Throws std::runtime_error if no interior maximum
/// shows up by `m_max`.
OptimalBurst optimal_m(const TwoStateChannel& ch, const RewardConfig& rc,
                       unsigned m_max = kDefaultMaxBurst);

struct Regime {
    enum class Kind { AlwaysListen, AlwaysTransmit, Finite };
    Kind kind;
    unsigned m_star = 0;  // only meaningful for Finite

    bool operator==(const Regime&) const = default;
};

std::string to_string(const Regime& r);

/// Operating regime. Equality in either bound resolves to the pure strategy.
Regime classify_regime(const TwoStateChannel& ch, const RewardConfig& rc,
                       unsigned m_max = kDefaultMaxBurst);

/// Long-run rates of a regime's policy (corner point or burst scheme).
RatePoint regime_rates(const TwoStateChannel& ch, const RewardConfig& rc, const Regime& r);

struct RegionPoint {
    RatePoint rates;
    bool on_hull;
};

/// Listen corner, burst points m = 1..m_max, transmit corner, in that
/// order, with vertices of the upper-right convex hull flagged.
std::vector<RegionPoint> rate_region(const TwoStateChannel& ch, const RewardConfig& rc,
                                     unsigned m_max);

}  // namespace cogarq
