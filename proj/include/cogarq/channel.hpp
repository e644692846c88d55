#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <variant>

namespace cogarq {

/// Primary link state in the two-state (Gilbert-Elliott style) model.
enum class TwoState : std::uint8_t { Erasure, NonErasure };

/// Primary link state in the three-state model: Bad, Good, Very good.
enum class ThreeState : std::uint8_t { Bad, Good, VeryGood };

std::string_view to_string(TwoState s);
std::string_view to_string(ThreeState s);

/// Tolerance applied to row sums and probability ranges at construction.
inline constexpr double kProbabilityTolerance = 1e-12;

/// Two-state erasure channel described by P(E -> E) and P(N -> E).
///
/// Only positively correlated (or i.i.d.) chains are representable:
/// 0 <= p_ne <= p_ee <= 1. Operations that need strict correlation check
/// `strictly_correlated()` themselves.
class TwoStateChannel {
public:
    TwoStateChannel(double p_ee, double p_ne);

    double p_ee() const noexcept { return p_ee_; }
    double p_ne() const noexcept { return p_ne_; }
    double p_en() const noexcept { return 1.0 - p_ee_; }
    double p_nn() const noexcept { return 1.0 - p_ne_; }

    /// Probability of moving to erasure from state `from`.
    double to_erasure(TwoState from) const noexcept {
        return from == TwoState::Erasure ? p_ee_ : p_ne_;
    }

    bool strictly_correlated() const noexcept { return p_ee_ > p_ne_; }

    /// Second eigenvalue of the transition matrix, p_ee - p_ne.
    double memory() const noexcept { return p_ee_ - p_ne_; }

    friend bool operator==(const TwoStateChannel&, const TwoStateChannel&) = default;

private:
    double p_ee_;
    double p_ne_;
};

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// Three-state channel; rows and columns ordered (B, G, Vg).
class ThreeStateChannel {
public:
    explicit ThreeStateChannel(const Matrix3& transition);

    double operator()(ThreeState from, ThreeState to) const noexcept {
        return p_[index(from)][index(to)];
    }
    const std::array<double, 3>& row(ThreeState from) const noexcept { return p_[index(from)]; }
    const Matrix3& matrix() const noexcept { return p_; }

    static constexpr std::size_t index(ThreeState s) noexcept { return static_cast<std::size_t>(s); }

    friend bool operator==(const ThreeStateChannel&, const ThreeStateChannel&) = default;

private:
    Matrix3 p_;
};

using ChannelModel = std::variant<TwoStateChannel, ThreeStateChannel>;

struct TwoStateDistribution {
    double erasure;
    double non_erasure;
};

/// Stationary distribution of the two-state chain. Throws std::domain_error
/// when both states are absorbing.
TwoStateDistribution stationary(const TwoStateChannel& ch);

/// Stationary distribution (pi_B, pi_G, pi_Vg) by direct linear solve.
/// Throws std::domain_error when the chain has more than one closed class.
std::array<double, 3> stationary(const ThreeStateChannel& ch);

/// Erasure probability after `k` unobserved transitions starting from
/// erasure probability `p0`.
double k_step_erasure(const TwoStateChannel& ch, double p0, unsigned k);

/// Next state as a pure function of the current state and a draw u in [0,1).
/// [0,1) is partitioned by the transition row in state order.
TwoState sample_next(const TwoStateChannel& ch, TwoState s, double u);
ThreeState sample_next(const ThreeStateChannel& ch, ThreeState s, double u);

/// State drawn from a distribution given as cumulative split of [0,1).
TwoState sample_from(const TwoStateDistribution& dist, double u);
ThreeState sample_from(const std::array<double, 3>& dist, double u);

}  // namespace cogarq
