#pragma once

#include <optional>
#include <string_view>

#include "cogarq/channel.hpp"

namespace cogarq {

enum class Action : std::uint8_t { Listen, Transmit };
enum class Feedback : std::uint8_t { Ack, Nack };

std::string_view to_string(Action a);
std::string_view to_string(Feedback f);

/// Weight on primary throughput and per-packet rewards of both links.
class RewardConfig {
public:
    RewardConfig(double w, double r_p, double r_s);

    double w() const noexcept { return w_; }
    double r_p() const noexcept { return r_p_; }
    double r_s() const noexcept { return r_s_; }

    /// Same rewards, different weight.
    RewardConfig with_weight(double w) const { return {w, r_p_, r_s_}; }

    friend bool operator==(const RewardConfig&, const RewardConfig&) = default;

private:
    double w_;
    double r_p_;
    double r_s_;
};

/// Probability that the two-state channel is in erasure in the next slot.
class Belief2 {
public:
    explicit Belief2(double p);
    double p() const noexcept { return p_; }

private:
    double p_;
};

/// Belief over (B, G, Vg) for the next slot, stored as p = P(G), q = P(Vg).
///
/// Points within 1e-12 of the simplex are projected onto it; anything
/// further out is rejected.
class Belief3 {
public:
    Belief3(double p, double q);
    double p() const noexcept { return p_; }
    double q() const noexcept { return q_; }
    double bad() const noexcept { return 1.0 - p_ - q_; }

private:
    double p_;
    double q_;
};

/// Two-state belief update. Transmit ignores feedback (the primary always
/// NACKs under interference); Listen requires it.
Belief2 update(const TwoStateChannel& ch, Belief2 b, Action a, std::optional<Feedback> f);

/// Three-state belief update. Throws std::domain_error when conditioning on
/// an observation of probability zero.
Belief3 update(const ThreeStateChannel& ch, Belief3 b, Action a, Feedback f);

/// Probabilities of (Listen+Nack, Listen+Ack, Transmit+Ack, Transmit+Nack).
struct OutcomeProbs {
    double listen_nack;
    double listen_ack;
    double transmit_ack;
    double transmit_nack;
};

OutcomeProbs outcome_probs(Belief3 b);

/// Expected weighted instantaneous reward.
double gain(const RewardConfig& rc, Belief2 b, Action a);
double gain(const RewardConfig& rc, Belief3 b, Action a);

}  // namespace cogarq
