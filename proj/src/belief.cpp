#include "cogarq/belief.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cogarq {

std::string_view to_string(Action a) {
    return a == Action::Listen ? "listen" : "transmit";
}

std::string_view to_string(Feedback f) {
    return f == Feedback::Ack ? "ack" : "nack";
}

RewardConfig::RewardConfig(double w, double r_p, double r_s) : w_(w), r_p_(r_p), r_s_(r_s) {
    if (!(w >= 0.0 && w <= 1.0)) {
        throw std::invalid_argument("weight w out of range [0,1]: " + std::to_string(w));
    }
    if (!(r_p > 0.0) || !std::isfinite(r_p)) {
        throw std::invalid_argument("primary reward r_p must be positive");
    }
    if (!(r_s > 0.0) || !std::isfinite(r_s)) {
        throw std::invalid_argument("secondary reward r_s must be positive");
    }
}

Belief2::Belief2(double p) : p_(p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("belief out of range [0,1]: " + std::to_string(p));
    }
}

Belief3::Belief3(double p, double q) : p_(p), q_(q) {
    constexpr double tol = kProbabilityTolerance;
    if (!(p >= -tol && q >= -tol && p + q <= 1.0 + tol)) {
        throw std::invalid_argument("belief outside the simplex: p=" + std::to_string(p) +
                                    " q=" + std::to_string(q));
    }
    p_ = std::max(p_, 0.0);
    q_ = std::max(q_, 0.0);
    if (p_ + q_ > 1.0) {
        const double s = p_ + q_;
        p_ /= s;
        q_ /= s;
    }
}

Belief2 update(const TwoStateChannel& ch, Belief2 b, Action a, std::optional<Feedback> f) {
    if (a == Action::Transmit) {
        return Belief2(b.p() * ch.p_ee() + (1.0 - b.p()) * ch.p_ne());
    }
    if (!f) {
        throw std::invalid_argument("listening update requires feedback");
    }
    return Belief2(*f == Feedback::Ack ? ch.p_ne() : ch.p_ee());
}

namespace {

// Next-slot (G, Vg) belief from a posterior over the current state.
Belief3 push_forward(const ThreeStateChannel& ch, double bad, double good, double very_good) {
    const auto& m = ch.matrix();
    const double p = bad * m[0][1] + good * m[1][1] + very_good * m[2][1];
    const double q = bad * m[0][2] + good * m[1][2] + very_good * m[2][2];
    return Belief3(p, q);
}

}  // namespace

Belief3 update(const ThreeStateChannel& ch, Belief3 b, Action a, Feedback f) {
    const double p = b.p();
    const double q = b.q();
    if (a == Action::Listen) {
        if (f == Feedback::Nack) {
            return push_forward(ch, 1.0, 0.0, 0.0);
        }
        const double s = p + q;
        if (s <= 0.0) throw std::domain_error("zero-probability observation");
        return push_forward(ch, 0.0, p / s, q / s);
    }
    if (f == Feedback::Ack) {
        return push_forward(ch, 0.0, 0.0, 1.0);
    }
    const double s = 1.0 - q;
    if (s <= 0.0) throw std::domain_error("zero-probability observation");
    return push_forward(ch, (1.0 - p - q) / s, p / s, 0.0);
}

OutcomeProbs outcome_probs(Belief3 b) {
    return {1.0 - b.p() - b.q(), b.p() + b.q(), b.q(), 1.0 - b.q()};
}

double gain(const RewardConfig& rc, Belief2 b, Action a) {
    if (a == Action::Listen) return rc.w() * rc.r_p() * (1.0 - b.p());
    return (1.0 - rc.w()) * rc.r_s();
}

double gain(const RewardConfig& rc, Belief3 b, Action a) {
    if (a == Action::Listen) return rc.w() * rc.r_p() * (b.p() + b.q());
    return (1.0 - rc.w()) * rc.r_s() + rc.w() * rc.r_p() * b.q();
}

}  // namespace cogarq
