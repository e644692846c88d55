#include "cogarq/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cogarq {

namespace {

void require_strict_correlation(const TwoStateChannel& ch) {
    if (!ch.strictly_correlated()) {
        throw std::invalid_argument("closed form requires p_ee > p_ne");
    }
}

void require_burst(unsigned m) {
    if (m < 1) throw std::invalid_argument("burst length m must be at least 1");
}

}  // namespace

double erasure_after_burst(const TwoStateChannel& ch, unsigned m) {
    require_strict_correlation(ch);
    const double d = ch.memory();
    return (ch.p_ne() + std::pow(d, static_cast<double>(m) + 1.0) * (1.0 - ch.p_ee())) /
           (1.0 + ch.p_ne() - ch.p_ee());
}

SchemeSteadyState scheme_steady_state(const TwoStateChannel& ch, unsigned m) {
    require_burst(m);
    require_strict_correlation(ch);
    if (ch.p_ne() <= 0.0) throw std::domain_error("absorbing non-erasure state");
    const double t = erasure_after_burst(ch, m);
    const double denom = 1.0 + 2.0 * ch.p_ne() - t;
    const double burst = ch.p_ne() / denom;
    return {1.0 - 2.0 * burst, burst, burst, m};
}

RatePoint closed_form_rates(const TwoStateChannel& ch, const RewardConfig& rc, unsigned m) {
    const auto ss = scheme_steady_state(ch, m);
    const double time = ss.listen_non_erasure + ss.listen_erasure + m * ss.burst;
    return {rc.r_p() * ss.listen_non_erasure / time, rc.r_s() * m * ss.burst / time,
            std::to_string(m)};
}

double weighted_throughput(const TwoStateChannel& ch, const RewardConfig& rc, unsigned m) {
    const auto r = closed_form_rates(ch, rc, m);
    return rc.w() * r.primary + (1.0 - rc.w()) * r.secondary;
}

OptimalBurst optimal_m(const TwoStateChannel& ch, const RewardConfig& rc, unsigned m_max) {
    require_burst(m_max);
    constexpr unsigned kLookahead = 3;

    std::vector<double> thr;  // thr[i] = Thr(i + 1)
    auto at = [&](unsigned m) {
        while (thr.size() < m) thr.push_back(weighted_throughput(ch, rc, thr.size() + 1));
        return thr[m - 1];
    };

    OptimalBurst best{1, at(1)};
    for (unsigned m = 1; m <= m_max; ++m) {
        const double cur = at(m);
        if (cur > best.throughput) best = {m, cur};
        bool falling = true;
        for (unsigned j = 1; j <= kLookahead && falling; ++j) falling = at(m + j) < best.throughput;
        if (falling) return best;
    }
    throw std::runtime_error("no interior maximum; check regime");
}

std::string to_string(const Regime& r) {
    switch (r.kind) {
        case Regime::Kind::AlwaysListen: return "always-listen";
        case Regime::Kind::AlwaysTransmit: return "always-transmit";
        case Regime::Kind::Finite: return "finite(m=" + std::to_string(r.m_star) + ")";
    }
    return "?";
}

Regime classify_regime(const TwoStateChannel& ch, const RewardConfig& rc, unsigned m_max) {
    const double primary = rc.w() * rc.r_p();
    const double secondary = (1.0 - rc.w()) * rc.r_s();
    if (primary * (1.0 - ch.p_ee()) >= secondary) return {Regime::Kind::AlwaysListen};
    if (primary * (1.0 - ch.p_ne()) <= secondary) return {Regime::Kind::AlwaysTransmit};
    return {Regime::Kind::Finite, optimal_m(ch, rc, m_max).m};
}

RatePoint regime_rates(const TwoStateChannel& ch, const RewardConfig& rc, const Regime& r) {
    switch (r.kind) {
        case Regime::Kind::AlwaysListen:
            return {rc.r_p() * stationary(ch).non_erasure, 0.0, "listen"};
        case Regime::Kind::AlwaysTransmit:
            return {0.0, rc.r_s(), "transmit"};
        case Regime::Kind::Finite:
            return closed_form_rates(ch, rc, r.m_star);
    }
    throw std::logic_error("unknown regime");
}

std::vector<RegionPoint> rate_region(const TwoStateChannel& ch, const RewardConfig& rc,
                                     unsigned m_max) {
    require_burst(m_max);
    std::vector<RegionPoint> pts;
    pts.reserve(m_max + 2);
    pts.push_back({regime_rates(ch, rc, {Regime::Kind::AlwaysListen}), false});
    for (unsigned m = 1; m <= m_max; ++m) pts.push_back({closed_form_rates(ch, rc, m), false});
    pts.push_back({regime_rates(ch, rc, {Regime::Kind::AlwaysTransmit}), false});

    std::vector<std::size_t> order(pts.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& pa = pts[a].rates;
        const auto& pb = pts[b].rates;
        if (pa.primary != pb.primary) return pa.primary < pb.primary;
        return pa.secondary > pb.secondary;
    });

    constexpr double kSlack = 1e-12;
    std::vector<std::size_t> hull;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const auto& b = pts[order[k]].rates;
        if (k > 0 && b.primary == pts[order[k - 1]].rates.primary) continue;
        while (hull.size() >= 2) {
            const auto& o = pts[hull[hull.size() - 2]].rates;
            const auto& a = pts[hull.back()].rates;
            const double cross = (a.primary - o.primary) * (b.secondary - o.secondary) -
                                 (a.secondary - o.secondary) * (b.primary - o.primary);
            if (cross < -kSlack) break;
            hull.pop_back();
        }
        hull.push_back(order[k]);
    }

    // Keep only the Pareto part: from the highest secondary rate rightwards.
    auto top = std::max_element(hull.begin(), hull.end(), [&](std::size_t a, std::size_t b) {
        return pts[a].rates.secondary < pts[b].rates.secondary;
    });
    for (auto it = top; it != hull.end(); ++it) pts[*it].on_hull = true;
    return pts;
}

}  // namespace cogarq
