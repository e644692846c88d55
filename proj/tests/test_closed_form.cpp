#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "cogarq/closed_form.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cogarq;

namespace {

const TwoStateChannel kDefault(0.99, 0.01);
const RewardConfig kUnit(0.5, 1.0, 1.0);

}  // namespace

TEST_CASE("burst return probability") {
    CHECK(std::abs(erasure_after_burst(kDefault, 0) - 0.99) < 1e-15);
    CHECK(std::abs(erasure_after_burst(kDefault, 1) - oracle::burst_return_erasure(0.99, 0.01, 1)) < 1e-15);
    CHECK(std::abs(erasure_after_burst(kDefault, 1) - 0.9802) < 1e-12);
    CHECK(std::abs(erasure_after_burst(kDefault, 10'000) - 0.5) < 1e-9);
    CHECK_THROWS_AS(erasure_after_burst(TwoStateChannel(0.4, 0.4), 3), std::invalid_argument);

    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double a = u(gen), b = u(gen);
        if (a == b) continue;
        const TwoStateChannel ch(std::max(a, b), std::min(a, b));
        for (unsigned m = 0; m <= 200; ++m) {
            CHECK(std::abs(erasure_after_burst(ch, m) - k_step_erasure(ch, 1.0, m + 1)) < 1e-12);
        }
    }
}

TEST_CASE("scheme steady state matches the scheme chain") {
    auto ss = scheme_steady_state(kDefault, 1);
    CHECK(ss.listen_non_erasure == doctest::Approx(0.497487).epsilon(1e-6));
    CHECK(ss.listen_erasure == doctest::Approx(0.251256).epsilon(1e-5));
    CHECK(ss.burst == ss.listen_erasure);
    CHECK(std::abs(ss.listen_non_erasure + ss.listen_erasure + ss.burst - 1.0) < 1e-12);

    ss = scheme_steady_state(kDefault, 10);
    CHECK(ss.burst == doctest::Approx(0.083592).epsilon(1e-5));

    std::mt19937_64 gen(29);
    std::uniform_real_distribution<double> u(0.001, 0.999);
    for (int trial = 0; trial < 40; ++trial) {
        const double a = u(gen), b = u(gen);
        const double p_ee = std::max(a, b), p_ne = std::min(a, b);
        const TwoStateChannel ch(p_ee, p_ne);
        for (unsigned m : {1u, 2u, 7u, 30u}) {
            const auto got = scheme_steady_state(ch, m);
            const auto ref = oracle::scheme_chain(p_ee, p_ne, m);
            CHECK(std::abs(got.listen_non_erasure - ref.n) < 1e-10);
            CHECK(std::abs(got.listen_erasure - ref.e) < 1e-10);
            CHECK(std::abs(got.burst - ref.s) < 1e-10);
        }
    }

    CHECK_THROWS_WITH_AS(scheme_steady_state(TwoStateChannel(0.5, 0.0), 2), "absorbing non-erasure state",
                         std::domain_error);
    CHECK_THROWS_AS(scheme_steady_state(kDefault, 0), std::invalid_argument);
}

TEST_CASE("closed-form rates against slot-level chains and Monte Carlo") {
    for (unsigned m = 1; m <= 20; ++m) {
        const auto r = closed_form_rates(kDefault, kUnit, m);
        const auto e = oracle::expanded_slot_chain(0.99, 0.01, m, 1.0, 1.0);
        const auto j = oracle::joint_chain(0.99, 0.01, m, 1.0, 1.0);
        CHECK(std::abs(r.primary - e.primary) < 1e-10);
        CHECK(std::abs(r.secondary - e.secondary) < 1e-10);
        CHECK(std::abs(r.primary - j.primary) < 1e-10);
        CHECK(std::abs(r.secondary - j.secondary) < 1e-10);
    }

    const auto r1 = closed_form_rates(kDefault, kUnit, 1);
    CHECK(r1.primary == doctest::Approx(0.497487).epsilon(1e-6));
    CHECK(r1.secondary == doctest::Approx(0.251256).epsilon(1e-5));
    const auto r10 = closed_form_rates(kDefault, kUnit, 10);
    CHECK(std::abs(r10.primary - 0.4753) < 5e-5);
    CHECK(std::abs(r10.secondary - 0.4770) < 5e-5);

    for (unsigned m : {1u, 10u}) {
        const auto mc = oracle::monte_carlo_burst(0.99, 0.01, m, 1'000'000, 99);
        const auto r = closed_form_rates(kDefault, kUnit, m);
        CHECK(std::abs(mc.primary - r.primary) < 0.025);
        CHECK(std::abs(mc.secondary - r.secondary) < 0.025);
    }

    const auto scaled = closed_form_rates(kDefault, RewardConfig(0.5, 3.0, 1.0), 4);
    const auto base = closed_form_rates(kDefault, kUnit, 4);
    CHECK(scaled.primary == doctest::Approx(3.0 * base.primary));
    CHECK(scaled.secondary == base.secondary);
}

TEST_CASE("weighted throughput") {
    const double v = weighted_throughput(kDefault, kUnit.with_weight(0.7), 1);
    CHECK(std::abs(v - oracle::joint_thr(0.99, 0.01, 1, 0.7)) < 1e-12);
    CHECK(std::abs(v - 0.4236) < 5e-5);
    for (unsigned m : {1u, 3u, 40u}) {
        const auto r = closed_form_rates(kDefault, kUnit, m);
        CHECK(weighted_throughput(kDefault, kUnit.with_weight(1.0), m) == r.primary);
        CHECK(weighted_throughput(kDefault, kUnit.with_weight(0.0), m) == r.secondary);
    }
}

TEST_CASE("regime classification") {
    CHECK(classify_regime(kDefault, kUnit.with_weight(0.4)).kind == Regime::Kind::AlwaysTransmit);
    CHECK(classify_regime(kDefault, kUnit.with_weight(0.995)).kind == Regime::Kind::AlwaysListen);

    // Exhaustive scan over the scheme-chain oracle.
    unsigned best_m = 1;
    double best = -1.0;
    for (unsigned m = 1; m <= 10'000; ++m) {
        const double t = oracle::scheme_thr(0.99, 0.01, m, 0.8);
        if (t > best) best = t, best_m = m;
    }
    CHECK(best_m == 7);
    const auto r = classify_regime(kDefault, kUnit.with_weight(0.8));
    CHECK(r == Regime{Regime::Kind::Finite, best_m});

    // Exact ties resolve to the pure strategies.
    CHECK(classify_regime(TwoStateChannel(0.5, 0.25), RewardConfig(0.5, 2.0, 1.0)).kind ==
          Regime::Kind::AlwaysListen);
    CHECK(classify_regime(TwoStateChannel(0.75, 0.5), RewardConfig(0.5, 2.0, 1.0)).kind ==
          Regime::Kind::AlwaysTransmit);
    // i.i.d. channel never needs the burst scheme.
    CHECK(classify_regime(TwoStateChannel(0.3, 0.3), kUnit).kind != Regime::Kind::Finite);
}

TEST_CASE("optimal burst length") {
    const auto opt = optimal_m(kDefault, kUnit.with_weight(0.8));
    CHECK(opt.m == 7);
    CHECK(opt.throughput == doctest::Approx(0.4766).epsilon(1e-4));
    CHECK(std::abs(opt.throughput - oracle::scheme_thr(0.99, 0.01, 7, 0.8)) < 1e-12);

    const auto rc7 = kUnit.with_weight(0.7);
    const auto o7 = optimal_m(kDefault, rc7);
    for (unsigned m = 1; m <= 2000; ++m) CHECK(o7.throughput >= weighted_throughput(kDefault, rc7, m));

    // Deep in the always-transmit regime Thr(M) keeps rising.
    CHECK_THROWS_WITH_AS(optimal_m(kDefault, kUnit.with_weight(0.3), 50), "no interior maximum; check regime",
                         std::runtime_error);
}

TEST_CASE("throughput is quasi-concave in the burst length") {
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    auto sign_changes = [](const TwoStateChannel& ch, const RewardConfig& rc) {
        int changes = 0;
        int last = 0;
        for (unsigned m = 1; m < 100; ++m) {
            const double d = weighted_throughput(ch, rc, m + 1) - weighted_throughput(ch, rc, m);
            const int s = d > 1e-15 ? 1 : (d < -1e-15 ? -1 : 0);
            if (s != 0 && last != 0 && s != last) ++changes;
            if (s != 0) last = s;
        }
        return changes;
    };
    for (double w = 0.0; w <= 1.0; w += 0.05) CHECK(sign_changes(kDefault, kUnit.with_weight(w)) <= 1);
    for (int trial = 0; trial < 50; ++trial) {
        const double a = u(gen), b = u(gen);
        const TwoStateChannel ch(std::max(a, b), std::min(a, b));
        CHECK(sign_changes(ch, RewardConfig(u(gen), 1.0, 1.0)) <= 1);
    }
}

TEST_CASE("rate region") {
    const auto pts = rate_region(kDefault, kUnit, 50);
    REQUIRE(pts.size() == 52);
    CHECK(pts.front().rates.label == "listen");
    CHECK(pts.front().rates.primary == doctest::Approx(0.5));
    CHECK(pts.front().rates.secondary == 0.0);
    CHECK(pts.back().rates.label == "transmit");
    CHECK(pts.back().rates.primary == 0.0);
    CHECK(pts.back().rates.secondary == 1.0);
    CHECK(pts.front().on_hull);
    CHECK(pts.back().on_hull);

    for (std::size_t i = 1; i + 2 < pts.size(); ++i) {
        CHECK(pts[i + 1].rates.primary < pts[i].rates.primary);
        CHECK(pts[i + 1].rates.secondary > pts[i].rates.secondary);
    }

    // Hull vertices, left to right, have nonincreasing slopes, and every
    // point lies on or below the hull polyline.
    std::vector<RatePoint> hull;
    for (auto it = pts.rbegin(); it != pts.rend(); ++it)
        if (it->on_hull) hull.push_back(it->rates);
    std::sort(hull.begin(), hull.end(), [](auto& a, auto& b) { return a.primary < b.primary; });
    REQUIRE(hull.size() >= 2);
    double prev_slope = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
        const double slope = (hull[i + 1].secondary - hull[i].secondary) / (hull[i + 1].primary - hull[i].primary);
        CHECK(slope <= prev_slope + 1e-12);
        prev_slope = slope;
    }
    for (const auto& p : pts) {
        for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
            if (p.rates.primary < hull[i].primary || p.rates.primary > hull[i + 1].primary) continue;
            const double t = (p.rates.primary - hull[i].primary) / (hull[i + 1].primary - hull[i].primary);
            const double y = hull[i].secondary + t * (hull[i + 1].secondary - hull[i].secondary);
            CHECK(p.rates.secondary <= y + 1e-12);
        }
    }
}
