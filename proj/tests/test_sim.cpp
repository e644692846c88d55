#include <cmath>
#include <memory>

#include "cogarq/closed_form.hpp"
#include "cogarq/sim.hpp"
#include "doctest.h"

using namespace cogarq;

namespace {

const TwoStateChannel kDefault2(0.99, 0.01);
const ThreeStateChannel kDefault3({{{0.9, 0.05, 0.05}, {0.05, 0.9, 0.05}, {0.05, 0.05, 0.9}}});
const RewardConfig kUnit(0.5, 1.0, 1.0);

SimConfig config(std::uint64_t slots, std::uint64_t seed = 1) {
    SimConfig c;
    c.slots = slots;
    c.warmup = 1000;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_CASE("slot feedback") {
    auto o = feedback(TwoState::NonErasure, Action::Transmit);
    CHECK(o.feedback == Feedback::Nack);
    CHECK_FALSE(o.primary_success);
    CHECK(o.secondary_success);
    o = feedback(TwoState::NonErasure, Action::Listen);
    CHECK(o.feedback == Feedback::Ack);
    CHECK(o.primary_success);
    o = feedback(TwoState::Erasure, Action::Listen);
    CHECK(o.feedback == Feedback::Nack);
    CHECK_FALSE(o.primary_success);
    CHECK_FALSE(o.secondary_success);
    CHECK(feedback(TwoState::Erasure, Action::Transmit).secondary_success);

    o = feedback(ThreeState::VeryGood, Action::Transmit);
    CHECK(o.feedback == Feedback::Ack);
    CHECK(o.primary_success);
    CHECK(o.secondary_success);
    CHECK(feedback(ThreeState::Good, Action::Transmit).feedback == Feedback::Nack);
    CHECK(feedback(ThreeState::Good, Action::Listen).feedback == Feedback::Ack);
    CHECK(feedback(ThreeState::Bad, Action::Listen).feedback == Feedback::Nack);
    CHECK(feedback(ThreeState::Bad, Action::Transmit).secondary_success);
}

TEST_CASE("pure policies") {
    auto m = run(kDefault2, kUnit, policy::AlwaysTransmit{}, config(1'000'000));
    CHECK(m.r_p_hat == 0.0);
    CHECK(m.r_s_hat == 1.0);
    CHECK(m.slots_counted == 999'000);

    m = run(kDefault2, kUnit, policy::AlwaysListen{}, config(1'000'000));
    CHECK(std::abs(m.r_p_hat - 0.5) < 0.025);
    CHECK(m.secondary_packets == 0);

    m = run(kDefault3, kUnit, policy::AlwaysTransmit{}, config(1'000'000));
    CHECK(std::abs(m.r_p_hat - 1.0 / 3.0) < 0.005);
    CHECK(m.r_s_hat == 1.0);
    m = run(kDefault3, kUnit, policy::AlwaysListen{}, config(1'000'000));
    CHECK(std::abs(m.r_p_hat - 2.0 / 3.0) < 0.005);
}

TEST_CASE("metrics identities and reproducibility") {
    const RewardConfig rc(0.7, 2.0, 3.0);
    const auto a = run(kDefault2, rc, policy::ConsecutiveM{4}, config(50'000, 9));
    const auto b = run(kDefault2, rc, policy::ConsecutiveM{4}, config(50'000, 9));
    CHECK(a == b);
    CHECK(a.r_p_hat == rc.r_p() * static_cast<double>(a.primary_successes) / a.slots_counted);
    CHECK(a.r_s_hat == rc.r_s() * static_cast<double>(a.secondary_packets) / a.slots_counted);
    CHECK(a.weighted == rc.w() * a.r_p_hat + (1.0 - rc.w()) * a.r_s_hat);
    const auto c = run(kDefault2, rc, policy::ConsecutiveM{4}, config(50'000, 10));
    CHECK_FALSE(a == c);
}

TEST_CASE("trace replays through the belief module") {
    for (const PolicySpec& p : {PolicySpec{policy::ConsecutiveM{3}}, PolicySpec{policy::Greedy{}},
                                PolicySpec{policy::Threshold{0.6}}}) {
        const auto tr = run_traced(kDefault2, kUnit.with_weight(0.75), p, config(10'000, 4));
        REQUIRE(tr.slots.size() == 10'000);
        Belief2 b(stationary(kDefault2).erasure);
        std::uint64_t tx = 0;
        for (std::size_t t = 0; t < tr.slots.size(); ++t) {
            const auto& s = tr.slots[t];
            CHECK(s.p == b.p());
            if (t >= 1000 && s.action == Action::Transmit) ++tx;
            b = update(kDefault2, b, s.action,
                       s.action == Action::Listen ? std::optional<Feedback>(s.feedback) : std::nullopt);
        }
        CHECK(tx == tr.metrics.secondary_packets);
    }

    const auto tr = run_traced(kDefault3, kUnit.with_weight(0.6), policy::Greedy{}, config(10'000, 4));
    const auto pi = stationary(kDefault3);
    Belief3 b(pi[1], pi[2]);
    for (const auto& s : tr.slots) {
        CHECK(s.p == b.p());
        CHECK(s.q == b.q());
        b = update(kDefault3, b, s.action, s.feedback);
    }
}

TEST_CASE("consecutive-M automaton") {
    SimConfig cfg = config(2'000, 2);
    cfg.warmup = 0;
    cfg.initial_state = TwoState::Erasure;
    const auto tr = run_traced(kDefault2, kUnit, policy::ConsecutiveM{3}, cfg);
    // Starts listening; each NACK heard while listening triggers exactly 3 transmissions.
    CHECK(tr.slots[0].action == Action::Listen);
    for (std::size_t t = 0; t + 4 < tr.slots.size(); ++t) {
        const auto& s = tr.slots[t];
        if (s.action == Action::Listen && s.feedback == Feedback::Nack) {
            CHECK(tr.slots[t + 1].action == Action::Transmit);
            CHECK(tr.slots[t + 2].action == Action::Transmit);
            CHECK(tr.slots[t + 3].action == Action::Transmit);
            CHECK(tr.slots[t + 4].action == Action::Listen);
        }
        if (s.action == Action::Listen && s.feedback == Feedback::Ack) {
            CHECK(tr.slots[t + 1].action == Action::Listen);
        }
    }
}

// sd of r_p_hat over 10^6 slots is about 0.005 on this channel.
TEST_CASE("consecutive-M matches the closed form") {
    for (unsigned m : {1u, 5u, 10u}) {
        const auto cf = closed_form_rates(kDefault2, kUnit, m);
        double mean_p = 0.0, mean_s = 0.0;
        for (std::uint64_t k = 0; k < 20; ++k) {
            const auto sim = run(kDefault2, kUnit, policy::ConsecutiveM{m}, config(1'000'000, 100 * m + k));
            CHECK(std::abs(sim.r_p_hat - cf.primary) < 0.025);
            CHECK(std::abs(sim.r_s_hat - cf.secondary) < 0.025);
            mean_p += sim.r_p_hat / 20.0;
            mean_s += sim.r_s_hat / 20.0;
        }
        CHECK(std::abs(mean_p - cf.primary) < 0.005);
        CHECK(std::abs(mean_s - cf.secondary) < 0.005);
    }
}

TEST_CASE("policy and model mismatches") {
    CHECK_THROWS_AS(run(kDefault3, kUnit, policy::Threshold{0.5}, config(2000)), std::invalid_argument);
    CHECK_THROWS_AS(run(kDefault2, kUnit, policy::ConsecutiveM{0}, config(2000)), std::invalid_argument);
    CHECK_THROWS_AS(run(kDefault2, kUnit, policy::Dp2{nullptr}, config(2000)), std::invalid_argument);

    DPConfig dp;
    dp.alpha = 0.9;
    dp.grid_n = 101;
    auto sol = std::make_shared<const Solution2>(value_iterate(kDefault2, kUnit, dp));
    CHECK_NOTHROW(run(kDefault2, kUnit, policy::Dp2{sol}, config(2000)));
    CHECK_THROWS_AS(run(kDefault2, kUnit.with_weight(0.6), policy::Dp2{sol}, config(2000)), std::invalid_argument);
    CHECK_THROWS_AS(run(kDefault3, kUnit, policy::Dp2{sol}, config(2000)), std::invalid_argument);

    SimConfig bad = config(2000);
    bad.warmup = 2000;
    CHECK_THROWS_AS(run(kDefault2, kUnit, policy::Greedy{}, bad), std::invalid_argument);
    bad = config(2000);
    bad.initial_state = ThreeState::Good;
    CHECK_THROWS_AS(run(kDefault2, kUnit, policy::Greedy{}, bad), std::invalid_argument);
}

TEST_CASE("sweeps") {
    SweepSettings s;
    s.sim = config(200'000, 5);
    s.dp.alpha = 0.99;
    s.dp.grid_n = 201;
    const std::vector<SweepPolicy> policies = {policy::Greedy{}, sweep_policy::Optimal{}, sweep_policy::Dp{}};
    const auto rows = run_sweep(kDefault2, policies, {0.4, 0.6}, s);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].policy == "greedy");
    CHECK(rows[1].policy == "optimal");
    CHECK(rows[2].policy == "dp");
    CHECK(rows[0].seed == rows[1].seed);
    CHECK(rows[0].seed != rows[3].seed);

    // Below the optimal threshold both greedy and optimal always transmit.
    CHECK(rows[1].regime->kind == Regime::Kind::AlwaysTransmit);
    CHECK(rows[1].metrics.weighted == doctest::Approx(0.6));
    CHECK(rows[0].metrics.weighted == doctest::Approx(0.6));
    // Greedy still always transmits at w = 0.6; optimal uses a finite burst.
    CHECK(rows[3].metrics.weighted == doctest::Approx(0.4));
    CHECK(rows[4].regime->kind == Regime::Kind::Finite);
    CHECK(rows[4].metrics.weighted > rows[3].metrics.weighted);

    // Same inputs, same rows.
    const auto again = run_sweep(kDefault2, policies, {0.4, 0.6}, s);
    for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].metrics == again[i].metrics);
}
