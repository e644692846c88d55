#include <cmath>
#include <random>
#include <stdexcept>

#include "cogarq/channel.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cogarq;

TEST_CASE("two-state channel validates its parameters") {
    CHECK_NOTHROW(TwoStateChannel(0.99, 0.01));
    CHECK_NOTHROW(TwoStateChannel(0.3, 0.3));
    CHECK_THROWS_AS(TwoStateChannel(1.2, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(TwoStateChannel(0.5, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(TwoStateChannel(0.2, 0.4), std::invalid_argument);

    const TwoStateChannel ch(0.9, 0.3);
    CHECK(ch.p_ee() + ch.p_en() == 1.0);
    CHECK(ch.p_ne() + ch.p_nn() == 1.0);
}

TEST_CASE("three-state channel rejects bad rows") {
    CHECK_NOTHROW(ThreeStateChannel({{{0.9, 0.05, 0.05}, {0.05, 0.9, 0.05}, {0.05, 0.05, 0.9}}}));
    CHECK_THROWS_AS(ThreeStateChannel({{{0.9, 0.05, 0.06}, {0.05, 0.9, 0.05}, {0.05, 0.05, 0.9}}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(ThreeStateChannel({{{1.1, -0.05, -0.05}, {0.05, 0.9, 0.05}, {0.05, 0.05, 0.9}}}),
                    std::invalid_argument);
}

TEST_CASE("two-state stationary distribution") {
    auto s = stationary(TwoStateChannel(0.99, 0.01));
    CHECK(s.erasure == doctest::Approx(0.5).epsilon(1e-15));
    s = stationary(TwoStateChannel(0.3, 0.3));
    CHECK(s.erasure == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(s.non_erasure == doctest::Approx(0.7).epsilon(1e-15));

    s = stationary(TwoStateChannel(0.9, 0.3));
    const auto pi = oracle::stationary(oracle::two_state_matrix(0.9, 0.3));
    CHECK(std::abs(s.erasure - pi(0)) < 1e-14);
    CHECK(std::abs(s.erasure - 0.75) < 1e-14);
    CHECK(s.erasure + s.non_erasure == 1.0);

    CHECK_THROWS_WITH_AS(stationary(TwoStateChannel(1.0, 0.0)), "no unique stationary distribution",
                         std::domain_error);
}

TEST_CASE("k-step erasure matches matrix powers") {
    const TwoStateChannel ch(0.99, 0.01);
    CHECK(k_step_erasure(ch, 0.6, 0) == 0.6);
    CHECK(k_step_erasure(ch, 1.0, 2) == doctest::Approx(oracle::k_step_erasure(0.99, 0.01, 1.0, 2)));
    CHECK(std::abs(k_step_erasure(ch, 1.0, 2) - 0.9802) < 1e-12);
    for (unsigned k : {1u, 5u, 77u}) CHECK(std::abs(k_step_erasure(ch, 0.5, k) - 0.5) < 1e-15);

    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        double a = u(gen), b = u(gen);
        if (a < b) std::swap(a, b);
        if (a == b) continue;
        const TwoStateChannel rc(a, b);
        const double p0 = u(gen);
        const double pe = stationary(rc).erasure;
        double prev = std::abs(p0 - pe);
        for (unsigned k = 0; k <= 100; ++k) {
            const double v = k_step_erasure(rc, p0, k);
            CHECK(std::abs(v - oracle::k_step_erasure(a, b, p0, k)) < 1e-12);
            const double dist = std::abs(v - pe);
            CHECK(dist <= prev + 1e-15);
            prev = dist;
        }
    }
}

TEST_CASE("three-state stationary distribution") {
    const ThreeStateChannel symmetric({{{0.9, 0.05, 0.05}, {0.05, 0.9, 0.05}, {0.05, 0.05, 0.9}}});
    for (double v : stationary(symmetric)) CHECK(std::abs(v - 1.0 / 3.0) < 1e-15);

    const ThreeStateChannel iid({{{0.2, 0.3, 0.5}, {0.2, 0.3, 0.5}, {0.2, 0.3, 0.5}}});
    const auto pi = stationary(iid);
    CHECK(std::abs(pi[0] - 0.2) < 1e-15);
    CHECK(std::abs(pi[1] - 0.3) < 1e-15);
    CHECK(std::abs(pi[2] - 0.5) < 1e-15);

    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix3 m{};
        Eigen::MatrixXd e(3, 3);
        for (int i = 0; i < 3; ++i) {
            double s = 0.0;
            for (int j = 0; j < 3; ++j) s += (m[i][j] = u(gen));
            for (int j = 0; j < 3; ++j) e(i, j) = (m[i][j] /= s);
        }
        const ThreeStateChannel ch(m);
        const auto got = stationary(ch);
        const auto ref = oracle::power_iteration(e, 1000);
        double sum = 0.0;
        for (int i = 0; i < 3; ++i) {
            CHECK(std::abs(got[i] - ref(i)) < 1e-12);
            sum += got[i];
        }
        CHECK(std::abs(sum - 1.0) < 1e-12);
    }

    const ThreeStateChannel two_classes({{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.3, 0.3, 0.4}}});
    CHECK_THROWS_WITH_AS(stationary(two_classes), "stationary distribution not unique", std::domain_error);
}

TEST_CASE("sampling partitions the unit interval in state order") {
    const TwoStateChannel ch(0.99, 0.01);
    CHECK(sample_next(ch, TwoState::Erasure, 0.5) == TwoState::Erasure);
    CHECK(sample_next(ch, TwoState::Erasure, 0.995) == TwoState::NonErasure);
    CHECK(sample_next(ch, TwoState::NonErasure, 0.005) == TwoState::Erasure);
    CHECK(sample_next(ch, TwoState::NonErasure, 0.5) == TwoState::NonErasure);
    for (int i = 0; i < 5; ++i) CHECK(sample_next(ch, TwoState::Erasure, 0.98999) == TwoState::Erasure);

    const ThreeStateChannel three({{{0.2, 0.3, 0.5}, {0.1, 0.1, 0.8}, {0.6, 0.2, 0.2}}});
    CHECK(sample_next(three, ThreeState::Bad, 0.19) == ThreeState::Bad);
    CHECK(sample_next(three, ThreeState::Bad, 0.2) == ThreeState::Good);
    CHECK(sample_next(three, ThreeState::Bad, 0.49) == ThreeState::Good);
    CHECK(sample_next(three, ThreeState::Bad, 0.51) == ThreeState::VeryGood);
    CHECK(sample_next(three, ThreeState::VeryGood, 0.7) == ThreeState::Good);

    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int draws = 1'000'000;
    int stay = 0;
    for (int i = 0; i < draws; ++i) stay += sample_next(ch, TwoState::Erasure, u(gen)) == TwoState::Erasure;
    const double freq = static_cast<double>(stay) / draws;
    CHECK(std::abs(freq - 0.99) <= 3.0 * std::sqrt(0.99 * 0.01 / draws));
}
