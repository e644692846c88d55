#include "cogarq/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cogarq {

namespace {

void require_probability(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument(std::string("probability out of range: ") + name + " = " +
                                    std::to_string(v));
    }
}

}  // namespace

std::string_view to_string(TwoState s) {
    return s == TwoState::Erasure ? "E" : "N";
}

std::string_view to_string(ThreeState s) {
    switch (s) {
        case ThreeState::Bad: return "B";
        case ThreeState::Good: return "G";
        case ThreeState::VeryGood: return "Vg";
    }
    return "?";
}

TwoStateChannel::TwoStateChannel(double p_ee, double p_ne) : p_ee_(p_ee), p_ne_(p_ne) {
    require_probability(p_ee, "p_ee");
    require_probability(p_ne, "p_ne");
    if (p_ne > p_ee) {
        throw std::invalid_argument("negatively correlated channel not supported: p_ne > p_ee");
    }
}

ThreeStateChannel::ThreeStateChannel(const Matrix3& transition) : p_(transition) {
    static constexpr const char* kRowNames[3] = {"B", "G", "Vg"};
    for (std::size_t i = 0; i < 3; ++i) {
        double sum = 0.0;
        for (double v : p_[i]) {
            require_probability(v, kRowNames[i]);
            sum += v;
        }
        if (std::abs(sum - 1.0) > kProbabilityTolerance) {
            throw std::invalid_argument(std::string("transition row ") + kRowNames[i] +
                                        " does not sum to 1");
        }
    }
}

TwoStateDistribution stationary(const TwoStateChannel& ch) {
    const double out = ch.p_ne() + ch.p_en();
    if (out <= 0.0) {
        throw std::domain_error("no unique stationary distribution");
    }
    const double pe = ch.p_ne() / out;
    return {pe, 1.0 - pe};
}

std::array<double, 3> stationary(const ThreeStateChannel& ch) {
    // Rows 0,1 of (P^T - I) pi = 0, row 2 replaced by sum(pi) = 1.
    std::array<std::array<double, 4>, 3> a{};
    const auto& p = ch.matrix();
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 3; ++j) a[i][j] = p[j][i] - (i == j ? 1.0 : 0.0);
        a[i][3] = 0.0;
    }
    a[2] = {1.0, 1.0, 1.0, 1.0};

    for (std::size_t col = 0; col < 3; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < 3; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (std::abs(a[pivot][col]) < 1e-12) {
            throw std::domain_error("stationary distribution not unique");
        }
        std::swap(a[col], a[pivot]);
        for (std::size_t r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
        }
    }
    std::array<double, 3> pi{};
    double sum = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        pi[i] = std::max(0.0, a[i][3] / a[i][i]);
        sum += pi[i];
    }
    for (double& v : pi) v /= sum;
    return pi;
}

double k_step_erasure(const TwoStateChannel& ch, double p0, unsigned k) {
    if (!(p0 >= 0.0 && p0 <= 1.0)) {
        throw std::invalid_argument("initial erasure probability out of range");
    }
    if (k == 0) return p0;
    const double d = ch.memory();
    if (d == 1.0) return p0;  // both states absorbing
    const double dk = std::pow(d, static_cast<double>(k));
    return dk * p0 + (1.0 - dk) * stationary(ch).erasure;
}

TwoState sample_next(const TwoStateChannel& ch, TwoState s, double u) {
    return u < ch.to_erasure(s) ? TwoState::Erasure : TwoState::NonErasure;
}

ThreeState sample_next(const ThreeStateChannel& ch, ThreeState s, double u) {
    const auto& row = ch.row(s);
    if (u < row[0]) return ThreeState::Bad;
    if (u < row[0] + row[1]) return ThreeState::Good;
    return ThreeState::VeryGood;
}

TwoState sample_from(const TwoStateDistribution& dist, double u) {
    return u < dist.erasure ? TwoState::Erasure : TwoState::NonErasure;
}

ThreeState sample_from(const std::array<double, 3>& dist, double u) {
    if (u < dist[0]) return ThreeState::Bad;
    if (u < dist[0] + dist[1]) return ThreeState::Good;
    return ThreeState::VeryGood;
}

}  // namespace cogarq
