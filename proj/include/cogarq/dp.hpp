#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cogarq/belief.hpp"
#include "cogarq/channel.hpp"

namespace cogarq {

struct DPConfig {
    double alpha = 0.999;        // discount, in (0,1)
    double tol = 1e-9;           // sup-norm stopping threshold
    std::size_t max_iter = 1'000'000;
    std::size_t grid_n = 1001;   // points per belief dimension, endpoints included

    void validate() const;
};

/// Thrown when value iteration hits max_iter before the residual drops
/// below tol.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(std::size_t iterations, double residual);
    std::size_t iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    std::size_t iterations_;
    double residual_;
};

/// Linear-interpolation weights over at most three table entries.
struct Stencil {
    std::array<std::uint32_t, 3> index{};
    std::array<double, 3> weight{};

    double apply(const std::vector<double>& v) const noexcept {
        return weight[0] * v[index[0]] + weight[1] * v[index[1]] + weight[2] * v[index[2]];
    }
};

/// Uniform grid on [0,1] with both endpoints.
class BeliefGrid {
public:
    explicit BeliefGrid(std::size_t n);
    std::size_t size() const noexcept { return points_.size(); }
    double spacing() const noexcept { return 1.0 / static_cast<double>(size() - 1); }
    double point(std::size_t i) const noexcept { return points_[i]; }
    const std::vector<double>& points() const noexcept { return points_; }
    Stencil stencil(double p) const noexcept;

private:
    std::vector<double> points_;
};

/// Triangular grid over {(p,q) : p,q >= 0, p + q <= 1} with spacing
/// 1/(n-1); nodes (i, j) with i + j <= n - 1, stored row by row in i.
class SimplexGrid {
public:
    explicit SimplexGrid(std::size_t n);
    std::size_t n() const noexcept { return n_; }
    std::size_t size() const noexcept { return n_ * (n_ + 1) / 2; }
    double spacing() const noexcept { return 1.0 / static_cast<double>(n_ - 1); }
    std::size_t index(std::size_t i, std::size_t j) const noexcept {
        return row_start_[i] + j;
    }
    Belief3 node(std::size_t k) const;
    /// Barycentric weights on the grid triangle containing `b`.
    Stencil stencil(Belief3 b) const noexcept;

private:
    std::size_t n_;
    std::vector<std::size_t> row_start_;
};

struct ValueTable1D {
    BeliefGrid grid;
    std::vector<double> values;
    std::vector<Action> actions;

    double at(double p) const noexcept { return grid.stencil(p).apply(values); }
};

struct ValueTable2D {
    SimplexGrid grid;
    std::vector<double> values;
    std::vector<Action> actions;

    double at(Belief3 b) const noexcept { return grid.stencil(b).apply(values); }
};

/// Both branch values of a Bellman backup and the chosen action
/// (Transmit only when strictly better).
struct Backup {
    double listen;
    double transmit;
    double value;
    Action action;
};

Backup bellman_backup(const TwoStateChannel& ch, const RewardConfig& rc, double alpha,
                      const ValueTable1D& v, Belief2 b);
Backup bellman_backup(const ThreeStateChannel& ch, const RewardConfig& rc, double alpha,
                      const ValueTable2D& v, Belief3 b);

struct Solution2 {
    TwoStateChannel channel;
    RewardConfig rewards;
    double alpha;
    ValueTable1D table;
    std::size_t iterations;
    std::vector<double> residuals;  // sup-norm change of each sweep
};

struct Solution3 {
    ThreeStateChannel channel;
    RewardConfig rewards;
    double alpha;
    ValueTable2D table;
    std::size_t iterations;
    std::vector<double> residuals;
};

/// Jacobi value iteration from the one-step value until the sup-norm
/// change drops below cfg.tol. Throws ConvergenceError at cfg.max_iter.
Solution2 value_iterate(const TwoStateChannel& ch, const RewardConfig& rc, const DPConfig& cfg);
Solution3 value_iterate(const ThreeStateChannel& ch, const RewardConfig& rc, const DPConfig& cfg);

/// Exactly `sweeps` Jacobi sweeps from the one-step value, so the table
/// approximates the (sweeps + 1)-horizon value.
Solution2 value_sweeps(const TwoStateChannel& ch, const RewardConfig& rc, double alpha,
                       std::size_t grid_n, std::size_t sweeps);
Solution3 value_sweeps(const ThreeStateChannel& ch, const RewardConfig& rc, double alpha,
                       std::size_t grid_n, std::size_t sweeps);

inline constexpr unsigned kMaxExactHorizon2 = 20;
inline constexpr unsigned kMaxExactHorizon3 = 12;

/// Finite-horizon optimum by exact recursion on real-valued beliefs.
Backup exact_backup(const TwoStateChannel& ch, const RewardConfig& rc, double alpha, Belief2 b,
                    unsigned horizon);
Backup exact_backup(const ThreeStateChannel& ch, const RewardConfig& rc, double alpha, Belief3 b,
                    unsigned horizon);

inline double exact_value(const TwoStateChannel& ch, const RewardConfig& rc, double alpha,
                          Belief2 b, unsigned horizon) {
    return exact_backup(ch, rc, alpha, b, horizon).value;
}
inline double exact_value(const ThreeStateChannel& ch, const RewardConfig& rc, double alpha,
                          Belief3 b, unsigned horizon) {
    return exact_backup(ch, rc, alpha, b, horizon).value;
}

/// Action maximizing the Bellman backup at `b` against the converged table.
Action policy_at(const Solution2& s, Belief2 b);
Action policy_at(const Solution3& s, Belief3 b);

/// Upper bound on any discounted value: largest one-step gain / (1 - alpha).
double value_bound(const RewardConfig& rc, double alpha, bool three_state);

}  // namespace cogarq
