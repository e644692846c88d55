#include "cogarq/dp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>

namespace cogarq {

void DPConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
    if (grid_n < 2) throw std::invalid_argument("grid_n must be at least 2");
}

ConvergenceError::ConvergenceError(std::size_t iterations, double residual)
    : std::runtime_error("value iteration did not converge after " + std::to_string(iterations) +
                         " sweeps (residual " + std::to_string(residual) + ")"),
      iterations_(iterations),
      residual_(residual) {}

BeliefGrid::BeliefGrid(std::size_t n) {
    if (n < 2) throw std::invalid_argument("grid needs at least 2 points");
    points_.resize(n);
    for (std::size_t i = 0; i < n; ++i) points_[i] = static_cast<double>(i) / static_cast<double>(n - 1);
}

Stencil BeliefGrid::stencil(double p) const noexcept {
    const std::size_t last = size() - 1;
    const double x = std::clamp(p, 0.0, 1.0) * static_cast<double>(last);
    const auto i = std::min(static_cast<std::size_t>(x), last - 1);
    const double f = x - static_cast<double>(i);
    Stencil s;
    s.index = {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i + 1),
               static_cast<std::uint32_t>(i)};
    s.weight = {1.0 - f, f, 0.0};
    return s;
}

SimplexGrid::SimplexGrid(std::size_t n) : n_(n), row_start_(n) {
    if (n < 2) throw std::invalid_argument("grid needs at least 2 points per dimension");
    std::size_t offset = 0;
    for (std::size_t i = 0; i < n; ++i) {
        row_start_[i] = offset;
        offset += n - i;
    }
}

Belief3 SimplexGrid::node(std::size_t k) const {
    const auto row = std::upper_bound(row_start_.begin(), row_start_.end(), k) - row_start_.begin() - 1;
    const auto i = static_cast<std::size_t>(row);
    const std::size_t j = k - row_start_[i];
    const double h = spacing();
    // Nodes on the hypotenuse get q = 1 - p exactly.
    const double p = static_cast<double>(i) * h;
    const double q = (i + j == n_ - 1) ? 1.0 - p : static_cast<double>(j) * h;
    return Belief3(p, q);
}

Stencil SimplexGrid::stencil(Belief3 b) const noexcept {
    const std::size_t last = n_ - 1;
    const double scale = static_cast<double>(last);
    const double x = b.p() * scale;
    const double y = b.q() * scale;
    auto i = std::min(static_cast<std::size_t>(x), last - 1);
    auto j = std::min(static_cast<std::size_t>(y), last - 1);
    // Past the hypotenuse by rounding: shift the base node back inside.
    while (i + j > last - 1) {
        if (i > 0) --i; else --j;
    }
    const double fx = x - static_cast<double>(i);
    const double fy = y - static_cast<double>(j);
    Stencil s;
    if (fx + fy <= 1.0 || i + j + 2 > last) {
        s.index = {static_cast<std::uint32_t>(index(i, j)), static_cast<std::uint32_t>(index(i + 1, j)),
                   static_cast<std::uint32_t>(index(i, j + 1))};
        s.weight = {1.0 - fx - fy, fx, fy};
    } else {
        s.index = {static_cast<std::uint32_t>(index(i + 1, j + 1)),
                   static_cast<std::uint32_t>(index(i + 1, j)),
                   static_cast<std::uint32_t>(index(i, j + 1))};
        s.weight = {fx + fy - 1.0, 1.0 - fy, 1.0 - fx};
    }
    return s;
}

double value_bound(const RewardConfig& rc, double alpha, bool three_state) {
    const double listen = rc.w() * rc.r_p();
    const double transmit = (1.0 - rc.w()) * rc.r_s();
    const double best = three_state ? listen + transmit : std::max(listen, transmit);
    return best / (1.0 - alpha);
}

namespace {

Backup choose(double listen, double transmit) {
    if (transmit > listen) return {listen, transmit, transmit, Action::Transmit};
    return {listen, transmit, listen, Action::Listen};
}

// Backup expressions shared by the sweeps, the public backups and the
// exact recursion so that all three agree bit for bit on the same inputs.
Backup combine2(const RewardConfig& rc, double alpha, double p, double v_after_ack,
                double v_after_nack, double v_after_transmit) {
    const Belief2 b(p);
    const double listen = gain(rc, b, Action::Listen) +
                          alpha * ((1.0 - p) * v_after_ack + p * v_after_nack);
    const double transmit = gain(rc, b, Action::Transmit) + alpha * v_after_transmit;
    return choose(listen, transmit);
}

struct Branches3 {
    OutcomeProbs q;
    Belief3 listen_nack;
    std::optional<Belief3> listen_ack;
    Belief3 transmit_ack;
    std::optional<Belief3> transmit_nack;
};

Branches3 branches(const ThreeStateChannel& ch, Belief3 b) {
    const auto q = outcome_probs(b);
    Branches3 br{q, update(ch, b, Action::Listen, Feedback::Nack), std::nullopt,
                 update(ch, b, Action::Transmit, Feedback::Ack), std::nullopt};
    if (q.listen_ack > 0.0) br.listen_ack = update(ch, b, Action::Listen, Feedback::Ack);
    if (q.transmit_nack > 0.0) br.transmit_nack = update(ch, b, Action::Transmit, Feedback::Nack);
    return br;
}

Backup combine3(const RewardConfig& rc, double alpha, Belief3 b, const OutcomeProbs& q,
                double v_ln, double v_la, double v_ta, double v_tn) {
    double cont_listen = q.listen_nack * v_ln;
    if (q.listen_ack > 0.0) cont_listen += q.listen_ack * v_la;
    double cont_transmit = q.transmit_ack * v_ta;
    if (q.transmit_nack > 0.0) cont_transmit += q.transmit_nack * v_tn;
    return choose(gain(rc, b, Action::Listen) + alpha * cont_listen,
                  gain(rc, b, Action::Transmit) + alpha * cont_transmit);
}

// Per-node data that stays fixed across sweeps.
struct Node2 {
    double p;
    Stencil after_transmit;
};

struct Node3 {
    Belief3 b;
    OutcomeProbs q;
    Stencil listen_ack;
    Stencil transmit_nack;
};

template <class Table, class Sweep>
std::pair<std::size_t, std::vector<double>> iterate(Table& table, Sweep&& sweep, double tol,
                                                    std::size_t max_sweeps, bool require_tol) {
    std::vector<double> next(table.values.size());
    std::vector<double> residuals;
    std::size_t done = 0;
    while (done < max_sweeps) {
        const double r = sweep(table, next);
        table.values.swap(next);
        residuals.push_back(r);
        ++done;
        if (require_tol && r < tol) return {done, residuals};
    }
    if (require_tol) {
        throw ConvergenceError(done, residuals.empty() ? 0.0 : residuals.back());
    }
    return {done, residuals};
}

Solution2 solve2(const TwoStateChannel& ch, const RewardConfig& rc, double alpha,
                 std::size_t grid_n, std::size_t max_sweeps, double tol, bool require_tol) {
    ValueTable1D table{BeliefGrid(grid_n), {}, {}};
    const auto& grid = table.grid;
    const std::size_t n = grid.size();

    std::vector<Node2> nodes(n);
    table.values.resize(n);
    table.actions.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = grid.point(i);
        const Belief2 b(p);
        nodes[i] = {p, grid.stencil(update(ch, b, Action::Transmit, std::nullopt).p())};
        const auto first = choose(gain(rc, b, Action::Listen), gain(rc, b, Action::Transmit));
        table.values[i] = first.value;
        table.actions[i] = first.action;
    }
    const Stencil after_ack = grid.stencil(ch.p_ne());
    const Stencil after_nack = grid.stencil(ch.p_ee());

    auto sweep = [&](ValueTable1D& t, std::vector<double>& out) {
        const double v_ack = after_ack.apply(t.values);
        const double v_nack = after_nack.apply(t.values);
        double r = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto bk = combine2(rc, alpha, nodes[i].p, v_ack, v_nack,
                                     nodes[i].after_transmit.apply(t.values));
            out[i] = bk.value;
            t.actions[i] = bk.action;
            r = std::max(r, std::abs(bk.value - t.values[i]));
        }
        return r;
    };
    auto [iters, residuals] = iterate(table, sweep, tol, max_sweeps, require_tol);
    return {ch, rc, alpha, std::move(table), iters, std::move(residuals)};
}

Solution3 solve3(const ThreeStateChannel& ch, const RewardConfig& rc, double alpha,
                 std::size_t grid_n, std::size_t max_sweeps, double tol, bool require_tol) {
    ValueTable2D table{SimplexGrid(grid_n), {}, {}};
    const auto& grid = table.grid;
    const std::size_t n = grid.size();

    std::vector<Node3> nodes;
    nodes.reserve(n);
    table.values.resize(n);
    table.actions.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Belief3 b = grid.node(k);
        const auto br = branches(ch, b);
        // Zero-probability branches keep an all-zero stencil; combine3 skips them.
        nodes.push_back({b, br.q, br.listen_ack ? grid.stencil(*br.listen_ack) : Stencil{},
                         br.transmit_nack ? grid.stencil(*br.transmit_nack) : Stencil{}});
        const auto first = choose(gain(rc, b, Action::Listen), gain(rc, b, Action::Transmit));
        table.values[k] = first.value;
        table.actions[k] = first.action;
    }
    const Belief3 zero(0.0, 0.0);
    const Stencil listen_nack = grid.stencil(update(ch, zero, Action::Listen, Feedback::Nack));
    const Stencil transmit_ack = grid.stencil(update(ch, zero, Action::Transmit, Feedback::Ack));

    auto sweep = [&](ValueTable2D& t, std::vector<double>& out) {
        const double v_ln = listen_nack.apply(t.values);
        const double v_ta = transmit_ack.apply(t.values);
        double r = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const auto& nd = nodes[k];
            const auto bk = combine3(rc, alpha, nd.b, nd.q, v_ln, nd.listen_ack.apply(t.values), v_ta,
                                     nd.transmit_nack.apply(t.values));
            out[k] = bk.value;
            t.actions[k] = bk.action;
            r = std::max(r, std::abs(bk.value - t.values[k]));
        }
        return r;
    };
    auto [iters, residuals] = iterate(table, sweep, tol, max_sweeps, require_tol);
    return {ch, rc, alpha, std::move(table), iters, std::move(residuals)};
}

void require_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
}

}  // namespace

Backup bellman_backup(const TwoStateChannel& ch, const RewardConfig& rc, double alpha,
                      const ValueTable1D& v, Belief2 b) {
    return combine2(rc, alpha, b.p(), v.at(ch.p_ne()), v.at(ch.p_ee()),
                    v.at(update(ch, b, Action::Transmit, std::nullopt).p()));
}

Backup bellman_backup(const ThreeStateChannel& ch, const RewardConfig& rc, double alpha,
                      const ValueTable2D& v, Belief3 b) {
    const auto br = branches(ch, b);
    return combine3(rc, alpha, b, br.q, v.at(br.listen_nack), br.listen_ack ? v.at(*br.listen_ack) : 0.0,
                    v.at(br.transmit_ack), br.transmit_nack ? v.at(*br.transmit_nack) : 0.0);
}

Solution2 value_iterate(const TwoStateChannel& ch, const RewardConfig& rc, const DPConfig& cfg) {
    cfg.validate();
    return solve2(ch, rc, cfg.alpha, cfg.grid_n, cfg.max_iter, cfg.tol, true);
}

Solution3 value_iterate(const ThreeStateChannel& ch, const RewardConfig& rc, const DPConfig& cfg) {
    cfg.validate();
    return solve3(ch, rc, cfg.alpha, cfg.grid_n, cfg.max_iter, cfg.tol, true);
}

Solution2 value_sweeps(const TwoStateChannel& ch, const RewardConfig& rc, double alpha,
                       std::size_t grid_n, std::size_t sweeps) {
    require_alpha(alpha);
    return solve2(ch, rc, alpha, grid_n, sweeps, 0.0, false);
}

Solution3 value_sweeps(const ThreeStateChannel& ch, const RewardConfig& rc, double alpha,
                       std::size_t grid_n, std::size_t sweeps) {
    require_alpha(alpha);
    return solve3(ch, rc, alpha, grid_n, sweeps, 0.0, false);
}

namespace {

class Exact2 {
public:
    Exact2(const TwoStateChannel& ch, const RewardConfig& rc, double alpha)
        : ch_(ch), rc_(rc), alpha_(alpha) {}

    Backup backup(double p, unsigned k) {
        const Belief2 b(p);
        if (k == 1) return choose(gain(rc_, b, Action::Listen), gain(rc_, b, Action::Transmit));
        return combine2(rc_, alpha_, p, value(ch_.p_ne(), k - 1), value(ch_.p_ee(), k - 1),
                        value(update(ch_, b, Action::Transmit, std::nullopt).p(), k - 1));
    }

private:
    double value(double p, unsigned k) {
        const auto key = std::make_pair(k, p);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        const double v = backup(p, k).value;
        memo_.emplace(key, v);
        return v;
    }

    TwoStateChannel ch_;
    RewardConfig rc_;
    double alpha_;
    std::map<std::pair<unsigned, double>, double> memo_;
};

class Exact3 {
public:
    Exact3(const ThreeStateChannel& ch, const RewardConfig& rc, double alpha)
        : ch_(ch), rc_(rc), alpha_(alpha) {}

    Backup backup(Belief3 b, unsigned k) {
        if (k == 1) return choose(gain(rc_, b, Action::Listen), gain(rc_, b, Action::Transmit));
        const auto br = branches(ch_, b);
        return combine3(rc_, alpha_, b, br.q, value(br.listen_nack, k - 1),
                        br.listen_ack ? value(*br.listen_ack, k - 1) : 0.0,
                        value(br.transmit_ack, k - 1),
                        br.transmit_nack ? value(*br.transmit_nack, k - 1) : 0.0);
    }

private:
    double value(Belief3 b, unsigned k) {
        const auto key = std::make_tuple(k, b.p(), b.q());
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        const double v = backup(b, k).value;
        memo_.emplace(key, v);
        return v;
    }

    ThreeStateChannel ch_;
    RewardConfig rc_;
    double alpha_;
    std::map<std::tuple<unsigned, double, double>, double> memo_;
};

void require_horizon(unsigned k, unsigned max) {
    if (k < 1 || k > max) {
        throw std::invalid_argument("horizon K must lie in [1, " + std::to_string(max) + "]");
    }
}

}  // namespace

Backup exact_backup(const TwoStateChannel& ch, const RewardConfig& rc, double alpha, Belief2 b,
                    unsigned horizon) {
    require_alpha(alpha);
    require_horizon(horizon, kMaxExactHorizon2);
    return Exact2(ch, rc, alpha).backup(b.p(), horizon);
}

Backup exact_backup(const ThreeStateChannel& ch, const RewardConfig& rc, double alpha, Belief3 b,
                    unsigned horizon) {
    require_alpha(alpha);
    require_horizon(horizon, kMaxExactHorizon3);
    return Exact3(ch, rc, alpha).backup(b, horizon);
}

Action policy_at(const Solution2& s, Belief2 b) {
    return bellman_backup(s.channel, s.rewards, s.alpha, s.table, b).action;
}

Action policy_at(const Solution3& s, Belief3 b) {
    return bellman_backup(s.channel, s.rewards, s.alpha, s.table, b).action;
}

}  // namespace cogarq
