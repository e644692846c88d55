#include "cogarq/commands.hpp"

#include <ostream>
#include <sstream>

#include "cogarq/closed_form.hpp"
#include "cogarq/csv.hpp"
#include "cogarq/dp.hpp"
#include "cogarq/sim.hpp"

namespace cogarq::cli {

namespace {

TwoStateChannel two_state_only(const ChannelModel& model, std::string_view command) {
    const auto* ch = std::get_if<TwoStateChannel>(&model);
    if (!ch) throw std::invalid_argument(std::string(command) + " requires model = two");
    return *ch;
}

SweepSettings settings_of(const ExperimentConfig& cfg) {
    return {cfg.r_p, cfg.r_s, cfg.sim(), cfg.dp(), cfg.m_max};
}

csv::SweepRecord analytic_record(double w, std::string policy, const RatePoint& r, std::string m_opt) {
    return {w, std::move(policy), "analytic", r.primary, r.secondary,
            w * r.primary + (1.0 - w) * r.secondary, std::move(m_opt), std::nullopt, std::nullopt};
}

csv::SweepRecord simulated_record(const SweepRow& row, std::uint64_t slots) {
    return {row.w,
            row.policy,
            "simulated",
            row.metrics.r_p_hat,
            row.metrics.r_s_hat,
            row.metrics.weighted,
            row.regime ? m_opt_text(*row.regime) : std::string(),
            slots,
            row.seed};
}

// Long-run rates known in closed form for this policy, if any.
std::optional<csv::SweepRecord> analytic_for(const ChannelModel& model, const RewardConfig& rc,
                                             const SweepPolicy& sp, unsigned m_max) {
    const std::string name = policy_name(sp);
    if (const auto* ch = std::get_if<TwoStateChannel>(&model)) {
        if (std::holds_alternative<policy::AlwaysListen>(sp)) {
            return analytic_record(rc.w(), name, regime_rates(*ch, rc, {Regime::Kind::AlwaysListen}), "");
        }
        if (std::holds_alternative<policy::AlwaysTransmit>(sp)) {
            return analytic_record(rc.w(), name, regime_rates(*ch, rc, {Regime::Kind::AlwaysTransmit}), "");
        }
        if (const auto* c = std::get_if<policy::ConsecutiveM>(&sp)) {
            return analytic_record(rc.w(), name, closed_form_rates(*ch, rc, c->m), "");
        }
        if (std::holds_alternative<sweep_policy::Optimal>(sp)) {
            const Regime r = classify_regime(*ch, rc, m_max);
            return analytic_record(rc.w(), name, regime_rates(*ch, rc, r), m_opt_text(r));
        }
        return std::nullopt;
    }
    const auto pi = stationary(std::get<ThreeStateChannel>(model));
    if (std::holds_alternative<policy::AlwaysListen>(sp)) {
        return analytic_record(rc.w(), name, {rc.r_p() * (pi[1] + pi[2]), 0.0, "listen"}, "");
    }
    if (std::holds_alternative<policy::AlwaysTransmit>(sp)) {
        return analytic_record(rc.w(), name, {rc.r_p() * pi[2], rc.r_s(), "transmit"}, "");
    }
    return std::nullopt;
}

std::string fmt(double v) { return csv::format_double(v); }

}  // namespace

std::string m_opt_text(const Regime& r) {
    switch (r.kind) {
        case Regime::Kind::AlwaysListen: return "0";
        case Regime::Kind::AlwaysTransmit: return "inf";
        case Regime::Kind::Finite: return std::to_string(r.m_star);
    }
    return "";
}

std::string cmd_closed_form(const ExperimentConfig& cfg, std::ostream& out) {
    const auto ch = two_state_only(cfg.channel(), "closed-form");
    std::vector<csv::SweepRecord> rows;
    for (double w : cfg.weights()) {
        rows.push_back(analytic_record(w, "m:" + std::to_string(cfg.m),
                                       closed_form_rates(ch, cfg.rewards(w), cfg.m), ""));
    }
    csv::write_sweep(out, rows);
    const auto ss = scheme_steady_state(ch, cfg.m);
    const auto& last = rows.back();
    return "closed-form m=" + std::to_string(cfg.m) + ": T=" + fmt(erasure_after_burst(ch, cfg.m)) +
           " P_N=" + fmt(ss.listen_non_erasure) + " P_E=P_S=" + fmt(ss.burst) + " R_p=" + fmt(last.r_p) +
           " R_s=" + fmt(last.r_s);
}

std::string cmd_optimal_m(const ExperimentConfig& cfg, std::ostream& out) {
    const auto ch = two_state_only(cfg.channel(), "optimal-m");
    std::vector<csv::SweepRecord> rows;
    std::string last_regime;
    for (double w : cfg.weights()) {
        const auto rc = cfg.rewards(w);
        const Regime r = classify_regime(ch, rc, cfg.m_max);
        rows.push_back(analytic_record(w, "optimal", regime_rates(ch, rc, r), m_opt_text(r)));
        last_regime = to_string(r);
    }
    csv::write_sweep(out, rows);
    return "optimal-m: " + std::to_string(rows.size()) + " weight(s), last regime " + last_regime;
}

std::string cmd_rate_region(const ExperimentConfig& cfg, std::ostream& out) {
    const auto ch = two_state_only(cfg.channel(), "rate-region");
    const auto pts = rate_region(ch, cfg.rewards(), cfg.m_max);
    std::vector<csv::RegionRecord> rows;
    std::size_t hull = 0;
    for (const auto& p : pts) {
        rows.push_back({p.rates.label, p.rates.primary, p.rates.secondary, p.on_hull});
        hull += p.on_hull ? 1 : 0;
    }
    csv::write_rate_region(out, rows);
    return "rate-region: " + std::to_string(rows.size()) + " points, " + std::to_string(hull) + " on hull";
}

std::string cmd_solve(const ExperimentConfig& cfg, std::ostream& out) {
    const auto model = cfg.channel();
    const auto rc = cfg.rewards();
    std::vector<csv::ValueRecord> rows;
    std::size_t iterations = 0;
    double residual = 0.0;
    if (const auto* ch2 = std::get_if<TwoStateChannel>(&model)) {
        const auto s = value_iterate(*ch2, rc, cfg.dp());
        for (std::size_t i = 0; i < s.table.grid.size(); ++i) {
            rows.push_back({s.table.grid.point(i), std::nullopt, s.table.values[i],
                            std::string(to_string(s.table.actions[i]))});
        }
        iterations = s.iterations;
        residual = s.residuals.back();
    } else {
        const auto s = value_iterate(std::get<ThreeStateChannel>(model), rc, cfg.dp());
        for (std::size_t k = 0; k < s.table.grid.size(); ++k) {
            const auto b = s.table.grid.node(k);
            rows.push_back({b.p(), b.q(), s.table.values[k], std::string(to_string(s.table.actions[k]))});
        }
        iterations = s.iterations;
        residual = s.residuals.back();
    }
    csv::write_values(out, rows);
    return "solve: converged after " + std::to_string(iterations) + " sweeps, residual " + fmt(residual) +
           ", " + std::to_string(rows.size()) + " nodes";
}

std::string cmd_simulate(const ExperimentConfig& cfg, std::ostream& out) {
    const auto model = cfg.channel();
    const auto rc = cfg.rewards();
    const auto settings = settings_of(cfg);
    std::optional<PolicySpec> dp_cache;
    std::vector<csv::SweepRecord> rows;
    std::ostringstream summary;
    summary << "simulate w=" << fmt(rc.w()) << ":";
    for (const auto& sp : cfg.policies) {
        SweepRow row{rc.w(), policy_name(sp), {}, cfg.seed, std::nullopt};
        const auto p = resolve_policy(model, rc, sp, settings, dp_cache, &row.regime);
        row.metrics = run(model, rc, p, settings.sim);
        rows.push_back(simulated_record(row, cfg.slots));
        summary << ' ' << row.policy << '=' << fmt(row.metrics.weighted);
    }
    csv::write_sweep(out, rows);
    return summary.str();
}

std::string cmd_sweep(const ExperimentConfig& cfg, std::ostream& out) {
    const auto model = cfg.channel();
    const auto weights = cfg.weights();
    const auto sim_rows = run_sweep(model, cfg.policies, weights, settings_of(cfg));

    std::vector<csv::SweepRecord> rows;
    for (std::size_t wi = 0; wi < weights.size(); ++wi) {
        const auto rc = cfg.rewards(weights[wi]);
        for (std::size_t pi = 0; pi < cfg.policies.size(); ++pi) {
            if (auto a = analytic_for(model, rc, cfg.policies[pi], cfg.m_max)) rows.push_back(std::move(*a));
            rows.push_back(simulated_record(sim_rows[wi * cfg.policies.size() + pi], cfg.slots));
        }
    }
    csv::write_sweep(out, rows);
    return "sweep: " + std::to_string(weights.size()) + " weights x " + std::to_string(cfg.policies.size()) +
           " policies, " + std::to_string(rows.size()) + " rows";
}

std::string cmd_oracle(const ExperimentConfig& cfg, std::ostream& out) {
    const auto model = cfg.channel();
    const auto rc = cfg.rewards();
    std::vector<csv::ValueRecord> rows;
    if (const auto* ch2 = std::get_if<TwoStateChannel>(&model)) {
        const BeliefGrid grid(cfg.oracle_points);
        for (double p : grid.points()) {
            const auto bk = exact_backup(*ch2, rc, cfg.alpha, Belief2(p), cfg.horizon);
            rows.push_back({p, std::nullopt, bk.value, std::string(to_string(bk.action))});
        }
    } else {
        const SimplexGrid grid(cfg.oracle_points);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const auto b = grid.node(k);
            const auto bk = exact_backup(std::get<ThreeStateChannel>(model), rc, cfg.alpha, b, cfg.horizon);
            rows.push_back({b.p(), b.q(), bk.value, std::string(to_string(bk.action))});
        }
    }
    csv::write_values(out, rows);
    return "oracle: horizon " + std::to_string(cfg.horizon) + ", " + std::to_string(rows.size()) + " beliefs";
}

const std::vector<CommandInfo>& commands() {
    static const std::vector<CommandInfo> list = {
        {"closed-form", "closed-form rates of the burst-m scheme (per w)", cmd_closed_form},
        {"optimal-m", "optimal regime and burst length per w", cmd_optimal_m},
        {"rate-region", "primary/secondary rate region with TDM hull", cmd_rate_region},
        {"solve", "value iteration; dumps the value table and policy", cmd_solve},
        {"simulate", "Monte Carlo run of each policy at one w", cmd_simulate},
        {"sweep", "analytic and simulated throughput over a w range", cmd_sweep},
        {"oracle", "exact finite-horizon values on a belief grid", cmd_oracle},
    };
    return list;
}

std::optional<CommandInfo> find_command(std::string_view name) {
    for (const auto& c : commands()) {
        if (c.name == name) return c;
    }
    return std::nullopt;
}

}  // namespace cogarq::cli
