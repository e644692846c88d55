#include "cogarq/sim.hpp"

#include <cstdio>
#include <stdexcept>
#include <type_traits>

#include "cogarq/rng.hpp"

namespace cogarq {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string format_p_star(double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", p);
    return buf;
}

}  // namespace

std::string policy_name(const PolicySpec& p) {
    return std::visit(overloaded{
                          [](const policy::AlwaysListen&) -> std::string { return "listen"; },
                          [](const policy::AlwaysTransmit&) -> std::string { return "transmit"; },
                          [](const policy::Greedy&) -> std::string { return "greedy"; },
                          [](const policy::ConsecutiveM& c) { return "m:" + std::to_string(c.m); },
                          [](const policy::Threshold& t) { return "threshold:" + format_p_star(t.p_star); },
                          [](const policy::Dp2&) -> std::string { return "dp"; },
                          [](const policy::Dp3&) -> std::string { return "dp"; },
                      },
                      p);
}

std::string policy_name(const SweepPolicy& p) {
    return std::visit(overloaded{
                          [](const sweep_policy::Optimal&) -> std::string { return "optimal"; },
                          [](const sweep_policy::Dp&) -> std::string { return "dp"; },
                          [](const auto& other) { return policy_name(PolicySpec{other}); },
                      },
                      p);
}

void SimConfig::validate() const {
    if (!(slots > warmup)) throw std::invalid_argument("slots must exceed warmup");
}

SlotOutcome feedback(TwoState s, Action a) {
    const bool tx = a == Action::Transmit;
    if (s == TwoState::Erasure) return {Feedback::Nack, false, tx};
    if (tx) return {Feedback::Nack, false, true};
    return {Feedback::Ack, true, false};
}

SlotOutcome feedback(ThreeState s, Action a) {
    const bool tx = a == Action::Transmit;
    switch (s) {
        case ThreeState::Bad: return {Feedback::Nack, false, tx};
        case ThreeState::Good:
            if (tx) return {Feedback::Nack, false, true};
            return {Feedback::Ack, true, false};
        case ThreeState::VeryGood: return {Feedback::Ack, true, tx};
    }
    throw std::logic_error("unknown channel state");
}

namespace {

// Model-specific pieces of the slot loop.
struct TwoStateModel {
    using Channel = TwoStateChannel;
    using State = TwoState;
    using Belief = Belief2;

    static Belief initial_belief(const Channel& ch) { return Belief2(stationary(ch).erasure); }
    static State initial_state(const Channel& ch, const SimConfig& cfg, Xoshiro256& rng) {
        const double u = rng.uniform();
        if (const auto* s = std::get_if<TwoState>(&cfg.initial_state)) return *s;
        if (std::holds_alternative<ThreeState>(cfg.initial_state)) {
            throw std::invalid_argument("three-state initial state given for two-state model");
        }
        return sample_from(stationary(ch), u);
    }
    static Belief next_belief(const Channel& ch, Belief b, Action a, Feedback f) {
        return update(ch, b, a, a == Action::Listen ? std::optional<Feedback>(f) : std::nullopt);
    }
    static double p_of(Belief b) { return b.p(); }
    static double q_of(Belief) { return 0.0; }
};

struct ThreeStateModel {
    using Channel = ThreeStateChannel;
    using State = ThreeState;
    using Belief = Belief3;

    static Belief initial_belief(const Channel& ch) {
        const auto pi = stationary(ch);
        return Belief3(pi[1], pi[2]);
    }
    static State initial_state(const Channel& ch, const SimConfig& cfg, Xoshiro256& rng) {
        const double u = rng.uniform();
        if (const auto* s = std::get_if<ThreeState>(&cfg.initial_state)) return *s;
        if (std::holds_alternative<TwoState>(cfg.initial_state)) {
            throw std::invalid_argument("two-state initial state given for three-state model");
        }
        return sample_from(stationary(ch), u);
    }
    static Belief next_belief(const Channel& ch, Belief b, Action a, Feedback f) {
        return update(ch, b, a, f);
    }
    static double p_of(Belief b) { return b.p(); }
    static double q_of(Belief b) { return b.q(); }
};

// Turns a PolicySpec into per-slot decisions, holding any automaton state.
template <class Model>
class Decider {
public:
    using Belief = typename Model::Belief;

    Decider(const typename Model::Channel& ch, const RewardConfig& rc, const PolicySpec& spec)
        : rc_(rc), spec_(spec) {
        if (const auto* c = std::get_if<policy::ConsecutiveM>(&spec)) {
            if (c->m < 1) throw std::invalid_argument("consecutive policy needs m >= 1");
        }
        if (const auto* t = std::get_if<policy::Threshold>(&spec)) {
            if constexpr (!std::is_same_v<Model, TwoStateModel>) {
                throw std::invalid_argument("threshold policy is two-state only");
            }
            if (!(t->p_star >= 0.0 && t->p_star <= 1.0)) {
                throw std::invalid_argument("threshold p_star out of range [0,1]");
            }
        }
        if (const auto* d = std::get_if<policy::Dp2>(&spec)) {
            if constexpr (!std::is_same_v<Model, TwoStateModel>) {
                throw std::invalid_argument("two-state DP table used with three-state model");
            } else {
                check_solution(d->solution.get(), ch);
            }
        }
        if (const auto* d = std::get_if<policy::Dp3>(&spec)) {
            if constexpr (!std::is_same_v<Model, ThreeStateModel>) {
                throw std::invalid_argument("three-state DP table used with two-state model");
            } else {
                check_solution(d->solution.get(), ch);
            }
        }
    }

    Action decide(Belief b) const {
        return std::visit(
            overloaded{
                [](const policy::AlwaysListen&) { return Action::Listen; },
                [](const policy::AlwaysTransmit&) { return Action::Transmit; },
                [&](const policy::Greedy&) {
                    return gain(rc_, b, Action::Transmit) > gain(rc_, b, Action::Listen)
                               ? Action::Transmit
                               : Action::Listen;
                },
                [&](const policy::ConsecutiveM&) {
                    return burst_left_ > 0 ? Action::Transmit : Action::Listen;
                },
                [&](const policy::Threshold& t) {
                    return Model::p_of(b) >= t.p_star ? Action::Transmit : Action::Listen;
                },
                [&](const policy::Dp2& d) {
                    if constexpr (std::is_same_v<Model, TwoStateModel>) return policy_at(*d.solution, b);
                    return Action::Listen;
                },
                [&](const policy::Dp3& d) {
                    if constexpr (std::is_same_v<Model, ThreeStateModel>) return policy_at(*d.solution, b);
                    return Action::Listen;
                },
            },
            spec_);
    }

    void observe(Action a, Feedback f) {
        const auto* c = std::get_if<policy::ConsecutiveM>(&spec_);
        if (!c) return;
        if (a == Action::Transmit) {
            --burst_left_;
        } else if (f == Feedback::Nack) {
            burst_left_ = c->m;
        }
    }

private:
    template <class Solution>
    void check_solution(const Solution* s, const typename Model::Channel& ch) const {
        if (!s) throw std::invalid_argument("DP policy without a solved table");
        if (!(s->channel == ch) || !(s->rewards == rc_)) {
            throw std::invalid_argument("DP table was solved for a different channel or reward");
        }
    }

    RewardConfig rc_;
    const PolicySpec& spec_;
    unsigned burst_left_ = 0;
};

template <class Model>
Trace simulate(const typename Model::Channel& ch, const RewardConfig& rc, const PolicySpec& spec,
               const SimConfig& cfg, bool keep_trace) {
    cfg.validate();
    Decider<Model> decider(ch, rc, spec);
    Xoshiro256 rng(cfg.seed);

    auto state = Model::initial_state(ch, cfg, rng);
    auto belief = Model::initial_belief(ch);

    Trace out;
    if (keep_trace) out.slots.reserve(cfg.slots);
    auto& m = out.metrics;
    for (std::uint64_t t = 0; t < cfg.slots; ++t) {
        const Action a = decider.decide(belief);
        const SlotOutcome o = feedback(state, a);
        if (keep_trace) {
            out.slots.push_back({static_cast<std::uint8_t>(state), a, o.feedback, Model::p_of(belief),
                                 Model::q_of(belief)});
        }
        if (t >= cfg.warmup) {
            m.primary_successes += o.primary_success ? 1 : 0;
            m.secondary_packets += o.secondary_success ? 1 : 0;
        }
        belief = Model::next_belief(ch, belief, a, o.feedback);
        decider.observe(a, o.feedback);
        state = sample_next(ch, state, rng.uniform());
    }

    m.slots_counted = cfg.slots - cfg.warmup;
    const double n = static_cast<double>(m.slots_counted);
    m.r_p_hat = rc.r_p() * static_cast<double>(m.primary_successes) / n;
    m.r_s_hat = rc.r_s() * static_cast<double>(m.secondary_packets) / n;
    m.weighted = rc.w() * m.r_p_hat + (1.0 - rc.w()) * m.r_s_hat;
    return out;
}

Trace dispatch(const ChannelModel& model, const RewardConfig& rc, const PolicySpec& policy,
               const SimConfig& cfg, bool keep_trace) {
    return std::visit(
        overloaded{
            [&](const TwoStateChannel& ch) {
                return simulate<TwoStateModel>(ch, rc, policy, cfg, keep_trace);
            },
            [&](const ThreeStateChannel& ch) {
                return simulate<ThreeStateModel>(ch, rc, policy, cfg, keep_trace);
            },
        },
        model);
}

}  // namespace

Metrics run(const ChannelModel& model, const RewardConfig& rc, const PolicySpec& policy,
            const SimConfig& cfg) {
    return dispatch(model, rc, policy, cfg, false).metrics;
}

Trace run_traced(const ChannelModel& model, const RewardConfig& rc, const PolicySpec& policy,
                 const SimConfig& cfg) {
    return dispatch(model, rc, policy, cfg, true);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t s = base ^ (index * 0xD1B54A32D192ED03ULL);
    return splitmix64(s);
}

PolicySpec resolve_policy(const ChannelModel& model, const RewardConfig& rc, const SweepPolicy& sp,
                          const SweepSettings& settings, std::optional<PolicySpec>& dp_cache,
                          std::optional<Regime>* regime) {
    auto dp = [&]() -> PolicySpec {
        if (!dp_cache) {
            if (const auto* ch2 = std::get_if<TwoStateChannel>(&model)) {
                dp_cache = policy::Dp2{std::make_shared<const Solution2>(value_iterate(*ch2, rc, settings.dp))};
            } else {
                const auto& ch3 = std::get<ThreeStateChannel>(model);
                dp_cache = policy::Dp3{std::make_shared<const Solution3>(value_iterate(ch3, rc, settings.dp))};
            }
        }
        return *dp_cache;
    };
    return std::visit(overloaded{
                          [&](const sweep_policy::Dp&) { return dp(); },
                          [&](const sweep_policy::Optimal&) -> PolicySpec {
                              const auto* ch2 = std::get_if<TwoStateChannel>(&model);
                              if (!ch2) return dp();
                              const Regime r = classify_regime(*ch2, rc, settings.m_max);
                              if (regime) *regime = r;
                              switch (r.kind) {
                                  case Regime::Kind::AlwaysListen: return policy::AlwaysListen{};
                                  case Regime::Kind::AlwaysTransmit: return policy::AlwaysTransmit{};
                                  case Regime::Kind::Finite: return policy::ConsecutiveM{r.m_star};
                              }
                              throw std::logic_error("unknown regime");
                          },
                          [](const auto& plain) -> PolicySpec { return plain; },
                      },
                      sp);
}

std::vector<SweepRow> run_sweep(const ChannelModel& model, const std::vector<SweepPolicy>& policies,
                                const std::vector<double>& w_values, const SweepSettings& settings) {
    std::vector<SweepRow> rows;
    rows.reserve(policies.size() * w_values.size());
    for (std::size_t wi = 0; wi < w_values.size(); ++wi) {
        const RewardConfig rc(w_values[wi], settings.r_p, settings.r_s);
        SimConfig cfg = settings.sim;
        cfg.seed = derive_seed(settings.sim.seed, wi);
        std::optional<PolicySpec> dp_cache;
        for (const auto& sp : policies) {
            SweepRow row{rc.w(), policy_name(sp), {}, cfg.seed, std::nullopt};
            const PolicySpec p = resolve_policy(model, rc, sp, settings, dp_cache, &row.regime);
            row.metrics = run(model, rc, p, cfg);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

}  // namespace cogarq
