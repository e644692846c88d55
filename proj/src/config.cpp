#include "cogarq/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cogarq {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

[[noreturn]] void fail(std::string_view key, std::string_view what) {
    throw ConfigError(std::string(key) + ": " + std::string(what));
}

double parse_real(std::string_view key, std::string_view text) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
        fail(key, "expected a real number, got '" + std::string(text) + "'");
    }
    return v;
}

double parse_probability(std::string_view key, std::string_view text) {
    const double v = parse_real(key, text);
    if (v < 0.0 || v > 1.0) fail(key, "probability out of range [0,1]: " + std::string(text));
    return v;
}

template <class Int>
Int parse_count(std::string_view key, std::string_view text) {
    Int v{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        fail(key, "expected a non-negative integer, got '" + std::string(text) + "'");
    }
    return v;
}

std::array<double, 3> parse_row(std::string_view key, std::string_view text) {
    const auto parts = split(text, ',');
    if (parts.size() != 3) fail(key, "expected three comma-separated probabilities");
    return {parse_probability(key, parts[0]), parse_probability(key, parts[1]),
            parse_probability(key, parts[2])};
}

WeightRange& range(ExperimentConfig& cfg) {
    if (!cfg.w_range) cfg.w_range = WeightRange{0.0, 1.0, 0.05};
    return *cfg.w_range;
}

}  // namespace

std::vector<double> WeightRange::values() const {
    std::vector<double> out;
    const double slack = step * 1e-9;
    for (std::size_t i = 0;; ++i) {
        double w = start + static_cast<double>(i) * step;
        if (w > end + slack) break;
        // Snap grid points to 12 decimals so 0.1 * 3 prints as 0.3.
        w = std::round(w * 1e12) / 1e12;
        out.push_back(std::min(w, 1.0));
    }
    return out;
}

ChannelModel ExperimentConfig::channel() const {
    if (model == ModelKind::TwoState) return TwoStateChannel(p_ee, p_ne);
    return ThreeStateChannel(matrix);
}

DPConfig ExperimentConfig::dp() const {
    DPConfig c;
    c.alpha = alpha;
    c.tol = tol;
    c.max_iter = max_iter;
    c.grid_n = grid_n.value_or(model == ModelKind::TwoState ? 1001 : 201);
    return c;
}

SimConfig ExperimentConfig::sim() const {
    SimConfig c;
    c.slots = slots;
    c.warmup = warmup;
    c.seed = seed;
    return c;
}

std::vector<double> ExperimentConfig::weights() const {
    if (w_range) return w_range->values();
    return {w};
}

void ExperimentConfig::validate() const {
    auto wrap = [](std::string_view key, auto&& check) {
        try {
            check();
        } catch (const std::invalid_argument& e) {
            fail(key, e.what());
        }
    };
    if (model == ModelKind::TwoState) {
        wrap("p_ee/p_ne", [&] { (void)TwoStateChannel(p_ee, p_ne); });
    } else {
        wrap("matrix", [&] { (void)ThreeStateChannel(matrix); });
    }
    wrap("w/r_p/r_s", [&] { (void)rewards(); });
    if (w_range) {
        if (!(w_range->step > 0.0)) fail("w_step", "must be positive");
        if (w_range->start < 0.0 || w_range->end > 1.0 || w_range->start > w_range->end) {
            fail("w_start/w_end", "need 0 <= w_start <= w_end <= 1");
        }
    }
    wrap("alpha/tol/max_iter/grid_n", [&] { dp().validate(); });
    wrap("slots/warmup", [&] { sim().validate(); });
    if (m < 1) fail("m", "must be at least 1");
    if (m_max < 1) fail("m_max", "must be at least 1");
    if (policies.empty()) fail("policies", "at least one policy required");
    if (oracle_points < 2) fail("oracle_points", "must be at least 2");
    const unsigned max_k = model == ModelKind::TwoState ? kMaxExactHorizon2 : kMaxExactHorizon3;
    if (horizon < 1 || horizon > max_k) fail("horizon", "must lie in [1, " + std::to_string(max_k) + "]");
}

SweepPolicy parse_policy(std::string_view text) {
    const auto t = trim(text);
    if (t == "listen") return policy::AlwaysListen{};
    if (t == "transmit") return policy::AlwaysTransmit{};
    if (t == "greedy") return policy::Greedy{};
    if (t == "optimal") return sweep_policy::Optimal{};
    if (t == "dp") return sweep_policy::Dp{};
    if (t.starts_with("m:")) {
        const auto m = parse_count<unsigned>("policies", t.substr(2));
        if (m < 1) fail("policies", "m:<M> needs M >= 1");
        return policy::ConsecutiveM{m};
    }
    if (t.starts_with("threshold:")) {
        return policy::Threshold{parse_probability("policies", t.substr(10))};
    }
    fail("policies", "unknown policy '" + std::string(t) + "'");
}

void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
    key = trim(key);
    value = trim(value);
    if (key == "model") {
        if (value == "two") cfg.model = ModelKind::TwoState;
        else if (value == "three") cfg.model = ModelKind::ThreeState;
        else fail(key, "expected 'two' or 'three'");
    } else if (key == "p_ee") {
        cfg.p_ee = parse_probability(key, value);
    } else if (key == "p_ne") {
        cfg.p_ne = parse_probability(key, value);
    } else if (key == "row_b") {
        cfg.matrix[0] = parse_row(key, value);
    } else if (key == "row_g") {
        cfg.matrix[1] = parse_row(key, value);
    } else if (key == "row_vg") {
        cfg.matrix[2] = parse_row(key, value);
    } else if (key == "r_p") {
        cfg.r_p = parse_real(key, value);
        if (!(cfg.r_p > 0.0)) fail(key, "reward must be positive");
    } else if (key == "r_s") {
        cfg.r_s = parse_real(key, value);
        if (!(cfg.r_s > 0.0)) fail(key, "reward must be positive");
    } else if (key == "w") {
        cfg.w = parse_probability(key, value);
    } else if (key == "w_start") {
        range(cfg).start = parse_probability(key, value);
    } else if (key == "w_end") {
        range(cfg).end = parse_probability(key, value);
    } else if (key == "w_step") {
        range(cfg).step = parse_real(key, value);
        if (!(cfg.w_range->step > 0.0)) fail(key, "step must be positive");
    } else if (key == "alpha") {
        cfg.alpha = parse_real(key, value);
        if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) fail(key, "discount must lie in (0,1)");
    } else if (key == "grid_n") {
        cfg.grid_n = parse_count<std::size_t>(key, value);
    } else if (key == "tol") {
        cfg.tol = parse_real(key, value);
        if (!(cfg.tol > 0.0)) fail(key, "tolerance must be positive");
    } else if (key == "max_iter") {
        cfg.max_iter = parse_count<std::size_t>(key, value);
    } else if (key == "m_max") {
        cfg.m_max = parse_count<unsigned>(key, value);
    } else if (key == "m") {
        cfg.m = parse_count<unsigned>(key, value);
    } else if (key == "slots") {
        cfg.slots = parse_count<std::uint64_t>(key, value);
    } else if (key == "warmup") {
        cfg.warmup = parse_count<std::uint64_t>(key, value);
    } else if (key == "seed") {
        cfg.seed = parse_count<std::uint64_t>(key, value);
    } else if (key == "policies") {
        cfg.policies.clear();
        for (auto p : split(value, ',')) cfg.policies.push_back(parse_policy(p));
    } else if (key == "out") {
        cfg.out = std::string(value);
    } else if (key == "horizon") {
        cfg.horizon = parse_count<unsigned>(key, value);
    } else if (key == "oracle_points") {
        cfg.oracle_points = parse_count<std::size_t>(key, value);
    } else {
        fail(key, "unknown key");
    }
}

void apply_text(ExperimentConfig& cfg, std::string_view text, std::string_view source) {
    std::size_t line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(std::string(source) + ":" + std::to_string(line_no) +
                              ": expected 'key = value'");
        }
        apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
    }
}

ExperimentConfig load_config(const std::optional<std::filesystem::path>& path,
                             const std::vector<std::pair<std::string, std::string>>& overrides) {
    ExperimentConfig cfg;
    if (path) {
        std::filesystem::path resolved = *path;
        if (!std::filesystem::exists(resolved) && resolved.is_relative()) {
            if (const char* dir = std::getenv(std::string(kConfigDirEnv).c_str())) {
                resolved = std::filesystem::path(dir) / *path;
            }
        }
        std::ifstream in(resolved);
        if (!in) throw ConfigError("cannot open config file: " + path->string());
        std::ostringstream text;
        text << in.rdbuf();
        apply_text(cfg, text.str(), resolved.string());
    }
    for (const auto& [k, v] : overrides) apply_setting(cfg, k, v);
    cfg.validate();
    return cfg;
}

}  // namespace cogarq
