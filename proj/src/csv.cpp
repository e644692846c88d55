#include "cogarq/csv.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace cogarq::csv {

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw std::runtime_error("number formatting failed");
    return {buf, ptr};
}

double parse_double(std::string_view text) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || text.empty()) {
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    }
    return v;
}

namespace {

std::string optional_count(const std::optional<std::uint64_t>& v) {
    return v ? std::to_string(*v) : std::string();
}

std::optional<std::uint64_t> parse_optional_count(const std::string& s) {
    if (s.empty()) return std::nullopt;
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw std::invalid_argument("not a count: '" + s + "'");
    }
    return v;
}

void expect_header(const Table& t, std::string_view header) {
    std::string joined;
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        if (i) joined += ',';
        joined += t.header[i];
    }
    if (joined != header) {
        throw std::invalid_argument("unexpected CSV header '" + joined + "', want '" +
                                    std::string(header) + "'");
    }
}

}  // namespace

void write_sweep(std::ostream& os, const std::vector<SweepRecord>& rows) {
    os << kSweepHeader << '\n';
    for (const auto& r : rows) {
        os << format_double(r.w) << ',' << r.policy << ',' << r.source << ','
           << format_double(r.r_p) << ',' << format_double(r.r_s) << ','
           << format_double(r.weighted) << ',' << r.m_opt << ',' << optional_count(r.slots) << ','
           << optional_count(r.seed) << '\n';
    }
}

void write_rate_region(std::ostream& os, const std::vector<RegionRecord>& rows) {
    os << kRateRegionHeader << '\n';
    for (const auto& r : rows) {
        os << r.m << ',' << format_double(r.r_p) << ',' << format_double(r.r_s) << ','
           << (r.on_hull ? 1 : 0) << '\n';
    }
}

void write_values(std::ostream& os, const std::vector<ValueRecord>& rows) {
    const bool two_d = !rows.empty() && rows.front().q.has_value();
    os << (two_d ? kValueHeader2D : kValueHeader1D) << '\n';
    for (const auto& r : rows) {
        os << format_double(r.p) << ',';
        if (two_d) os << format_double(r.q.value_or(0.0)) << ',';
        os << format_double(r.value) << ',' << r.action << '\n';
    }
}

Table read(std::istream& is) {
    Table t;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const auto pos = line.find(',', start);
            cells.push_back(line.substr(start, pos - start));
            if (pos == std::string::npos) break;
            start = pos + 1;
        }
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            if (cells.size() != t.header.size()) {
                throw std::invalid_argument("CSV row has " + std::to_string(cells.size()) +
                                            " cells, header has " + std::to_string(t.header.size()));
            }
            t.rows.push_back(std::move(cells));
        }
    }
    if (first) throw std::invalid_argument("empty CSV");
    return t;
}

std::vector<SweepRecord> parse_sweep(const Table& t) {
    expect_header(t, kSweepHeader);
    std::vector<SweepRecord> out;
    for (const auto& c : t.rows) {
        out.push_back({parse_double(c[0]), c[1], c[2], parse_double(c[3]), parse_double(c[4]),
                       parse_double(c[5]), c[6], parse_optional_count(c[7]), parse_optional_count(c[8])});
    }
    return out;
}

std::vector<RegionRecord> parse_rate_region(const Table& t) {
    expect_header(t, kRateRegionHeader);
    std::vector<RegionRecord> out;
    for (const auto& c : t.rows) {
        if (c[3] != "0" && c[3] != "1") throw std::invalid_argument("on_hull must be 0 or 1");
        out.push_back({c[0], parse_double(c[1]), parse_double(c[2]), c[3] == "1"});
    }
    return out;
}

}  // namespace cogarq::csv
