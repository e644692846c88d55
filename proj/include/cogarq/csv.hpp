#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cogarq::csv {

inline constexpr std::string_view kSweepHeader = "w,policy,source,r_p,r_s,weighted,m_opt,slots,seed";
inline constexpr std::string_view kRateRegionHeader = "m,r_p,r_s,on_hull";
inline constexpr std::string_view kValueHeader1D = "p,value,action";
inline constexpr std::string_view kValueHeader2D = "p,q,value,action";

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

/// Strict full-string parse; throws std::invalid_argument.
double parse_double(std::string_view text);

struct SweepRecord {
    double w;
    std::string policy;
    std::string source;  // "analytic" or "simulated"
    double r_p;
    double r_s;
    double weighted;
    std::string m_opt;   // empty when not applicable
    std::optional<std::uint64_t> slots;
    std::optional<std::uint64_t> seed;
};

struct RegionRecord {
    std::string m;  // burst length, or "listen" / "transmit"
    double r_p;
    double r_s;
    bool on_hull;
};

struct ValueRecord {
    double p;
    std::optional<double> q;
    double value;
    std::string action;
};

void write_sweep(std::ostream& os, const std::vector<SweepRecord>& rows);
void write_rate_region(std::ostream& os, const std::vector<RegionRecord>& rows);
void write_values(std::ostream& os, const std::vector<ValueRecord>& rows);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Reads a simple comma-separated table (no quoting) with a header line.
Table read(std::istream& is);

std::vector<SweepRecord> parse_sweep(const Table& t);
std::vector<RegionRecord> parse_rate_region(const Table& t);

}  // namespace cogarq::csv
