#include "kww/region_map.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "kww/series.hpp"

namespace kww {

namespace {

constexpr int kBisectionSteps = 40;
constexpr double kBracketDecades = 6.0;
// Cleanup probes below (above) each limit, in log2(omega).
constexpr double kCleanupStep = 0.125;
constexpr int kCleanupProbes = 32;

const char* const kEmbeddedTable =
#include "region_table_data.inc"
    ;

constexpr std::size_t column_index(TransformKind kind, bool small)
{
    return (kind == TransformKind::Cosine ? 0u : 2u) + (small ? 0u : 1u);
}

bool small_series_works(TransformKind kind, double beta, double log2_omega, double delta)
{
    return small_omega_sum(kind, {beta, std::exp2(log2_omega), delta}).ok();
}

bool large_series_works(TransformKind kind, double beta, double log2_omega, double delta)
{
    return large_omega_sum(kind, {beta, std::exp2(log2_omega), delta}).ok();
}

// Bisects between a success end and a failure end; returns the last point
// known to succeed.
template <class Pred>
double bisect(Pred works, double success, double failure)
{
    for (int i = 0; i < kBisectionSteps; ++i) {
        const double mid = 0.5 * (success + failure);
        if (works(mid))
            success = mid;
        else
            failure = mid;
    }
    return success;
}

std::string format_value(double v)
{
    if (std::isnan(v))
        return "NA";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

double parse_value(const std::string& token)
{
    if (token == "NA")
        return std::numeric_limits<double>::quiet_NaN();
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size())
        throw std::runtime_error("region table: bad number '" + token + "'");
    return v;
}

double interpolate(double lo, double hi, double t, bool at_lo, bool at_hi)
{
    if (std::isnan(lo) && std::isnan(hi))
        return lo;
    if (std::isnan(lo))
        return at_lo ? lo : hi;
    if (std::isnan(hi))
        return at_hi ? hi : lo;
    return lo + t * (hi - lo);
}

} // namespace

CrossoverPair crossover(double beta)
{
    if (!beta_in_range(beta))
        throw std::domain_error("crossover: beta outside [0.1, 2]");
    // sin(beta pi/2) = sin((2 - beta) pi/2), exact zero at beta = 2
    const double s = beta <= 1.0 ? std::sin(beta * kPi / 2) : std::sin((2.0 - beta) * kPi / 2);
    const double q = std::pow(beta * std::tgamma(1.0 + beta) * s / std::tgamma(1.0 / beta), 1.0 / (1.0 + beta));
    const double v = std::sqrt(beta / std::tgamma(2.0 / beta));
    return {q, v};
}

double characteristic_frequency(TransformKind kind, double beta)
{
    const CrossoverPair c = crossover(beta);
    if (kind == TransformKind::Sine || !(c.omega_q > 0.0))
        return c.omega_v;
    return c.omega_q;
}

std::vector<double> default_beta_grid(double step, double lo, double hi)
{
    if (!(step > 0.0) || !(hi >= lo))
        throw std::invalid_argument("beta grid: need step > 0 and hi >= lo");
    std::vector<double> grid;
    const long n = std::lround((hi - lo) / step);
    for (long i = 0; i <= n; ++i) {
        // snap to 12 decimals so 0.1 + 0.02 i lands on the double nearest the decimal
        const double b = std::round((lo + static_cast<double>(i) * step) * 1e12) / 1e12;
        grid.push_back(std::min(b, hi));
    }
    return grid;
}

void boundary_scan(TransformKind kind, const std::vector<double>& beta_grid, double delta, ScanReport& report)
{
    RegionTable& table = report.table;
    if (table.beta.empty()) {
        table.beta = beta_grid;
        table.delta = delta;
        table.limits.assign(beta_grid.size(), {0.0, 0.0, 0.0, 0.0});
    } else if (table.beta != beta_grid) {
        throw std::invalid_argument("boundary_scan: beta grid differs from table");
    }

    const std::size_t small_col = column_index(kind, true);
    const std::size_t large_col = column_index(kind, false);

    for (std::size_t row = 0; row < beta_grid.size(); ++row) {
        const double beta = beta_grid[row];
        const double center = std::log2(characteristic_frequency(kind, beta));
        const double span = kBracketDecades * std::log2(10.0);
        const double lo = center - span;
        const double hi = center + span;

        auto small_ok = [&](double x) { return small_series_works(kind, beta, x, delta); };
        double small_limit;
        if (!small_ok(lo)) {
            small_limit = lo;
            report.issues.push_back({beta, static_cast<RegionColumn>(small_col), false});
        } else if (small_ok(hi)) {
            small_limit = hi;
            report.issues.push_back({beta, static_cast<RegionColumn>(small_col), false});
        } else {
            small_limit = bisect(small_ok, lo, hi);
            for (int i = 1; i <= kCleanupProbes; ++i) {
                const double x = small_limit - i * kCleanupStep;
                if (x > lo && !small_ok(x))
                    small_limit = x - kCleanupStep;
            }
        }
        table.limits[row][small_col] = small_limit;

        double large_limit;
        auto large_ok = [&](double x) { return large_series_works(kind, beta, x, delta); };
        const SeriesResult probe = large_omega_sum(kind, {beta, std::exp2(hi), delta});
        if (!probe.ok() && probe.failure->reason == SeriesFailureReason::NotApplicable) {
            large_limit = std::numeric_limits<double>::quiet_NaN();
            report.issues.push_back({beta, static_cast<RegionColumn>(large_col), true});
        } else if (!probe.ok()) {
            large_limit = hi;
            report.issues.push_back({beta, static_cast<RegionColumn>(large_col), false});
        } else if (large_ok(lo)) {
            large_limit = lo;
            report.issues.push_back({beta, static_cast<RegionColumn>(large_col), false});
        } else {
            large_limit = bisect(large_ok, hi, lo);
            for (int i = 1; i <= kCleanupProbes; ++i) {
                const double x = large_limit + i * kCleanupStep;
                if (x < hi && !large_ok(x))
                    large_limit = x + kCleanupStep;
            }
        }
        table.limits[row][large_col] = large_limit;
    }
}

ScanReport build_region_table(const std::vector<double>& beta_grid, double delta)
{
    ScanReport report;
    boundary_scan(TransformKind::Cosine, beta_grid, delta, report);
    boundary_scan(TransformKind::Sine, beta_grid, delta, report);
    return report;
}

MethodHint predict_method(TransformKind kind, double beta, double omega, const RegionTable& table)
{
    if (table.empty() || !(omega > 0.0))
        return MethodHint::Quadrature;
    const auto& grid = table.beta;
    if (beta < grid.front() || beta > grid.back())
        return MethodHint::Quadrature;

    std::size_t i = 0;
    while (i + 2 < grid.size() && beta > grid[i + 1])
        ++i;
    const std::size_t j = grid.size() == 1 ? 0 : i + 1;
    const double t = j == i ? 0.0 : (beta - grid[i]) / (grid[j] - grid[i]);
    const bool at_lo = beta == grid[i];
    const bool at_hi = beta == grid[j];

    const std::size_t sc = column_index(kind, true);
    const std::size_t lc = column_index(kind, false);
    const double small_limit = interpolate(table.limits[i][sc], table.limits[j][sc], t, at_lo, at_hi);
    const double large_limit = interpolate(table.limits[i][lc], table.limits[j][lc], t, at_lo, at_hi);

    const double x = std::log2(omega);
    const bool small_ok = !std::isnan(small_limit) && x < small_limit;
    const bool large_ok = !std::isnan(large_limit) && x > large_limit;
    if (small_ok && large_ok)
        return (small_limit - x) >= (x - large_limit) ? MethodHint::TrySmallSeries : MethodHint::TryLargeSeries;
    if (small_ok)
        return MethodHint::TrySmallSeries;
    if (large_ok)
        return MethodHint::TryLargeSeries;
    return MethodHint::Quadrature;
}

std::string serialize(const RegionTable& table)
{
    std::string out = "#kww-region-table v" + std::to_string(table.format_version)
                      + " delta=" + format_value(table.delta) + "\n";
    out += "#beta\tqs_lim\tql_lim\tvs_lim\tvl_lim\n";
    for (std::size_t row = 0; row < table.beta.size(); ++row) {
        out += format_value(table.beta[row]);
        for (double v : table.limits[row])
            out += "\t" + format_value(v);
        out += "\n";
    }
    return out;
}

RegionTable parse_region_table(std::istream& in)
{
    RegionTable table;
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("region table: empty input");
    int version = 0;
    char delta_text[64] = {};
    if (std::sscanf(line.c_str(), "#kww-region-table v%d delta=%63s", &version, delta_text) != 2)
        throw std::runtime_error("region table: missing header line");
    if (version != kRegionTableVersion)
        throw std::runtime_error("region table: unsupported version " + std::to_string(version));
    table.format_version = version;
    table.delta = parse_value(delta_text);

    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream fields(line);
        std::string token;
        std::vector<double> values;
        while (fields >> token)
            values.push_back(parse_value(token));
        if (values.size() != 5)
            throw std::runtime_error("region table: expected 5 columns in '" + line + "'");
        if (!table.beta.empty() && !(values[0] > table.beta.back()))
            throw std::runtime_error("region table: beta column must be ascending");
        table.beta.push_back(values[0]);
        table.limits.push_back({values[1], values[2], values[3], values[4]});
    }
    return table;
}

RegionTable parse_region_table(const std::string& text)
{
    std::istringstream in(text);
    return parse_region_table(in);
}

const RegionTable& embedded_region_table()
{
    static const RegionTable table = [] {
        const std::string text = kEmbeddedTable;
        if (text.empty())
            return RegionTable{};
        return parse_region_table(text);
    }();
    return table;
}

std::string_view to_string(MethodHint hint)
{
    switch (hint) {
    case MethodHint::TrySmallSeries: return "small-series";
    case MethodHint::TryLargeSeries: return "large-series";
    case MethodHint::Quadrature: return "quadrature";
    }
    return "unknown";
}

} // namespace kww
