#pragma once

#include <array>
#include <cmath>
#include <iosfwd>
#include <string>
#include <vector>

#include "kww/types.hpp"

namespace kww {

/// Intersections of the low- and high-frequency power-law asymptotes of Q and V.
struct CrossoverPair {
    double omega_q;
    double omega_v;
};

/// omega_Q = (beta Gamma(1+beta) sin(beta pi/2) / Gamma(1/beta))^(1/(1+beta)),
/// omega_V = (beta / Gamma(2/beta))^(1/2). omega_Q vanishes at beta = 2.
CrossoverPair crossover(double beta);

/// Frequency scale of the crossover region for one transform: omega_Q for the
/// cosine transform (omega_V where omega_Q vanishes, beta = 2), omega_V for the sine.
double characteristic_frequency(TransformKind kind, double beta);

enum class MethodHint { TrySmallSeries, TryLargeSeries, Quadrature };

/// Column order of the per-beta limits, all stored as log2(omega).
enum class RegionColumn : std::size_t {
    CosineSmallUpper = 0,  // qs_lim: small-omega series works below
    CosineLargeLower = 1,  // ql_lim: large-omega series works above
    SineSmallUpper = 2,    // vs_lim
    SineLargeLower = 3,    // vl_lim
};

inline constexpr int kRegionTableVersion = 1;
inline constexpr double kRegionBetaStep = 0.02;

/// Per-beta validity limits of both expansions. NaN marks NotApplicable.
struct RegionTable {
    int format_version = kRegionTableVersion;
    double delta = kDefaultDelta;
    std::vector<double> beta;
    std::vector<std::array<double, 4>> limits;

    bool empty() const { return beta.empty(); }
    double at(std::size_t row, RegionColumn col) const { return limits[row][static_cast<std::size_t>(col)]; }
};

/// Scan diagnostics: rows where no success/failure transition was bracketed.
struct ScanIssue {
    double beta;
    RegionColumn column;
    bool not_applicable;
};

struct ScanReport {
    RegionTable table;
    std::vector<ScanIssue> issues;
};

/// 0.1, 0.12, ..., 2.0 by default.
std::vector<double> default_beta_grid(double step = kRegionBetaStep, double lo = kBetaMin, double hi = kBetaMax);

/// Bisects log(omega) (40 iterations) on "series reaches delta" within
/// [omega_c 1e-6, omega_c 1e6] for both expansions of one transform, and
/// fills that transform's two columns of `table`.
void boundary_scan(TransformKind kind, const std::vector<double>& beta_grid, double delta, ScanReport& report);

/// Both transforms; a complete table.
ScanReport build_region_table(const std::vector<double>& beta_grid, double delta = kDefaultDelta);

/// Linear interpolation of the log2 limits in beta.
MethodHint predict_method(TransformKind kind, double beta, double omega, const RegionTable& table);

/// `#kww-region-table v1 delta=<value>` header, then one tab-separated row per
/// beta with 9 significant digits and `NA` for NotApplicable.
std::string serialize(const RegionTable& table);
RegionTable parse_region_table(std::istream& in);
RegionTable parse_region_table(const std::string& text);

/// Table shipped with the library.
const RegionTable& embedded_region_table();

std::string_view to_string(MethodHint hint);

} // namespace kww
