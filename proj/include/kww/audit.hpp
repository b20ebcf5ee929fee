#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "kww/types.hpp"

// Checks of the library against the reference integrator and its own
// invariants. Used by the acceptance test and by `kww check`.
namespace kww::audit {

struct AuditConfig {
    double delta = kDefaultDelta;
    // Relative tolerance of the accuracy contract (single precision, 1.2e-7).
    double contract_tolerance = 1.2e-7;
    std::vector<double> betas;  // empty: 0.1, 0.2, ..., 2.0
    int points_scaled = 128;    // per beta, in [1e-3, 1e3] * omega_c
    int points_fixed = 64;      // per beta, in [1e-4, 1e4]
    int monotonic_points = 10000;
    int bound_samples = 200;    // per expansion
    int chi_points = 500;
    std::uint64_t seed = 20240601;
    std::ostream* progress = nullptr;
};

struct Report {
    int id = 0;  // acceptance criterion number, 0 for extra invariants
    std::string name;
    bool passed = false;
    std::string detail;
};

std::vector<double> audit_betas(const AuditConfig& config);

/// Relative deviation of `value` from `reference`; absolute below the normal
/// range, where a relative measure is meaningless.
double deviation(double value, double reference);

/// Reference for comparisons: the oracle, or the closed form where it exists
/// in a form the oracle cannot resolve (the beta = 2 cosine Gaussian).
double reference(TransformKind kind, double beta, double omega);

Report accuracy_contract(const AuditConfig& config);
Report closed_form_anchors(const AuditConfig& config);
Report truncation_bounds(const AuditConfig& config);
Report monotonicity(const AuditConfig& config);
Report parity_and_scaling(const AuditConfig& config);
Report normalization(const AuditConfig& config);
Report region_map_behavior(const AuditConfig& config);
Report chi_insensitivity(const AuditConfig& config);
Report performance(const AuditConfig& config);
Report crossover_curve(const AuditConfig& config);
Report method_agreement(const AuditConfig& config);

/// Criteria 1-10 in order, followed by the extra invariants.
std::vector<Report> run_all(const AuditConfig& config);

/// `PASS [n] name: detail`
std::string format(const Report& report);

} // namespace kww::audit
