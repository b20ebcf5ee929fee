#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "kww/types.hpp"

namespace kww {

enum class ChiKind { Chi1, Chi2 };

/// Exponent function chi(k) of the transformation phi(k) = k / (1 - exp(-chi(k))).
///   Chi1: chi(k) = 6 sinh(h k)
///   Chi2: chi(k) = 8 h k + (1 - exp(-h k)) / (4 gamma_h) + (exp(h k) - 1) / 4,
///         gamma_h = sqrt(1 + ln(1 + pi/h) / (4 h))
/// The step in k is always 1; h sets the node density.
struct ChiVariant {
    ChiKind kind = ChiKind::Chi1;
    double h = 0.5;

    double value(double k) const;
    double derivative(double k) const;
    double derivative_at_zero() const;
    double second_derivative_at_zero() const;
};

/// phi(k) with the removable singularity at k = 0 resolved analytically.
double phi(double k, const ChiVariant& chi);
double phi_prime(double k, const ChiVariant& chi);

/// Re c_k (cosine, half-integer k) or Im c_k (sine, integer k) with
/// c_k = exp(i pi phi(k)). Positive k uses the rewrite
/// c_k = exp(i pi k) exp(i pi k / (e^chi - 1)), so no large phase is evaluated.
double phase_part(TransformKind kind, double k, const ChiVariant& chi);

/// Precomputed nodes a_k = pi phi(k) and real weights b_k = phi'(k) * phase_part(k)
/// over k = n_minus, ..., n_plus (half-integers for cosine, integers for sine).
struct DEPlan {
    TransformKind kind;
    ChiVariant chi;
    double n_minus = 0.0;
    double n_plus = 0.0;
    std::vector<double> a;
    std::vector<double> b;

    std::size_t size() const { return a.size(); }
    double k_at(std::size_t i) const { return n_minus + static_cast<double>(i); }
};

/// Walks k outward from the origin until the weight envelope drops below
/// `cutoff` on each side. Throws std::runtime_error past |k| > 200/h.
DEPlan build_plan(TransformKind kind, const ChiVariant& chi, double cutoff);

enum class Integrand {
    Plain,            // f_beta(t) = exp(-t^beta)
    GaussSubtracted,  // f_beta(t) - f_2(t)
};

struct TrapezoidSum {
    double value = 0.0;
    double max_term = 0.0;  // largest |(pi/omega) b_k g(a_k/omega)|
    int evaluations = 0;
};

/// (pi/omega) * sum_k b_k g(a_k / omega).
TrapezoidSum trapezoid_sum(const DEPlan& plan, double beta, double omega, Integrand integrand);

/// f_beta(t) - f_2(t) without cancellation for beta near 2.
double gauss_subtracted(double t, double beta);

/// Analytic cosine transform at beta = 2: (sqrt(pi)/2) exp(-omega^2/4).
double gaussian_cosine_transform(double omega);

enum class QuadratureFailure { CancellationLoss, NoConvergence };

std::string_view to_string(QuadratureFailure failure);

struct QuadratureResult {
    double value = 0.0;
    double h_final = 0.0;
    int evaluations = 0;
    bool converged = false;
    bool subtracted = false;
    double relative_change = 0.0;
    std::optional<QuadratureFailure> failure;
};

struct QuadratureOptions {
    double delta = kDefaultDelta;
    ChiKind chi = ChiKind::Chi1;
    // Forces one integrand and disables the subtraction retry.
    std::optional<Integrand> integrand;
};

inline constexpr double kInitialStep = 0.5;
inline constexpr int kStepLevels = 6;
/// Cosine transforms with beta at or above this always use GaussSubtracted.
inline constexpr double kSubtractionBeta = 1.75;
/// Weight cutoff for the cached plans used by de_transform.
inline constexpr double kPlanCutoff = kWorkingEpsilon;

/// Cached plan for step level j (h = 0.5 / 2^j); built once, shared read-only.
const DEPlan& cached_plan(TransformKind kind, ChiKind chi, int level);

/// Double-exponential quadrature with step halving until two successive
/// levels agree to `delta` and the cancellation guard passes.
QuadratureResult de_transform(TransformKind kind, double beta, double omega,
                              const QuadratureOptions& options = {});

} // namespace kww
