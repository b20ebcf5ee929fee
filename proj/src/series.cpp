#include "kww/series.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <stdexcept>

namespace kww {

namespace {

const double kLogMax = std::log(DBL_MAX);
const double kLogMinNormal = std::log(DBL_MIN);

void require_valid(const SeriesParams& p)
{
    if (!beta_in_range(p.beta))
        throw std::domain_error("series: beta outside [0.1, 2]");
    if (!(p.omega >= 0.0) || !std::isfinite(p.omega))
        throw std::domain_error("series: omega must be finite and non-negative");
    if (!(p.delta > p.epsilon))
        throw std::domain_error("series: delta must exceed epsilon");
}

// Terms are formed in extended precision (64-bit significand): the
// cancellation guard assumes every term is accurate to epsilon, which lgamma
// and pow of arguments in the hundreds do not deliver in binary64.
using Wide = long double;

const Wide kWidePi = 3.141592653589793238462643383279502884L;

double alternating(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

// sin(x*pi/2) for x >= 0, exact at integers.
Wide sin_half_pi(Wide x)
{
    Wide r = std::fmod(x, Wide(4));
    Wide sign = 1;
    if (r >= 2) {
        r -= 2;
        sign = -1;
    }
    if (r > 1)
        r = 2 - r;
    if (r <= 0.5L)
        return sign * std::sin(r * kWidePi / 2);
    return sign * std::cos((1 - r) * kWidePi / 2);
}

// cos(x*pi/2) for x >= 0, exact at integers.
Wide cos_half_pi(Wide x)
{
    Wide r = std::fmod(x, Wide(4));
    Wide sign = 1;
    if (r >= 2) {
        r -= 2;
        sign = -1;
    }
    if (r > 1) {
        r = 2 - r;
        sign = -sign;
    }
    if (r <= 0.5L)
        return sign * std::cos(r * kWidePi / 2);
    return sign * std::sin((1 - r) * kWidePi / 2);
}

// k*beta and k*(2-beta) are exact in the wide type for k < 2^10.
Wide wide_sine_factor(int k, double beta)
{
    if (beta <= 1.0)
        return sin_half_pi(Wide(k) * beta);
    // sin(k beta pi/2) = (-1)^(k+1) sin(k (2-beta) pi/2)
    return -alternating(k) * sin_half_pi(Wide(k) * (Wide(2) - beta));
}

Wide wide_cosine_factor(int k, double beta)
{
    if (beta <= 1.0)
        return cos_half_pi(Wide(k) * beta);
    // cos(k beta pi/2) = (-1)^k cos(k (2-beta) pi/2)
    return alternating(k) * cos_half_pi(Wide(k) * (Wide(2) - beta));
}

Wide wide_log_amplitude_small(int k, double beta)
{
    return std::lgamma(Wide(k + 1) / beta) - std::lgamma(Wide(k + 1));
}

Wide wide_log_amplitude_large(int k, double beta)
{
    return std::lgamma(Wide(k) * beta + 1) - std::lgamma(Wide(k + 1));
}

// Term n of either expansion: s_n = coefficient(n) * exp(log_magnitude(n)),
// with e_n = exp(log_bound(n)) bounding |S - S_n|.
struct TermModel {
    virtual ~TermModel() = default;
    virtual Wide log_magnitude(int n) const = 0;
    virtual Wide coefficient(int n) const = 0;
    virtual Wide log_bound(int n) const = 0;
};

struct SmallOmegaTerms final : TermModel {
    TransformKind kind;
    double beta;
    Wide log_omega;
    Wide log_beta;

    SmallOmegaTerms(TransformKind k, double b, double omega)
        : kind(k), beta(b), log_omega(std::log(Wide(omega))), log_beta(std::log(Wide(b)))
    {
    }

    int power(int n) const { return kind == TransformKind::Cosine ? 2 * n : 2 * n + 1; }

    Wide log_magnitude(int n) const override
    {
        const int p = power(n);
        return wide_log_amplitude_small(p, beta) + p * log_omega - log_beta;
    }
    Wide coefficient(int n) const override { return alternating(n); }
    // The remainder is bounded by the first neglected term.
    Wide log_bound(int n) const override { return log_magnitude(n); }
};

struct LargeOmegaTerms final : TermModel {
    TransformKind kind;
    double beta;
    Wide log_omega;
    Wide log_sin_phi;

    LargeOmegaTerms(TransformKind k, double b, double omega)
        : kind(k), beta(b), log_omega(std::log(Wide(omega)))
    {
        const Wide phi = beta <= 1.0 ? kWidePi / 2 : kWidePi / (2 * Wide(beta));
        log_sin_phi = std::log(std::sin(phi));
    }

    Wide log_magnitude(int n) const override
    {
        return wide_log_amplitude_large(n, beta) - (1 + Wide(n) * beta) * log_omega;
    }
    Wide coefficient(int n) const override
    {
        if (kind == TransformKind::Cosine)
            return -alternating(n) * wide_sine_factor(n, beta);
        return alternating(n) * wide_cosine_factor(n, beta);
    }
    // (sin phi)^(-1-n beta) B_n omega^(-1-n beta); amplitudes only.
    Wide log_bound(int n) const override
    {
        return log_magnitude(n) - (1 + Wide(n) * beta) * log_sin_phi;
    }
};

SeriesResult fail(SeriesFailureReason reason, int n)
{
    SeriesResult r;
    r.terms = n;
    r.failure = SeriesFailure{reason, n};
    return r;
}

SeriesResult sum_incrementally(const TermModel& terms, const SeriesParams& p, bool asymptotic)
{
    // |Q|, |V| <= integral of f = Gamma(1 + 1/beta); once epsilon * z_n exceeds
    // delta times that, no partial sum can pass the cancellation guard.
    const double hopeless = 2.0 * p.delta * std::tgamma(1.0 + 1.0 / p.beta) / p.epsilon;

    // Accumulated wide as well, so the only binary64 rounding is the final one.
    Wide sum = 0;
    double z = 0.0;
    Wide previous_log_bound = 0;

    for (int n = 0; n < kMaxSeriesTerms; ++n) {
        const Wide log_e = terms.log_bound(n);
        const double abs_sum = std::fabs(static_cast<double>(sum));

        if (n >= 1 && abs_sum > 0.0) {
            const bool truncation_ok = log_e < std::log(Wide(p.delta) * abs_sum);
            const bool cancellation_ok = p.epsilon * z < p.delta * abs_sum;
            if (truncation_ok && cancellation_ok) {
                SeriesResult r;
                r.value = static_cast<double>(sum);
                r.terms = n;
                r.bound = std::max(static_cast<double>(std::exp(log_e)), p.epsilon * z) / abs_sum;
                return r;
            }
        }
        if (z > hopeless)
            return fail(SeriesFailureReason::CancellationLoss, n);
        if (asymptotic && n >= 1 && log_e > previous_log_bound)
            return fail(SeriesFailureReason::DivergesBeforeAccuracy, n);

        const Wide log_mag = terms.log_magnitude(n);
        if (log_mag > kLogMax)
            return fail(SeriesFailureReason::TermOverflow, n);
        const Wide coef = terms.coefficient(n);
        if (coef != 0) {
            if (log_mag + std::log(std::fabs(coef)) < kLogMinNormal)
                return fail(SeriesFailureReason::TermUnderflow, n);
            const Wide term = coef * std::exp(log_mag);
            sum += term;
            z = std::max(z, static_cast<double>(std::fabs(term)));
        }
        previous_log_bound = log_e;
    }
    if (p.epsilon * z >= p.delta * std::fabs(static_cast<double>(sum)))
        return fail(SeriesFailureReason::CancellationLoss, kMaxSeriesTerms);
    return fail(SeriesFailureReason::DivergesBeforeAccuracy, kMaxSeriesTerms);
}

TruncatedSum partial_sum(const TermModel& terms, int n)
{
    Wide sum = 0;
    for (int k = 0; k < n; ++k) {
        const Wide coef = terms.coefficient(k);
        if (coef != 0)
            sum += coef * std::exp(terms.log_magnitude(k));
    }
    return {static_cast<double>(sum), static_cast<double>(std::exp(terms.log_bound(n)))};
}

} // namespace

std::string_view to_string(SeriesFailureReason reason)
{
    switch (reason) {
    case SeriesFailureReason::TermOverflow: return "term-overflow";
    case SeriesFailureReason::TermUnderflow: return "term-underflow";
    case SeriesFailureReason::DivergesBeforeAccuracy: return "diverges-before-accuracy";
    case SeriesFailureReason::CancellationLoss: return "cancellation-loss";
    case SeriesFailureReason::NotApplicable: return "not-applicable";
    }
    return "unknown";
}

double log_amplitude_small(int k, double beta) { return static_cast<double>(wide_log_amplitude_small(k, beta)); }

double log_amplitude_large(int k, double beta) { return static_cast<double>(wide_log_amplitude_large(k, beta)); }

std::optional<double> amplitude_small(int k, double beta)
{
    const double l = log_amplitude_small(k, beta);
    if (l > kLogMax)
        return std::nullopt;
    return std::exp(l);
}

std::optional<double> amplitude_large(int k, double beta)
{
    const double l = log_amplitude_large(k, beta);
    if (l > kLogMax)
        return std::nullopt;
    return std::exp(l);
}

double large_sine_factor(int k, double beta) { return static_cast<double>(wide_sine_factor(k, beta)); }

double large_cosine_factor(int k, double beta) { return static_cast<double>(wide_cosine_factor(k, beta)); }

SeriesResult small_omega_sum(TransformKind kind, const SeriesParams& params)
{
    require_valid(params);
    if (params.omega == 0.0) {
        SeriesResult r;
        r.terms = 1;
        r.value = kind == TransformKind::Cosine ? std::tgamma(1.0 / params.beta) / params.beta : 0.0;
        return r;
    }
    // For beta < 1 the series is asymptotic; at beta = 1 it is geometric and
    // diverges for omega > 1, which the same growth test detects.
    const SmallOmegaTerms terms(kind, params.beta, params.omega);
    return sum_incrementally(terms, params, params.beta <= 1.0);
}

SeriesResult large_omega_sum(TransformKind kind, const SeriesParams& params)
{
    require_valid(params);
    if (!(params.omega > 0.0))
        throw std::domain_error("large_omega_sum: omega must be positive");
    if (kind == TransformKind::Cosine && params.beta == 2.0)
        return fail(SeriesFailureReason::NotApplicable, 0);
    const LargeOmegaTerms terms(kind, params.beta, params.omega);
    return sum_incrementally(terms, params, params.beta >= 1.0);
}

TruncatedSum truncated_small_sum(TransformKind kind, double beta, double omega, int n)
{
    return partial_sum(SmallOmegaTerms(kind, beta, omega), n);
}

TruncatedSum truncated_large_sum(TransformKind kind, double beta, double omega, int n)
{
    return partial_sum(LargeOmegaTerms(kind, beta, omega), n);
}

} // namespace kww
