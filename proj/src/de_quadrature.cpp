#include "kww/de_quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace kww {

namespace {

double gamma_h(double h) { return std::sqrt(1.0 + std::log(1.0 + kPi / h) / (4.0 * h)); }

double parity_sign(double k) { return (static_cast<long>(std::floor(k)) % 2 == 0) ? 1.0 : -1.0; }

double evaluate_integrand(double t, double beta, Integrand integrand)
{
    if (integrand == Integrand::Plain)
        return std::exp(-std::pow(t, beta));
    return gauss_subtracted(t, beta);
}

// Bound on |b_k| used to stop the outward walk; immune to accidental zeros of
// the oscillating factor.
double weight_envelope(TransformKind kind, double k, const ChiVariant& chi)
{
    const double slope = std::fabs(phi_prime(k, chi));
    if (k > 0.0) {
        const double theta = kPi * k / std::expm1(chi.value(k));
        return slope * std::min(1.0, std::fabs(theta));
    }
    if (kind == TransformKind::Sine)
        return slope * std::min(1.0, kPi * phi(k, chi));
    return slope;
}

QuadratureResult run_ladder(TransformKind kind, double beta, double omega, const QuadratureOptions& opt,
                            Integrand integrand)
{
    const double offset = integrand == Integrand::GaussSubtracted ? gaussian_cosine_transform(omega) : 0.0;
    QuadratureResult result;
    result.subtracted = integrand == Integrand::GaussSubtracted;

    double previous = 0.0;
    bool previous_guard_failed = false;
    for (int level = 0; level < kStepLevels; ++level) {
        const DEPlan& plan = cached_plan(kind, opt.chi, level);
        const TrapezoidSum ts = trapezoid_sum(plan, beta, omega, integrand);
        const double total = offset + ts.value;
        result.evaluations += ts.evaluations;
        result.value = total;
        result.h_final = plan.chi.h;

        // A sum in which every node underflowed carries no information, except
        // for the identically vanishing difference f_2 - f_2.
        const bool empty = ts.max_term == 0.0 && !(result.subtracted && beta == 2.0);
        const bool guard_ok =
            !empty && (kWorkingEpsilon * ts.max_term < opt.delta * std::fabs(total) || ts.max_term == 0.0);
        if (level >= 1) {
            const double diff = std::fabs(total - previous);
            result.relative_change = diff == 0.0 ? 0.0 : diff / std::fabs(total);
            if (result.relative_change <= opt.delta && guard_ok) {
                result.converged = true;
                return result;
            }
            if (empty) {
                result.failure = QuadratureFailure::NoConvergence;
                return result;
            }
            if (!guard_ok && previous_guard_failed) {
                result.failure = QuadratureFailure::CancellationLoss;
                return result;
            }
        }
        previous = total;
        previous_guard_failed = !guard_ok;
    }
    result.failure = previous_guard_failed ? QuadratureFailure::CancellationLoss : QuadratureFailure::NoConvergence;
    return result;
}

} // namespace

double ChiVariant::value(double k) const
{
    const double x = h * k;
    if (kind == ChiKind::Chi1)
        return 6.0 * std::sinh(x);
    return 8.0 * x - std::expm1(-x) / (4.0 * gamma_h(h)) + std::expm1(x) / 4.0;
}

double ChiVariant::derivative(double k) const
{
    const double x = h * k;
    if (kind == ChiKind::Chi1)
        return 6.0 * h * std::cosh(x);
    return 8.0 * h + h * std::exp(-x) / (4.0 * gamma_h(h)) + h * std::exp(x) / 4.0;
}

double ChiVariant::derivative_at_zero() const
{
    if (kind == ChiKind::Chi1)
        return 6.0 * h;
    return 8.0 * h + h / (4.0 * gamma_h(h)) + h / 4.0;
}

double ChiVariant::second_derivative_at_zero() const
{
    if (kind == ChiKind::Chi1)
        return 0.0;
    return -h * h / (4.0 * gamma_h(h)) + h * h / 4.0;
}

double phi(double k, const ChiVariant& chi)
{
    if (k == 0.0)
        return 1.0 / chi.derivative_at_zero();
    const double x = chi.value(k);
    if (x > 0.0)
        return k / -std::expm1(-x);
    // k / (1 - e^-x) = -k e^x / (1 - e^x) for x < 0
    return -k * std::exp(x) / -std::expm1(x);
}

double phi_prime(double k, const ChiVariant& chi)
{
    if (k == 0.0) {
        const double d1 = chi.derivative_at_zero();
        return 0.5 - chi.second_derivative_at_zero() / (2.0 * d1 * d1);
    }
    const double x = chi.value(k);
    const double dx = chi.derivative(k);
    if (x > 0.0) {
        const double u = std::exp(-x);
        const double d = -std::expm1(-x);
        return (d - k * u * dx) / (d * d);
    }
    const double v = std::exp(x);
    const double w = -std::expm1(x);
    return -v * (w + k * dx) / (w * w);
}

double phase_part(TransformKind kind, double k, const ChiVariant& chi)
{
    if (k <= 0.0) {
        const double a = kPi * phi(k, chi);
        return kind == TransformKind::Cosine ? std::cos(a) : std::sin(a);
    }
    // pi phi(k) = pi k + theta with theta = pi k / (e^chi - 1)
    const double theta = kPi * k / std::expm1(chi.value(k));
    const double s = parity_sign(k) * std::sin(theta);
    // cos(pi (m + 1/2) + theta) = -(-1)^m sin(theta); sin(pi m + theta) = (-1)^m sin(theta)
    return kind == TransformKind::Cosine ? -s : s;
}

DEPlan build_plan(TransformKind kind, const ChiVariant& chi, double cutoff)
{
    const double start = kind == TransformKind::Cosine ? 0.5 : 0.0;
    const double limit = 200.0 / chi.h;

    std::vector<double> right;
    double k = start;
    for (;; k += 1.0) {
        if (k > limit)
            throw std::runtime_error("build_plan: weights do not decay within |k| <= 200/h");
        right.push_back(k);
        if (weight_envelope(kind, k, chi) < cutoff)
            break;
    }
    std::vector<double> left;
    for (k = start - 1.0;; k -= 1.0) {
        if (-k > limit)
            throw std::runtime_error("build_plan: weights do not decay within |k| <= 200/h");
        left.push_back(k);
        if (weight_envelope(kind, k, chi) < cutoff)
            break;
    }

    DEPlan plan;
    plan.kind = kind;
    plan.chi = chi;
    plan.n_minus = left.back();
    plan.n_plus = right.back();
    const std::size_t n = left.size() + right.size();
    plan.a.reserve(n);
    plan.b.reserve(n);
    auto push = [&](double kk) {
        plan.a.push_back(kPi * phi(kk, chi));
        plan.b.push_back(phi_prime(kk, chi) * phase_part(kind, kk, chi));
    };
    std::for_each(left.rbegin(), left.rend(), push);
    std::for_each(right.begin(), right.end(), push);
    return plan;
}

double gauss_subtracted(double t, double beta)
{
    if (t == 0.0)
        return 0.0;
    const double log_t = std::log(t);
    const double t_beta = std::exp(beta * log_t);
    const double t_sq = t * t;
    const double d = t_beta * std::expm1((2.0 - beta) * log_t);  // t^2 - t^beta
    if (std::fabs(d) < 1.0)
        return std::exp(-t_sq) * std::expm1(d);
    return std::exp(-t_beta) - std::exp(-t_sq);
}

double gaussian_cosine_transform(double omega)
{
    return 0.5 * std::sqrt(kPi) * std::exp(-0.25 * omega * omega);
}

TrapezoidSum trapezoid_sum(const DEPlan& plan, double beta, double omega, Integrand integrand)
{
    const double scale = kPi / omega;
    TrapezoidSum out;
    for (std::size_t i = 0; i < plan.size(); ++i) {
        if (plan.b[i] == 0.0)
            continue;
        const double g = evaluate_integrand(plan.a[i] / omega, beta, integrand);
        ++out.evaluations;
        const double term = scale * plan.b[i] * g;
        out.value += term;
        out.max_term = std::max(out.max_term, std::fabs(term));
    }
    return out;
}

std::string_view to_string(QuadratureFailure failure)
{
    return failure == QuadratureFailure::CancellationLoss ? "cancellation-loss" : "no-convergence";
}

const DEPlan& cached_plan(TransformKind kind, ChiKind chi, int level)
{
    constexpr std::size_t kSlots = 2 * 2 * kStepLevels;
    static std::array<std::once_flag, kSlots> once;
    static std::array<std::optional<DEPlan>, kSlots> plans;

    if (level < 0 || level >= kStepLevels)
        throw std::out_of_range("cached_plan: step level");
    const std::size_t slot = (static_cast<std::size_t>(kind) * 2 + static_cast<std::size_t>(chi)) * kStepLevels
                             + static_cast<std::size_t>(level);
    std::call_once(once[slot], [&] {
        const ChiVariant variant{chi, std::ldexp(kInitialStep, -level)};
        plans[slot] = build_plan(kind, variant, kPlanCutoff);
    });
    return *plans[slot];
}

QuadratureResult de_transform(TransformKind kind, double beta, double omega, const QuadratureOptions& options)
{
    if (!beta_in_range(beta))
        throw std::domain_error("de_transform: beta outside [0.1, 2]");
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw std::domain_error("de_transform: omega must be finite and positive");

    if (options.integrand)
        return run_ladder(kind, beta, omega, options, *options.integrand);

    const bool subtract = kind == TransformKind::Cosine && beta >= kSubtractionBeta;
    QuadratureResult first =
        run_ladder(kind, beta, omega, options, subtract ? Integrand::GaussSubtracted : Integrand::Plain);
    if (!first.converged && !subtract && kind == TransformKind::Cosine && beta > 1.0
        && first.failure == QuadratureFailure::CancellationLoss) {
        QuadratureResult retry = run_ladder(kind, beta, omega, options, Integrand::GaussSubtracted);
        retry.evaluations += first.evaluations;
        return retry;
    }
    return first;
}

} // namespace kww
