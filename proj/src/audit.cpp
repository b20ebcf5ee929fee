#include "kww/audit.hpp"

#include <algorithm>
#include <cfloat>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "kww/kww.hpp"
#include "kww/oracle.hpp"

namespace kww::audit {

namespace {

constexpr TransformKind kKinds[] = {TransformKind::Cosine, TransformKind::Sine};

std::vector<double> log_grid(double lo, double hi, int n)
{
    std::vector<double> out;
    if (n == 1) {
        out.push_back(lo);
        return out;
    }
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (int i = 0; i < n; ++i)
        out.push_back(std::exp(a + (b - a) * i / (n - 1)));
    return out;
}

std::vector<double> linear_grid(double lo, double hi, int n)
{
    std::vector<double> out;
    for (int i = 0; i < n; ++i)
        out.push_back(lo + (hi - lo) * i / (n - 1));
    return out;
}

// Union of the omega_c-relative and the fixed frequency range of the accuracy grid.
std::vector<double> contract_grid(TransformKind kind, double beta, const AuditConfig& config)
{
    const double wc = characteristic_frequency(kind, beta);
    std::vector<double> grid = log_grid(1e-3 * wc, 1e3 * wc, config.points_scaled);
    const std::vector<double> fixed = log_grid(1e-4, 1e4, config.points_fixed);
    grid.insert(grid.end(), fixed.begin(), fixed.end());
    return grid;
}

std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string where(TransformKind kind, double beta, double omega)
{
    return std::string(to_string(kind)) + " beta=" + sci(beta) + " omega=" + sci(omega);
}

// Largest deviation seen so far and where.
struct Worst {
    double value = 0.0;
    std::string at = "-";

    void offer(double v, const std::string& location)
    {
        if (v > value || std::isnan(v)) {
            value = v;
            at = location;
        }
    }
};

void note(const AuditConfig& config, const std::string& line)
{
    if (config.progress != nullptr)
        *config.progress << line << std::endl;
}

double elapsed_us(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count();
}

double median(std::vector<double> v)
{
    if (v.empty())
        return std::nan("");
    std::nth_element(v.begin(), v.begin() + static_cast<long>(v.size() / 2), v.end());
    return v[v.size() / 2];
}

bool is_series(Method m) { return m == Method::SmallSeries || m == Method::LargeSeries; }

} // namespace

std::vector<double> audit_betas(const AuditConfig& config)
{
    if (!config.betas.empty())
        return config.betas;
    std::vector<double> b;
    for (int i = 1; i <= 20; ++i)
        b.push_back(i / 10.0);
    return b;
}

double deviation(double value, double reference)
{
    if (std::fabs(reference) < DBL_MIN)
        return std::fabs(value - reference);
    return std::fabs(value - reference) / std::fabs(reference);
}

double reference(TransformKind kind, double beta, double omega)
{
    if (omega == 0.0)
        return kind == TransformKind::Cosine ? std::tgamma(1.0 / beta) / beta : 0.0;
    if (kind == TransformKind::Cosine && beta == 2.0)
        return 0.5 * std::sqrt(kPi) * std::exp(-0.25 * omega * omega);
    const double sign = (kind == TransformKind::Sine && omega < 0.0) ? -1.0 : 1.0;
    return sign * oracle::reference_value(kind, beta, std::fabs(omega));
}

Report accuracy_contract(const AuditConfig& config)
{
    Report r{1, "accuracy contract", false, ""};
    Worst worst;
    long points = 0;
    long failures = 0;
    std::string first_error;
    for (double beta : audit_betas(config)) {
        for (TransformKind kind : kKinds) {
            for (double omega : contract_grid(kind, beta, config)) {
                ++points;
                try {
                    const double v = evaluate(kind, omega, beta, {config.delta}).value;
                    const double ref = reference(kind, beta, omega);
                    const double d = deviation(v, ref);
                    worst.offer(d, where(kind, beta, omega));
                    if (!(d <= config.contract_tolerance))
                        ++failures;
                } catch (const std::exception& e) {
                    ++failures;
                    if (first_error.empty())
                        first_error = where(kind, beta, omega) + ": " + e.what();
                }
            }
        }
        note(config, "  accuracy: beta=" + sci(beta) + " worst so far " + sci(worst.value));
    }
    r.passed = failures == 0;
    r.detail = "max rel err " + sci(worst.value) + " at " + worst.at + ", limit " + sci(config.contract_tolerance)
               + ", " + std::to_string(failures) + "/" + std::to_string(points) + " points out of contract";
    if (!first_error.empty())
        r.detail += "; first error: " + first_error;
    return r;
}

Report closed_form_anchors(const AuditConfig& config)
{
    Report r{2, "closed-form anchors", false, ""};
    Worst lorentz;
    Worst gauss;
    long failures = 0;
    auto check = [&](Worst& w, TransformKind kind, double beta, double omega, double exact) {
        try {
            const double d = deviation(evaluate(kind, omega, beta, {config.delta}).value, exact);
            w.offer(d, where(kind, beta, omega));
            failures += d <= config.delta ? 0 : 1;
        } catch (const std::exception&) {
            ++failures;
        }
    };
    for (double w : log_grid(1e-3, 1e3, 50)) {
        check(lorentz, TransformKind::Cosine, 1.0, w, 1.0 / (1.0 + w * w));
        check(lorentz, TransformKind::Sine, 1.0, w, w / (1.0 + w * w));
    }
    for (double w : linear_grid(0.0, 8.0, 50))
        check(gauss, TransformKind::Cosine, 2.0, w, 0.5 * std::sqrt(kPi) * std::exp(-0.25 * w * w));
    r.passed = failures == 0;
    r.detail = "Lorentzian max rel err " + sci(lorentz.value) + " at " + lorentz.at + "; Gaussian max rel err "
               + sci(gauss.value) + " at " + gauss.at + "; limit " + sci(config.delta);
    return r;
}

Report truncation_bounds(const AuditConfig& config)
{
    Report r{3, "truncation-bound soundness", false, ""};
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> beta_dist(kBetaMin, kBetaMax);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> n_dist(1, 12);

    long violations[2] = {0, 0};
    long tested[2] = {0, 0};
    double worst_ratio[2] = {0.0, 0.0};
    long attempts = 0;
    for (int expansion = 0; expansion < 2; ++expansion) {
        const bool small = expansion == 0;
        while (tested[expansion] < config.bound_samples && attempts < 200L * config.bound_samples) {
            ++attempts;
            const double beta = beta_dist(rng);
            const TransformKind kind = unit(rng) < 0.5 ? TransformKind::Cosine : TransformKind::Sine;
            if (!small && kind == TransformKind::Cosine && beta == 2.0)
                continue;
            const double wc = characteristic_frequency(kind, beta);
            // small: 1e-2..1 omega_c; large: 1..1e2 omega_c
            const double omega = wc * std::pow(10.0, small ? -2.0 + 2.0 * unit(rng) : 2.0 * unit(rng));
            const int n = n_dist(rng);
            const TruncatedSum s =
                small ? truncated_small_sum(kind, beta, omega, n) : truncated_large_sum(kind, beta, omega, n);
            double ref;
            try {
                ref = reference(kind, beta, omega);
            } catch (const std::exception&) {
                continue;
            }
            // The comparison resolves only bounds well above the reference's own
            // accuracy and the rounding of S_n; smaller bounds are not testable.
            if (!std::isfinite(s.bound) || s.bound < 1e-9 * std::fabs(ref))
                continue;
            ++tested[expansion];
            const double err = std::fabs(s.value - ref);
            worst_ratio[expansion] = std::max(worst_ratio[expansion], err / s.bound);
            if (err > s.bound)
                ++violations[expansion];
        }
    }
    r.passed = violations[0] == 0 && violations[1] == 0 && tested[0] == config.bound_samples
               && tested[1] == config.bound_samples;
    r.detail = "small-omega: " + std::to_string(violations[0]) + "/" + std::to_string(tested[0])
               + " violations, max |S_n - ref|/e_n " + sci(worst_ratio[0]) + "; large-omega: "
               + std::to_string(violations[1]) + "/" + std::to_string(tested[1]) + " violations, max ratio "
               + sci(worst_ratio[1]);
    return r;
}

Report monotonicity(const AuditConfig& config)
{
    Report r{4, "monotonicity and positivity", false, ""};
    Worst defect;
    defect.value = -HUGE_VAL;
    long nonpositive = 0;
    long failures = 0;
    long errors = 0;
    for (double beta : audit_betas(config)) {
        const double wc = characteristic_frequency(TransformKind::Cosine, beta);
        const std::vector<double> grid =
            log_grid(std::min(1e-4, 1e-3 * wc), std::max(1e4, 1e3 * wc), config.monotonic_points);
        double previous = std::nan("");
        for (double omega : grid) {
            double q;
            try {
                q = evaluate(TransformKind::Cosine, omega, beta, {config.delta}).value;
            } catch (const std::exception&) {
                ++errors;
                previous = std::nan("");
                continue;
            }
            // Only the Gaussian (beta = 2) drops below the binary64 range here.
            const bool underflow = beta == 2.0 && 0.5 * std::sqrt(kPi) * std::exp(-0.25 * omega * omega) < DBL_MIN;
            if (!(q > 0.0) && !underflow)
                ++nonpositive;
            if (!std::isnan(previous) && previous > 0.0) {
                const double rise = (q - previous) / previous;
                defect.offer(rise, where(TransformKind::Cosine, beta, omega));
                if (rise > config.delta)
                    ++failures;
            }
            previous = q;
        }
    }
    r.passed = nonpositive == 0 && failures == 0 && errors == 0;
    r.detail = "largest relative step (Q[i+1] - Q[i]) / Q[i] " + sci(defect.value) + " at " + defect.at + " (limit "
               + sci(config.delta) + "), " + std::to_string(failures) + " defects above limit, "
               + std::to_string(nonpositive) + " non-positive values, " + std::to_string(errors) + " errors";
    return r;
}

Report parity_and_scaling(const AuditConfig& config)
{
    Report r{5, "parity and scaling", false, ""};
    std::mt19937_64 rng(config.seed + 5);
    std::uniform_real_distribution<double> beta_dist(kBetaMin, kBetaMax);
    std::uniform_real_distribution<double> log_omega(-4.0, 4.0);
    std::uniform_real_distribution<double> log_tau(-2.0, 2.0);
    long parity_bad = 0;
    long scale_bad = 0;
    for (int i = 0; i < 100; ++i) {
        const double beta = beta_dist(rng);
        const double omega = std::pow(10.0, log_omega(rng));
        const double tau = std::pow(10.0, log_tau(rng));
        const double qp = evaluate(TransformKind::Cosine, omega, beta, {config.delta}).value;
        const double qm = evaluate(TransformKind::Cosine, -omega, beta, {config.delta}).value;
        const double vp = evaluate(TransformKind::Sine, omega, beta, {config.delta}).value;
        const double vm = evaluate(TransformKind::Sine, -omega, beta, {config.delta}).value;
        if (qp != qm || vp != -vm)
            ++parity_bad;
        for (TransformKind kind : kKinds)
            if (scaled(kind, omega, beta, tau) != tau * evaluate(kind, tau * omega, beta).value)
                ++scale_bad;
    }
    r.passed = parity_bad == 0 && scale_bad == 0;
    r.detail = std::to_string(parity_bad) + "/100 parity mismatches, " + std::to_string(scale_bad)
               + "/200 scaling mismatches (exact comparison)";
    return r;
}

Report normalization(const AuditConfig& config)
{
    Report r{6, "normalization by Fourier inversion", false, ""};
    (void)config;
    Worst worst;
    std::string values;
    for (double beta : {0.25, 0.5, 1.0, 1.5, 2.0}) {
        const double wc = characteristic_frequency(TransformKind::Cosine, beta);
        const double v = oracle::fourier_inversion_check(beta, log_grid(1e-8 * wc, 1e8 * wc, 4000));
        worst.offer(std::fabs(v - 1.0), "beta=" + sci(beta));
        char buf[48];
        std::snprintf(buf, sizeof buf, "%s%.6f", values.empty() ? "" : ", ", v);
        values += buf;
    }
    r.passed = worst.value <= 1e-3;
    r.detail = "integrals " + values + " for beta 0.25, 0.5, 1, 1.5, 2; max |I - 1| " + sci(worst.value)
               + " at " + worst.at + ", limit 0.001";
    return r;
}

Report region_map_behavior(const AuditConfig& config)
{
    Report r{7, "region-map behavior", false, ""};
    const RegionTable& table = default_region_table();
    if (table.empty()) {
        r.detail = "no region table loaded";
        return r;
    }

    bool overlap = false;
    double overlap_beta = 0.0;
    double gap_decades = std::nan("");
    for (std::size_t i = 0; i < table.beta.size(); ++i) {
        const double b = table.beta[i];
        if (b >= 1.3 - 1e-9 && b <= 1.5 + 1e-9
            && table.at(i, RegionColumn::SineSmallUpper) >= table.at(i, RegionColumn::SineLargeLower) && !overlap) {
            overlap = true;
            overlap_beta = b;
        }
        if (std::fabs(b - 0.2) < 1e-9)
            gap_decades = (table.at(i, RegionColumn::CosineLargeLower) - table.at(i, RegionColumn::CosineSmallUpper))
                          / std::log2(10.0);
    }

    // Validation grid: beta step 0.01, 64 log-spaced omega in [1e-3, 1e3] omega_c.
    long predicted = 0;
    long mispredicted = 0;
    long recovered = 0;
    std::string unrecovered;
    for (int ib = 10; ib <= 200; ++ib) {
        const double beta = ib / 100.0;
        for (TransformKind kind : kKinds) {
            const double wc = characteristic_frequency(kind, beta);
            for (double omega : log_grid(1e-3 * wc, 1e3 * wc, 64)) {
                const MethodHint hint = predict_method(kind, beta, omega, table);
                if (hint == MethodHint::Quadrature)
                    continue;
                ++predicted;
                const SeriesParams p{beta, omega, config.delta};
                const bool ok = hint == MethodHint::TrySmallSeries ? small_omega_sum(kind, p).ok()
                                                                   : large_omega_sum(kind, p).ok();
                if (ok)
                    continue;
                ++mispredicted;
                try {
                    const EvalResult e = evaluate(kind, omega, beta, {config.delta});
                    if (deviation(e.value, reference(kind, beta, omega)) <= config.delta)
                        ++recovered;
                    else if (unrecovered.empty())
                        unrecovered = where(kind, beta, omega);
                } catch (const std::exception& ex) {
                    if (unrecovered.empty())
                        unrecovered = where(kind, beta, omega) + " (" + ex.what() + ")";
                }
            }
        }
    }
    const double soundness = predicted == 0 ? 0.0 : 1.0 - static_cast<double>(mispredicted) / predicted;
    r.passed = overlap && gap_decades > 1.0 && recovered == mispredicted;
    r.detail = std::string("sine overlap near 1.4: ") + (overlap ? "yes (beta=" + sci(overlap_beta) + ")" : "no")
               + "; cosine gap at beta=0.2: " + sci(gap_decades) + " decades; series predictions "
               + std::to_string(predicted) + ", succeeded " + sci(100.0 * soundness) + "%, mispredictions recovered "
               + std::to_string(recovered) + "/" + std::to_string(mispredicted);
    if (!unrecovered.empty())
        r.detail += "; first unrecovered: " + unrecovered;
    return r;
}

Report chi_insensitivity(const AuditConfig& config)
{
    Report r{8, "chi-insensitivity", false, ""};
    std::mt19937_64 rng(config.seed + 8);
    std::uniform_real_distribution<double> beta_dist(kBetaMin, kBetaMax);
    std::uniform_real_distribution<double> log_scale(-3.0, 3.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const RegionTable& table = default_region_table();

    Worst worst;
    int points = 0;
    int both = 0;
    long attempts = 0;
    while (points < config.chi_points && attempts < 100L * config.chi_points) {
        ++attempts;
        const double beta = beta_dist(rng);
        const TransformKind kind = unit(rng) < 0.5 ? TransformKind::Cosine : TransformKind::Sine;
        const double omega = characteristic_frequency(kind, beta) * std::pow(10.0, log_scale(rng));
        if (predict_method(kind, beta, omega, table) != MethodHint::Quadrature)
            continue;
        ++points;
        const QuadratureResult a = de_transform(kind, beta, omega, {config.delta, ChiKind::Chi1, std::nullopt});
        const QuadratureResult b = de_transform(kind, beta, omega, {config.delta, ChiKind::Chi2, std::nullopt});
        if (!a.converged || !b.converged)
            continue;
        ++both;
        worst.offer(deviation(a.value, b.value), where(kind, beta, omega));
    }
    r.passed = points == config.chi_points && both > 0 && worst.value <= 2.0 * config.delta;
    r.detail = "max Chi1/Chi2 rel difference " + sci(worst.value) + " at " + worst.at + " (limit "
               + sci(2.0 * config.delta) + ") over " + std::to_string(both) + " of " + std::to_string(points)
               + " quadrature-path points where both converge";
    return r;
}

Report performance(const AuditConfig& config)
{
    Report r{9, "performance", false, ""};
    int max_evals = 0;
    std::string max_at = "-";
    long over = 0;
    long calls = 0;
    std::vector<double> quad_us;
    std::vector<double> series_us;
    for (double beta : audit_betas(config)) {
        for (TransformKind kind : kKinds) {
            for (double omega : contract_grid(kind, beta, config)) {
                try {
                    const auto t0 = std::chrono::steady_clock::now();
                    const EvalResult e = evaluate(kind, omega, beta, {config.delta});
                    const double us = elapsed_us(t0);
                    ++calls;
                    if (e.evaluations > max_evals) {
                        max_evals = e.evaluations;
                        max_at = where(kind, beta, omega);
                    }
                    if (e.evaluations > 4000)
                        ++over;
                    if (is_series(e.method))
                        series_us.push_back(us);
                    else if (e.method != Method::ClosedForm)
                        quad_us.push_back(us);
                } catch (const std::exception&) {
                    ++over;
                }
            }
        }
    }
    const double mq = median(quad_us);
    const double ms = median(series_us);
    r.passed = over == 0;
    r.detail = "max integrand evaluations " + std::to_string(max_evals) + " at " + max_at + " (limit 4000, "
               + std::to_string(over) + "/" + std::to_string(calls) + " over); median latency quadrature "
               + sci(mq) + " us (soft target 1000, " + (mq < 1000.0 ? "met" : "missed") + "), series " + sci(ms)
               + " us (soft target 10, " + (ms < 10.0 ? "met" : "missed") + ")";
    return r;
}

Report crossover_curve(const AuditConfig& config)
{
    Report r{10, "crossover curve", false, ""};
    (void)config;
    const CrossoverPair one = crossover(1.0);
    const bool unit = std::fabs(one.omega_q - 1.0) <= kWorkingEpsilon && std::fabs(one.omega_v - 1.0) <= kWorkingEpsilon;

    const std::vector<double> grid = default_beta_grid(0.01);
    std::string q_break;
    std::string v_break;
    CrossoverPair previous = crossover(grid.front());
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const CrossoverPair c = crossover(grid[i]);
        if (!(c.omega_q > previous.omega_q) && q_break.empty())
            q_break = "omega_Q stops increasing at beta=" + sci(grid[i]) + " (" + sci(c.omega_q) + " after "
                      + sci(previous.omega_q) + ")";
        if (!(c.omega_v > previous.omega_v) && v_break.empty())
            v_break = "omega_V stops increasing at beta=" + sci(grid[i]);
        previous = c;
    }

    std::string leading;
    for (double beta : grid) {
        if (beta > 0.3 + 1e-12)
            break;
        const double target = std::pow(beta, 1.0 / beta);
        const CrossoverPair c = crossover(beta);
        for (double w : {c.omega_q, c.omega_v}) {
            const double ratio = w / target;
            if ((ratio > 3.0 || ratio < 1.0 / 3.0) && leading.empty())
                leading = "beta=" + sci(beta) + ": " + (w == c.omega_q ? "omega_Q" : "omega_V") + "/beta^(1/beta) = "
                          + sci(ratio);
        }
    }
    r.passed = unit && q_break.empty() && v_break.empty() && leading.empty();
    r.detail = std::string("omega_Q(1)=omega_V(1)=1: ") + (unit ? "yes" : "no") + "; monotone: "
               + (q_break.empty() && v_break.empty() ? "yes" : q_break + (v_break.empty() ? "" : "; " + v_break))
               + "; factor-3 band for beta<=0.3: " + (leading.empty() ? "yes" : "no, first miss " + leading);
    return r;
}

Report method_agreement(const AuditConfig& config)
{
    Report r{0, "method agreement", false, ""};
    Worst worst;
    long pairs = 0;
    for (double beta : audit_betas(config)) {
        for (TransformKind kind : kKinds) {
            const double wc = characteristic_frequency(kind, beta);
            for (double omega : log_grid(1e-3 * wc, 1e3 * wc, 64)) {
                std::vector<double> values;
                const SeriesParams p{beta, omega, config.delta};
                if (const SeriesResult s = small_omega_sum(kind, p); s.ok())
                    values.push_back(s.value);
                if (const SeriesResult s = large_omega_sum(kind, p); s.ok())
                    values.push_back(s.value);
                for (Integrand g : {Integrand::Plain, Integrand::GaussSubtracted}) {
                    // the subtracted integrand is a dispatch path only for Q with beta > 1
                    if (g == Integrand::GaussSubtracted && (kind == TransformKind::Sine || beta <= 1.0))
                        continue;
                    const QuadratureResult q = de_transform(kind, beta, omega, {config.delta, ChiKind::Chi1, g});
                    if (q.converged)
                        values.push_back(q.value);
                }
                for (std::size_t i = 0; i < values.size(); ++i)
                    for (std::size_t j = i + 1; j < values.size(); ++j) {
                        ++pairs;
                        worst.offer(deviation(values[i], values[j]), where(kind, beta, omega));
                    }
            }
        }
    }
    r.passed = worst.value <= 2.0 * config.delta;
    r.detail = "worst disagreement " + sci(worst.value) + " at " + worst.at + " over " + std::to_string(pairs)
               + " method pairs (limit " + sci(2.0 * config.delta) + ")";
    return r;
}

std::vector<Report> run_all(const AuditConfig& config)
{
    using Check = Report (*)(const AuditConfig&);
    const Check checks[] = {accuracy_contract,    closed_form_anchors, truncation_bounds, monotonicity,
                            parity_and_scaling,   normalization,       region_map_behavior, chi_insensitivity,
                            performance,          crossover_curve,     method_agreement};
    std::vector<Report> out;
    for (Check c : checks) {
        out.push_back(c(config));
        note(config, format(out.back()));
    }
    return out;
}

std::string format(const Report& report)
{
    std::ostringstream s;
    s << (report.passed ? "PASS" : "FAIL") << " [" << (report.id > 0 ? std::to_string(report.id) : "-") << "] "
      << report.name << ": " << report.detail;
    return s.str();
}

} // namespace kww::audit
