#include "kww/kww.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>

#include "kww/kww.h"

namespace kww {

namespace {

RegionTable load_default_table()
{
    const char* path = std::getenv("KWW_REGION_TABLE");
    if (path == nullptr || *path == '\0')
        return embedded_region_table();
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error(std::string("KWW_REGION_TABLE: cannot open ") + path);
    return parse_region_table(in);
}

EvalResult from_series(const SeriesResult& r, Method method, MethodHint hint)
{
    EvalResult out;
    out.value = r.value;
    out.method = method;
    out.certified_bound = r.bound;
    out.predicted = hint;
    return out;
}

EvalResult closed_form(double value, MethodHint hint)
{
    EvalResult out;
    out.value = value;
    out.method = Method::ClosedForm;
    out.certified_bound = kWorkingEpsilon;
    out.predicted = hint;
    return out;
}

EvalResult evaluate_positive(TransformKind kind, double omega, double beta, const EvalOptions& opt)
{
    if (omega == 0.0)
        return closed_form(kind == TransformKind::Cosine ? std::tgamma(1.0 / beta) / beta : 0.0,
                           MethodHint::TrySmallSeries);
    if (kind == TransformKind::Cosine && beta == 2.0)
        return closed_form(gaussian_cosine_transform(omega), MethodHint::Quadrature);

    const RegionTable& table = opt.table != nullptr ? *opt.table : default_region_table();
    const MethodHint hint = predict_method(kind, beta, omega, table);
    const SeriesParams params{beta, omega, opt.delta};

    bool tried_small = false;
    bool tried_large = false;
    if (hint == MethodHint::TrySmallSeries) {
        tried_small = true;
        if (const SeriesResult r = small_omega_sum(kind, params); r.ok())
            return from_series(r, Method::SmallSeries, hint);
    } else if (hint == MethodHint::TryLargeSeries) {
        tried_large = true;
        if (const SeriesResult r = large_omega_sum(kind, params); r.ok())
            return from_series(r, Method::LargeSeries, hint);
    }

    const QuadratureResult q = de_transform(kind, beta, omega, {opt.delta, opt.chi, std::nullopt});
    if (q.converged) {
        EvalResult out;
        out.value = q.value;
        out.method = q.subtracted ? Method::QuadratureSubtracted : Method::Quadrature;
        out.certified_bound = std::max(q.relative_change, kWorkingEpsilon);
        out.predicted = hint;
        out.evaluations = q.evaluations;
        return out;
    }

    // The table only says where a series is likely to work; try the others.
    if (!tried_small)
        if (const SeriesResult r = small_omega_sum(kind, params); r.ok())
            return from_series(r, Method::SmallSeries, hint);
    if (!tried_large)
        if (const SeriesResult r = large_omega_sum(kind, params); r.ok())
            return from_series(r, Method::LargeSeries, hint);

    throw Error(ErrorCode::EvaluationFailed,
                std::string("kww: no method reached the accuracy target (") + std::string(to_string(kind))
                    + ", beta=" + std::to_string(beta) + ", omega=" + std::to_string(omega)
                    + ", quadrature: " + std::string(to_string(*q.failure)) + ")");
}

} // namespace

std::string_view to_string(Method method)
{
    switch (method) {
    case Method::SmallSeries: return "small-series";
    case Method::LargeSeries: return "large-series";
    case Method::Quadrature: return "quadrature";
    case Method::QuadratureSubtracted: return "quadrature-subtracted";
    case Method::ClosedForm: return "closed-form";
    }
    return "unknown";
}

const RegionTable& default_region_table()
{
    static const RegionTable table = load_default_table();
    return table;
}

EvalResult evaluate(TransformKind kind, double omega, double beta, const EvalOptions& options)
{
    if (!beta_in_range(beta))
        throw Error(ErrorCode::BetaOutOfRange, "kww: beta must lie in [0.1, 2]");
    if (!std::isfinite(omega))
        throw Error(ErrorCode::EvaluationFailed, "kww: omega must be finite");

    // Q is even and V is odd in omega.
    EvalResult r = evaluate_positive(kind, std::fabs(omega), beta, options);
    if (omega < 0.0 && kind == TransformKind::Sine)
        r.value = -r.value;
    return r;
}

double scaled(TransformKind kind, double omega, double beta, double tau)
{
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw std::invalid_argument("kww: tau must be finite and positive");
    return tau * evaluate(kind, tau * omega, beta).value;
}

std::complex<double> susceptibility(double omega, double beta, double tau)
{
    const double q = scaled(TransformKind::Cosine, omega, beta, tau);
    const double v = scaled(TransformKind::Sine, omega, beta, tau);
    return {1.0 - omega * v, omega * q};
}

} // namespace kww

namespace {

double value_or_nan(kww::TransformKind kind, double omega, double beta)
{
    try {
        return kww::evaluate(kind, omega, beta).value;
    } catch (const std::exception&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

} // namespace

extern "C" double kww_cos(double omega, double beta) { return value_or_nan(kww::TransformKind::Cosine, omega, beta); }

extern "C" double kww_sin(double omega, double beta) { return value_or_nan(kww::TransformKind::Sine, omega, beta); }

extern "C" float kww_cosf(float omega, float beta) { return static_cast<float>(kww_cos(omega, beta)); }

extern "C" float kww_sinf(float omega, float beta) { return static_cast<float>(kww_sin(omega, beta)); }
