#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include "kww/de_quadrature.hpp"
#include "kww/region_map.hpp"
#include "kww/series.hpp"
#include "kww/types.hpp"

namespace kww {

enum class Method { SmallSeries, LargeSeries, Quadrature, QuadratureSubtracted, ClosedForm };

std::string_view to_string(Method method);

/// A transform value and how it was obtained. `method` names the producer
/// actually used, after any fallback; `predicted` is what the region table
/// suggested.
struct EvalResult {
    double value = 0.0;
    Method method = Method::ClosedForm;
    double certified_bound = 0.0;
    MethodHint predicted = MethodHint::Quadrature;
    int evaluations = 0;  // integrand evaluations spent in quadrature
};

enum class ErrorCode { BetaOutOfRange, EvaluationFailed };

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

struct EvalOptions {
    double delta = kDefaultDelta;
    // nullptr selects default_region_table()
    const RegionTable* table = nullptr;
    ChiKind chi = ChiKind::Chi1;
};

/// Q_beta(omega) (cosine) or V_beta(omega) (sine) of f(t) = exp(-t^beta) for
/// 0.1 <= beta <= 2 and any finite omega, to relative accuracy delta.
/// Throws kww::Error.
EvalResult evaluate(TransformKind kind, double omega, double beta, const EvalOptions& options = {});

inline EvalResult cosine(double omega, double beta) { return evaluate(TransformKind::Cosine, omega, beta); }
inline EvalResult sine(double omega, double beta) { return evaluate(TransformKind::Sine, omega, beta); }

/// Transform of exp(-(t/tau)^beta): tau * F(tau * omega).
double scaled(TransformKind kind, double omega, double beta, double tau);

/// Dynamic susceptibility chi(omega) = 1 + i omega F(omega) for the relaxation
/// function exp(-(t/tau)^beta), i.e. Re = 1 - omega V, Im = omega Q.
std::complex<double> susceptibility(double omega, double beta, double tau);

/// The embedded table, or the file named by KWW_REGION_TABLE when set.
const RegionTable& default_region_table();

} // namespace kww
