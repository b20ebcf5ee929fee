#pragma once

#include <vector>

#include "kww/types.hpp"

// Reference values for validation. Shares no numerical code with the
// production paths: the transform integral is split at the zeros of the
// trigonometric factor, every lobe is integrated by adaptive Gauss-Legendre
// in 113-bit floating point, and the alternating lobe series is summed with
// repeated averaging (Euler transform).
namespace kww::oracle {

struct OracleRequest {
    TransformKind kind = TransformKind::Cosine;
    double beta = 1.0;
    double omega = 1.0;   // > 0
    double target = 1e-10;  // relative
};

struct OracleResult {
    double value;
    int lobes;
    long evaluations;
};

/// Throws std::runtime_error when the lobe series fails to settle.
OracleResult reference_transform(const OracleRequest& request);

inline double reference_value(TransformKind kind, double beta, double omega, double target = 1e-10)
{
    return reference_transform({kind, beta, omega, target}).value;
}

/// (1/pi) times the integral of Q_beta over the real line, from production
/// values on an ascending positive `grid` (log-trapezoid) with analytic
/// continuation to 0 and a power-law tail. Equals f_beta(0) = 1.
double fourier_inversion_check(double beta, const std::vector<double>& grid);

} // namespace kww::oracle
