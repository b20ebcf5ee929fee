#pragma once

#include <optional>
#include <string_view>

#include "kww/types.hpp"

namespace kww {

enum class SeriesFailureReason {
    TermOverflow,            // a term exceeded the largest binary64 value
    TermUnderflow,           // a term fell below the smallest normalized value
    DivergesBeforeAccuracy,  // asymptotic terms grew before delta was reached
    CancellationLoss,        // epsilon * max|s_k| >= delta * |S_n|
    NotApplicable,           // expansion identically zero (cosine, beta = 2, large omega)
};

std::string_view to_string(SeriesFailureReason reason);

struct SeriesFailure {
    SeriesFailureReason reason;
    int terms_consumed = 0;
};

struct SeriesParams {
    double beta;
    double omega;
    double delta = kDefaultDelta;
    double epsilon = kWorkingEpsilon;
};

/// Outcome of an incremental series summation. On success `bound` is the
/// certified relative error, max(e_n, epsilon * z_n) / |S_n|.
struct SeriesResult {
    double value = 0.0;
    int terms = 0;
    double bound = 0.0;
    std::optional<SeriesFailure> failure;

    bool ok() const { return !failure.has_value(); }
};

/// A partial sum S_n together with the rigorous truncation bound e_n.
struct TruncatedSum {
    double value;
    double bound;
};

inline constexpr int kMaxSeriesTerms = 512;

/// ln A_k with A_k = Gamma((k+1)/beta) / Gamma(k+1).
double log_amplitude_small(int k, double beta);

/// ln B_k with B_k = Gamma(k*beta+1) / Gamma(k+1).
double log_amplitude_large(int k, double beta);

/// A_k, or nullopt if it does not fit into binary64.
std::optional<double> amplitude_small(int k, double beta);

/// B_k, or nullopt if it does not fit into binary64.
std::optional<double> amplitude_large(int k, double beta);

/// sin(k*beta*pi/2) and cos(k*beta*pi/2) for the large-omega prefactors. For
/// beta > 1 these go through the complementary exponent 2 - beta, which keeps
/// full relative accuracy as beta approaches 2.
double large_sine_factor(int k, double beta);
double large_cosine_factor(int k, double beta);

/// Power series in omega (Taylor expansion of exp(i omega t)).
SeriesResult small_omega_sum(TransformKind kind, const SeriesParams& params);

/// Series in omega^-beta (expansion of exp(-t^beta)); requires omega > 0.
SeriesResult large_omega_sum(TransformKind kind, const SeriesParams& params);

/// First n terms of the small-omega series with the bound on |S - S_n|.
TruncatedSum truncated_small_sum(TransformKind kind, double beta, double omega, int n);

/// First n terms of the large-omega series with the bound on |S - S_n|.
TruncatedSum truncated_large_sum(TransformKind kind, double beta, double omega, int n);

} // namespace kww
