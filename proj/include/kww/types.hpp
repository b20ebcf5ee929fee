#pragma once

#include <string_view>

namespace kww {

/// Selects the real (cosine, Q) or imaginary (sine, V) part of the one-sided
/// Fourier transform of exp(-t^beta).
enum class TransformKind { Cosine, Sine };

/// Single-precision target accuracy, 2^-23.
inline constexpr double kDefaultDelta = 0x1p-23;

/// Accuracy of the binary64 working type, 2^-52.
inline constexpr double kWorkingEpsilon = 0x1p-52;

inline constexpr double kBetaMin = 0.1;
inline constexpr double kBetaMax = 2.0;

inline constexpr double kPi = 3.14159265358979323846;

inline bool beta_in_range(double beta) { return beta >= kBetaMin && beta <= kBetaMax; }

constexpr std::string_view to_string(TransformKind kind)
{
    return kind == TransformKind::Cosine ? "cos" : "sin";
}

} // namespace kww
