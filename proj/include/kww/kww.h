/* C entry points. All return NaN when beta lies outside [0.1, 2] or the
 * evaluation fails. */
#ifndef KWW_KWW_H
#define KWW_KWW_H

#ifdef __cplusplus
extern "C" {
#endif

/* Q_beta(omega), cosine transform of exp(-t^beta). */
double kww_cos(double omega, double beta);

/* V_beta(omega), sine transform of exp(-t^beta). */
double kww_sin(double omega, double beta);

/* Single-precision variants; the accuracy is single precision either way. */
float kww_cosf(float omega, float beta);
float kww_sinf(float omega, float beta);

#ifdef __cplusplus
}
#endif

#endif
