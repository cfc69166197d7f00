#ifndef ABC_CONTRAST_H
#define ABC_CONTRAST_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum AbcStatus {
  ABC_STATUS_OK = 0,
  ABC_STATUS_INVALID_ARGUMENT = 1,
  ABC_STATUS_NULL_POINTER = 2,
  /**
   * Detection needs `Im beta > 0`.
   */
  ABC_STATUS_UNPHYSICAL = 3,
  ABC_STATUS_SINGULAR = 4,
  ABC_STATUS_DOMAIN = 5,
  ABC_STATUS_NON_CONVERGENCE = 6,
  ABC_STATUS_OVERFLOW = 7,
  ABC_STATUS_UNDER_RESOLVED = 8,
  ABC_STATUS_UNSTABLE = 9,
  /**
   * A Rust panic was caught at the boundary.
   */
  ABC_STATUS_INTERNAL = 10,
} AbcStatus;

/**
 * Opaque 1D packet.
 */
typedef struct AbcPacket1D AbcPacket1D;

/**
 * Opaque 2D Gaussian packet.
 */
typedef struct AbcPacket2D AbcPacket2D;

/**
 * Opaque quadrature settings.
 */
typedef struct AbcQuadrature AbcQuadrature;

typedef struct AbcComplex {
  double re;
  double im;
} AbcComplex;

/**
 * A probability; `value` is `raw` clamped into `[0, 1]` when the excursion
 * is within quadrature noise.
 */
typedef struct AbcProbability {
  double value;
  double raw;
  double error;
} AbcProbability;

typedef struct AbcContrastReport {
  double p_st;
  double p_abc;
  double contrast;
  double quadrature_error;
} AbcContrastReport;

typedef struct AbcSectionTotals {
  double vertical;
  double horizontal;
  double error;
} AbcSectionTotals;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on the calling thread, or an empty string.
 * The pointer stays valid until the next failing call on this thread.
 */
const char *abc_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *abc_version(void);

/**
 * Quadrature settings with the given tolerances and default cutoffs.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum AbcStatus abc_quadrature_new(double abs_tol, double rel_tol, struct AbcQuadrature **out);

/**
 * # Safety
 * `q` is null or a handle from [`abc_quadrature_new`] not yet freed.
 */
void abc_quadrature_free(struct AbcQuadrature *q);

/**
 * `e^{i k0 x} G(x)`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum AbcStatus abc_packet1d_gaussian(double k0, struct AbcPacket1D **out);

/**
 * Normalized superposition of Gaussians with momenta `k0` and `k1`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum AbcStatus abc_packet1d_superposition(double k0, double k1, struct AbcPacket1D **out);

/**
 * # Safety
 * `p` is null or a handle from this library not yet freed.
 */
void abc_packet1d_free(struct AbcPacket1D *p);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum AbcStatus abc_packet2d_new(double k0x, double k0y, struct AbcPacket2D **out);

/**
 * # Safety
 * `p` is null or a handle from [`abc_packet2d_new`] not yet freed.
 */
void abc_packet2d_free(struct AbcPacket2D *p);

/**
 * Complementary error function of a real argument.
 */
double abc_erfc(double x);

/**
 * Complementary error function of a complex argument.
 */
struct AbcComplex abc_erfc_complex(struct AbcComplex z);

/**
 * Reflection amplitude `(k + i beta) / (k - i beta)`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum AbcStatus abc_rho_beta(double k, struct AbcComplex beta, struct AbcComplex *out);

/**
 * Closed-form Gaussian solution `psi_t(x)` for the Robin screen at `l`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum AbcStatus abc_psi_tg(double x,
                          double t,
                          double k0,
                          struct AbcComplex beta,
                          double l,
                          struct AbcComplex *out);

/**
 * Scattering-theory probability of crossing the screen.
 *
 * # Safety
 * `packet` must be a live handle; `quad` a live handle or null; `out` valid for writes.
 */
enum AbcStatus abc_p_st(const struct AbcPacket1D *packet,
                        const struct AbcQuadrature *quad,
                        struct AbcProbability *out);

/**
 * Absorbed probability from the time integral of the boundary flux.
 *
 * # Safety
 * As for [`abc_p_st`].
 */
enum AbcStatus abc_p_abc_time(const struct AbcPacket1D *packet,
                              struct AbcComplex beta,
                              double l,
                              const struct AbcQuadrature *quad,
                              struct AbcProbability *out);

/**
 * Absorbed probability from its momentum-space form (`Re beta <= 0`).
 *
 * # Safety
 * As for [`abc_p_st`].
 */
enum AbcStatus abc_p_abc_momentum(const struct AbcPacket1D *packet,
                                  struct AbcComplex beta,
                                  double l,
                                  const struct AbcQuadrature *quad,
                                  struct AbcProbability *out);

/**
 * `P_ST - P_ABC(l)`.
 *
 * # Safety
 * As for [`abc_p_st`].
 */
enum AbcStatus abc_contrast_l(const struct AbcPacket1D *packet,
                              struct AbcComplex beta,
                              double l,
                              const struct AbcQuadrature *quad,
                              struct AbcContrastReport *out);

/**
 * Far-field contrast.
 *
 * # Safety
 * As for [`abc_p_st`].
 */
enum AbcStatus abc_contrast_infinity(const struct AbcPacket1D *packet,
                                     struct AbcComplex beta,
                                     const struct AbcQuadrature *quad,
                                     struct AbcProbability *out);

/**
 * Laplace-method estimate of the far-field contrast of a superposition.
 */
double abc_contrast_laplace(double k0, double k1, struct AbcComplex beta);

/**
 * Scattering-theory angular density.
 *
 * # Safety
 * `packet` must be a live handle; `quad` a live handle or null; `out` valid for writes.
 */
enum AbcStatus abc_dp_st_dtheta(const struct AbcPacket2D *packet,
                                double theta,
                                const struct AbcQuadrature *quad,
                                double *out);

/**
 * Exact far-field ABC angular density for a flat screen inclined at `alpha`.
 *
 * # Safety
 * As for [`abc_dp_st_dtheta`].
 */
enum AbcStatus abc_dp_abc_farfield(const struct AbcPacket2D *packet,
                                   double theta,
                                   struct AbcComplex beta,
                                   double alpha,
                                   const struct AbcQuadrature *quad,
                                   double *out);

/**
 * Finite-distance ABC angular density on the inclined screen.
 *
 * # Safety
 * As for [`abc_dp_st_dtheta`].
 */
enum AbcStatus abc_dp_abc_inclined(const struct AbcPacket2D *packet,
                                   double theta,
                                   struct AbcComplex beta,
                                   double alpha,
                                   double l,
                                   const struct AbcQuadrature *quad,
                                   double *out);

/**
 * Finite-distance ABC angular density on the L-shaped screen.
 *
 * # Safety
 * As for [`abc_dp_st_dtheta`].
 */
enum AbcStatus abc_dp_abc_lshaped(const struct AbcPacket2D *packet,
                                  double theta,
                                  struct AbcComplex beta,
                                  double l,
                                  const struct AbcQuadrature *quad,
                                  double *out);

/**
 * Detection probabilities on the vertical and horizontal edges of the
 * L-shaped screen.
 *
 * # Safety
 * As for [`abc_dp_st_dtheta`].
 */
enum AbcStatus abc_section_totals_lshaped(const struct AbcPacket2D *packet,
                                          struct AbcComplex beta,
                                          double l,
                                          const struct AbcQuadrature *quad,
                                          struct AbcSectionTotals *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ABC_CONTRAST_H */
