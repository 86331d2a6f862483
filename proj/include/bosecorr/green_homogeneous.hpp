#pragma once

#include "bosecorr/green.hpp"
#include "bosecorr/model.hpp"

namespace bosecorr {

enum class TailMode {
    None,
    /// Adds the frequency tail |l| > l_max of every wavenumber line from the
    /// Bernoulli-polynomial sums of cos(2 pi l theta)/l^(2m), m = 1..3.
    Bernoulli,
};

struct HomogSeriesControl {
    long l_max = 64;
    long n_max = 2000;
    TailMode tail = TailMode::Bernoulli;
};

/// Regularized double Fourier series of the homogeneous problem,
///   -(g / (2 beta R_c)) sum_{l,n} e^{i w dtau + i k dx} / (w^2 + E_k^2),
/// w = 2 pi l / beta, k = pi n / R_c, E_k = hbar v k, without the (0,0) term.
/// The sum runs over l = 0..l_max outer, n = 0..n_max inner with +-l and +-n
/// paired, so each partial sum is real and the order is fixed.
GreenValue homog_series(SpacetimePoint a, SpacetimePoint b, const PhysicalParams& p,
                        const DerivedScales& d, const HomogSeriesControl& ctl = {});

/// High-temperature closed form, without its additive constant:
///   (g / 2 pi hbar v) ln|2 sinh(pi (|dx| + i hbar v dtau) / (hbar beta v))| - (g / 4 beta R_c) dx^2 / (hbar v)^2.
GreenValue homog_asymptotic_highT(SpacetimePoint a, SpacetimePoint b, const PhysicalParams& p,
                                  const DerivedScales& d);

/// Low-temperature closed form, without its additive constant:
///   (g / 2 pi hbar v) ln|2 sinh(i pi (|dx| + i hbar v dtau) / (2 R_c))| - (g / 4 beta R_c) dtau^2.
GreenValue homog_asymptotic_lowT(SpacetimePoint a, SpacetimePoint b, const PhysicalParams& p,
                                 const DerivedScales& d);

/// ln|2 sinh z| for any z with sinh z != 0, without overflow.
double log_abs_2sinh(cplx z);

/// sum_{l>=1} cos(2 pi l theta) / l^(2m) for m = 1, 2, 3 (Bernoulli polynomials).
double bernoulli_cos_sum(int m, double theta);

}  // namespace bosecorr
