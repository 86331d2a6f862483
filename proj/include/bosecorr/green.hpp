#pragma once

#include <string>
#include <string_view>

#include "bosecorr/scaled.hpp"

namespace bosecorr {

/// A point (x, tau) of the imaginary-time slab [-R_c, R_c] x [0, beta].
struct SpacetimePoint {
    double x = 0.0;
    double tau = 0.0;
};

enum class GreenMethod {
    HomogSeries,
    HomogAsymptHighT,
    HomogAsymptLowT,
    TrappedSpectral,
    TrappedSeries,
    TrappedAsymptHighT,
    TrappedAsymptLowT,
    ZeroModeClosedForm,
    Oracle,
};

std::string_view to_string(GreenMethod m) noexcept;

/// One Green-function value plus the bookkeeping every route carries.
struct GreenValue {
    cplx value{0.0, 0.0};
    GreenMethod method = GreenMethod::HomogSeries;
    /// Value is only defined up to an additive constant; compare through green_difference.
    bool constant_undetermined = false;
    /// Coincident arguments of a log-divergent expression; value is meaningless.
    bool divergent = false;
    double trunc_err = 0.0;     ///< absolute truncation estimate, 0 for closed forms
    double window_slack = 0.0;  ///< max(ratio / factor) over the validity inequalities; <= 1 inside
    /// Imaginary additive part that was split off as a global phase (trapped spectral route).
    cplx phase_term{0.0, 0.0};
    double n0_drift = 0.0;      ///< |G(2 n0) - G(n0)| for the Legendre series route
    std::string notice;
};

/// G(pair1) - G(pair2). Both values must come from the same method; the
/// undetermined additive constant cancels. Throws UsageError on a method
/// mismatch and DivergenceError if either value is divergent.
double green_difference(const GreenValue& first, const GreenValue& second);

/// Numeric meaning of "much less than": a << b is accepted when a <= factor * b.
struct WindowFactors {
    double much_less = 0.1;
};

}  // namespace bosecorr
