#include "bosecorr/green.hpp"

#include <string>

#include "bosecorr/errors.hpp"

namespace bosecorr {

std::string_view to_string(GreenMethod m) noexcept {
    switch (m) {
        case GreenMethod::HomogSeries: return "homog_series";
        case GreenMethod::HomogAsymptHighT: return "homog_asymptotic_highT";
        case GreenMethod::HomogAsymptLowT: return "homog_asymptotic_lowT";
        case GreenMethod::TrappedSpectral: return "matsubara_assemble";
        case GreenMethod::TrappedSeries: return "lowT_legendre_series";
        case GreenMethod::TrappedAsymptHighT: return "asympt_green_highT";
        case GreenMethod::TrappedAsymptLowT: return "asympt_green_lowT";
        case GreenMethod::ZeroModeClosedForm: return "closed_form_zero_mode";
        case GreenMethod::Oracle: return "oracle";
    }
    return "unknown";
}

double green_difference(const GreenValue& first, const GreenValue& second) {
    if (first.method != second.method) {
        throw UsageError("green_difference: method mismatch (" + std::string(to_string(first.method)) +
                         " vs " + std::string(to_string(second.method)) + ")");
    }
    if (first.divergent || second.divergent) {
        throw DivergenceError("green_difference: one of the values is divergent (coincident points)");
    }
    return first.value.real() - second.value.real();
}

}  // namespace bosecorr
