#pragma once

// Stability-preserving changes of variables between weighted Lane-Emden
// problems:
//   kelvin  w(y) = |x|^{N-2+theta} v(x),  y = x/|x|^2
//   dual    z(y) = v(x),                  y = x/|x|^2
//   sigma   v(x) = |x|^sigma u(x)          (Hardy-potential form <-> weighted form)

#include "morselab/params.hpp"
#include "morselab/radial.hpp"

#include <string_view>

namespace morse {

enum class TransformKind { kelvin, dual, sigma, sigma_inverse };
enum class DomainMap { identity, inversion };

std::string_view to_string(TransformKind kind) noexcept;
std::string_view to_string(DomainMap map) noexcept;
/// Throws InvalidInput for unknown names.
TransformKind transform_kind_from_string(std::string_view name);

struct TransformedParams {
    ProblemParams params;
    TransformKind kind = TransformKind::kelvin;
    DomainMap domain_map = DomainMap::identity;
    /// Kelvin only: image tau > -2, which holds iff p > (N'+tau)/(N'-2).
    bool image_tau_above_minus_two = false;
};

/// Image l is beta = (N-2+theta)(p-1) - (4+l-2theta); theta, N, p unchanged.
TransformedParams kelvin_params(const ProblemParams& params);

/// theta -> 4-2N-theta, l -> -2N-l. N'+N'_image = 4 and tau+tau_image = -4.
TransformedParams dual_params(const ProblemParams& params);

/// theta = -2 sigma, l = alpha - sigma (p+1).
TransformedParams sigma_params(const SchrodingerParams& s);

/// Inverse of sigma_params: sigma = -theta/2, ell = (N-2) sigma - sigma^2,
/// alpha = l + sigma (p+1). Requires N' > 2 so that sigma lies on the minus
/// branch.
SchrodingerParams sigma_inverse(const ProblemParams& params);

/// w(s) = s^{-(N-2+theta)} v(1/s) on the inverted grid.
RadialFunction kelvin_apply(const RadialFunction& v, const ProblemParams& params);

/// z(s) = v(1/s) on the inverted grid.
RadialFunction dual_apply(const RadialFunction& v);

/// w(s) = s^{-k} v(1/s) for an arbitrary exponent k; kelvin_apply uses k = N'-2.
RadialFunction inversion_apply(const RadialFunction& v, double k);
TestFunction inversion_apply(const TestFunction& psi, double k);

/// u = r^{-sigma} v (or its inverse with -sigma), derivatives carried along.
RadialFunction power_weight_apply(const RadialFunction& v, double exponent);
TestFunction power_weight_apply(const TestFunction& psi, double exponent);

} // namespace morse
