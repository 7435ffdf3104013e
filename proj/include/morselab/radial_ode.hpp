#pragma once

// Radial solutions of  v'' + ((N'-1)/r) v' + r^tau |v|^{p-1} v = 0.

#include "morselab/params.hpp"
#include "morselab/radial.hpp"

#include <cstddef>
#include <optional>
#include <string_view>

namespace morse {

enum class DecayClass { slow_decay, fast_decay, inconclusive };
enum class Ordering { below, crosses, above };

std::string_view to_string(DecayClass c) noexcept;
std::string_view to_string(Ordering o) noexcept;

/// V_inf(r) = C0 r^{-m}, derivatives included. Requires the standard regime
/// and p > (N'+tau)/(N'-2).
RadialFunction v_infinity(const ProblemParams& params, const RadialGrid& grid);

struct SeriesStart {
    double v = 0.0;
    double dv = 0.0;
};

/// Two-term expansion at the origin:
///   v ~ kappa - kappa^p r^{2+tau} / ((2+tau)(N'+tau)),  v' ~ -kappa^p r^{1+tau} / (N'+tau).
SeriesStart series_start(const ProblemParams& params, double kappa, double r);

struct ShootOptions {
    double r_max = 1e6;
    /// Local relative tolerance of the embedded 4/5 pair.
    double tol = 1e-10;
    /// Output grid; overrides r_max. Defaults to [grid_r_min, r_max] at
    /// points_per_decade.
    std::optional<RadialGrid> grid;
    double grid_r_min = 1e-6;
    double points_per_decade = 100.0;
    /// Radius at which the series is evaluated. Defaults to the smaller of
    /// the first grid point and the radius where the series correction is
    /// 1e-8 of kappa.
    std::optional<double> start_radius;
};

struct AsymptoticFit {
    double estimate = 0.0;  // fitted r^m v at r_max
    bool converged = false; // drift of r^m v across the last decade < 0.5%
    DecayClass classification = DecayClass::inconclusive;
    double drift = 0.0;     // |ratio of r^m v over one decade - 1|
    double v_slope = 0.0;   // fitted d log v / d log r over the last decade
};

struct ShootingResult {
    ProblemParams params;
    RadialFunction solution;
    double kappa = 1.0;
    double asymptotic_constant = 0.0;
    DecayClass classification = DecayClass::inconclusive;
    Ordering ordering_vs_singular = Ordering::below;
    AsymptoticFit fit{};
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
};

/// Integrates from the series start to the grid end. Requires the standard
/// regime, p > sobolev and kappa > 0. Throws NumericalFailure on step-size
/// underflow, loss of positivity or loss of monotonicity. A grid spanning
/// fewer than three decades is not an error: the classification is then
/// inconclusive.
ShootingResult shoot(const ProblemParams& params, double kappa, double r_max, double tol);
ShootingResult shoot(const ProblemParams& params, double kappa, const ShootOptions& options);

/// v_kappa(r) = (kappa/kappa1) v_kappa1(lambda r), lambda = (kappa/kappa1)^{(p-1)/(tau+2)},
/// evaluated exactly on the grid r_i / lambda.
RadialFunction rescale(const ShootingResult& v1, double kappa);

/// Least-squares fit of log(r^m v) over the last decade of the grid.
/// Throws InvalidInput when the grid spans fewer than three decades.
AsymptoticFit asymptotic_constant(const RadialFunction& v, const ProblemParams& params);

/// Pointwise comparison with V_inf on v's grid.
Ordering ordering_vs_singular(const RadialFunction& v, const ProblemParams& params);

/// max over interior points of |v'' + ((N'-1)/r) v' + r^tau |v|^{p-1} v|,
/// divided by max r^tau |v|^p (0 for the zero function). With derivative
/// samples the flux r^{N'-1} v' is differenced once; without them a
/// three-point stencil in log r is used. Both are second order.
double residual(const RadialFunction& v, const ProblemParams& params);

/// |C0^p - (f(p)/p) C0| / C0^p: the constant C0 solving the sphere equation.
double sphere_constant_check(const ProblemParams& params);

} // namespace morse
