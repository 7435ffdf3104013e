#pragma once

// Discretized stability forms
//
//     Q_v(psi) = int ( r^theta psi'^2 - p r^l |v|^{p-1} psi^2 ) r^{N-1} dr
//
// on radial Dirichlet test functions over an annulus [a, b], and the
// Hardy-potential form
//
//     Q_u(phi) = int ( phi'^2 - ell r^-2 phi^2 - p r^alpha |u|^{p-1} phi^2 ) r^{N-1} dr.
//
// Integrals are taken in t = log r, so r^{N-1} dr = r^N dt and every node
// of a log grid carries the same quadrature weight.

#include "morselab/params.hpp"
#include "morselab/radial.hpp"
#include "morselab/transforms.hpp"
#include "morselab/tridiagonal.hpp"

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace morse {

/// Log-spaced nodes a = r_0 < ... < r_{n+1} = b; the n interior ones carry
/// the unknowns.
RadialGrid assembly_grid(double a, double b, std::size_t n);

struct FormAssembly {
    RadialGrid nodes;             // n + 2 points including a and b
    double a = 0.0, b = 0.0, h = 0.0;
    std::size_t n = 0;
    SymTridiagonal stiffness{};   // sum r_{i+1/2}^{N'-2} (psi_{i+1} - psi_i)^2 / h
    std::vector<double> potential{}; // h p r_i^{N+l} |v_i|^{p-1}
    std::vector<double> mass{};      // h r_i^{N'}: int r^{N-1+theta} psi^2 dr
    std::vector<double> hardy_mass{}; // h r_i^{N'-2}: int r^{N-3+theta} psi^2 dr
};

/// Requires 0 < a < b and n >= 8. v is used on `nodes` directly when its grid
/// matches, otherwise it is interpolated; v must cover [a, b].
FormAssembly assemble_forms(const ProblemParams& params, const RadialFunction& v, double a, double b, std::size_t n);

enum class MassWeight {
    /// r^{N'-3} dr: the Hardy weight. Eigenvalues for v = V_inf are
    /// (discrete Hardy quotient) - f(p).
    hardy,
    /// r^{N'-1} dr.
    volume,
};

std::string_view to_string(MassWeight w) noexcept;

struct SpectrumOptions {
    MassWeight mass = MassWeight::hardy;
    /// Number of lowest eigenvalues reported; nullopt means all n.
    std::optional<std::size_t> count;
};

struct SpectrumReport {
    std::vector<double> eigenvalues; // ascending, lowest `count`
    std::size_t negative_count = 0;  // #{lambda < -tol} over the whole pencil
    double min_eigenvalue = 0.0;
    double tolerance = 0.0;          // 1e-9 * max |entry| of the scaled matrix
    MassWeight mass = MassWeight::hardy;
    std::size_t n = 0;
};

/// Symmetric tridiagonal M^{-1/2} (K - P) M^{-1/2} for the chosen mass.
SymTridiagonal scaled_pencil(const FormAssembly& forms, MassWeight mass);

/// Radial Morse index estimate. A lower bound for the Morse index: only
/// radial test functions are seen.
SpectrumReport radial_morse_index(const ProblemParams& params, const RadialFunction& v, double a, double b,
                                  std::size_t n, const SpectrumOptions& options = {});
SpectrumReport spectrum(const FormAssembly& forms, const SpectrumOptions& options = {});

/// Q_v(psi) by the trapezoid rule in log r. psi' comes from psi.derivative
/// when present, else from centered differences.
double q_value(const ProblemParams& params, const RadialFunction& v, const TestFunction& psi);

/// Q_u(phi) for the Hardy-potential form.
double q_value(const SchrodingerParams& params, const RadialFunction& u, const TestFunction& phi);

/// Minimum of int r^{N'-1} psi'^2 / int r^{N'-3} psi^2 over discrete
/// Dirichlet psi on [a, b]. Never below (N'-2)^2/4.
double hardy_rayleigh_min(double theta, int N, double a, double b, std::size_t n);

struct InvarianceResult {
    double q_source = 0.0;
    double q_image = 0.0;
};

/// Q on both sides of a transform with the matching test-function map:
///   kelvin  psi~(s) = s^{-(N'-2)} psi(1/s)
///   dual    psi~(s) = psi(1/s)
///   sigma   phi = r^{-sigma} psi, u = r^{-sigma} v, compared against Q_u
/// sigma_inverse is the same identity read the other way and is accepted as
/// an alias.
InvarianceResult invariance_check(TransformKind kind, const ProblemParams& params, const RadialFunction& v,
                                  const TestFunction& psi);

struct StableEstimate {
    double lhs = 0.0;
    double rhs_kernel = 0.0;
};

/// lhs = int ( r^theta |(|v|^{(gamma-1)/2} v)'|^2 + r^l |v|^{gamma+p} ) psi^{2m} r^{N-1} dr
/// rhs = int r^{(theta(gamma+p) - l(gamma+1))/(p-1)}
///           ( psi'^2 + |psi||Lap psi| + |psi||psi'|/r )^{(p+gamma)/(p-1)} r^{N-1} dr
/// Requires gamma in [1, 2p + 2 sqrt(p(p-1)) - 1), integer m >= max((p+gamma)/(p-1), 2)
/// and |psi| <= 1.
StableEstimate stable_estimate_check(const ProblemParams& params, const RadialFunction& v, double gamma, int m,
                                     const TestFunction& psi);

} // namespace morse
