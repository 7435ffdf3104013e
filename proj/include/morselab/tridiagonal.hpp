#pragma once

#include <cstddef>
#include <vector>

namespace morse {

/// Symmetric tridiagonal matrix: diag[0..n), off[i] couples i and i+1.
struct SymTridiagonal {
    std::vector<double> diag;
    std::vector<double> off;

    std::size_t size() const noexcept { return diag.size(); }
    /// Gershgorin bounds on the spectrum.
    double lower_bound() const;
    double upper_bound() const;
    /// max |entry|.
    double scale() const;
};

/// Number of eigenvalues strictly below x (Sturm sequence via LDL^T pivots).
std::size_t sturm_count(const SymTridiagonal& t, double x);

/// Eigenvalues with indices [0, count), ascending, by bisection on the
/// Sturm count. Each is resolved to abs_tol + 4 eps |lambda|.
std::vector<double> lowest_eigenvalues(const SymTridiagonal& t, std::size_t count, double abs_tol = 0.0);

/// Unit eigenvector for an isolated eigenvalue by inverse iteration.
std::vector<double> eigenvector(const SymTridiagonal& t, double lambda);

/// y = T x.
std::vector<double> multiply(const SymTridiagonal& t, const std::vector<double>& x);

} // namespace morse
