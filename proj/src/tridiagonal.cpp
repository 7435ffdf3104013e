#include "morselab/tridiagonal.hpp"

#include "morselab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace morse {

double SymTridiagonal::lower_bound() const {
    const std::size_t n = size();
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double radius = 0.0;
        if (i > 0)
            radius += std::abs(off[i - 1]);
        if (i + 1 < n)
            radius += std::abs(off[i]);
        lo = std::min(lo, diag[i] - radius);
    }
    return lo;
}

double SymTridiagonal::upper_bound() const {
    const std::size_t n = size();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double radius = 0.0;
        if (i > 0)
            radius += std::abs(off[i - 1]);
        if (i + 1 < n)
            radius += std::abs(off[i]);
        hi = std::max(hi, diag[i] + radius);
    }
    return hi;
}

double SymTridiagonal::scale() const {
    double s = 0.0;
    for (double d : diag)
        s = std::max(s, std::abs(d));
    for (double e : off)
        s = std::max(s, std::abs(e));
    return s;
}

std::size_t sturm_count(const SymTridiagonal& t, double x) {
    const std::size_t n = t.size();
    const double tiny = std::numeric_limits<double>::min() * 4.0 * std::max(1.0, t.scale());
    std::size_t count = 0;
    double q = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e2 = i > 0 ? t.off[i - 1] * t.off[i - 1] : 0.0;
        q = t.diag[i] - x - (i > 0 ? e2 / q : 0.0);
        if (q == 0.0)
            q = -tiny;
        if (q < 0.0)
            ++count;
    }
    return count;
}

std::vector<double> lowest_eigenvalues(const SymTridiagonal& t, std::size_t count, double abs_tol) {
    const std::size_t n = t.size();
    count = std::min(count, n);
    std::vector<double> out(count);
    const double glo = t.lower_bound();
    const double ghi = t.upper_bound();
    const double eps = std::numeric_limits<double>::epsilon();
    double lo_prev = glo;
    for (std::size_t k = 0; k < count; ++k) {
        // k-th eigenvalue: smallest x with sturm_count(x) > k.
        double lo = lo_prev, hi = ghi + eps * std::max(1.0, std::abs(ghi));
        for (int it = 0; it < 2000; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (hi - lo <= abs_tol + 4.0 * eps * std::max(std::abs(lo), std::abs(hi)) || mid == lo || mid == hi)
                break;
            if (sturm_count(t, mid) > k)
                hi = mid;
            else
                lo = mid;
        }
        out[k] = 0.5 * (lo + hi);
        lo_prev = lo;
    }
    return out;
}

std::vector<double> multiply(const SymTridiagonal& t, const std::vector<double>& x) {
    const std::size_t n = t.size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = t.diag[i] * x[i];
        if (i > 0)
            s += t.off[i - 1] * x[i - 1];
        if (i + 1 < n)
            s += t.off[i] * x[i + 1];
        y[i] = s;
    }
    return y;
}

std::vector<double> eigenvector(const SymTridiagonal& t, double lambda) {
    const std::size_t n = t.size();
    if (n == 0)
        return {};
    const double eps = std::numeric_limits<double>::epsilon();
    const double shift = lambda + 1e3 * eps * std::max(1.0, t.scale()) * (lambda >= 0 ? 1.0 : -1.0);

    // Thomas solves of (T - shift) x_new = x with a guarded pivot.
    std::vector<double> x(n, 1.0), c(n), d(n);
    const double guard = eps * std::max(1.0, t.scale());
    for (int iter = 0; iter < 8; ++iter) {
        double piv = t.diag[0] - shift;
        if (std::abs(piv) < guard)
            piv = guard;
        c[0] = n > 1 ? t.off[0] / piv : 0.0;
        d[0] = x[0] / piv;
        for (std::size_t i = 1; i < n; ++i) {
            piv = t.diag[i] - shift - t.off[i - 1] * c[i - 1];
            if (std::abs(piv) < guard)
                piv = guard;
            c[i] = i + 1 < n ? t.off[i] / piv : 0.0;
            d[i] = (x[i] - t.off[i - 1] * d[i - 1]) / piv;
        }
        x[n - 1] = d[n - 1];
        for (std::size_t i = n - 1; i-- > 0;)
            x[i] = d[i] - c[i] * x[i + 1];
        double norm = 0.0;
        for (double v : x)
            norm += v * v;
        norm = std::sqrt(norm);
        if (!(norm > 0.0) || !std::isfinite(norm))
            throw NumericalFailure("eigenvector", "inverse iteration broke down");
        for (double& v : x)
            v /= norm;
    }
    // Fix the sign: largest component positive.
    const auto big = std::max_element(x.begin(), x.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    if (*big < 0.0)
        for (double& v : x)
            v = -v;
    return x;
}

} // namespace morse
