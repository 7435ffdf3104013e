#include "morselab/radial.hpp"

#include "morselab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace morse {

namespace {

bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

void require_same_size(std::size_t grid, std::size_t values, const char* what) {
    if (grid != values) {
        std::ostringstream msg;
        msg << what << ": " << values << " values for " << grid << " grid points";
        throw InvalidInput("size_mismatch", msg.str());
    }
}

void require_finite(std::span<const double> xs, const char* what) {
    for (double x : xs)
        if (!std::isfinite(x))
            throw InvalidInput("non_finite", std::string(what) + ": non-finite sample");
}

} // namespace

RadialGrid::RadialGrid(std::vector<double> points) : points_(std::move(points)) {
    log_step_ = std::log(points_[1] / points_[0]);
}

RadialGrid RadialGrid::log_spaced(double r_min, double r_max, std::size_t n_points) {
    if (!(r_min > 0.0) || !(r_max > r_min) || !std::isfinite(r_max))
        throw InvalidInput("grid", "log_spaced: need 0 < r_min < r_max");
    if (n_points < 2)
        throw InvalidInput("grid", "log_spaced: need at least two points");
    const double h = std::log(r_max / r_min) / static_cast<double>(n_points - 1);
    std::vector<double> pts(n_points);
    for (std::size_t i = 0; i < n_points; ++i)
        pts[i] = r_min * std::exp(h * static_cast<double>(i));
    pts.front() = r_min;
    pts.back() = r_max;
    return RadialGrid(std::move(pts));
}

RadialGrid RadialGrid::with_density(double r_min, double r_max, double points_per_decade) {
    if (!(points_per_decade > 0.0))
        throw InvalidInput("grid", "with_density: points_per_decade must be positive");
    if (!(r_min > 0.0) || !(r_max > r_min))
        throw InvalidInput("grid", "with_density: need 0 < r_min < r_max");
    const double decades = std::log10(r_max / r_min);
    const auto n = static_cast<std::size_t>(std::ceil(decades * points_per_decade)) + 1;
    return log_spaced(r_min, r_max, std::max<std::size_t>(n, 2));
}

RadialGrid RadialGrid::from_points(std::vector<double> points) {
    if (points.size() < 2)
        throw InvalidInput("grid", "from_points: need at least two points");
    if (!(points.front() > 0.0))
        throw InvalidInput("grid", "grid points must be positive (r = 0 is excluded)");
    const double ratio = points[1] / points[0];
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (!(points[i + 1] > points[i]) || !std::isfinite(points[i + 1]))
            throw InvalidInput("grid", "grid points must be finite and strictly increasing");
        if (!close_rel(points[i + 1] / points[i], ratio, 1e-12))
            throw InvalidInput("grid", "grid is not log-spaced (ratio varies beyond 1e-12)");
    }
    return RadialGrid(std::move(points));
}

double RadialGrid::decades() const { return std::log10(r_max() / r_min()); }

RadialGrid RadialGrid::inverted() const {
    std::vector<double> pts(points_.size());
    const std::size_t n = points_.size();
    for (std::size_t i = 0; i < n; ++i)
        pts[i] = 1.0 / points_[n - 1 - i];
    return RadialGrid(std::move(pts));
}

RadialGrid RadialGrid::scaled(double factor) const {
    if (!(factor > 0.0) || !std::isfinite(factor))
        throw InvalidInput("grid", "scaled: factor must be positive");
    std::vector<double> pts(points_);
    for (double& r : pts)
        r *= factor;
    return RadialGrid(std::move(pts));
}

bool RadialGrid::matches(const RadialGrid& other) const {
    if (size() != other.size())
        return false;
    for (std::size_t i = 0; i < size(); ++i)
        if (!close_rel(points_[i], other.points_[i], 1e-12))
            return false;
    return true;
}

RadialFunction::RadialFunction(RadialGrid g, std::vector<double> v, std::optional<std::vector<double>> dv)
    : grid(std::move(g)), values(std::move(v)), derivative(std::move(dv)) {
    require_same_size(grid.size(), values.size(), "RadialFunction");
    require_finite(values, "RadialFunction");
    if (derivative) {
        require_same_size(grid.size(), derivative->size(), "RadialFunction derivative");
        require_finite(*derivative, "RadialFunction derivative");
    }
}

double RadialFunction::sample(double r) const {
    const auto pts = grid.points();
    const double slack = 1e-12 * r;
    if (!(r >= pts.front() - slack && r <= pts.back() + slack)) {
        std::ostringstream msg;
        msg << "sample: r = " << r << " outside [" << pts.front() << ", " << pts.back() << "]";
        throw InvalidInput("domain", msg.str());
    }
    const auto it = std::upper_bound(pts.begin(), pts.end(), r);
    std::size_t hi = static_cast<std::size_t>(it - pts.begin());
    hi = std::clamp<std::size_t>(hi, 1, pts.size() - 1);
    const std::size_t lo = hi - 1;
    const double h = std::log(pts[hi] / pts[lo]);
    const double s = std::clamp(std::log(r / pts[lo]) / h, 0.0, 1.0);
    if (!derivative)
        return (1.0 - s) * values[lo] + s * values[hi];
    // Hermite basis in t = log r; dv/dt = r v'.
    const double d0 = pts[lo] * (*derivative)[lo] * h;
    const double d1 = pts[hi] * (*derivative)[hi] * h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * values[lo] + (s3 - 2 * s2 + s) * d0 + (-2 * s3 + 3 * s2) * values[hi] +
           (s3 - s2) * d1;
}

RadialFunction RadialFunction::resampled(const RadialGrid& target) const {
    std::vector<double> v(target.size());
    for (std::size_t i = 0; i < target.size(); ++i)
        v[i] = sample(target[i]);
    return RadialFunction(target, std::move(v));
}

RadialFunction RadialFunction::on_grid(const RadialGrid& target) const {
    if (grid.matches(target))
        return *this;
    return resampled(target);
}

TestFunction::TestFunction(RadialGrid g, std::vector<double> v, std::optional<std::vector<double>> dv)
    : grid(std::move(g)), values(std::move(v)), derivative(std::move(dv)) {
    require_same_size(grid.size(), values.size(), "TestFunction");
    require_finite(values, "TestFunction");
    if (values.front() != 0.0 || values.back() != 0.0)
        throw InvalidInput("support", "TestFunction must vanish at both grid endpoints");
    if (derivative) {
        require_same_size(grid.size(), derivative->size(), "TestFunction derivative");
        require_finite(*derivative, "TestFunction derivative");
    }
}

TestFunction TestFunction::scaled(double c) const {
    TestFunction out = *this;
    for (double& x : out.values)
        x *= c;
    if (out.derivative)
        for (double& x : *out.derivative)
            x *= c;
    return out;
}

std::vector<double> log_grid_derivative(const RadialGrid& grid, std::span<const double> values) {
    const std::size_t n = grid.size();
    std::vector<double> dv(n, 0.0);
    if (n < 3)
        throw InvalidInput("grid", "log_grid_derivative: need at least three points");
    const double h = grid.log_step();
    for (std::size_t i = 1; i + 1 < n; ++i)
        dv[i] = (values[i + 1] - values[i - 1]) / (2.0 * h) / grid[i];
    dv[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h) / grid[0];
    dv[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h) / grid[n - 1];
    return dv;
}

} // namespace morse
