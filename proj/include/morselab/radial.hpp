#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace morse {

/// Strictly increasing, positive, geometrically spaced radii. Inversion
/// r -> 1/r maps such a grid onto another one (reversed), so the transforms
/// never interpolate.
class RadialGrid {
public:
    /// n_points >= 2 points from r_min to r_max inclusive.
    static RadialGrid log_spaced(double r_min, double r_max, std::size_t n_points);

    /// `points_per_decade` points per factor 10, endpoints included.
    static RadialGrid with_density(double r_min, double r_max, double points_per_decade);

    /// Validates positivity, monotonicity and a constant ratio (to 1e-12).
    static RadialGrid from_points(std::vector<double> points);

    std::span<const double> points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    double operator[](std::size_t i) const { return points_[i]; }
    double r_min() const { return points_.front(); }
    double r_max() const { return points_.back(); }
    /// log(points[i+1]/points[i]).
    double log_step() const noexcept { return log_step_; }
    double decades() const;

    /// Points 1/r, increasing.
    RadialGrid inverted() const;
    /// Points r * factor.
    RadialGrid scaled(double factor) const;

    /// Same size and pointwise equal to relative 1e-12.
    bool matches(const RadialGrid& other) const;

private:
    explicit RadialGrid(std::vector<double> points);
    std::vector<double> points_;
    double log_step_ = 0.0;
};

/// Samples of a radial profile v(r), optionally with v'(r).
struct RadialFunction {
    RadialGrid grid;
    std::vector<double> values;
    std::optional<std::vector<double>> derivative;

    RadialFunction(RadialGrid g, std::vector<double> v,
                   std::optional<std::vector<double>> dv = std::nullopt);

    /// Value at r inside [r_min, r_max]; cubic Hermite in log r when
    /// derivatives are present, linear in log r otherwise.
    double sample(double r) const;
    /// Samples on every point of `target`, which must lie inside this grid.
    RadialFunction resampled(const RadialGrid& target) const;
    /// `this` if grids match, otherwise resampled(target).
    RadialFunction on_grid(const RadialGrid& target) const;
};

/// A radial test function with compact support in the open annulus: the
/// first and last values are zero. Derivatives, when supplied, are used by
/// the quadratures instead of finite differences.
struct TestFunction {
    RadialGrid grid;
    std::vector<double> values;
    std::optional<std::vector<double>> derivative;

    TestFunction(RadialGrid g, std::vector<double> v,
                 std::optional<std::vector<double>> dv = std::nullopt);

    TestFunction scaled(double c) const;
};

/// First derivative d/dr of grid samples: centered differences in log r,
/// one-sided second order at the ends.
std::vector<double> log_grid_derivative(const RadialGrid& grid, std::span<const double> values);

} // namespace morse
