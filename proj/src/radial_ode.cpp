#include "morselab/radial_ode.hpp"

#include "morselab/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace morse {

namespace {

using State = std::array<double, 2>;

struct Singular {
    double n_prime, tau, m, c0;
};

Singular require_singular(const ProblemParams& params, const char* where) {
    if (!params.standard_regime()) {
        std::ostringstream msg;
        msg << where << ": requires N' > 2 and tau > -2 (got N'=" << params.n_prime() << ", tau=" << params.tau()
            << ")";
        throw InvalidInput("standard_regime", msg.str());
    }
    const DerivedIndices d = derive(params);
    if (!(params.p > d.serrin) || !d.c0) {
        std::ostringstream msg;
        msg << where << ": requires p > (N'+tau)/(N'-2) = " << d.serrin << " (got p=" << params.p << ")";
        throw InvalidInput("p_range", msg.str());
    }
    return {d.n_prime, d.tau, d.m_exp, *d.c0};
}

double rpow(double r, double e) { return std::exp(e * std::log(r)); }

// Dormand-Prince 5(4).
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

template <class Rhs>
double dopri_step(const Rhs& f, double t, const State& y, double h, State& y_new, double tol) {
    auto axpy = [&](std::initializer_list<std::pair<double, const State*>> terms) {
        State out = y;
        for (const auto& [c, k] : terms)
            for (std::size_t i = 0; i < 2; ++i)
                out[i] += h * c * (*k)[i];
        return out;
    };
    const State k1 = f(t, y);
    const State k2 = f(t + c2 * h, axpy({{a21, &k1}}));
    const State k3 = f(t + c3 * h, axpy({{a31, &k1}, {a32, &k2}}));
    const State k4 = f(t + c4 * h, axpy({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State k5 = f(t + c5 * h, axpy({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State k6 = f(t + h, axpy({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    y_new = axpy({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const State k7 = f(t + h, y_new);
    double sum = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
        const double err = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double scale = 1e-300 + tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
        sum += (err / scale) * (err / scale);
    }
    const double norm = std::sqrt(sum / 2.0);
    return std::isfinite(norm) && std::isfinite(y_new[0]) && std::isfinite(y_new[1]) ? norm : HUGE_VAL;
}

// Phase 1 carries (v, F = r^{N'-1} v') in t = log r. Once r^m v reaches C0/2
// the state switches to (w, w_t) with w = C0 - r^m v, which resolves the gap
// to V_inf far below the size of v itself.
class Shooter {
    auto rhs1() const {
        return [this](double t, const State& y) -> State {
            const double v = y[0];
            return {std::exp((2.0 - s_.n_prime) * t) * y[1],
                    -std::exp((s_.n_prime + s_.tau) * t) * std::pow(std::abs(v), p_ - 1.0) * v};
        };
    }

    auto rhs2() const {
        return [this](double, const State& y) -> State {
            const double w = y[0];
            return {y[1], -b_ * y[1] + k_ * w + c0p_ * std::expm1(p_ * std::log1p(-w / s_.c0))};
        };
    }

public:
    Shooter(const ProblemParams& params, const Singular& s, double tol)
        : s_(s), p_(params.p), tol_(tol), b_(s.n_prime - 2.0 - 2.0 * s.m), k_(std::pow(s.c0, params.p - 1.0)),
          c0p_(std::pow(s.c0, params.p)) {}

    void start(double r0, const SeriesStart& ss) {
        t_ = std::log(r0);
        y_ = {ss.v, rpow(r0, s_.n_prime - 1.0) * ss.dv};
        phase2_ = false;
        maybe_switch();
    }

    void advance_to(double t_target) {
        while (t_ < t_target) {
            const double remaining = t_target - t_;
            const bool land = h_ >= remaining;
            const double h = land ? remaining : h_;
            State y_new;
            const double err = phase2_ ? dopri_step(rhs2(), t_, y_, h, y_new, tol_)
                                       : dopri_step(rhs1(), t_, y_, h, y_new, tol_);
            const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            if (err <= 1.0) {
                t_ = land ? t_target : t_ + h;
                y_ = y_new;
                ++accepted;
                check_state();
                maybe_switch();
                if (!land || h * fac < h_)
                    h_ = h * fac;
            } else {
                ++rejected;
                h_ = h * fac;
                if (h_ < 1e-12 * std::max(1.0, std::abs(t_))) {
                    std::ostringstream msg;
                    msg << "shoot: step size underflow at r = " << std::exp(t_);
                    throw NumericalFailure("step_underflow", msg.str());
                }
            }
        }
    }

    /// v, v' and the sign of V_inf - v at the current point.
    void sample(double& v, double& dv, double& gap) const {
        const double r = std::exp(t_);
        if (!phase2_) {
            v = y_[0];
            dv = rpow(r, 1.0 - s_.n_prime) * y_[1];
            gap = s_.c0 * rpow(r, -s_.m) - v;
            return;
        }
        const double z = s_.c0 - y_[0];
        const double scale = rpow(r, -s_.m);
        v = scale * z;
        dv = scale / r * (-y_[1] - s_.m * z);
        gap = y_[0];
    }

    std::size_t accepted = 0;
    std::size_t rejected = 0;

private:
    void check_state() const {
        double v, dv, gap;
        sample(v, dv, gap);
        const double r = std::exp(t_);
        if (!(v > 0.0)) {
            std::ostringstream msg;
            msg << "shoot: solution lost positivity at r = " << r << " (v = " << v << ")";
            throw NumericalFailure("negative_value", msg.str());
        }
        if (!(dv < 0.0)) {
            std::ostringstream msg;
            msg << "shoot: solution stopped decreasing at r = " << r << " (v' = " << dv << ")";
            throw NumericalFailure("non_monotone", msg.str());
        }
    }

    void maybe_switch() {
        if (phase2_)
            return;
        const double ez = std::exp(s_.m * t_);
        const double z = ez * y_[0];
        if (z < 0.5 * s_.c0)
            return;
        const double v_t = std::exp((2.0 - s_.n_prime) * t_) * y_[1];
        const double z_t = ez * (v_t + s_.m * y_[0]);
        y_ = {s_.c0 - z, -z_t};
        phase2_ = true;
    }

    Singular s_;
    double p_, tol_, b_, k_, c0p_;
    double t_ = 0.0;
    double h_ = 1e-3;
    State y_{};
    bool phase2_ = false;
};

Ordering summarize_ordering(bool any_below, bool any_other) {
    if (any_below && !any_other)
        return Ordering::below;
    if (!any_below)
        return Ordering::above;
    return Ordering::crosses;
}

} // namespace

std::string_view to_string(DecayClass c) noexcept {
    switch (c) {
    case DecayClass::slow_decay: return "slow_decay";
    case DecayClass::fast_decay: return "fast_decay";
    case DecayClass::inconclusive: return "inconclusive";
    }
    return "unknown";
}

std::string_view to_string(Ordering o) noexcept {
    switch (o) {
    case Ordering::below: return "below";
    case Ordering::crosses: return "crosses";
    case Ordering::above: return "above";
    }
    return "unknown";
}

RadialFunction v_infinity(const ProblemParams& params, const RadialGrid& grid) {
    const Singular s = require_singular(params, "v_infinity");
    std::vector<double> v(grid.size()), dv(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid[i];
        v[i] = s.c0 * rpow(r, -s.m);
        dv[i] = -s.m * v[i] / r;
    }
    return RadialFunction(grid, std::move(v), std::move(dv));
}

SeriesStart series_start(const ProblemParams& params, double kappa, double r) {
    const double np = params.n_prime();
    const double tau = params.tau();
    const double kp = std::pow(kappa, params.p);
    const double r1 = rpow(r, 1.0 + tau);
    return {kappa - kp * r1 * r / ((2.0 + tau) * (np + tau)), -kp * r1 / (np + tau)};
}

ShootingResult shoot(const ProblemParams& params, double kappa, double r_max, double tol) {
    ShootOptions options;
    options.r_max = r_max;
    options.tol = tol;
    return shoot(params, kappa, options);
}

ShootingResult shoot(const ProblemParams& params, double kappa, const ShootOptions& options) {
    const Singular s = require_singular(params, "shoot");
    const DerivedIndices d = derive(params);
    if (!(params.p > d.sobolev)) {
        std::ostringstream msg;
        msg << "shoot: requires p > (N'+2+2tau)/(N'-2) = " << d.sobolev << " (got p=" << params.p << ")";
        throw InvalidInput("p_range", msg.str());
    }
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw InvalidInput("kappa_range", "shoot: kappa must be positive");
    if (!(options.tol > 0.0) || !(options.tol < 1.0))
        throw InvalidInput("tol_range", "shoot: tol must lie in (0, 1)");

    const RadialGrid grid = options.grid ? *options.grid
                                         : RadialGrid::with_density(options.grid_r_min, options.r_max,
                                                                    options.points_per_decade);

    // Natural length scale of v_kappa; the series correction is 1e-8 of kappa at r_auto.
    const double length = std::pow(kappa, -(params.p - 1.0) / (2.0 + s.tau));
    const double r_auto = length * std::pow(1e-8 * (2.0 + s.tau) * (s.n_prime + s.tau), 1.0 / (2.0 + s.tau));
    double r0 = std::min(grid.r_min(), r_auto);
    if (options.start_radius) {
        if (!(*options.start_radius > 0.0) || *options.start_radius > grid.r_min())
            throw InvalidInput("start_radius", "shoot: start_radius must lie in (0, first grid point]");
        r0 = *options.start_radius;
    }

    Shooter sh(params, s, options.tol);
    sh.start(r0, series_start(params, kappa, r0));

    const std::size_t n = grid.size();
    std::vector<double> v(n), dv(n);
    bool any_below = false, any_other = false;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = grid[i];
        if (r > r0)
            sh.advance_to(std::log(r));
        double gap;
        sh.sample(v[i], dv[i], gap);
        (gap > 0.0 ? any_below : any_other) = true;
    }

    ShootingResult out{.params = params, .solution = RadialFunction(grid, std::move(v), std::move(dv))};
    out.kappa = kappa;
    out.ordering_vs_singular = summarize_ordering(any_below, any_other);
    out.accepted_steps = sh.accepted;
    out.rejected_steps = sh.rejected;
    if (grid.decades() >= 3.0) {
        out.fit = asymptotic_constant(out.solution, params);
        out.asymptotic_constant = out.fit.estimate;
        out.classification = out.fit.classification;
    } else {
        out.asymptotic_constant = rpow(grid.r_max(), s.m) * out.solution.values.back();
        out.classification = DecayClass::inconclusive;
    }
    return out;
}

RadialFunction rescale(const ShootingResult& v1, double kappa) {
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw InvalidInput("kappa_range", "rescale: kappa must be positive");
    const double q = kappa / v1.kappa;
    const double lambda = std::pow(q, (v1.params.p - 1.0) / (v1.params.tau() + 2.0));
    const auto& src = v1.solution;
    std::vector<double> v(src.values);
    for (double& x : v)
        x *= q;
    std::optional<std::vector<double>> dv;
    if (src.derivative) {
        dv = *src.derivative;
        for (double& x : *dv)
            x *= q * lambda;
    }
    return RadialFunction(src.grid.scaled(1.0 / lambda), std::move(v), std::move(dv));
}

AsymptoticFit asymptotic_constant(const RadialFunction& v, const ProblemParams& params) {
    const auto& grid = v.grid;
    if (grid.decades() < 3.0 - 1e-12) {
        std::ostringstream msg;
        msg << "asymptotic_constant: grid spans " << grid.decades() << " decades, need at least 3";
        throw InvalidInput("grid_span", msg.str());
    }
    const double m = (2.0 + params.tau()) / (params.p - 1.0);
    const double x_max = std::log10(grid.r_max());
    const double x_cut = x_max - 1.0 - 1e-12;

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t count = 0;
    AsymptoticFit fit;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = std::log10(grid[i]);
        if (x < x_cut)
            continue;
        if (!(v.values[i] > 0.0))
            return fit; // inconclusive, estimate 0
        const double y = std::log(v.values[i]) + m * std::log(grid[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    const double cn = static_cast<double>(count);
    const double denom = cn * sxx - sx * sx;
    const double slope = (cn * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / cn;

    fit.estimate = std::exp(intercept + slope * x_max);
    fit.drift = std::abs(std::expm1(slope));
    fit.v_slope = slope / std::log(10.0) - m;
    fit.converged = fit.drift < 0.005;
    const double fast = params.n_prime() - 2.0;
    if (fit.converged)
        fit.classification = DecayClass::slow_decay;
    else if (std::abs(fit.v_slope + fast) <= 0.02 * fast)
        fit.classification = DecayClass::fast_decay;
    else
        fit.classification = DecayClass::inconclusive;
    return fit;
}

Ordering ordering_vs_singular(const RadialFunction& v, const ProblemParams& params) {
    const RadialFunction vinf = v_infinity(params, v.grid);
    bool any_below = false, any_other = false;
    for (std::size_t i = 0; i < v.values.size(); ++i)
        (v.values[i] < vinf.values[i] ? any_below : any_other) = true;
    return summarize_ordering(any_below, any_other);
}

double residual(const RadialFunction& v, const ProblemParams& params) {
    const auto& grid = v.grid;
    const std::size_t n = grid.size();
    if (n < 3)
        throw InvalidInput("grid", "residual: need at least three grid points");
    const double np = params.n_prime();
    const double tau = params.tau();
    const double p = params.p;
    const double h = grid.log_step();

    auto source = [&](std::size_t i) {
        const double x = v.values[i];
        return rpow(grid[i], tau) * std::pow(std::abs(x), p - 1.0) * x;
    };

    double worst = 0.0, scale = 0.0;
    std::vector<double> flux;
    if (v.derivative) {
        flux.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            flux[i] = rpow(grid[i], np - 1.0) * (*v.derivative)[i];
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double r = grid[i];
        double lhs;
        if (v.derivative) {
            // r^{1-N'} (r^{N'-1} v')' with d/dr = r^{-1} d/dt.
            lhs = rpow(r, -np) * (flux[i + 1] - flux[i - 1]) / (2.0 * h);
        } else {
            const double v_t = (v.values[i + 1] - v.values[i - 1]) / (2.0 * h);
            const double v_tt = (v.values[i + 1] - 2.0 * v.values[i] + v.values[i - 1]) / (h * h);
            lhs = (v_tt + (np - 2.0) * v_t) / (r * r);
        }
        const double src = source(i);
        worst = std::max(worst, std::abs(lhs + src));
        scale = std::max(scale, std::abs(src));
    }
    return scale > 0.0 ? worst / scale : 0.0;
}

double sphere_constant_check(const ProblemParams& params) {
    const Singular s = require_singular(params, "sphere_constant_check");
    const double f = f_eval(params.p, s.n_prime, s.tau);
    const double c0p = std::pow(s.c0, params.p);
    return std::abs(c0p - f / params.p * s.c0) / c0p;
}

} // namespace morse
