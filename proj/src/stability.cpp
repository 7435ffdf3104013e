#include "morselab/stability.hpp"

#include "morselab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace morse {

namespace {

double rpow(double r, double e) { return std::exp(e * std::log(r)); }

void require_annulus(double a, double b, std::size_t n, const char* where) {
    if (!(a > 0.0) || !(b > a) || !std::isfinite(b)) {
        std::ostringstream msg;
        msg << where << ": need 0 < a < b (got a=" << a << ", b=" << b << ")";
        throw InvalidInput("annulus", msg.str());
    }
    if (n < 8) {
        std::ostringstream msg;
        msg << where << ": need n >= 8 interior points (got " << n << ")";
        throw InvalidInput("resolution", msg.str());
    }
}

RadialFunction profile_on(const RadialFunction& v, const RadialGrid& grid, const char* where) {
    try {
        return v.on_grid(grid);
    } catch (const InvalidInput& e) {
        throw InvalidInput("support", std::string(where) + ": profile does not cover the grid (" + e.what() + ")");
    }
}

// d psi/dt = r psi' at every node.
std::vector<double> log_slope(const TestFunction& psi) {
    std::vector<double> d = psi.derivative ? *psi.derivative : log_grid_derivative(psi.grid, psi.values);
    for (std::size_t i = 0; i < d.size(); ++i)
        d[i] *= psi.grid[i];
    return d;
}

// Trapezoid rule in t over a log grid.
double trapezoid(const RadialGrid& grid, const std::vector<double>& g) {
    double s = 0.0;
    const std::size_t n = g.size();
    for (std::size_t i = 0; i < n; ++i)
        s += (i == 0 || i + 1 == n) ? 0.5 * g[i] : g[i];
    return s * grid.log_step();
}

} // namespace

std::string_view to_string(MassWeight w) noexcept { return w == MassWeight::hardy ? "hardy" : "volume"; }

RadialGrid assembly_grid(double a, double b, std::size_t n) {
    require_annulus(a, b, n, "assembly_grid");
    return RadialGrid::log_spaced(a, b, n + 2);
}

FormAssembly assemble_forms(const ProblemParams& params, const RadialFunction& v, double a, double b,
                            std::size_t n) {
    require_annulus(a, b, n, "assemble_forms");
    FormAssembly f{.nodes = assembly_grid(a, b, n)};
    f.a = a;
    f.b = b;
    f.n = n;
    f.h = f.nodes.log_step();
    const RadialFunction prof = profile_on(v, f.nodes, "assemble_forms");

    const double np = params.n_prime();
    const double h = f.h;
    // Edge weights r_{i+1/2}^{N'-2} / h at geometric midpoints, i = 0..n.
    std::vector<double> edge(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        edge[i] = rpow(std::sqrt(f.nodes[i] * f.nodes[i + 1]), np - 2.0) / h;

    f.stiffness.diag.resize(n);
    f.stiffness.off.resize(n - 1);
    f.potential.resize(n);
    f.mass.resize(n);
    f.hardy_mass.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double r = f.nodes[j + 1];
        f.stiffness.diag[j] = edge[j] + edge[j + 1];
        if (j + 1 < n)
            f.stiffness.off[j] = -edge[j + 1];
        f.potential[j] = h * params.p * rpow(r, params.N + params.l) *
                         std::pow(std::abs(prof.values[j + 1]), params.p - 1.0);
        f.hardy_mass[j] = h * rpow(r, np - 2.0);
        f.mass[j] = f.hardy_mass[j] * r * r;
    }
    return f;
}

SymTridiagonal scaled_pencil(const FormAssembly& forms, MassWeight mass) {
    const auto& m = mass == MassWeight::hardy ? forms.hardy_mass : forms.mass;
    const std::size_t n = forms.n;
    SymTridiagonal t;
    t.diag.resize(n);
    t.off.resize(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
        t.diag[j] = (forms.stiffness.diag[j] - forms.potential[j]) / m[j];
        if (j + 1 < n)
            t.off[j] = forms.stiffness.off[j] / std::sqrt(m[j] * m[j + 1]);
    }
    return t;
}

SpectrumReport spectrum(const FormAssembly& forms, const SpectrumOptions& options) {
    const SymTridiagonal t = scaled_pencil(forms, options.mass);
    for (double d : t.diag)
        if (!std::isfinite(d))
            throw NumericalFailure("pencil_scale", "spectrum: scaled pencil has non-finite entries");
    SpectrumReport rep;
    rep.n = forms.n;
    rep.mass = options.mass;
    rep.tolerance = 1e-9 * t.scale();
    rep.negative_count = sturm_count(t, -rep.tolerance);
    const std::size_t count = options.count ? std::min(*options.count, forms.n) : forms.n;
    rep.eigenvalues = lowest_eigenvalues(t, std::max<std::size_t>(count, 1));
    rep.min_eigenvalue = rep.eigenvalues.front();
    if (count == 0)
        rep.eigenvalues.clear();
    return rep;
}

SpectrumReport radial_morse_index(const ProblemParams& params, const RadialFunction& v, double a, double b,
                                  std::size_t n, const SpectrumOptions& options) {
    return spectrum(assemble_forms(params, v, a, b, n), options);
}

double q_value(const ProblemParams& params, const RadialFunction& v, const TestFunction& psi) {
    const RadialFunction prof = profile_on(v, psi.grid, "q_value");
    const std::vector<double> dpsi = log_slope(psi);
    const double np = params.n_prime();
    std::vector<double> g(psi.grid.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = psi.grid[i];
        const double y = psi.values[i];
        g[i] = rpow(r, np - 2.0) * dpsi[i] * dpsi[i] -
               params.p * rpow(r, params.N + params.l) * std::pow(std::abs(prof.values[i]), params.p - 1.0) * y * y;
    }
    return trapezoid(psi.grid, g);
}

double q_value(const SchrodingerParams& params, const RadialFunction& u, const TestFunction& phi) {
    const RadialFunction prof = profile_on(u, phi.grid, "q_value");
    const std::vector<double> dphi = log_slope(phi);
    std::vector<double> g(phi.grid.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = phi.grid[i];
        const double y = phi.values[i];
        const double w = rpow(r, params.N - 2.0);
        g[i] = w * (dphi[i] * dphi[i] - params.ell * y * y) -
               params.p * rpow(r, params.N + params.alpha) * std::pow(std::abs(prof.values[i]), params.p - 1.0) * y * y;
    }
    return trapezoid(phi.grid, g);
}

double hardy_rayleigh_min(double theta, int N, double a, double b, std::size_t n) {
    ProblemParams params{N, theta, theta, 2.0};
    if (!(params.n_prime() > 2.0))
        throw InvalidInput("standard_regime", "hardy_rayleigh_min: requires N + theta > 2");
    const RadialGrid nodes = assembly_grid(a, b, n);
    const RadialFunction zero(nodes, std::vector<double>(nodes.size(), 0.0));
    const FormAssembly forms = assemble_forms(params, zero, a, b, n);
    return lowest_eigenvalues(scaled_pencil(forms, MassWeight::hardy), 1).front();
}

InvarianceResult invariance_check(TransformKind kind, const ProblemParams& params, const RadialFunction& v,
                                  const TestFunction& psi) {
    InvarianceResult out;
    out.q_source = q_value(params, v, psi);
    switch (kind) {
    case TransformKind::kelvin: {
        const double k = params.n_prime() - 2.0;
        out.q_image = q_value(kelvin_params(params).params, kelvin_apply(v, params), inversion_apply(psi, k));
        break;
    }
    case TransformKind::dual:
        out.q_image = q_value(dual_params(params).params, dual_apply(v), inversion_apply(psi, 0.0));
        break;
    case TransformKind::sigma:
    case TransformKind::sigma_inverse: {
        const SchrodingerParams s = sigma_inverse(params);
        const double sigma = -params.theta / 2.0;
        out.q_image = q_value(s, power_weight_apply(v, -sigma), power_weight_apply(psi, -sigma));
        break;
    }
    }
    return out;
}

StableEstimate stable_estimate_check(const ProblemParams& params, const RadialFunction& v, double gamma, int m,
                                     const TestFunction& psi) {
    const double p = params.p;
    if (!(p > 1.0))
        throw InvalidInput("p_range", "stable_estimate_check: p must exceed 1");
    const double gmax = gamma_of_p(p);
    if (!(gamma >= 1.0 && gamma < gmax)) {
        std::ostringstream msg;
        msg << "stable_estimate_check: gamma must lie in [1, " << gmax << ") (got " << gamma << ")";
        throw InvalidInput("gamma_range", msg.str());
    }
    const double q = (p + gamma) / (p - 1.0);
    if (!(m >= 2 && m >= q)) {
        std::ostringstream msg;
        msg << "stable_estimate_check: m must be an integer >= max(" << q << ", 2) (got " << m << ")";
        throw InvalidInput("m_range", msg.str());
    }
    for (double y : psi.values)
        if (std::abs(y) > 1.0)
            throw InvalidInput("psi_bound", "stable_estimate_check: requires |psi| <= 1");

    const auto& grid = psi.grid;
    const RadialFunction prof = profile_on(v, grid, "stable_estimate_check");
    const std::vector<double> dv = prof.derivative ? *prof.derivative : log_grid_derivative(grid, prof.values);
    const std::vector<double> dpsi = psi.derivative ? *psi.derivative : log_grid_derivative(grid, psi.values);
    const std::vector<double> d2psi = log_grid_derivative(grid, dpsi);

    const double N = params.N;
    const double weight_exp = (params.theta * (gamma + p) - params.l * (gamma + 1.0)) / (p - 1.0);
    const double grad_coef = 0.25 * (gamma + 1.0) * (gamma + 1.0);
    std::vector<double> gl(grid.size()), gr(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid[i];
        const double x = std::abs(prof.values[i]);
        const double y = std::abs(psi.values[i]);
        const double vol = rpow(r, N); // r^{N-1} dr = r^N dt
        const double grad = grad_coef * std::pow(x, gamma - 1.0) * dv[i] * dv[i];
        gl[i] = (rpow(r, params.theta) * grad + rpow(r, params.l) * std::pow(x, gamma + p)) *
                std::pow(y, 2.0 * m) * vol;
        const double lap = d2psi[i] + (N - 1.0) * dpsi[i] / r;
        const double kernel = dpsi[i] * dpsi[i] + y * std::abs(lap) + y * std::abs(dpsi[i]) / r;
        gr[i] = rpow(r, weight_exp) * std::pow(kernel, q) * vol;
    }
    return {trapezoid(grid, gl), trapezoid(grid, gr)};
}

} // namespace morse
