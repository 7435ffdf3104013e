#include "morselab/params.hpp"

#include "morselab/errors.hpp"

#include <cmath>
#include <sstream>

namespace morse {

namespace {

void require_p(double p, const char* where) {
    if (!(p > 1.0) || !std::isfinite(p)) {
        std::ostringstream msg;
        msg << where << ": p must be a finite number > 1 (got " << p << ")";
        throw InvalidInput("p_range", msg.str());
    }
}

void require_standard(double n_prime, double tau, const char* where) {
    if (!(n_prime > 2.0) || !(tau > -2.0)) {
        std::ostringstream msg;
        msg << where << ": requires N' > 2 and tau > -2 (got N'=" << n_prime
            << ", tau=" << tau << ")";
        throw InvalidInput("standard_regime", msg.str());
    }
}

double hardy_gap(double p, double n_prime, double tau) {
    return f_eval(p, n_prime, tau) - hardy_constant(n_prime);
}

bool roots_agree(double x, double y) {
    return std::abs(x - y) <= 1e-8 * std::max(1.0, std::abs(x));
}

} // namespace

double SchrodingerParams::sigma() const { return sigma_of(*this); }

std::string_view to_string(RegimeLabel label) noexcept {
    switch (label) {
    case RegimeLabel::below_serrin: return "below_serrin";
    case RegimeLabel::serrin_to_ptilde: return "serrin_to_ptilde";
    case RegimeLabel::removability_window: return "removability_window";
    case RegimeLabel::sobolev_exact: return "sobolev_exact";
    case RegimeLabel::undetermined: return "undetermined";
    case RegimeLabel::at_or_above_pc: return "at_or_above_pc";
    }
    return "unknown";
}

DerivedIndices derive(const ProblemParams& params) {
    require_p(params.p, "derive");
    DerivedIndices d;
    d.n_prime = params.n_prime();
    d.tau = params.tau();
    d.m_exp = (2.0 + d.tau) / (params.p - 1.0);
    d.serrin = (d.n_prime + d.tau) / (d.n_prime - 2.0);
    d.sobolev = (d.n_prime + 2.0 + 2.0 * d.tau) / (d.n_prime - 2.0);
    if (d.n_prime > 2.0 && params.p > d.serrin) {
        const double k = d.m_exp * (d.n_prime - 2.0 - d.m_exp);
        if (k > 0.0)
            d.c0 = std::pow(k, 1.0 / (params.p - 1.0));
    }
    return d;
}

double f_eval(double p, double n_prime, double tau) {
    require_p(p, "f_eval");
    const double m = (2.0 + tau) / (p - 1.0);
    return p * m * (n_prime - 2.0 - m);
}

double gamma_of_p(double p) {
    require_p(p, "gamma_of_p");
    return 2.0 * p + 2.0 * std::sqrt(p * (p - 1.0)) - 1.0;
}

double capital_gamma(double p, double tau) {
    require_p(p, "capital_gamma");
    const double s = 1.0 / (p - 1.0);
    return 2.0 * (2.0 + tau) * (1.0 + s + std::sqrt(1.0 + s)) + 2.0;
}

double delta(double n_prime, double p, double gamma, double tau) {
    require_p(p, "delta");
    return n_prime * (p - 1.0) - (2.0 + tau) * gamma - 2.0 * p - tau;
}

double matching_tau(double p, double theta) {
    require_p(p, "matching_tau");
    return (p - 1.0) * theta / (2.0 * p + 2.0 * std::sqrt(p * (p - 1.0)));
}

double hardy_constant(double n_prime) {
    if (!(n_prime > 2.0))
        throw InvalidInput("standard_regime", "hardy_constant: requires N' > 2");
    const double k = n_prime - 2.0;
    return k * k / 4.0;
}

double sigma_of(const SchrodingerParams& s) {
    const double half = (s.N - 2) / 2.0;
    const double disc = half * half - s.ell;
    if (!(disc > 0.0)) {
        std::ostringstream msg;
        msg << "sigma: ell must be < (N-2)^2/4 = " << half * half << " (got " << s.ell << ")";
        throw InvalidInput("ell_range", msg.str());
    }
    return half - std::sqrt(disc);
}

double bisect_hardy_level(double n_prime, double tau, double lo, double hi) {
    double g_lo = hardy_gap(lo, n_prime, tau);
    const double g_hi = hardy_gap(hi, n_prime, tau);
    if (g_lo == 0.0)
        return lo;
    if (g_hi == 0.0)
        return hi;
    if ((g_lo < 0.0) == (g_hi < 0.0))
        throw NumericalFailure("bracket", "bisect_hardy_level: bracket does not change sign");
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= 1e-12 * std::max(1.0, std::abs(mid)))
            return mid;
        const double g_mid = hardy_gap(mid, n_prime, tau);
        if (g_mid == 0.0)
            return mid;
        if ((g_mid < 0.0) == (g_lo < 0.0)) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

CriticalExponents critical_exponents(double n_prime, double tau) {
    require_standard(n_prime, tau, "critical_exponents");

    CriticalExponents ce;
    ce.n_prime = n_prime;
    ce.tau = tau;
    ce.serrin = (n_prime + tau) / (n_prime - 2.0);
    ce.sobolev = (n_prime + 2.0 + 2.0 * tau) / (n_prime - 2.0);

    // f(p) = (N'-2)^2/4  <=>  a p^2 - b p + c = 0.
    const double k = n_prime - 2.0;
    const double gap = n_prime - 4.0 * tau - 10.0;
    auto& q = ce.quadratic;
    q.a = k * gap;
    q.b = 2.0 * k * k - 4.0 * (tau + 2.0) * (tau + n_prime);
    q.c = k * k;
    const double half_b = 0.5 * q.b;
    const double root_term = 2.0 * (2.0 + tau) * std::sqrt((2.0 + tau) * (2.0 * n_prime + tau - 2.0));

    // P_- = (b/2 - D)/a rewritten as c/(b/2 + D): same root, no cancellation as a -> 0.
    if (gap == 0.0)
        ce.p_minus = 4.0 / 3.0;
    else
        ce.p_minus = q.c / (half_b + root_term);

    if (gap > 0.0) {
        const double p_plus = (half_b + root_term) / q.a;
        ce.p_plus = p_plus;
        ce.p_c = CriticalPower::finite(p_plus);
    }
    ce.p_tilde_c = ce.p_minus;

    const double level = hardy_constant(n_prime);
    const double residual_tol = 1e-10 * std::max(1.0, level);
    auto check_root = [&](double r, const char* name) {
        const double res = std::abs(f_eval(r, n_prime, tau) - level);
        if (!(res <= residual_tol)) {
            std::ostringstream msg;
            msg << "critical_exponents: " << name << " = " << r << " leaves |f - (N'-2)^2/4| = " << res;
            throw NumericalFailure("root_residual", msg.str());
        }
    };

    if (!(ce.serrin < ce.p_minus && ce.p_minus < ce.sobolev))
        throw NumericalFailure("root_window", "critical_exponents: P_- outside (serrin, sobolev)");
    check_root(ce.p_minus, "P_-");
    const double p_minus_bisect = bisect_hardy_level(n_prime, tau, ce.serrin, ce.sobolev);
    if (!roots_agree(ce.p_minus, p_minus_bisect))
        throw NumericalFailure("root_crosscheck", "critical_exponents: P_- disagrees with bisection");

    if (ce.p_plus) {
        const double pp = *ce.p_plus;
        if (!(pp > ce.sobolev))
            throw NumericalFailure("root_window", "critical_exponents: P_+ not above sobolev");
        check_root(pp, "P_+");
        double hi = 2.0 * std::max(pp, ce.sobolev);
        while (hardy_gap(hi, n_prime, tau) > 0.0)
            hi *= 2.0;
        const double pp_bisect = bisect_hardy_level(n_prime, tau, ce.sobolev, hi);
        if (!roots_agree(pp, pp_bisect))
            throw NumericalFailure("root_crosscheck", "critical_exponents: P_+ disagrees with bisection");
    }
    return ce;
}

CriticalPower pc_unweighted(int N) {
    if (N <= 10)
        return CriticalPower::infinite();
    return critical_exponents(static_cast<double>(N), 0.0).p_c;
}

Classification classify_p(const ProblemParams& params) {
    require_p(params.p, "classify_p");
    require_standard(params.n_prime(), params.tau(), "classify_p");

    Classification out;
    out.exponents = critical_exponents(params.n_prime(), params.tau());
    out.pc_weighted = out.exponents.p_c;
    out.pc_unweighted = pc_unweighted(params.N);
    out.tau_condition = params.tau() <= matching_tau(params.p, params.theta);
    // The smaller of the two, decided by the exact ordering rather than by
    // the tau condition, so that a rounding tie cannot pick the wrong one.
    if (!out.pc_weighted.is_finite())
        out.pc_min = out.pc_unweighted;
    else if (!out.pc_unweighted.is_finite())
        out.pc_min = out.pc_weighted;
    else
        out.pc_min = out.pc_weighted.value() <= out.pc_unweighted.value() ? out.pc_weighted
                                                                          : out.pc_unweighted;

    const double p = params.p;
    const auto& ce = out.exponents;
    const double sobolev_tol = 1e-12 * std::max(1.0, ce.sobolev);
    if (p <= ce.serrin)
        out.label = RegimeLabel::below_serrin;
    else if (p <= ce.p_tilde_c)
        out.label = RegimeLabel::serrin_to_ptilde;
    else if (std::abs(p - ce.sobolev) <= sobolev_tol)
        out.label = RegimeLabel::sobolev_exact;
    else if (!out.pc_weighted.exceeds(p))
        out.label = RegimeLabel::at_or_above_pc;
    else if (out.pc_min.exceeds(p))
        out.label = RegimeLabel::removability_window;
    else
        out.label = RegimeLabel::undetermined;
    return out;
}

} // namespace morse
