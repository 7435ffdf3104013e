#pragma once

// Parameter algebra for the weighted Lane-Emden equation
//
//     -div(|x|^theta grad v) = |x|^l |v|^{p-1} v      in R^N,
//
// and its Hardy-potential form -Lap u = |x|^alpha |u|^{p-1} u + ell |x|^-2 u.
// Everything here is closed-form; the only iterative piece is the bisection
// used to cross-check the critical exponents.

#include <optional>
#include <string_view>

namespace morse {

struct ProblemParams {
    int N = 3;
    double theta = 0.0;
    double l = 0.0;
    double p = 2.0;

    double n_prime() const noexcept { return N + theta; }
    double tau() const noexcept { return l - theta; }

    /// N' > 2 and tau > -2.
    bool standard_regime() const noexcept { return n_prime() > 2.0 && tau() > -2.0; }

    friend bool operator==(const ProblemParams&, const ProblemParams&) = default;
};

struct SchrodingerParams {
    int N = 3;
    double alpha = 0.0;
    double ell = 0.0;
    double p = 2.0;

    /// sigma = (N-2)/2 - sqrt((N-2)^2/4 - ell). Throws InvalidInput when
    /// ell >= (N-2)^2/4.
    double sigma() const;

    friend bool operator==(const SchrodingerParams&, const SchrodingerParams&) = default;
};

struct DerivedIndices {
    double n_prime = 0.0;
    double tau = 0.0;
    double m_exp = 0.0;   // (2+tau)/(p-1), decay rate of the singular solution
    double serrin = 0.0;  // (N'+tau)/(N'-2)
    double sobolev = 0.0; // (N'+2+2tau)/(N'-2)
    std::optional<double> c0;
};

/// A power that may be +infinity. Never encoded as a float sentinel.
class CriticalPower {
public:
    static CriticalPower infinite() noexcept { return CriticalPower{}; }
    static CriticalPower finite(double v) noexcept { return CriticalPower{v}; }

    bool is_finite() const noexcept { return value_.has_value(); }
    /// Precondition: is_finite().
    double value() const { return value_.value(); }

    /// p < *this, with every real below infinity.
    bool exceeds(double p) const noexcept { return !value_ || p < *value_; }

    friend bool operator==(const CriticalPower&, const CriticalPower&) = default;

private:
    CriticalPower() = default;
    explicit CriticalPower(double v) : value_(v) {}
    std::optional<double> value_;
};

struct QuadraticCoeffs {
    double a = 0.0; // (N'-2)(N'-4tau-10)
    double b = 0.0; // 2(N'-2)^2 - 4(tau+2)(tau+N')
    double c = 0.0; // (N'-2)^2
};

struct CriticalExponents {
    double n_prime = 0.0;
    double tau = 0.0;
    double serrin = 0.0;
    double sobolev = 0.0;
    double p_minus = 0.0;
    std::optional<double> p_plus;
    CriticalPower p_c = CriticalPower::infinite();
    double p_tilde_c = 0.0;
    QuadraticCoeffs quadratic;
};

enum class RegimeLabel {
    below_serrin,
    serrin_to_ptilde,
    removability_window,
    sobolev_exact,
    undetermined, // p_c(N,0) <= p < p_c(N',tau): no result either way
    at_or_above_pc,
};

std::string_view to_string(RegimeLabel label) noexcept;

struct Classification {
    RegimeLabel label = RegimeLabel::below_serrin;
    /// tau <= (p-1) theta / (2p + 2 sqrt(p(p-1))); when true the smaller of
    /// p_c(N',tau) and p_c(N,0) is p_c(N',tau).
    bool tau_condition = false;
    CriticalPower pc_weighted = CriticalPower::infinite();   // p_c(N', tau)
    CriticalPower pc_unweighted = CriticalPower::infinite(); // p_c(N, 0)
    CriticalPower pc_min = CriticalPower::infinite();
    CriticalExponents exponents;
};

DerivedIndices derive(const ProblemParams& params);

/// f(p) = p m (N'-2-m) with m = (2+tau)/(p-1).
double f_eval(double p, double n_prime, double tau);

/// gamma(p) = 2p + 2 sqrt(p(p-1)) - 1.
double gamma_of_p(double p);

/// Gamma(p) = 2(2+tau)(1 + 1/(p-1) + sqrt(1 + 1/(p-1))) + 2.
double capital_gamma(double p, double tau);

/// Delta(N',p,gamma,tau) = N'(p-1) - (2+tau) gamma - 2p - tau.
double delta(double n_prime, double p, double gamma, double tau);

/// (p-1) theta / (2p + 2 sqrt(p(p-1))): the tau at which p_c(N',tau) = p_c(N,0).
double matching_tau(double p, double theta);

/// (N'-2)^2 / 4, the best constant in the weighted Hardy inequality
/// int |x|^theta |grad psi|^2 >= C int |x|^{theta-2} psi^2.
double hardy_constant(double n_prime);

double sigma_of(const SchrodingerParams& s);

/// Roots of f(p) = (N'-2)^2/4. Closed form, cross-checked by bisection;
/// throws NumericalFailure if the two disagree by more than 1e-8 (relative).
CriticalExponents critical_exponents(double n_prime, double tau);

/// Bisection root of f(p) - (N'-2)^2/4 on [lo, hi]; the bracket must change
/// sign. Stops at width 1e-12 * max(1, |p|).
double bisect_hardy_level(double n_prime, double tau, double lo, double hi);

/// p_c(N, 0) for an integer dimension; infinite for N <= 10.
CriticalPower pc_unweighted(int N);

Classification classify_p(const ProblemParams& params);

} // namespace morse
