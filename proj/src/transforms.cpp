#include "morselab/transforms.hpp"

#include "morselab/errors.hpp"

#include <cmath>
#include <string>

namespace morse {

namespace {

struct Mapped {
    std::vector<double> values;
    std::optional<std::vector<double>> derivative;
};

// s^{-k} f(1/s) evaluated on the inverted grid, with
// d/ds [s^{-k} f(1/s)] = -k s^{-k-1} f(1/s) - s^{-k-2} f'(1/s).
Mapped invert_samples(const RadialGrid& src, const RadialGrid& dst, std::span<const double> f,
                      const std::optional<std::vector<double>>& df, double k) {
    const std::size_t n = src.size();
    Mapped out;
    out.values.resize(n);
    if (df)
        out.derivative.emplace(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t i = n - 1 - j;
        const double s = dst[j];
        const double w = std::pow(src[i], k); // s^{-k} with s = 1/r
        out.values[j] = w * f[i];
        if (df)
            (*out.derivative)[j] = -k * w / s * f[i] - w / (s * s) * (*df)[i];
    }
    return out;
}

Mapped weight_samples(const RadialGrid& grid, std::span<const double> f,
                      const std::optional<std::vector<double>>& df, double exponent) {
    const std::size_t n = grid.size();
    Mapped out;
    out.values.resize(n);
    if (df)
        out.derivative.emplace(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = grid[i];
        const double w = std::pow(r, exponent);
        out.values[i] = w * f[i];
        if (df)
            (*out.derivative)[i] = w * ((*df)[i] + exponent * f[i] / r);
    }
    return out;
}

} // namespace

std::string_view to_string(TransformKind kind) noexcept {
    switch (kind) {
    case TransformKind::kelvin: return "kelvin";
    case TransformKind::dual: return "dual";
    case TransformKind::sigma: return "sigma";
    case TransformKind::sigma_inverse: return "sigma_inverse";
    }
    return "unknown";
}

std::string_view to_string(DomainMap map) noexcept {
    return map == DomainMap::identity ? "identity" : "inversion";
}

TransformKind transform_kind_from_string(std::string_view name) {
    for (auto k : {TransformKind::kelvin, TransformKind::dual, TransformKind::sigma, TransformKind::sigma_inverse})
        if (to_string(k) == name)
            return k;
    throw InvalidInput("transform_kind", "unknown transform kind '" + std::string(name) + "'");
}

TransformedParams kelvin_params(const ProblemParams& params) {
    TransformedParams out;
    out.kind = TransformKind::kelvin;
    out.domain_map = DomainMap::inversion;
    out.params = params;
    const double beta = (params.N - 2 + params.theta) * (params.p - 1.0) - (4.0 + params.l - 2.0 * params.theta);
    out.params.l = beta;
    out.image_tau_above_minus_two = out.params.tau() > -2.0;
    return out;
}

TransformedParams dual_params(const ProblemParams& params) {
    TransformedParams out;
    out.kind = TransformKind::dual;
    out.domain_map = DomainMap::inversion;
    out.params = params;
    out.params.theta = 4.0 - 2.0 * params.N - params.theta;
    out.params.l = -2.0 * params.N - params.l;
    return out;
}

TransformedParams sigma_params(const SchrodingerParams& s) {
    const double sigma = sigma_of(s);
    TransformedParams out;
    out.kind = TransformKind::sigma;
    out.domain_map = DomainMap::identity;
    out.params.N = s.N;
    out.params.p = s.p;
    out.params.theta = -2.0 * sigma;
    out.params.l = s.alpha - sigma * (s.p + 1.0);
    return out;
}

SchrodingerParams sigma_inverse(const ProblemParams& params) {
    if (!(params.n_prime() > 2.0))
        throw InvalidInput("standard_regime",
                           "sigma_inverse: N' > 2 is needed for sigma = -theta/2 to be the minus root");
    const double sigma = -params.theta / 2.0;
    SchrodingerParams s;
    s.N = params.N;
    s.p = params.p;
    s.ell = (params.N - 2) * sigma - sigma * sigma;
    s.alpha = params.l + sigma * (params.p + 1.0);
    return s;
}

RadialFunction inversion_apply(const RadialFunction& v, double k) {
    RadialGrid dst = v.grid.inverted();
    auto m = invert_samples(v.grid, dst, v.values, v.derivative, k);
    return RadialFunction(std::move(dst), std::move(m.values), std::move(m.derivative));
}

TestFunction inversion_apply(const TestFunction& psi, double k) {
    RadialGrid dst = psi.grid.inverted();
    auto m = invert_samples(psi.grid, dst, psi.values, psi.derivative, k);
    return TestFunction(std::move(dst), std::move(m.values), std::move(m.derivative));
}

RadialFunction kelvin_apply(const RadialFunction& v, const ProblemParams& params) {
    return inversion_apply(v, params.N - 2 + params.theta);
}

RadialFunction dual_apply(const RadialFunction& v) { return inversion_apply(v, 0.0); }

RadialFunction power_weight_apply(const RadialFunction& v, double exponent) {
    auto m = weight_samples(v.grid, v.values, v.derivative, exponent);
    return RadialFunction(v.grid, std::move(m.values), std::move(m.derivative));
}

TestFunction power_weight_apply(const TestFunction& psi, double exponent) {
    auto m = weight_samples(psi.grid, psi.values, psi.derivative, exponent);
    return TestFunction(psi.grid, std::move(m.values), std::move(m.derivative));
}

} // namespace morse
