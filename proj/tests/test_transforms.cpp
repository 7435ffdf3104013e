#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "morselab/errors.hpp"
#include "morselab/radial_ode.hpp"
#include "morselab/transforms.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace morse;

TEST_CASE("kelvin image exponent for N=5, p=3") {
    const TransformedParams t = kelvin_params({5, 0.0, 0.0, 3.0});
    CHECK(t.params.l == 2.0);
    CHECK(t.params.theta == 0.0);
    CHECK(t.domain_map == DomainMap::inversion);
    CHECK(t.image_tau_above_minus_two);
}

TEST_CASE("kelvin parameter map is an involution") {
    auto g = oracle::rng(11);
    for (int i = 0; i < 200; ++i) {
        const ProblemParams p{static_cast<int>(oracle::uniform(g, 2, 20)), oracle::uniform(g, -3, 3),
                              oracle::uniform(g, -3, 3), oracle::uniform(g, 1.1, 10)};
        const ProblemParams back = kelvin_params(kelvin_params(p).params).params;
        CHECK(back.l == doctest::Approx(p.l).epsilon(1e-12).scale(1.0));
        CHECK(back.theta == p.theta);
    }
}

TEST_CASE("kelvin image tau exceeds -2 exactly above the Serrin exponent") {
    auto g = oracle::rng(12);
    for (int i = 0; i < 300; ++i) {
        const ProblemParams p{static_cast<int>(oracle::uniform(g, 3, 20)), oracle::uniform(g, -0.9, 3),
                              oracle::uniform(g, -1, 3), oracle::uniform(g, 1.05, 6)};
        if (!p.standard_regime())
            continue;
        const double serrin = (p.n_prime() + p.tau()) / (p.n_prime() - 2);
        if (std::abs(p.p - serrin) < 1e-9)
            continue;
        CHECK(kelvin_params(p).image_tau_above_minus_two == (p.p > serrin));
    }
}

TEST_CASE("dual map identities") {
    auto g = oracle::rng(13);
    for (int i = 0; i < 200; ++i) {
        const ProblemParams p{static_cast<int>(oracle::uniform(g, 2, 20)), oracle::uniform(g, -3, 3),
                              oracle::uniform(g, -3, 3), 2.0};
        const ProblemParams d = dual_params(p).params;
        CHECK(d.n_prime() + p.n_prime() == doctest::Approx(4.0));
        CHECK(d.tau() + p.tau() == doctest::Approx(-4.0));
        const ProblemParams back = dual_params(d).params;
        CHECK(back.theta == doctest::Approx(p.theta).scale(1.0));
        CHECK(back.l == doctest::Approx(p.l).scale(1.0));
    }
}

TEST_CASE("sigma map with ell = 0 is the identity") {
    const TransformedParams t = sigma_params({5, 1.5, 0.0, 3.0});
    CHECK(t.params.theta == 0.0);
    CHECK(t.params.l == 1.5);
}

TEST_CASE("sigma forward then inverse recovers alpha and ell") {
    auto g = oracle::rng(14);
    for (int i = 0; i < 300; ++i) {
        const int N = static_cast<int>(oracle::uniform(g, 3, 20));
        const double lim = (N - 2) * (N - 2) / 4.0;
        const SchrodingerParams s{N, oracle::uniform(g, -3, 3), oracle::uniform(g, -20, lim * 0.999),
                                  oracle::uniform(g, 1.1, 8)};
        const TransformedParams t = sigma_params(s);
        CHECK(t.params.n_prime() >= 2.0);
        const SchrodingerParams back = sigma_inverse(t.params);
        CHECK(std::abs(back.alpha - s.alpha) <= 1e-12 * std::max(1.0, std::abs(s.alpha)));
        CHECK(std::abs(back.ell - s.ell) <= 1e-12 * std::max(1.0, std::abs(s.ell)));
    }
}

TEST_CASE("ell condition of the Hardy form matches the weighted standard conditions") {
    auto g = oracle::rng(15);
    int agree = 0;
    for (int i = 0; i < 500; ++i) {
        const int N = static_cast<int>(oracle::uniform(g, 3, 15));
        const double lim = (N - 2) * (N - 2) / 4.0;
        const SchrodingerParams s{N, oracle::uniform(g, -4, 4), oracle::uniform(g, -10, lim * 0.999),
                                  oracle::uniform(g, 1.1, 8)};
        const double A = (2 + s.alpha) / (s.p - 1);
        const double margin = A * (N - 2 - A) - s.ell;
        if (std::abs(margin) < 1e-9)
            continue;
        const ProblemParams p = sigma_params(s).params;
        const bool weighted = p.n_prime() > 2 && p.tau() > -2 && p.p > (p.n_prime() + p.tau()) / (p.n_prime() - 2);
        CHECK((margin > 0) == weighted);
        ++agree;
    }
    CHECK(agree > 400);
}

TEST_CASE("sigma rejects ell at or above the Hardy constant") {
    CHECK_THROWS_AS(sigma_params({5, 0.0, 2.25, 3.0}), InvalidInput);
    CHECK_THROWS_AS(sigma_inverse({5, -3.0, 0.0, 3.0}), InvalidInput);
}

TEST_CASE("transform kinds parse by name") {
    CHECK(transform_kind_from_string("kelvin") == TransformKind::kelvin);
    CHECK(transform_kind_from_string("sigma_inverse") == TransformKind::sigma_inverse);
    CHECK_THROWS_AS(transform_kind_from_string("fourier"), InvalidInput);
}

TEST_CASE("kelvin and dual applied twice return the samples") {
    const ProblemParams p{5, 0.7, 0.3, 3.0};
    const RadialGrid g = RadialGrid::log_spaced(0.05, 20.0, 301);
    std::vector<double> v(g.size()), dv(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        v[i] = 1.0 / (1.0 + g[i] * g[i]);
        dv[i] = -2.0 * g[i] * v[i] * v[i];
    }
    const RadialFunction f(g, v, dv);
    const RadialFunction kk = kelvin_apply(kelvin_apply(f, p), kelvin_params(p).params);
    const RadialFunction dd = dual_apply(dual_apply(f));
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(kk.grid[i] == doctest::Approx(g[i]).epsilon(1e-15));
        CHECK(std::abs(kk.values[i] - v[i]) <= 4e-16 * std::abs(v[i]) * 8);
        const double scale = std::abs(dv[i]) + (p.n_prime() - 2) * std::abs(v[i]) / g[i];
        CHECK(std::abs((*kk.derivative)[i] - dv[i]) <= 1e-13 * scale);
        CHECK(dd.values[i] == v[i]);
    }
}

TEST_CASE("kelvin image of V_inf is the singular solution of the image equation") {
    const ProblemParams p{5, 0.0, 0.0, 3.0};
    const RadialGrid g = RadialGrid::log_spaced(0.1, 10.0, 200);
    const RadialFunction w = kelvin_apply(v_infinity(p, g), p);
    const ProblemParams img = kelvin_params(p).params;
    const RadialFunction ref = v_infinity(img, w.grid);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(w.values[i] == doctest::Approx(ref.values[i]).epsilon(1e-13));
    // Image: l = 2, m = 2, C0 = sqrt(2).
    CHECK(ref.values[0] == doctest::Approx(std::sqrt(2.0) / (w.grid[0] * w.grid[0])));
}

TEST_CASE("dual image of V_inf is C0 s^m and solves the dual equation") {
    const ProblemParams p{5, 0.0, 0.0, 3.0};
    const RadialGrid g = RadialGrid::log_spaced(1.0, 1.07, 2000);
    const RadialFunction z = dual_apply(v_infinity(p, g));
    for (std::size_t i = 0; i < z.grid.size(); ++i)
        CHECK(z.values[i] == doctest::Approx(std::sqrt(2.0) * z.grid[i]).epsilon(1e-13));
    CHECK(residual(z, dual_params(p).params) < 1e-9);
}

TEST_CASE("power weight carries derivatives") {
    const RadialGrid g = RadialGrid::log_spaced(1.0, 3.0, 50);
    std::vector<double> v(g.size()), dv(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        v[i] = g[i] * g[i];
        dv[i] = 2 * g[i];
    }
    const RadialFunction u = power_weight_apply(RadialFunction(g, v, dv), -0.5);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(u.values[i] == doctest::Approx(std::pow(g[i], 1.5)));
        CHECK((*u.derivative)[i] == doctest::Approx(1.5 * std::sqrt(g[i])));
    }
}
