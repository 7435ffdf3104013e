#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "morselab/errors.hpp"
#include "morselab/params.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace morse;

TEST_CASE("derived indices for N=5, p=3") {
    const DerivedIndices d = derive({5, 0.0, 0.0, 3.0});
    CHECK(d.n_prime == 5.0);
    CHECK(d.tau == 0.0);
    CHECK(d.m_exp == doctest::Approx(1.0));
    CHECK(d.serrin == doctest::Approx(5.0 / 3.0));
    CHECK(d.sobolev == doctest::Approx(7.0 / 3.0));
    REQUIRE(d.c0);
    CHECK(*d.c0 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("C0 is absent at or below the Serrin exponent") {
    CHECK_FALSE(derive({5, 0.0, 0.0, 5.0 / 3.0}).c0);
    CHECK_FALSE(derive({5, 0.0, 0.0, 1.5}).c0);
}

TEST_CASE("f agrees with the oracle") {
    auto g = oracle::rng(1);
    for (int i = 0; i < 500; ++i) {
        const double np = oracle::uniform(g, 2.1, 40.0);
        const double tau = oracle::uniform(g, -1.9, 5.0);
        const double p = oracle::uniform(g, 1.01, 50.0);
        const double ref = static_cast<double>(oracle::f(p, np, tau));
        CHECK(f_eval(p, np, tau) == doctest::Approx(ref).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("p <= 1 is rejected") {
    CHECK_THROWS_AS(f_eval(1.0, 5.0, 0.0), InvalidInput);
    CHECK_THROWS_AS(derive({5, 0.0, 0.0, 0.5}), InvalidInput);
    try {
        gamma_of_p(1.0);
    } catch (const InvalidInput& e) {
        CHECK(e.kind() == "p_range");
    }
}

TEST_CASE("P_minus is exactly 4/3 on the line N' = 4 tau + 10") {
    CHECK(critical_exponents(10.0, 0.0).p_minus == 4.0 / 3.0);
    CHECK_FALSE(critical_exponents(10.0, 0.0).p_c.is_finite());
    for (double tau : {-1.5, -0.5, 0.25, 1.0, 3.0}) {
        const CriticalExponents ce = critical_exponents(4 * tau + 10, tau);
        CHECK(ce.p_minus == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
        CHECK_FALSE(ce.p_c.is_finite());
    }
}

TEST_CASE("p_c(11, 0) is the Joseph-Lundgren exponent") {
    const CriticalExponents ce = critical_exponents(11.0, 0.0);
    REQUIRE(ce.p_c.is_finite());
    CHECK(std::abs(ce.p_c.value() - oracle::joseph_lundgren(11)) < 1e-10);
    CHECK(std::abs(ce.p_c.value() - (37 + 8 * std::sqrt(10.0)) / 9) < 1e-12);
    for (int N = 11; N <= 30; ++N)
        CHECK(std::abs(pc_unweighted(N).value() - oracle::joseph_lundgren(N)) < 1e-9 * oracle::joseph_lundgren(N));
}

TEST_CASE("p_c(N, 0) is infinite for N <= 10") {
    for (int N = 3; N <= 10; ++N)
        CHECK_FALSE(pc_unweighted(N).is_finite());
}

TEST_CASE("critical exponents match the scanning oracle") {
    auto g = oracle::rng(2);
    for (int i = 0; i < 60; ++i) {
        const double tau = oracle::uniform(g, -1.8, 3.0);
        const double np = oracle::uniform(g, 2.2, 40.0);
        const CriticalExponents ce = critical_exponents(np, tau);
        const auto roots = oracle::hardy_roots(np, tau);
        REQUIRE(!roots.empty());
        CHECK(std::abs(ce.p_minus - static_cast<double>(roots[0])) < 1e-8 * ce.p_minus);
        if (np > 10 + 4 * tau) {
            REQUIRE(roots.size() == 2);
            REQUIRE(ce.p_c.is_finite());
            CHECK(std::abs(ce.p_c.value() - static_cast<double>(roots[1])) < 1e-8 * ce.p_c.value());
        } else {
            CHECK(roots.size() == 1);
            CHECK_FALSE(ce.p_c.is_finite());
        }
    }
}

TEST_CASE("window and residual properties of the roots") {
    auto g = oracle::rng(3);
    for (int i = 0; i < 300; ++i) {
        const double tau = oracle::uniform(g, -1.95, 6.0);
        const double np = oracle::uniform(g, 2.05, 80.0);
        const CriticalExponents ce = critical_exponents(np, tau);
        CHECK(ce.serrin < ce.p_minus);
        CHECK(ce.p_minus < ce.sobolev);
        const double k2 = static_cast<double>(oracle::hardy(np));
        CHECK(std::abs(static_cast<double>(oracle::f(ce.p_minus, np, tau)) - k2) <= 1e-9 * std::max(1.0, k2));
        if (ce.p_c.is_finite()) {
            CHECK(ce.p_c.value() > ce.sobolev);
            CHECK(std::abs(static_cast<double>(oracle::f(ce.p_c.value(), np, tau)) - k2) <= 1e-9 * std::max(1.0, k2));
        }
    }
}

TEST_CASE("p_c decreases in N' and increases in tau") {
    auto g = oracle::rng(4);
    for (int i = 0; i < 200; ++i) {
        const double tau = oracle::uniform(g, -1.5, 2.0);
        const double n1 = 10 + 4 * tau + oracle::uniform(g, 0.2, 20.0);
        const double n2 = n1 + oracle::uniform(g, 0.05, 5.0);
        CHECK(critical_exponents(n2, tau).p_c.value() < critical_exponents(n1, tau).p_c.value());
        const double t2 = tau - oracle::uniform(g, 0.01, 0.3);
        if (t2 > -2)
            CHECK(critical_exponents(n1, t2).p_c.value() < critical_exponents(n1, tau).p_c.value());
    }
}

TEST_CASE("Gamma and Delta identities") {
    auto g = oracle::rng(5);
    for (int i = 0; i < 200; ++i) {
        const double p = oracle::uniform(g, 1.05, 30.0);
        const double tau = oracle::uniform(g, -1.9, 4.0);
        const double np = oracle::uniform(g, 2.5, 30.0);
        const double gam = gamma_of_p(p);
        const double big = capital_gamma(p, tau);
        CHECK(big == doctest::Approx(((2 + tau) * gam + 2 * p + tau) / (p - 1)).epsilon(1e-12));
        CHECK(delta(np, p, gam, tau) == doctest::Approx((p - 1) * (np - big)).epsilon(1e-10).scale(np * p));
    }
}

TEST_CASE("matching tau carries Delta(N, p, gamma, 0) over to N'") {
    for (double p : {1.5, 2.0, 5.0, 10.0}) {
        for (auto [N, theta] : {std::pair{5, 1.0}, std::pair{11, -2.0}}) {
            const double gam = gamma_of_p(p);
            const double tt = matching_tau(p, theta);
            CHECK(std::abs(delta(N + theta, p, gam, tt) - delta(N, p, gam, 0.0)) < 1e-10);
        }
    }
}

TEST_CASE("matching tau gives p_c(N', tau~) = p_c(N, 0)") {
    for (int N : {11, 12, 15, 20}) {
        for (double theta : {-0.5, 0.5, 1.0, 3.0}) {
            const double pc = pc_unweighted(N).value();
            const double tt = matching_tau(pc, theta);
            const CriticalExponents ce = critical_exponents(N + theta, tt);
            REQUIRE(ce.p_c.is_finite());
            CHECK(ce.p_c.value() == doctest::Approx(pc).epsilon(1e-9));
        }
    }
}

TEST_CASE("Hardy constant and sigma") {
    CHECK(hardy_constant(5.0) == 2.25);
    CHECK(hardy_constant(4.0) == 1.0);
    CHECK_THROWS_AS(hardy_constant(2.0), InvalidInput);
    CHECK(sigma_of({5, 0.0, 0.0, 3.0}) == 0.0);
    CHECK(sigma_of({5, 0.0, 2.0, 3.0}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(sigma_of({5, 0.0, 2.25, 3.0}), InvalidInput);
}

TEST_CASE("standard regime violations are rejected with their kind") {
    try {
        critical_exponents(2.0, 0.0);
        FAIL("expected InvalidInput");
    } catch (const InvalidInput& e) {
        CHECK(e.kind() == "standard_regime");
    }
    CHECK_THROWS_AS(critical_exponents(5.0, -2.0), InvalidInput);
}

TEST_CASE("regime labels along p at N = 11") {
    const CriticalExponents ce = critical_exponents(11.0, 0.0);
    auto label = [](double p) { return classify_p({11, 0.0, 0.0, p}).label; };
    CHECK(label(1.2) == RegimeLabel::below_serrin);
    CHECK(label(ce.serrin) == RegimeLabel::below_serrin);
    CHECK(label(1.3) == RegimeLabel::serrin_to_ptilde);
    CHECK(label(ce.sobolev) == RegimeLabel::sobolev_exact);
    CHECK(label(3.0) == RegimeLabel::removability_window);
    CHECK(label(ce.p_c.value()) == RegimeLabel::at_or_above_pc);
    CHECK(label(7.0) == RegimeLabel::at_or_above_pc);
}

TEST_CASE("p between p_c(N, 0) and p_c(N', tau) is undetermined") {
    // N' = 10.5 < N = 11 at tau = 0, so p_c(N', tau) > p_c(N, 0).
    const ProblemParams base{11, -0.5, -0.5, 2.0};
    const double pc_w = critical_exponents(10.5, 0.0).p_c.value();
    const double pc_u = pc_unweighted(11).value();
    REQUIRE(pc_u < pc_w);
    ProblemParams q = base;
    q.p = 0.5 * (pc_u + pc_w);
    const Classification c = classify_p(q);
    CHECK(c.label == RegimeLabel::undetermined);
    CHECK_FALSE(c.tau_condition);
    CHECK(c.pc_min == c.pc_unweighted);
}

TEST_CASE("at p = p_c(N, 0) the tau condition decides which critical power is smaller") {
    auto g = oracle::rng(6);
    int checked = 0;
    for (int i = 0; i < 400; ++i) {
        const int N = 11 + static_cast<int>(oracle::uniform(g, 0, 10));
        const double theta = oracle::uniform(g, -3.0, 3.0);
        const double l = theta + oracle::uniform(g, -1.0, 1.0);
        const ProblemParams params{N, theta, l, pc_unweighted(N).value()};
        if (!params.standard_regime() || !(params.n_prime() > 10 + 4 * params.tau()))
            continue;
        const Classification c = classify_p(params);
        const double gap = c.pc_weighted.value() - c.pc_unweighted.value();
        if (std::abs(gap) < 1e-9)
            continue;
        ++checked;
        CHECK(c.tau_condition == (gap < 0));
        CHECK(c.pc_min == (gap < 0 ? c.pc_weighted : c.pc_unweighted));
    }
    CHECK(checked > 50);
}
