#include "lesys/error.hpp"
#include "lesys/hyperbola.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace lesys;

TEST_CASE("critical pair for N=8, p=1.1")
{
    auto c = make_pair(8, 1.1);
    CHECK(1 / (c.p + 1) + 1 / (c.q + 1) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(c.q_star == doctest::Approx(168.0 / 101).epsilon(1e-12));
    CHECK(c.p_star == doctest::Approx(168.0 / 67).epsilon(1e-12));
    CHECK(c.slow_decay());
    CHECK(c.regular_range());
    CHECK(identity_residual(c) < 1e-14);
}

TEST_CASE("gamma_N matches the Newton kernel normalisation")
{
    // |S^2| = 4 pi, so gamma_3 = 1/(4 pi)
    CHECK(gamma_N(3) == doctest::Approx(1 / (4 * M_PI)).epsilon(1e-14));
    CHECK(sphere_area(2) == doctest::Approx(2 * M_PI).epsilon(1e-14));
}

TEST_CASE("exponent predicates on random pairs")
{
    std::mt19937_64 rng(7);
    for (int t = 0; t < 200; ++t) {
        int N = 8 + int(rng() % 5);
        std::uniform_real_distribution<double> U(1, double(N - 1) / (N - 2));
        auto c = make_pair(N, U(rng));
        for (const auto& pr : validate_exponent_lemmas(c)) CHECK_MESSAGE(pr.pass, pr.name << " N=" << N << " p=" << c.p);
    }
}

TEST_CASE("scenario validation")
{
    RateScenario s{ScenarioKind::CaseII, 0, 1, 0, 0, 0};
    CHECK_THROWS_AS(s.validate(), Error);
    CHECK(scenario_from_string(to_string(ScenarioKind::Subcritical)) == ScenarioKind::Subcritical);
    CHECK_THROWS_AS(scenario_from_string("case-iv"), Error);
}

TEST_CASE("rate exponents")
{
    RateScenario s1{ScenarioKind::CaseI, 0, 1, 0, 0, 0};
    auto c = make_pair(8, 1.1);
    CHECK(-c.kU() * mu_rate(s1, 8, 1.1) == doctest::Approx(-0.5192).epsilon(1e-3));
}
