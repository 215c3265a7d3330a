#include "lesys/continuation.hpp"
#include "lesys/error.hpp"

#include <Eigen/SparseLU>
#include <doctest.h>

#include <cmath>

using namespace lesys;

TEST_CASE("rate fit recovers a synthetic power law")
{
    std::vector<double> eps, u0;
    for (int i = 0; i <= 40; ++i) {
        double e = std::pow(10.0, -2 - i / 20.0);
        eps.push_back(e);
        u0.push_back(3 * std::pow(e, -0.5) * (1 + 0.1 * e));
    }
    auto f = rate_fit(eps, u0, -0.5);
    CHECK(f.slope == doctest::Approx(-0.5).epsilon(1e-3));
    CHECK(f.ci < 1e-3);
    CHECK(f.pass);
    CHECK(f.points == 21);
}

TEST_CASE("robust refit drops a single outlier")
{
    std::vector<double> eps, u0;
    for (int i = 0; i <= 20; ++i) {
        double e = std::pow(10.0, -3 - i / 20.0);
        eps.push_back(e);
        u0.push_back(std::pow(e, -0.5));
    }
    u0.back() *= 3;
    auto f = rate_fit(eps, u0, -0.5);
    CHECK(std::abs(f.robust_slope + 0.5) < 1e-10);
    CHECK(std::abs(f.slope + 0.5) > 1e-3);
}

TEST_CASE("branch shorter than a decade is rejected")
{
    CHECK_THROWS_AS(rate_fit({1e-2, 5e-3}, {1, 2}, -0.5), Error);
}

TEST_CASE("constant source on the radial grid")
{
    auto g = make_radial_grid(8, 400, 1e-3);
    const int n = g.interior();
    Eigen::VectorXd f(n), w;
    for (int i = 0; i < n; ++i) f(i) = g.vol[i];
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(g.L);
    w = lu.solve(f);
    CHECK(w(0) == doctest::Approx(1.0 / 16).epsilon(1e-3));
}

TEST_CASE("mesh doubling moves u(0) by less than half a percent")
{
    auto prof = shoot_ground_state(make_pair(8, 1.1));
    RateScenario s{ScenarioKind::CaseI, 0, 1, 0, 0, 0};
    ContinuationOptions a, b;
    a.mesh_nodes = 1000;
    b.mesh_nodes = 2000;
    auto ba = continuation_run(prof, s, 1e-2, 3e-3, a), bb = continuation_run(prof, s, 1e-2, 3e-3, b);
    REQUIRE_FALSE(ba.truncated);
    REQUIRE_FALSE(bb.truncated);
    REQUIRE(ba.records.size() == bb.records.size());
    CHECK(ba.records.back().eps == doctest::Approx(bb.records.back().eps).epsilon(1e-5));
    CHECK(ba.records.back().u_center == doctest::Approx(bb.records.back().u_center).epsilon(5e-3));
}

TEST_CASE("equal exponents give u = v")
{
    auto cp = make_pair(8, 5.0 / 3);
    REQUIRE(std::abs(cp.q - cp.p) < 1e-12);
    auto prof = shoot_ground_state(cp);
    RateScenario s{ScenarioKind::CaseII, 1, 0, 0, 0, 0};
    auto g = make_radial_grid(8, 800, 1e-4);
    std::vector<double> u, v;
    bubble_guess(prof, 0.05, g, u, v);
    auto sol = solve_fixed_amplitude(cp, s, u[0], 1e-2, g, u, v);
    CHECK(sol.residual < 1e-9);
    double worst = 0;
    for (size_t i = 0; i < sol.u.size(); ++i) worst = std::max(worst, std::abs(sol.u[i] - sol.v[i]) / sol.u[0]);
    CHECK(worst < 1e-8);
}

TEST_CASE("predicted slopes")
{
    auto cp = make_pair(8, 1.1);
    CHECK(predicted_slope(cp, {ScenarioKind::CaseI, 0, 1, 0, 0, 0}) == doctest::Approx(-0.5192).epsilon(2e-4));
    CHECK(predicted_slope(cp, {ScenarioKind::CaseII, 1, 0, 0, 0, 0}) == doctest::Approx(-0.8425).epsilon(2e-4));
    CHECK(predicted_slope(cp, {ScenarioKind::Subcritical, 0, 0, 0, 1, 1}) == doctest::Approx(-0.4762).epsilon(2e-4));
}
