#include "lesys/error.hpp"
#include "lesys/nonlinear_green.hpp"

#include <doctest.h>

#include <cmath>

using namespace lesys;

TEST_CASE("ball oracles agree at the centre")
{
    auto cp = make_pair(8, 1.1);
    Domain d = Domain::ball(8);
    double rad = tau_tilde_radial_oracle(cp);
    CHECK(rad == doctest::Approx(7.901949278e-4).epsilon(1e-8));
    CHECK(tau_tilde_ball_oracle(cp, d.lobes()[0], axis_point(8, 0)) == doctest::Approx(rad).epsilon(1e-6));
    TauBallTable t(cp, 1);
    CHECK(t(0) == doctest::Approx(rad).epsilon(1e-6));
    CHECK(t(0.5) == doctest::Approx(tau_tilde_ball_oracle(cp, d.lobes()[0], axis_point(8, 0.5))).epsilon(1e-5));
}

TEST_CASE("radial oracle scales with the ball radius")
{
    // H~ is homogeneous of degree 2 - (N-2)p under dilation
    auto cp = make_pair(8, 1.1);
    CHECK(tau_tilde_radial_oracle(cp, 2) == doctest::Approx(std::pow(2.0, -cp.m()) * tau_tilde_radial_oracle(cp, 1)).epsilon(1e-6));
}

TEST_CASE("p = 1 gives the Navier regular part")
{
    CHECK(tau_tilde_radial_oracle(make_pair(8, 1.0)) == doctest::Approx(tau_tilde_navier_center(8)).epsilon(1e-6));
}

TEST_CASE("tau grows toward the boundary")
{
    auto cp = make_pair(8, 1.1);
    Ball b{axis_point(8, 0), 1};
    double prev = 0;
    for (double s : {0.0, 0.2, 0.4, 0.6, 0.8}) {
        double t = tau_tilde_ball_oracle(cp, b, axis_point(8, s));
        CHECK(t > prev);
        prev = t;
    }
}

TEST_CASE("Monte Carlo tau at the centre matches the oracle")
{
    auto cp = make_pair(8, 1.1);
    Domain d = Domain::ball(8);
    NLGParams prm;
    prm.n_samples = 20000;
    prm.seed = 4;
    auto t = tau_tilde(d, cp, axis_point(8, 0), prm);
    CHECK(t.value > 0);
    CHECK(std::abs(t.value - tau_tilde_radial_oracle(cp)) < 4 * t.std_error);
    CHECK(t.std_error < 0.05 * t.value);
}

TEST_CASE("weighted sum matches its components")
{
    auto cp = make_pair(8, 1.1);
    Domain d = Domain::ball(8);
    NLGParams prm;
    prm.n_samples = 4000;
    prm.seed = 8;
    auto c = SpikeConfig::single(axis_point(8, 0.1));
    std::vector<Vec> xs{axis_point(8, 0.1), axis_point(8, -0.2, 0.1)};
    auto m = h_tilde_config_multi(d, cp, c, xs, prm);
    auto s = h_tilde_weighted_sum(d, cp, c, xs, {2.0, -1.0}, prm);
    CHECK(s.value == doctest::Approx(2 * m.value[0] - m.value[1]).epsilon(1e-12));
}

TEST_CASE("configurations outside the admissible set are rejected")
{
    Domain d = Domain::ball(8);
    SpikeConfig c{{axis_point(8, 0.95)}, {1}, {}, 0.1, -1};
    CHECK_THROWS_AS(check_config(d, c), Error);
    SpikeConfig close{{axis_point(8, 0), axis_point(8, 0.01)}, {1, 1}, {}, 0.1, -1};
    CHECK_THROWS_AS(check_config(d, close), Error);
    SpikeConfig low{{axis_point(8, 0)}, {0.01}, {}, 0.1, -1};
    CHECK_THROWS_AS(check_config(d, low), Error);
}

TEST_CASE("gradient symmetry at an off-centre point")
{
    auto cp = make_pair(8, 1.1);
    Domain d = Domain::ball(8);
    NLGParams prm;
    prm.n_samples = 50000;
    prm.seed = 6;
    auto g = gradient_pair(d, cp, axis_point(8, 0.4), prm);
    for (size_t i = 0; i < g.residual.value.size(); ++i)
        CHECK(std::abs(g.residual.value[i]) <= 4 * g.residual.std_error[i] + 1e-12);
    // the radial component of grad tau points outward
    CHECK(g.grad_tau.value[0] > 0);
}
