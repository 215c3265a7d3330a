#include "lesys/error.hpp"
#include "lesys/landscape.hpp"

#include <doctest.h>

#include <cmath>

using namespace lesys;

namespace {

const EnergyModel& model()
{
    static const EnergyModel em = EnergyModel::from_profile(shoot_ground_state(make_pair(8, 1.1)));
    return em;
}

const RateScenario case_i{ScenarioKind::CaseI, 0, 1, 0, 0, 0};
const RateScenario case_ii{ScenarioKind::CaseII, 1, 0, 0, 0, 0};
const RateScenario sub{ScenarioKind::Subcritical, 0, 0, 0, 1, 1};

}  // namespace

TEST_CASE("coefficients")
{
    auto C = landscape_coefficients(model(), sub, 1);
    CHECK(C.C0 == doctest::Approx(121856).epsilon(1e-4));
    CHECK(C.C2 == doctest::Approx(349217).epsilon(1e-4));
    CHECK(C.C5 == doctest::Approx(C.C7).epsilon(1e-14));
    CHECK(landscape_coefficients(model(), sub, 3).C5 == doctest::Approx(3 * C.C7).epsilon(1e-14));
}

TEST_CASE("closed-form optimal height is stationary")
{
    const double tau = 7.901949278e-4;
    for (const auto& s : {case_i, case_ii, sub}) {
        double d = optimal_d(model(), s, tau), h = 1e-5 * d;
        double g = (single_spike_energy(model(), s, d + h, tau) - single_spike_energy(model(), s, d - h, tau)) / (2 * h);
        double scale = std::abs(single_spike_energy(model(), s, d, tau)) / d;
        CHECK(std::abs(g) < 1e-6 * scale);
        CHECK(single_spike_energy(model(), s, 0.9 * d, tau) > single_spike_energy(model(), s, d, tau));
        CHECK(single_spike_energy(model(), s, 1.1 * d, tau) > single_spike_energy(model(), s, d, tau));
    }
    CHECK(optimal_d(model(), case_i, 7.901949278e-4) == doctest::Approx(0.0371643).epsilon(1e-5));
}

TEST_CASE("optimal height scales as tau^{-1/(a-b)}")
{
    for (const auto& s : {case_i, case_ii, sub}) {
        auto e = energy_exponents(model(), s);
        double d1 = optimal_d(model(), s, 1e-3), d2 = optimal_d(model(), s, 2e-3);
        CHECK(d2 / d1 == doctest::Approx(std::pow(2.0, -1 / (e.a - e.b))).epsilon(1e-12));
    }
    CHECK_THROWS_AS(optimal_d(model(), case_i, -1), Error);
}

TEST_CASE("F1 is homogeneous of degree (N-2)p-2 in d")
{
    Domain dom = Domain::ball(8);
    NLGParams prm;
    prm.n_samples = 2000;
    prm.seed = 3;
    SpikeConfig c{{axis_point(8, -0.3), axis_point(8, 0.3)}, {1, 0.7}, {}, 0.1, -1};
    SpikeConfig c2 = c;
    for (auto& d : c2.d) d *= 2;
    c2.delta1 = 0.05;
    auto f1 = F1(model(), dom, c, prm), f2 = F1(model(), dom, c2, prm);
    CHECK(f2.value == doctest::Approx(std::pow(2.0, model().cp.m()) * f1.value).epsilon(1e-10));
}

TEST_CASE("log term vanishes at unit heights")
{
    SpikeConfig c{{axis_point(8, 0)}, {1}, {}, 0.1, -1};
    CHECK(F3(model(), sub, c) == 0);
    c.d[0] = std::exp(1.0);
    CHECK(F3(model(), sub, c) == doctest::Approx(-landscape_coefficients(model(), sub, 1).C7).epsilon(1e-14));
}

TEST_CASE("lobe tau is NaN in the neck")
{
    auto cp = make_pair(8, 1.1);
    LobeTau t(cp, Domain::chain(8, 2, 0.1));
    CHECK(std::isnan(t(axis_point(8, 1.5))));
    CHECK(t(axis_point(8, 3)) == doctest::Approx(tau_tilde_radial_oracle(cp)).epsilon(1e-6));
}

TEST_CASE("single spike on the ball sits at the centre")
{
    LandscapeOptions opt;
    opt.starts = 3;
    auto r = minimize_landscape(model(), Domain::ball(8), 1, case_i, opt);
    REQUIRE(r.minima.size() == 1);
    CHECK(r.minima[0].configuration.xi[0].norm() < 1e-4);
    CHECK(r.minima[0].configuration.d[0] == doctest::Approx(0.0371643).epsilon(1e-5));
    CHECK(r.minima[0].classification == "min");
}

TEST_CASE("more spikes than lobes is a configuration error")
{
    LandscapeOptions opt;
    opt.starts = 2;
    CHECK_THROWS_AS(minimize_landscape(model(), Domain::chain(8, 2, 0.05), 3, case_i, opt), Error);
}

TEST_CASE("energy slice")
{
    LobeTau t(model().cp, Domain::ball(8));
    auto g = energy_slice(model(), case_i, t, -0.9, 0.9, -0.9, 0.9, 5, 5);
    REQUIRE(g.v.size() == 25);
    CHECK(g.v[12] < g.v[11]);
    CHECK_THROWS_AS(energy_slice(model(), case_i, t, -1, 1, -1, 1, 0, 5), Error);
}
