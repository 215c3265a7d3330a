#include "lesys/bubble.hpp"

#include <doctest.h>

#include <cmath>

using namespace lesys;

namespace {

const BubbleProfile& profile_8()
{
    static const BubbleProfile prof = shoot_ground_state(make_pair(8, 1.1));
    return prof;
}

}  // namespace

TEST_CASE("ground state is positive and decreasing")
{
    const auto& prof = profile_8();
    CHECK(prof.U.front() == doctest::Approx(1).epsilon(1e-14));
    for (size_t i = 1; i < prof.r.size(); ++i) {
        REQUIRE(prof.U[i] > 0);
        REQUIRE(prof.V[i] > 0);
        REQUIRE(prof.U[i] < prof.U[i - 1]);
        REQUIRE(prof.V[i] < prof.V[i - 1]);
    }
    CHECK(prof.v0_width < 1e-12 * prof.v0);
}

TEST_CASE("overshoot and undershoot on either side of v0")
{
    const auto& prof = profile_8();
    CHECK(classify_shot(prof.pair, prof.v0 * 1.01L, 1e4) == 1);
    CHECK(classify_shot(prof.pair, prof.v0 * 0.99L, 1e4) == -1);
}

TEST_CASE("decay constants satisfy the Pohozaev-type identity")
{
    auto d = decay_constants(profile_8());
    CHECK(d.pohozaev_residual < 1e-3);
    CHECK(d.a == doctest::Approx(9185.71).epsilon(1e-4));
    CHECK(d.b == doctest::Approx(21786.2).epsilon(1e-4));
    auto d6 = decay_constants(shoot_ground_state(make_pair(6, 1.15)));
    CHECK(d6.pohozaev_residual < 1e-3);
}

TEST_CASE("refined decay of the remainders")
{
    CHECK(refined_decay_check(profile_8()).pass);
}

TEST_CASE("tail model continues the profile")
{
    const auto& prof = profile_8();
    const double R = prof.R_max();
    CHECK(prof.Uat(R * (1 - 1e-9)) == doctest::Approx(prof.Uat(R * (1 + 1e-9))).epsilon(1e-5));
    CHECK(prof.Vat(R * (1 - 1e-9)) == doctest::Approx(prof.Vat(R * (1 + 1e-9))).epsilon(1e-5));
}

TEST_CASE("scaled bubble")
{
    const auto& prof = profile_8();
    const double mu = 0.1, dist = 0.05;
    auto s = prof.scaled(mu, dist);
    CHECK(s[0] == doctest::Approx(std::pow(mu, -prof.pair.kU()) * prof.Uat(dist / mu)).epsilon(1e-13));
    CHECK(s[1] == doctest::Approx(std::pow(mu, -prof.pair.kV()) * prof.Vat(dist / mu)).epsilon(1e-13));
}

TEST_CASE("Talenti profile when p = q is critical")
{
    for (int N : {4, 6, 8}) {
        auto prof = shoot_ground_state(make_pair(N, double(N + 2) / (N - 2)));
        CHECK(talenti_error(prof, 20) < 1e-6);
        double K = std::pow(double(N * (N - 2)), (N - 2) / 2.0);
        CHECK(fast_decay_constant(prof) == doctest::Approx(K).epsilon(1e-3));
    }
}

TEST_CASE("energy constants")
{
    auto K = bubble_constants(profile_8());
    for (int i = 0; i < 7; ++i) {
        CHECK(K.finite[i]);
        CHECK(K.err[i] < 1e-8 * std::abs(K.A[i]));
    }
    for (int i = 0; i < 5; ++i) CHECK(K.A[i] > 0);
    // A4 converges slowly at N = 8 and carries most of its tail analytically
    CHECK(K.tail_fraction[3] > 0.01);
    CHECK(K.flagged);
}

TEST_CASE("kernel elements solve the linearised system")
{
    const auto& prof = profile_8();
    auto els = kernel_elements(prof);
    REQUIRE(els.size() >= 2);
    for (const auto& el : els) CHECK(kernel_residual(prof, el) < 1e-4);
}
