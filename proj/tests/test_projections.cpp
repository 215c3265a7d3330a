#include "lesys/nonlinear_green.hpp"
#include "lesys/projections.hpp"

#include <doctest.h>

#include <cmath>

using namespace lesys;

TEST_CASE("radial Dirichlet solve of a constant source")
{
    auto mesh = make_radial_mesh(1e-3);
    for (int N : {3, 8}) {
        auto w = radial_dirichlet_solve(mesh, N, [](double) { return 1.0; });
        CHECK(w.w0 == doctest::Approx(1.0 / (2 * N)).epsilon(1e-10));
        for (size_t i = 0; i < w.r.size(); i += 37) CHECK(w.w[i] == doctest::Approx((1 - w.r[i] * w.r[i]) / (2 * N)).epsilon(1e-9));
    }
}

TEST_CASE("nonlinear regular part on the diagonal")
{
    auto cp = make_pair(8, 1.1);
    CHECK(h_tilde_radial_ball(cp, 0) == doctest::Approx(tau_tilde_radial_oracle(cp)).epsilon(1e-6));
}

TEST_CASE("projected bubbles stay positive and below the bubble")
{
    auto prof = shoot_ground_state(make_pair(8, 1.1));
    auto s = project_all(prof, 0.02);
    CHECK(s.positive);
    CHECK(s.ordered);
    CHECK(s.max_residual < 1e-8);
    CHECK(s.e_U > 0);
}
