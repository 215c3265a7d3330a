#include "lesys/error.hpp"
#include "lesys/green.hpp"
#include "lesys/hyperbola.hpp"
#include "lesys/mc.hpp"

#include <doctest.h>

#include <cmath>

using namespace lesys;

TEST_CASE("ball Green function is symmetric and vanishes on the boundary")
{
    Ball b{axis_point(5, 0), 1};
    Stream st(3);
    for (int t = 0; t < 100; ++t) {
        Vec x = Vec::Zero(5), y = Vec::Zero(5);
        for (int i = 0; i < 5; ++i) x(i) = 0.4 * (st.uniform() - 0.5), y(i) = 0.4 * (st.uniform() - 0.5);
        CHECK(ball_green(b, x, y) == doctest::Approx(ball_green(b, y, x)).epsilon(1e-13));
        CHECK(ball_green(b, x, y) > 0);
        Vec z = y / y.norm();
        CHECK(std::abs(ball_green(b, x, z)) < 1e-12 * newton_kernel(5, (x - z).norm()));
    }
}

TEST_CASE("Robin function of the ball at the centre")
{
    Ball b{axis_point(8, 0), 1};
    Vec o = axis_point(8, 0);
    CHECK(ball_robin_H(b, o, o) == doctest::Approx(gamma_N(8)).epsilon(1e-14));
}

TEST_CASE("walk on spheres reproduces the closed form")
{
    Domain d = Domain::ball(8);
    Vec x = axis_point(8, 0.5, 0.2), y = axis_point(8, -0.3, 0.1);
    WosParams p;
    p.n_walks = 20000;
    p.seed = 11;
    auto H = wos_harmonic(d, x, [&](const Vec& z) { return newton_kernel(8, (z - y).norm()); }, p);
    CHECK(std::abs(H.value - ball_robin_H(d.lobes()[0], x, y)) < 4 * H.std_error);
    CHECK(robin_H(d, x, y, p).value == ball_robin_H(d.lobes()[0], x, y));
    CHECK(H.std_error < 0.02 * H.value);
}

TEST_CASE("Monte Carlo is independent of the thread count")
{
    Domain d = Domain::ball(6);
    Vec x = axis_point(6, 0.3), y = axis_point(6, 0, 0.4);
    WosParams p;
    p.n_walks = 2000;
    p.seed = 5;
    auto bc = [&](const Vec& z) { return newton_kernel(6, (z - y).norm()); };
    auto a = wos_harmonic(d, x, bc, p);
    p.threads = 3;
    auto b = wos_harmonic(d, x, bc, p);
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);
}

TEST_CASE("dumbbell geometry")
{
    Domain d = Domain::chain(8, 3, 0.1);
    CHECK(d.lobes().size() == 3);
    CHECK(d.lobe_of(axis_point(8, 3)) == 1);
    CHECK(d.lobe_of(axis_point(8, 1.5)) == -1);
    CHECK(d.inside(axis_point(8, 1.5)));
    CHECK_FALSE(d.inside(axis_point(8, 1.5, 0.2)));
    CHECK(d.inside_distance(axis_point(8, 0)) == doctest::Approx(1));
    Vec x = axis_point(8, 0.2, 0.9);
    CHECK(std::abs(d.inside_distance(d.project_to_boundary(x))) < 1e-12);
}

TEST_CASE("necks decouple the lobes")
{
    WosParams p;
    p.n_walks = 4000;
    p.seed = 2;
    auto rows = neck_limit_check(6, {0.05}, {{axis_point(6, 0.2), axis_point(6, -0.1, 0.2)}}, p);
    REQUIRE(rows.size() == 1);
    CHECK(std::abs(rows[0].H.value - rows[0].lobe_value) < 4 * rows[0].H.std_error + 0.01 * rows[0].lobe_value);
}
