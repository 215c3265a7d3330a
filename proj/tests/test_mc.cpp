#include "lesys/mc.hpp"

#include <doctest.h>

#include <cmath>

using namespace lesys;

TEST_CASE("derived seeds are distinct")
{
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("uniform mean and batch error")
{
    auto m = mc_mean(100000, 9, 1, 2, [](Stream& st, double* out) {
        double u = st.uniform();
        out[0] = u;
        out[1] = st.normal();
    });
    CHECK(std::abs(m.value[0] - 0.5) < 4 * m.std_error[0]);
    CHECK(m.std_error[0] == doctest::Approx(std::sqrt(1.0 / 12 / 100000)).epsilon(0.3));
    CHECK(std::abs(m.value[1]) < 4 * m.std_error[1]);
}

TEST_CASE("thread count does not change the estimate")
{
    auto f = [](Stream& st, double* out) { out[0] = st.uniform() * st.uniform(); };
    auto a = mc_mean(5000, 4, 1, 1, f), b = mc_mean(5000, 4, 4, 1, f);
    CHECK(a.value[0] == b.value[0]);
    CHECK(a.std_error[0] == b.std_error[0]);
}
