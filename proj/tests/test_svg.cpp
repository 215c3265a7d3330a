#include "lesys/error.hpp"
#include "lesys/svg.hpp"

#include <doctest.h>

#include <cmath>

using namespace lesys;

TEST_CASE("constant field draws a single legend value")
{
    SliceGrid g{3, 2, 0, 1, 0, 1, std::vector<double>(6, 2.5)};
    auto s = heatmap_svg(g, "flat");
    CHECK(s.find("<svg") == 0);
    CHECK(s.find(">2.5<") != std::string::npos);
    CHECK(s.find("nan") == std::string::npos);
}

TEST_CASE("all-NaN field says no data")
{
    SliceGrid g{2, 2, 0, 1, 0, 1, std::vector<double>(4, NAN)};
    CHECK(heatmap_svg(g, "none").find("no data") != std::string::npos);
}

TEST_CASE("empty grid is rejected")
{
    SliceGrid g{0, 0, 0, 1, 0, 1, {}};
    CHECK_THROWS_AS(heatmap_svg(g, "x"), Error);
    SliceGrid bad{2, 2, 0, 1, 0, 1, {1, 2, 3}};
    CHECK_THROWS_AS(heatmap_svg(bad, "x"), Error);
}

TEST_CASE("wide positive ranges switch to a log legend")
{
    SliceGrid g{2, 1, 0, 1, 0, 0, {1e-3, 1}};
    auto s = heatmap_svg(g, "log");
    CHECK(s.find("log scale") != std::string::npos);
    SliceGrid lin{2, 1, 0, 1, 0, 0, {1, 2}};
    CHECK(heatmap_svg(lin, "lin").find("log scale") == std::string::npos);
}

TEST_CASE("domain outline and comment")
{
    Domain d = Domain::chain(8, 2, 0.1);
    SliceGrid g{2, 2, -1, 4, -1, 1, {1, 2, 3, 4}};
    auto s = heatmap_svg(g, "t", &d, "seed=1");
    CHECK(s.find("<!-- seed=1 -->") != std::string::npos);
    size_t n = 0;
    for (size_t pos = 0; (pos = s.find("<ellipse", pos)) != std::string::npos; ++pos) ++n;
    CHECK(n == 2);
    CHECK(s.find("<line x1") != std::string::npos);
}
