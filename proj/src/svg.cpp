#include "lesys/svg.hpp"
#include "lesys/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

namespace lesys {

namespace {

std::string num(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// five-stop blue-green-yellow ramp
std::string ramp(double t)
{
    static const std::array<std::array<double, 3>, 5> stops{{{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
    t = std::clamp(t, 0.0, 1.0) * 4;
    int i = std::min(3, int(t));
    double f = t - i;
    char buf[16];
    int c[3];
    for (int k = 0; k < 3; ++k) c[k] = int(std::lround(stops[i][k] + f * (stops[i + 1][k] - stops[i][k])));
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c[0], c[1], c[2]);
    return buf;
}

// 1-2-5 step giving roughly n intervals over [a, b]
double nice_step(double a, double b, int n)
{
    double raw = (b - a) / n, e = std::pow(10.0, std::floor(std::log10(raw))), f = raw / e;
    return e * (f < 1.5 ? 1 : f < 3.5 ? 2 : f < 7.5 ? 5 : 10);
}

std::vector<double> nice_ticks(double a, double b, int n)
{
    std::vector<double> t;
    double st = nice_step(a, b, n);
    for (double x = std::ceil(a / st - 1e-9) * st; x <= b + 1e-9 * st; x += st) t.push_back(std::abs(x) < 1e-12 * st ? 0 : x);
    return t;
}

}  // namespace

std::string heatmap_svg(const SliceGrid& g, const std::string& title, const Domain* outline, const std::string& comment)
{
    if (g.nx < 1 || g.ny < 1 || g.v.size() != size_t(g.nx) * size_t(g.ny)) throw Error("empty-grid", "heatmap needs a filled rectangular grid");
    double lo = INFINITY, hi = -INFINITY;
    for (double v : g.v)
        if (std::isfinite(v)) lo = std::min(lo, v), hi = std::max(hi, v);
    const bool any = std::isfinite(lo);
    const bool flat = !any || hi - lo <= 1e-14 * std::max(1.0, std::abs(hi));

    // positive fields spanning more than two decades are coloured on a log scale
    const bool logc = any && !flat && lo > 0 && hi / lo > 100;
    auto tone = [&](double v) { return logc ? std::log(v / lo) / std::log(hi / lo) : (v - lo) / (hi - lo); };

    const double ml = 70, mt = 40, lw = 90;
    const double dx = g.nx > 1 ? (g.x1 - g.x0) / (g.nx - 1) : 1, dy = g.ny > 1 ? (g.y1 - g.y0) / (g.ny - 1) : 1;
    const double X0 = g.x0 - dx / 2, X1 = g.x1 + dx / 2, Y0 = g.y0 - dy / 2, Y1 = g.y1 + dy / 2;
    const double aspect = std::clamp((Y1 - Y0) / (X1 - X0), 0.2, 5.0);
    const double W = aspect <= 1 ? 480 : 480 / aspect, H = aspect <= 1 ? 480 * aspect : 480;
    auto sx = [&](double x) { return ml + W * (x - X0) / (X1 - X0); };
    auto sy = [&](double y) { return mt + H * (Y1 - y) / (Y1 - Y0); };
    const double cw = W / g.nx, ch = H / g.ny;

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(ml + W + lw + 20) << "\" height=\"" << num(mt + H + 60)
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    if (!comment.empty()) os << "<!-- " << comment << " -->\n";
    os << "<text x=\"" << num(ml) << "\" y=\"24\" font-size=\"14\">" << title << "</text>\n";
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            double v = g.v[size_t(j) * g.nx + i];
            std::string col = !std::isfinite(v) ? "#d0d0d0" : flat ? ramp(0.5) : ramp(tone(v));
            os << "<rect x=\"" << num(ml + i * cw) << "\" y=\"" << num(mt + (g.ny - 1 - j) * ch) << "\" width=\"" << num(cw + 0.3)
               << "\" height=\"" << num(ch + 0.3) << "\" fill=\"" << col << "\"/>\n";
        }
    os << "<rect x=\"" << num(ml) << "\" y=\"" << num(mt) << "\" width=\"" << num(W) << "\" height=\"" << num(H)
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    if (outline) {
        os << "<g fill=\"none\" stroke=\"white\" stroke-width=\"1.5\">\n";
        const double kx = W / (X1 - X0), ky = H / (Y1 - Y0);
        for (const auto& b : outline->lobes())
            os << "<ellipse cx=\"" << num(sx(b.center(0))) << "\" cy=\"" << num(sy(b.center.size() > 1 ? b.center(1) : 0)) << "\" rx=\""
               << num(b.radius * kx) << "\" ry=\"" << num(b.radius * ky) << "\"/>\n";
        const auto& L = outline->lobes();
        for (size_t i = 0; i + 1 < L.size() && outline->eta() > 0; ++i)
            for (double s : {-1.0, 1.0})
                os << "<line x1=\"" << num(sx(L[i].center(0) + L[i].radius)) << "\" y1=\"" << num(sy(s * outline->eta())) << "\" x2=\""
                   << num(sx(L[i + 1].center(0) - L[i + 1].radius)) << "\" y2=\"" << num(sy(s * outline->eta())) << "\"/>\n";
        os << "</g>\n";
    }
    // axes
    for (double x : nice_ticks(X0, X1, 5))
        os << "<text x=\"" << num(sx(x)) << "\" y=\"" << num(mt + H + 16) << "\" text-anchor=\"middle\">" << num(x) << "</text>\n";
    for (double y : nice_ticks(Y0, Y1, 5))
        os << "<text x=\"" << num(ml - 6) << "\" y=\"" << num(sy(y) + 4) << "\" text-anchor=\"end\">" << num(y) << "</text>\n";
    os << "<text x=\"" << num(ml + W / 2) << "\" y=\"" << num(mt + H + 40) << "\" text-anchor=\"middle\">x1</text>\n";
    os << "<text x=\"18\" y=\"" << num(mt + H / 2) << "\" transform=\"rotate(-90 18 " << num(mt + H / 2) << ")\">x2</text>\n";
    // legend
    const double lx = ml + W + 20;
    if (flat) {
        os << "<rect x=\"" << num(lx) << "\" y=\"" << num(mt) << "\" width=\"20\" height=\"20\" fill=\"" << (any ? ramp(0.5) : "#d0d0d0")
           << "\"/>\n";
        os << "<text x=\"" << num(lx + 26) << "\" y=\"" << num(mt + 15) << "\">" << (any ? num(hi) : "no data") << "</text>\n";
    } else {
        const int nb = 50;
        for (int k = 0; k < nb; ++k)
            os << "<rect x=\"" << num(lx) << "\" y=\"" << num(mt + H * k / nb) << "\" width=\"20\" height=\"" << num(H / nb + 0.3)
               << "\" fill=\"" << ramp(1 - (k + 0.5) / nb) << "\"/>\n";
        std::vector<double> lt;
        if (logc) {
            for (double e = std::ceil(std::log10(lo)); e <= std::floor(std::log10(hi)); ++e) lt.push_back(std::pow(10.0, e));
            os << "<text x=\"" << num(lx) << "\" y=\"" << num(mt + H + 16) << "\">log scale</text>\n";
        } else {
            lt = nice_ticks(lo, hi, 5);
        }
        for (double v : lt) {
            double yy = mt + H * (1 - tone(v));
            os << "<line x1=\"" << num(lx + 20) << "\" y1=\"" << num(yy) << "\" x2=\"" << num(lx + 24) << "\" y2=\"" << num(yy)
               << "\" stroke=\"black\"/>\n";
            os << "<text x=\"" << num(lx + 27) << "\" y=\"" << num(yy + 4) << "\">" << num(v) << "</text>\n";
        }
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace lesys
