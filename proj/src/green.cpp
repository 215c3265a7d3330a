#include "lesys/green.hpp"
#include "lesys/error.hpp"
#include "lesys/hyperbola.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lesys {

Vec axis_point(int N, double x1, double x2)
{
    Vec v = Vec::Zero(N);
    v(0) = x1;
    if (N > 1) v(1) = x2;
    return v;
}

Domain Domain::ball(int N, double radius, Vec center)
{
    if (N < 3 || N > kMaxDim) throw Error("config", "dimension out of range");
    if (!(radius > 0)) throw Error("config", "ball radius must be positive");
    Domain d;
    d.N_ = N;
    if (center.size() == 0) center = Vec::Zero(N);
    d.lobes_ = {Ball{center, radius}};
    d.bound_ = d.lobes_[0];
    return d;
}

Domain Domain::dumbbell(int N, std::vector<Ball> lobes, double eta)
{
    if (N < 3 || N > kMaxDim) throw Error("config", "dimension out of range");
    if (lobes.size() < 2) throw Error("config", "a dumbbell needs at least two lobes");
    if (!(eta > 0)) throw Error("config", "neck radius must be positive");
    std::vector<size_t> order(lobes.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return lobes[a].center(0) < lobes[b].center(0); });
    std::vector<Ball> sorted;
    for (size_t i : order) sorted.push_back(lobes[i]);
    lobes = std::move(sorted);
    for (size_t i = 0; i < lobes.size(); ++i) {
        if (lobes[i].center.size() != N) throw Error("config", "lobe centre has wrong dimension");
        if (lobes[i].center.tail(N - 1).norm() > 0) throw Error("config", "lobe centres must lie on the x1-axis");
        if (eta >= lobes[i].radius) throw Error("config", "neck radius must be below the lobe radii");
        if (i > 0 && lobes[i].center(0) - lobes[i - 1].center(0) <= lobes[i].radius + lobes[i - 1].radius)
            throw Error("config", "lobes must be pairwise disjoint");
    }
    Domain d;
    d.N_ = N;
    d.lobes_ = std::move(lobes);
    d.eta_ = eta;
    double lo = 1e300, hi = -1e300;
    for (auto& b : d.lobes_) {
        lo = std::min(lo, b.center(0) - b.radius);
        hi = std::max(hi, b.center(0) + b.radius);
    }
    double maxr = 0;
    for (auto& b : d.lobes_) maxr = std::max(maxr, b.radius);
    d.bound_.center = axis_point(N, 0.5 * (lo + hi));
    d.bound_.radius = std::max(0.5 * (hi - lo), maxr);
    return d;
}

Domain Domain::chain(int N, int l, double eta, double spacing)
{
    std::vector<Ball> lobes;
    for (int i = 0; i < l; ++i) lobes.push_back({axis_point(N, spacing * i), 1.0});
    if (l == 1) return ball(N, 1.0, lobes[0].center);
    return dumbbell(N, lobes, eta);
}

double Domain::inside_distance(const Vec& x) const
{
    double best = -1e300;
    for (auto& b : lobes_) best = std::max(best, b.radius - (x - b.center).norm());
    if (eta_ > 0) {
        double rad = x.tail(N_ - 1).norm();
        for (size_t i = 0; i + 1 < lobes_.size(); ++i) {
            double a = lobes_[i].center(0), c = lobes_[i + 1].center(0);
            best = std::max(best, std::min({eta_ - rad, x(0) - a, c - x(0)}));
        }
    }
    return best;
}

int Domain::lobe_of(const Vec& x) const
{
    for (size_t i = 0; i < lobes_.size(); ++i)
        if ((x - lobes_[i].center).norm() < lobes_[i].radius) return int(i);
    return -1;
}

Vec Domain::project_to_boundary(const Vec& x) const
{
    double best = -1e300;
    int kind = 0;
    size_t which = 0;
    for (size_t i = 0; i < lobes_.size(); ++i) {
        double s = lobes_[i].radius - (x - lobes_[i].center).norm();
        if (s > best) best = s, kind = 0, which = i;
    }
    double rad = x.tail(N_ - 1).norm();
    if (eta_ > 0) {
        for (size_t i = 0; i + 1 < lobes_.size(); ++i) {
            double a = lobes_[i].center(0), c = lobes_[i + 1].center(0);
            double s = std::min({eta_ - rad, x(0) - a, c - x(0)});
            // end caps sit inside the lobes, so only the lateral face is boundary
            if (s > best && eta_ - rad <= std::min(x(0) - a, c - x(0))) best = s, kind = 1, which = i;
        }
    }
    if (kind == 1 && rad > 0) {
        Vec y = x;
        y.tail(N_ - 1) *= eta_ / rad;
        return y;
    }
    const Ball& b = lobes_[which];
    Vec dx = x - b.center;
    double n = dx.norm();
    if (n == 0) return x;
    return b.center + dx * (b.radius / n);
}

std::string Domain::describe() const
{
    std::ostringstream os;
    if (is_ball())
        os << "ball(N=" << N_ << ",R=" << lobes_[0].radius << ")";
    else
        os << "dumbbell(N=" << N_ << ",lobes=" << lobes_.size() << ",eta=" << eta_ << ")";
    return os.str();
}

double newton_kernel(int N, double dist) { return gamma_N(N) * std::pow(dist, 2.0 - N); }

double ball_robin_H(const Ball& b, const Vec& x, const Vec& y)
{
    const int N = int(x.size());
    Vec xs = x - b.center, ys = y - b.center;
    double R2 = b.radius * b.radius;
    double A = xs.squaredNorm() * ys.squaredNorm() / R2 - 2 * xs.dot(ys) + R2;
    return gamma_N(N) * std::pow(A, (2.0 - N) / 2);
}

double ball_green(const Ball& b, const Vec& x, const Vec& y)
{
    double r = (x - y).norm();
    if (r == 0) throw Error("degenerate", "G(x,x) is singular");
    return newton_kernel(int(x.size()), r) - ball_robin_H(b, x, y);
}

Vec ball_grad_x_H(const Ball& b, const Vec& x, const Vec& y)
{
    const int N = int(x.size());
    Vec xs = x - b.center, ys = y - b.center;
    double R2 = b.radius * b.radius;
    double A = xs.squaredNorm() * ys.squaredNorm() / R2 - 2 * xs.dot(ys) + R2;
    return -(N - 2) * gamma_N(N) * std::pow(A, -N / 2.0) * (ys.squaredNorm() / R2 * xs - ys);
}

double resolved_shell(const Domain& d, const WosParams& p)
{
    return p.shell_eps > 0 ? p.shell_eps : 1e-5 * d.diameter();
}

Vec wos_exit(const Domain& d, const Vec& x0, double eps, long long step_cap, Stream& st)
{
    const int N = d.dim();
    Vec x = x0;
    Vec dir(N);
    for (long long k = 0; k < step_cap; ++k) {
        double r = d.inside_distance(x);
        if (r < eps) return d.project_to_boundary(x);
        double n2 = 0;
        for (int i = 0; i < N; ++i) {
            dir(i) = st.normal();
            n2 += dir(i) * dir(i);
        }
        x += (r / std::sqrt(n2)) * dir;
    }
    throw Error("max-steps", "walk exceeded the step cap");
}

MCEstimate wos_harmonic(const Domain& d, const Vec& x, const std::function<double(const Vec&)>& boundary, const WosParams& p)
{
    if (!d.inside(x)) throw Error("outside", "walk start is not interior");
    const double eps = resolved_shell(d, p);
    auto v = mc_mean(p.n_walks, p.seed, p.threads, 1, [&](Stream& st, double* out) {
        out[0] = boundary(wos_exit(d, x, eps, p.step_cap, st));
    });
    return v.component(0);
}

MCEstimate robin_H(const Domain& d, const Vec& x, const Vec& y, const WosParams& p)
{
    if (!d.inside(x) || !d.inside(y)) throw Error("outside", "probe points must be interior");
    if (d.is_ball()) return {ball_robin_H(d.lobes()[0], x, y), 0.0, 0, p.seed};
    const int N = d.dim();
    return wos_harmonic(d, x, [&](const Vec& z) { return newton_kernel(N, (z - y).norm()); }, p);
}

std::vector<NeckRow> neck_limit_check(int N, const std::vector<double>& etas, const std::vector<std::pair<Vec, Vec>>& probes,
                                      const WosParams& p, double spacing)
{
    std::vector<NeckRow> rows;
    for (double eta : etas) {
        Domain d = Domain::chain(N, 2, eta, spacing);
        for (size_t k = 0; k < probes.size(); ++k) {
            const auto& [x, y] = probes[k];
            WosParams pp = p;
            pp.seed = derive_seed(p.seed, k);  // common random numbers across eta
            NeckRow row{eta, int(k), robin_H(d, x, y, pp), 0.0};
            int lx = d.lobe_of(x), ly = d.lobe_of(y);
            row.lobe_value = (lx >= 0 && lx == ly) ? ball_robin_H(d.lobes()[lx], x, y) : newton_kernel(N, (x - y).norm());
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace lesys
