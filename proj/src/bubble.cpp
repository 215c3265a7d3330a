#include "lesys/bubble.hpp"
#include "lesys/error.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>

namespace lesys {

namespace {

using real = long double;
using state = std::array<real, 4>;  // U, U', V, V'
namespace ode = boost::numeric::odeint;

constexpr real r_start = 1e-4L;

real spow(real x, real e) { return x >= 0 ? std::pow(x, e) : -std::pow(-x, e); }

struct System {
    int N;
    real p, q;
    void operator()(const state& y, state& dy, real r) const
    {
        dy[0] = y[1];
        dy[1] = -spow(y[2], p) - (N - 1) * y[1] / r;
        dy[2] = y[3];
        dy[3] = -spow(y[0], q) - (N - 1) * y[3] / r;
    }
};

// fourth-order Taylor start; the r^6 terms are below long double resolution at r_start
state series(const CriticalPair& cp, real v0, real r)
{
    const int N = cp.N;
    const real p = cp.p, q = cp.q;
    real u2 = -std::pow(v0, p) / (2 * N);
    real w2 = -1.0L / (2 * N);
    real u4 = -p * std::pow(v0, p - 1) * w2 / (4 * (N + 2));
    real w4 = -q * u2 / (4 * (N + 2));
    real r2 = r * r;
    return {1 + u2 * r2 + u4 * r2 * r2, 2 * u2 * r + 4 * u4 * r2 * r,
            v0 + w2 * r2 + w4 * r2 * r2, 2 * w2 * r + 4 * w4 * r2 * r};
}

auto make_stepper()
{
    return ode::make_controlled<ode::runge_kutta_fehlberg78<state, real>>(1e-40L, 1e-18L);
}

// Least squares y ~ sum c_j x^e_j on the given samples, columns scaled to unit max
std::vector<double> power_fit(const std::vector<double>& x, const std::vector<double>& y,
                              const std::vector<double>& e)
{
    Eigen::MatrixXd A(x.size(), e.size());
    Eigen::VectorXd b(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        for (size_t j = 0; j < e.size(); ++j) A(i, j) = std::pow(x[i], e[j]);
        b(i) = y[i];
    }
    Eigen::VectorXd scale = A.cwiseAbs().colwise().maxCoeff();
    for (int j = 0; j < A.cols(); ++j) A.col(j) /= scale(j);
    Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
    std::vector<double> out(e.size());
    for (size_t j = 0; j < e.size(); ++j) out[j] = c(j) / scale(j);
    return out;
}

double eval_powers(const std::vector<double>& c, const std::vector<double>& e, double x, int deriv = 0)
{
    double s = 0;
    for (size_t j = 0; j < c.size(); ++j)
        s += deriv ? c[j] * e[j] * std::pow(x, e[j] - 1) : c[j] * std::pow(x, e[j]);
    return s;
}

// integral_s^inf f(t) dt through t = s/x, x in (0,1]
template <class F>
double outer_integral(F f, double s)
{
    using boost::math::quadrature::gauss;
    return gauss<double, 30>::integrate([&](double x) { return x <= 0 ? 0.0 : f(s / x) * s / (x * x); }, 0.0, 1.0);
}

}  // namespace

int classify_shot(const CriticalPair& cp, long double v0, double R_cap)
{
    System sys{cp.N, cp.p, cp.q};
    auto stepper = make_stepper();
    state y = series(cp, v0, r_start);
    real r = r_start, dr = 1e-3L;
    while (r < R_cap) {
        if (r + dr > R_cap) dr = R_cap - r;
        if (stepper.try_step(sys, y, r, dr) != ode::success) continue;
        bool uneg = y[0] < 0, vneg = y[2] < 0;
        if (uneg && vneg) return y[0] / std::abs(y[1]) < y[2] / std::abs(y[3]) ? 1 : -1;
        if (uneg) return 1;
        if (vneg) return -1;
    }
    return 0;
}

BubbleProfile shoot_ground_state(const CriticalPair& cp, const ShootOptions& opt)
{
    const int N = cp.N;
    const double pc = double(N + 2) / (N - 2);
    if (!(cp.p > 2.0 / (N - 2)) || cp.p > pc * (1 + 1e-12))
        throw Error("regime", "shooting needs 2/(N-2) < p <= (N+2)/(N-2)");
    if (!(opt.tol > 0) || !(opt.R_max > 1) || opt.nodes < 100) throw Error("config", "bad shooting options");

    real lo, hi;
    if (opt.bracket) {
        lo = (*opt.bracket)[0];
        hi = (*opt.bracket)[1];
        if (!(lo > 0 && hi > lo)) throw Error("config", "v0 bracket must satisfy 0 < lo < hi");
        if (classify_shot(cp, lo, opt.R_cap) != -1 || classify_shot(cp, hi, opt.R_cap) != 1)
            throw Error("no-bracket", "initial v0 bracket does not straddle the ground state");
    } else {
        // expand geometrically from v0 = 1 until the classification flips
        lo = hi = 1;
        int c = classify_shot(cp, 1.0L, opt.R_cap);
        for (int it = 0; c != 0; ++it) {
            if (it > 80) throw Error("no-bracket", "could not bracket v0");
            if (c > 0) {
                hi = lo;
                lo /= 2;
                c = classify_shot(cp, lo, opt.R_cap);
                if (c < 0) break;
                if (c == 0) hi = lo;
            } else {
                lo = hi;
                hi *= 2;
                c = classify_shot(cp, hi, opt.R_cap);
                if (c > 0) break;
                if (c == 0) lo = hi;
            }
        }
    }

    BubbleProfile prof;
    prof.pair = cp;
    int iters = 0;
    real v0 = lo;
    if (hi > lo) {
        while ((hi - lo) > opt.tol * hi && iters < 200) {
            real mid = 0.5L * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            int c = classify_shot(cp, mid, opt.R_cap);
            ++iters;
            if (c > 0)
                hi = mid;
            else if (c < 0)
                lo = mid;
            else {
                lo = hi = mid;
                break;
            }
        }
        v0 = 0.5L * (lo + hi);
    }
    prof.v0 = double(v0);
    prof.v0_width = double(hi - lo);
    prof.bisections = iters;

    // profile on r = e^s - 1, s uniform
    const int M = opt.nodes;
    const double S = std::log1p(opt.R_max);
    const double ds = S / (M - 1);
    prof.r.resize(M);
    for (int i = 0; i < M; ++i) prof.r[i] = std::expm1(i * ds);
    prof.r.back() = opt.R_max;
    prof.U.resize(M);
    prof.V.resize(M);
    prof.Up.resize(M);
    prof.Vp.resize(M);

    std::vector<real> times;
    int first = 0;
    for (int i = 0; i < M; ++i) {
        if (prof.r[i] < r_start) {
            state y = series(cp, v0, prof.r[i]);
            prof.U[i] = double(y[0]);
            prof.Up[i] = double(y[1]);
            prof.V[i] = double(y[2]);
            prof.Vp[i] = double(y[3]);
            first = i + 1;
        } else {
            times.push_back(prof.r[i]);
        }
    }
    times.insert(times.begin(), r_start);
    System sys{N, cp.p, cp.q};
    state y = series(cp, v0, r_start);
    int k = first - 1;
    ode::integrate_times(make_stepper(), sys, y, times.begin(), times.end(), 1e-3L, [&](const state& s, real) {
        if (k >= first) {
            prof.U[k] = double(s[0]);
            prof.Up[k] = double(s[1]);
            prof.V[k] = double(s[2]);
            prof.Vp[k] = double(s[3]);
        }
        ++k;
    });
    prof.U[0] = 1.0;
    prof.V[0] = double(v0);
    prof.Up[0] = prof.Vp[0] = 0;
    prof.finalize_grid(ds);

    for (int i = 1; i < M; ++i)
        if (!(prof.U[i] > 0 && prof.V[i] > 0 && prof.Up[i] < 0 && prof.Vp[i] < 0))
            throw Error("not-converged", "profile loses positivity or monotonicity at r=" + std::to_string(prof.r[i]));

    // tail laws from the window [R/2, R]
    std::vector<double> xs, yv, ru;
    for (int i = 0; i < M; ++i)
        if (prof.r[i] >= 0.5 * opt.R_max) {
            xs.push_back(prof.r[i]);
            ru.push_back(prof.U[i]);
            yv.push_back(prof.V[i]);
        }
    TailModel& t = prof.tail;
    const double p = cp.p, q = cp.q;
    if (cp.slow_decay()) {
        const double m = cp.m(), kappa = m * q - N, g = N - 2 - m;
        t.ue = {-m, 2.0 - N, -m - kappa, -m - kappa - g};
        t.uc = power_fit(xs, ru, t.ue);
        t.a = t.uc[0];
        auto Utail = [&](double s) { return eval_powers(t.uc, t.ue, s); };
        auto Iout = [&](double s) {
            return outer_integral([&](double u) { return std::pow(Utail(u), q) * std::pow(u, N - 1); }, s);
        };
        // b = (flux through r + remaining mass outside r)/(N-2), evaluated across the window
        std::vector<double> bs, as;
        for (int i = 0; i < M; ++i) {
            if (prof.r[i] < 0.5 * opt.R_max) continue;
            double s = prof.r[i];
            bs.push_back((-std::pow(s, N - 1) * prof.Vp[i] + Iout(s)) / (N - 2));
            as.push_back(std::pow(s, m) * ((N - 2) * prof.U[i] + s * prof.Up[i]) / g);
        }
        t.b = bs.back();
        auto spread = [](const std::vector<double>& v) {
            auto [mn, mx] = std::minmax_element(v.begin(), v.end());
            return (*mx - *mn) / std::abs(v.back());
        };
        t.b_variation = spread(bs);
        t.a_variation = spread(as);
    } else {
        const double eu = N - (N - 2) * p, ev = N - (N - 2) * q;
        t.fast = true;
        std::vector<double> su(xs.size()), sv(xs.size());
        for (size_t i = 0; i < xs.size(); ++i) {
            su[i] = ru[i] * std::pow(xs[i], N - 2);
            sv[i] = yv[i] * std::pow(xs[i], N - 2);
        }
        auto basis = [](double e) {
            if (std::abs(e + 2) < 1e-9) return std::vector<double>{0.0, -2.0, -4.0};
            return std::vector<double>{0.0, std::max(e, -2.0), std::min(e, -2.0)};
        };
        std::vector<double> bu = basis(eu), bv = basis(ev);
        auto cu = power_fit(xs, su, bu);
        auto cv = power_fit(xs, sv, bv);
        for (size_t j = 0; j < 3; ++j) {
            t.ue.push_back(bu[j] + 2 - N);
            t.ve.push_back(bv[j] + 2 - N);
        }
        t.uc = cu;
        t.vc = cv;
        t.a = cu[0];
        t.b = cv[0];
        auto spread = [&](const std::vector<double>& v, const std::vector<double>& c, const std::vector<double>& e) {
            double mn = 1e300, mx = -1e300;
            for (size_t i = 0; i < xs.size(); ++i) {
                double corr = v[i] - (eval_powers(c, e, xs[i]) - c[0]);
                mn = std::min(mn, corr);
                mx = std::max(mx, corr);
            }
            return (mx - mn) / std::abs(c[0]);
        };
        t.a_variation = spread(su, cu, bu);
        t.b_variation = spread(sv, cv, bv);
    }
    return prof;
}

std::array<double, 4> BubbleProfile::tail_eval(double s) const
{
    const int N = pair.N;
    const TailModel& t = tail;
    double u = eval_powers(t.uc, t.ue, s), up = eval_powers(t.uc, t.ue, s, 1);
    if (t.fast) return {u, eval_powers(t.vc, t.ve, s), up, eval_powers(t.vc, t.ve, s, 1)};
    const double q = pair.q;
    auto f = [&](double x) { return std::pow(eval_powers(t.uc, t.ue, x), q); };
    double Iout = outer_integral([&](double x) { return f(x) * std::pow(x, N - 1); }, s);
    double Jout = outer_integral([&](double x) { return f(x) * x; }, s);
    double inner = (N - 2) * t.b - Iout;
    double v = (std::pow(s, 2 - N) * inner + Jout) / (N - 2);
    double vp = -std::pow(s, 1 - N) * inner;
    return {u, v, up, vp};
}

std::array<double, 4> BubbleProfile::eval(double s) const
{
    if (s < 0) s = -s;
    if (s >= r.back()) {
        if (s == r.back()) return {U.back(), V.back(), Up.back(), Vp.back()};
        return tail_eval(s);
    }
    size_t i = std::min<size_t>(size_t(std::log1p(s) / ds_), r.size() - 2);
    while (i > 0 && r[i] > s) --i;
    while (i + 2 < r.size() && r[i + 1] <= s) ++i;
    const double h = r[i + 1] - r[i], t = (s - r[i]) / h;
    // cubic Hermite for the values; derivatives from the differentiated cubic
    auto herm = [&](double f0, double f1, double d0, double d1, double& val, double& der) {
        double t2 = t * t, t3 = t2 * t;
        val = (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * f1 + (t3 - t2) * h * d1;
        der = ((6 * t2 - 6 * t) * f0 + (3 * t2 - 4 * t + 1) * h * d0 + (-6 * t2 + 6 * t) * f1 + (3 * t2 - 2 * t) * h * d1) / h;
    };
    double u, up, v, vp;
    herm(U[i], U[i + 1], Up[i], Up[i + 1], u, up);
    herm(V[i], V[i + 1], Vp[i], Vp[i + 1], v, vp);
    return {u, v, up, vp};
}

std::array<double, 2> BubbleProfile::scaled(double mu, double dist) const
{
    auto e = eval(dist / mu);
    return {std::pow(mu, -pair.kU()) * e[0], std::pow(mu, -pair.kV()) * e[1]};
}

DecayReport decay_constants(const BubbleProfile& prof)
{
    const CriticalPair& cp = prof.pair;
    if (!cp.slow_decay()) throw Error("regime", "decay constants a, b need p < N/(N-2)");
    DecayReport d;
    d.a = prof.tail.a;
    d.b = prof.tail.b;
    d.a_window_variation = prof.tail.a_variation;
    d.b_window_variation = prof.tail.b_variation;
    double bp = std::pow(d.b, cp.p);
    d.pohozaev_residual = std::abs(bp - d.a * cp.m() * (cp.N - (cp.N - 2) * cp.p)) / bp;
    d.plateau = d.a_window_variation < 0.05 && d.b_window_variation < 0.05;
    if (!d.plateau) throw Error("no-plateau", "decay estimators vary by more than 5% over the fit window");
    return d;
}

RefinedDecay refined_decay_check(const BubbleProfile& prof)
{
    const CriticalPair& cp = prof.pair;
    const int N = cp.N;
    if (!(cp.p > 1 && cp.p < double(N - 1) / (N - 2))) throw Error("regime", "refined decay needs 1 < p < (N-1)/(N-2)");
    const double a = prof.tail.a, b = prof.tail.b, m = cp.m();
    RefinedDecay out;
    out.bound_V = 1.0 - N;
    out.bound_U = 1.0 - (N - 2) * cp.p;
    std::vector<double> lx, lu, lv;
    const double r0 = 5, r1 = std::min(40.0, 0.5 * prof.R_max());
    for (int k = 0; k <= 40; ++k) {
        double s = r0 * std::pow(r1 / r0, k / 40.0);
        auto e = prof.eval(s);
        lx.push_back(std::log(s));
        lu.push_back(std::log(std::abs(e[0] - a * std::pow(s, -m))));
        lv.push_back(std::log(std::abs(e[1] - b * std::pow(s, 2.0 - N))));
    }
    auto slope = [&](const std::vector<double>& y) {
        double mx = 0, my = 0;
        for (size_t i = 0; i < lx.size(); ++i) {
            mx += lx[i];
            my += y[i];
        }
        mx /= lx.size();
        my /= lx.size();
        double sxy = 0, sxx = 0;
        for (size_t i = 0; i < lx.size(); ++i) {
            sxy += (lx[i] - mx) * (y[i] - my);
            sxx += (lx[i] - mx) * (lx[i] - mx);
        }
        return sxy / sxx;
    };
    out.slope_U = slope(lu);
    out.slope_V = slope(lv);
    out.remV5 = std::abs(prof.Vat(5) - b * std::pow(5.0, 2.0 - N));
    out.remV10 = std::abs(prof.Vat(10) - b * std::pow(10.0, 2.0 - N));
    out.pass = out.slope_U <= out.bound_U + 0.3 && out.slope_V <= out.bound_V + 0.3 && out.remV10 < out.remV5;
    return out;
}

BubbleConstants bubble_constants(const BubbleProfile& prof)
{
    const CriticalPair& cp = prof.pair;
    const int N = cp.N;
    const double p = cp.p, q = cp.q;
    BubbleConstants bc;
    bc.finite = {true, true, N > 2 + 4 / p, 2 * p > 1 && N > 4 * (p + 1) / (2 * p - 1), N > 4, true, true};
    if (!cp.slow_decay()) {
        bc.finite[2] = bc.finite[3] = N > 4;
    }
    using Fn = double (*)(double, double, double, double);
    const std::array<Fn, 7> f = {
        [](double u, double, double, double q) { return std::pow(u, q + 1); },
        [](double u, double, double, double q) { return std::pow(u, q); },
        [](double u, double v, double, double) { return u * v; },
        [](double u, double, double, double) { return u * u; },
        [](double, double v, double, double) { return v * v; },
        [](double u, double, double, double q) { return std::pow(u, q + 1) * std::log(u); },
        [](double, double v, double p, double) { return std::pow(v, p + 1) * std::log(v); },
    };
    const double S = std::sqrt(double(sphere_area(N)));
    const double area = S * S;
    const size_t M = prof.r.size();
    const double ds = prof.ds();
    for (int k = 0; k < 7; ++k) {
        if (!bc.finite[k]) {
            bc.A[k] = INFINITY;
            continue;
        }
        // Simpson in s where r = e^s - 1, dr = e^s ds; half-grid Simpson for the error estimate
        auto g = [&](size_t i) { return f[k](prof.U[i], prof.V[i], p, q) * std::pow(prof.r[i], N - 1) * (prof.r[i] + 1); };
        size_t n = (M - 1) % 2 == 0 ? M - 1 : M - 2;
        double s1 = g(0) + g(n);
        for (size_t i = 1; i < n; ++i) s1 += g(i) * (i % 2 ? 4 : 2);
        s1 *= ds / 3;
        size_t n2 = (n / 2) % 2 == 0 ? n : n - 2;
        double s2 = g(0) + g(n2);
        for (size_t i = 2; i < n2; i += 2) s2 += g(i) * ((i / 2) % 2 ? 4 : 2);
        s2 *= 2 * ds / 3;
        double tail_from = prof.r[n];
        double tail = outer_integral([&](double s) {
            auto e = prof.eval(s);
            return f[k](e[0], e[1], p, q) * std::pow(s, N - 1);
        }, tail_from);
        double inner_pieces = 0;
        if (n2 < n) {
            // s2 misses [r_n2, r_n]; add Simpson over that piece so both estimates cover the same range
            double piece = (g(n2) + 4 * g(n2 + 1) + 2 * g(n2 + 2) + 4 * g(n2 + 3) + g(n2 + 4)) * ds / 3;
            inner_pieces = piece;
        }
        bc.A[k] = area * (s1 + tail);
        bc.err[k] = area * (std::abs(s1 - (s2 + inner_pieces)) / 15 + 1e-14 * std::abs(s1));
        bc.tail_fraction[k] = std::abs(tail / (s1 + tail));
        if (bc.tail_fraction[k] > 0.01 && k != 5 && k != 6) bc.flagged = true;
    }
    return bc;
}

std::vector<KernelElement> kernel_elements(const BubbleProfile& prof)
{
    const CriticalPair& cp = prof.pair;
    KernelElement k0, k1;
    k0.ell = 0;
    k1.ell = 1;
    const size_t M = prof.r.size();
    k0.Psi.resize(M);
    k0.Phi.resize(M);
    for (size_t i = 0; i < M; ++i) {
        k0.Psi[i] = prof.r[i] * prof.Up[i] + cp.kU() * prof.U[i];
        k0.Phi[i] = prof.r[i] * prof.Vp[i] + cp.kV() * prof.V[i];
    }
    k1.Psi = prof.Up;
    k1.Phi = prof.Vp;
    return {k0, k1};
}

double kernel_residual(const BubbleProfile& prof, const KernelElement& el)
{
    const CriticalPair& cp = prof.pair;
    const int N = cp.N;
    const double p = cp.p, q = cp.q;
    const auto& r = prof.r;
    double worst = 0;
    const double cutoff = 0.5 * prof.R_max();  // weighted residual, dominated by the core
    const double ds = prof.ds();
    for (size_t i = 2; i + 2 < r.size() && r[i] < cutoff; ++i) {
        // fourth-order differences in s, where r = e^s - 1
        auto lap = [&](const std::vector<double>& w) {
            double ws = (w[i - 2] - 8 * w[i - 1] + 8 * w[i + 1] - w[i + 2]) / (12 * ds);
            double wss = (-w[i - 2] + 16 * w[i - 1] - 30 * w[i] + 16 * w[i + 1] - w[i + 2]) / (12 * ds * ds);
            double e = 1 + r[i];
            double d1 = ws / e, d2 = (wss - ws) / (e * e);
            double l = d2 + (N - 1) * d1 / r[i];
            if (el.ell > 0) l -= (N - 1) * w[i] / (r[i] * r[i]);
            return l;
        };
        double ru = -lap(el.Psi) - p * std::pow(prof.V[i], p - 1) * el.Phi[i];
        double rv = -lap(el.Phi) - q * std::pow(prof.U[i], q - 1) * el.Psi[i];
        double su = std::abs(p * std::pow(prof.V[i], p - 1) * el.Phi[i]) + std::abs(el.Psi[i]) / (1 + r[i] * r[i]);
        double sv = std::abs(q * std::pow(prof.U[i], q - 1) * el.Psi[i]) + std::abs(el.Phi[i]) / (1 + r[i] * r[i]);
        double w = std::pow(r[i], N - 1) / std::pow(1 + r[i], N - 1);
        worst = std::max({worst, w * std::abs(ru) / (su + 1e-300), w * std::abs(rv) / (sv + 1e-300)});
    }
    return worst;
}

double talenti(int N, double r) { return std::pow(1 + r * r / (N * (N - 2.0)), -(N - 2) / 2.0); }

double talenti_error(const BubbleProfile& prof, double R)
{
    double worst = 0;
    for (size_t i = 0; i < prof.r.size() && prof.r[i] <= R; ++i) {
        worst = std::max(worst, std::abs(prof.U[i] - talenti(prof.pair.N, prof.r[i])));
        worst = std::max(worst, std::abs(prof.V[i] - talenti(prof.pair.N, prof.r[i])));
    }
    for (int k = 0; k <= 2000; ++k) {
        double s = R * k / 2000.0;
        auto e = prof.eval(s);
        worst = std::max(worst, std::abs(e[0] - talenti(prof.pair.N, s)));
    }
    return worst;
}

double fast_decay_constant(const BubbleProfile& prof)
{
    if (!prof.tail.fast) throw Error("regime", "fast decay constant needs p >= N/(N-2)");
    return prof.tail.a;
}

}  // namespace lesys
