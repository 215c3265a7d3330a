#include "lesys/nonlinear_green.hpp"
#include "lesys/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gsl/gsl_spline.h>

#include <algorithm>
#include <cmath>

namespace lesys {

namespace {

void require_range(const CriticalPair& cp)
{
    if (!cp.regular_range())
        throw Error("regime", "p must lie in (2/(N-2), (N-1)/(N-2)) for the nonlinear regular part");
}

Vec random_direction(int N, Stream& st)
{
    Vec v(N);
    double n2 = 0;
    for (int i = 0; i < N; ++i) {
        v(i) = st.normal();
        n2 += v(i) * v(i);
    }
    return v / std::sqrt(n2);
}

// Mixture of: uniform on the bounding ball, |z - c_j|^{-s_j} on balls of radius rho around the
// singular points, and |z - centre|^{-t} outside the bounding ball (inversion of a power law on the
// punctured ball). density() is the full mixture density, so any component may produce any point.
class Mixture {
public:
    struct Peak {
        Vec c;
        double s;
    };

    Mixture(const Ball& bound, std::vector<Peak> peaks, double t_ext, const NLGParams& prm)
        : N_(int(bound.center.size())), bound_(bound), peaks_(std::move(peaks)), t_(t_ext)
    {
        double wsum = prm.w_uniform + prm.w_exterior + (peaks_.empty() ? 0.0 : prm.w_singular);
        wu_ = prm.w_uniform / wsum;
        we_ = prm.w_exterior / wsum;
        wp_ = peaks_.empty() ? 0.0 : prm.w_singular / wsum / double(peaks_.size());
        area_ = sphere_area(N_);
        rho_ = bound.radius;
    }

    Vec sample(Stream& st) const
    {
        double u = st.uniform();
        const double R = bound_.radius;
        if (u < wu_) return bound_.center + random_direction(N_, st) * (R * std::pow(st.uniform_open(), 1.0 / N_));
        u -= wu_;
        if (u < we_) return bound_.center + random_direction(N_, st) * (R * std::pow(st.uniform_open(), -1.0 / (t_ - N_)));
        u -= we_;
        size_t j = std::min(peaks_.size() - 1, size_t(u / wp_));
        const Peak& pk = peaks_[j];
        return pk.c + random_direction(N_, st) * (rho_ * std::pow(st.uniform_open(), 1.0 / (N_ - pk.s)));
    }

    double density(const Vec& z) const
    {
        const double R = bound_.radius;
        double rc = (z - bound_.center).norm();
        double q = 0;
        if (rc < R)
            q += wu_ * N_ / (area_ * std::pow(R, N_));
        else
            q += we_ * (t_ - N_) * std::pow(R, t_ - N_) / area_ * std::pow(rc, -t_);
        for (const auto& pk : peaks_) {
            double r = (z - pk.c).norm();
            if (r < rho_) q += wp_ * (N_ - pk.s) / (area_ * std::pow(rho_, N_ - pk.s)) * std::pow(r, -pk.s);
        }
        return q;
    }

private:
    int N_;
    Ball bound_;
    std::vector<Peak> peaks_;
    double t_;
    double wu_, we_, wp_, area_, rho_;
};

void add_peak(std::vector<Mixture::Peak>& peaks, const Vec& c, double s)
{
    for (auto& pk : peaks)
        if ((pk.c - c).norm() < 1e-14) {
            pk.s = std::max(pk.s, s);
            return;
        }
    peaks.push_back({c, s});
}

double sgnpow(double s, double p) { return s >= 0 ? std::pow(s, p) : -std::pow(-s, p); }

// Integrand of the representation formula inside the domain for one evaluation point.
// Gx, Hx: G(x,z), H(x,z); Gam_x = Gamma(x-z). Per spike: lam c^p, c, Gamma_i, G_i (H_i = Gamma_i - G_i).
struct SpikeTerms {
    std::vector<double> lam, c, cp, Gam, H;
};

double interior_kernel(double Gam_x, double Hx, const SpikeTerms& t, double p)
{
    const size_t k = t.c.size();
    size_t is = 0;
    for (size_t i = 1; i < k; ++i)
        if (t.c[i] * t.Gam[i] > t.c[is] * t.Gam[is]) is = i;
    double s0 = t.lam[is] * t.c[is] * t.Gam[is];
    double delta = -t.lam[is] * t.c[is] * t.H[is];
    for (size_t i = 0; i < k; ++i)
        if (i != is) delta += t.lam[i] * t.c[i] * (t.Gam[i] - t.H[i]);
    const double Gx = Gam_x - Hx;
    double ratio = delta / s0;
    double F = 0;
    if (ratio > -1) {
        for (size_t i = 0; i < k; ++i)
            if (i != is) F += t.lam[i] * t.cp[i] * Gam_x * std::pow(t.Gam[i], p);
        F += t.lam[is] * t.cp[is] * std::pow(t.Gam[is], p) * (Hx - Gx * std::expm1(p * std::log1p(ratio)));
    } else {
        double S = s0 + delta;
        for (size_t i = 0; i < k; ++i) F += t.lam[i] * t.cp[i] * Gam_x * std::pow(t.Gam[i], p);
        F -= Gx * sgnpow(S, p);
    }
    return F;
}

double exterior_kernel(double Gam_x, const SpikeTerms& t, double p)
{
    double F = 0;
    for (size_t i = 0; i < t.c.size(); ++i) F += t.lam[i] * t.cp[i] * Gam_x * std::pow(t.Gam[i], p);
    return F;
}

}  // namespace

double resolved_delta2(const Domain& dom, const SpikeConfig& c) { return c.delta2 > 0 ? c.delta2 : 0.1 * dom.diameter(); }

void check_config(const Domain& dom, const SpikeConfig& c)
{
    if (c.k() < 1) throw Error("config", "at least one spike is required");
    if (int(c.d.size()) != c.k()) throw Error("config", "d and xi sizes differ");
    if (!c.lambda.empty() && int(c.lambda.size()) != c.k()) throw Error("config", "lambda and xi sizes differ");
    const double d2 = resolved_delta2(dom, c);
    for (int i = 0; i < c.k(); ++i) {
        if (c.xi[i].size() != dom.dim()) throw Error("config", "spike location has wrong dimension");
        if (!(c.d[i] > c.delta1 && c.d[i] < 1 / c.delta1)) throw Error("config", "spike height outside (delta1, 1/delta1)");
        if (dom.inside_distance(c.xi[i]) < d2) throw Error("config", "spike closer than delta2 to the boundary");
        if (!c.lambda.empty() && std::abs(c.lambda[i]) != 1) throw Error("config", "signs must be +1 or -1");
        for (int j = 0; j < i; ++j)
            if ((c.xi[i] - c.xi[j]).norm() < d2) throw Error("config", "spikes closer than delta2");
    }
}

namespace {

// With weights, one extra component carries sum_j w_j H~(x_j) per sample
MCVector h_tilde_core(const Domain& dom, const CriticalPair& cp, const SpikeConfig& c, const std::vector<Vec>& xs,
                      const std::vector<double>* weights, const NLGParams& prm)
{
    require_range(cp);
    check_config(dom, c);
    for (const auto& x : xs)
        if (!dom.inside(x)) throw Error("outside", "evaluation point is not interior");
    const int N = cp.N;
    if (dom.dim() != N) throw Error("config", "domain dimension differs from N");
    const double p = cp.p, g = cp.gamma_N;
    const int k = c.k(), nx = int(xs.size());

    std::vector<Mixture::Peak> peaks;
    for (int i = 0; i < k; ++i) add_peak(peaks, c.xi[i], (N - 2) * p);
    for (const auto& x : xs) add_peak(peaks, x, N - 2.0);
    const double t_int = (N - 2) * (p + 1);
    Mixture mix(dom.bounding_ball(), peaks, N + 0.5 * (t_int - N), prm);

    SpikeTerms base;
    for (int i = 0; i < k; ++i) {
        double ci = std::pow(c.d[i], cp.kU());
        base.lam.push_back(c.sign(i));
        base.c.push_back(ci);
        base.cp.push_back(std::pow(ci, p));
    }
    const bool ball = dom.is_ball();
    const Ball B = dom.lobes()[0];
    const double eps = resolved_shell(dom, prm.wos);
    const int half = std::max(1, prm.inner_walks / 2);
    const int nB = std::max(1, prm.inner_walks);

    auto gam = [&](const Vec& a, const Vec& b) { return g * std::pow((a - b).norm(), 2.0 - N); };

    auto f = [&](Stream& st, double* out) {
        Vec z = mix.sample(st);
        double q = mix.density(z);
        SpikeTerms t = base;
        t.Gam.resize(k);
        t.H.assign(k, 0.0);
        for (int i = 0; i < k; ++i) t.Gam[i] = gam(z, c.xi[i]);
        std::vector<double> Gx(nx);
        for (int j = 0; j < nx; ++j) Gx[j] = gam(xs[j], z);
        if (!dom.inside(z)) {
            for (int j = 0; j < nx; ++j) out[j] = exterior_kernel(Gx[j], t, p) / q;
            return;
        }
        if (ball) {
            for (int i = 0; i < k; ++i) t.H[i] = ball_robin_H(B, z, c.xi[i]);
            for (int j = 0; j < nx; ++j) out[j] = interior_kernel(Gx[j], ball_robin_H(B, xs[j], z), t, p) / q;
            return;
        }
        // two halves for the p-power factor (bias correction), one independent set for the linear factor
        std::vector<double> h1(k, 0.0), h2(k, 0.0), hx(nx, 0.0);
        for (int w = 0; w < 2 * half; ++w) {
            Vec e = wos_exit(dom, z, eps, prm.wos.step_cap, st);
            auto& h = w < half ? h1 : h2;
            for (int i = 0; i < k; ++i) h[i] += gam(e, c.xi[i]) / half;
        }
        for (int w = 0; w < nB; ++w) {
            Vec e = wos_exit(dom, z, eps, prm.wos.step_cap, st);
            for (int j = 0; j < nx; ++j) hx[j] += gam(e, xs[j]) / nB;
        }
        for (int j = 0; j < nx; ++j) {
            SpikeTerms t1 = t, t2 = t, ta = t;
            for (int i = 0; i < k; ++i) {
                t1.H[i] = h1[i];
                t2.H[i] = h2[i];
                ta.H[i] = 0.5 * (h1[i] + h2[i]);
            }
            double Fa = interior_kernel(Gx[j], hx[j], ta, p);
            double F1 = interior_kernel(Gx[j], hx[j], t1, p);
            double F2 = interior_kernel(Gx[j], hx[j], t2, p);
            out[j] = (2 * Fa - 0.5 * (F1 + F2)) / q;
        }
    };
    if (!weights) return mc_mean(prm.n_samples, prm.seed, prm.threads, nx, f);
    return mc_mean(prm.n_samples, prm.seed, prm.threads, nx + 1, [&](Stream& st, double* out) {
        f(st, out);
        double s = 0;
        for (int j = 0; j < nx; ++j) s += (*weights)[j] * out[j];
        out[nx] = s;
    });
}

}  // namespace

MCVector h_tilde_config_multi(const Domain& dom, const CriticalPair& cp, const SpikeConfig& c, const std::vector<Vec>& xs,
                              const NLGParams& prm)
{
    return h_tilde_core(dom, cp, c, xs, nullptr, prm);
}

MCEstimate h_tilde_weighted_sum(const Domain& dom, const CriticalPair& cp, const SpikeConfig& c, const std::vector<Vec>& xs,
                                const std::vector<double>& w, const NLGParams& prm)
{
    if (w.size() != xs.size()) throw Error("config", "weights and points differ in size");
    return h_tilde_core(dom, cp, c, xs, &w, prm).component(xs.size());
}

MCEstimate h_tilde_config(const Domain& dom, const CriticalPair& cp, const SpikeConfig& c, const Vec& x, const NLGParams& prm)
{
    return h_tilde_config_multi(dom, cp, c, {x}, prm).component(0);
}

MCEstimate h_tilde_mc(const Domain& dom, const CriticalPair& cp, const Vec& x, const Vec& y, const NLGParams& prm)
{
    SpikeConfig c = SpikeConfig::single(y);
    c.delta2 = 1e-12;
    auto e = h_tilde_config(dom, cp, c, x, prm);
    if (e.std_error > prm.max_rel_error * std::abs(e.value)) throw Error("variance", "relative standard error above limit");
    return e;
}

MCEstimate tau_tilde(const Domain& dom, const CriticalPair& cp, const Vec& xi, const NLGParams& prm)
{
    return h_tilde_mc(dom, cp, xi, xi, prm);
}

double tau_tilde_radial_oracle(const CriticalPair& cp, double R)
{
    if (!cp.slow_decay() || cp.p <= 2.0 / (cp.N - 2)) throw Error("regime", "radial oracle needs 2/(N-2) < p < N/(N-2)");
    const int N = cp.N;
    const double p = cp.p, gp = std::pow(cp.gamma_N, p);
    boost::math::quadrature::tanh_sinh<double> ts;
    // unit ball; bracket(t) = (1 - t^{N-2})^p - 1, written as t^{N-2} times a bounded factor
    auto brx = [&](double t) {
        double x = std::pow(t, N - 2);
        return x > 0 ? std::expm1(p * std::log1p(-x)) / x : -p;
    };
    double err1 = 0, err2 = 0;
    double D1 = gp * ts.integrate([&](double t) { return std::pow(t, 2 * N - 3 - (N - 2) * p) * brx(t); }, 0.0, 1.0, 1e-14, &err1);
    double I2 = gp * ts.integrate([&](double s) { return std::pow(s, N - 1 - (N - 2) * p) * brx(s); }, 0.0, 1.0, 1e-14, &err2);
    double integral = -D1 / (N - 2) + I2 / (N - 2);
    if (!std::isfinite(integral) || err1 > 1e-8 * std::abs(D1) + 1e-300 || err2 > 1e-8 * std::abs(I2) + 1e-300)
        throw Error("quadrature", "finite-part extraction did not converge");
    return std::pow(R, -cp.m()) * (cp.gamma_tilde - integral);
}

double tau_tilde_navier_center(int N, double R)
{
    const double g = gamma_N(N);
    return std::pow(R, 4.0 - N) * (g / (2.0 * (N - 4)) + g / (2.0 * N));
}

double tau_tilde_ball_oracle(const CriticalPair& cp, const Ball& b, const Vec& xi)
{
    require_range(cp);
    const int N = cp.N;
    const double p = cp.p, g = cp.gamma_N, R = b.radius;
    const double e = (xi - b.center).norm();
    if (e >= R) throw Error("outside", "point is not inside the ball");
    const double R2 = R * R;
    const double ext_exp = (N - 2) * (p + 1) - N;
    boost::math::quadrature::tanh_sinh<double> ts;
    auto theta_integrand = [&](double th) {
        const double c = std::cos(th), s = std::sin(th);
        const double rb = -e * c + std::sqrt(R2 - e * e * s * s);
        auto inner = [&](double r) {
            if (r <= 0) return 0.0;
            double z2 = e * e + 2 * e * r * c + r * r;
            double zx = e * (e + r * c);
            double A = z2 * e * e / R2 - 2 * zx + R2;
            double H = g * std::pow(A, (2.0 - N) / 2);
            // (Gamma^{p+1} - G^{p+1}) r^{N-1} with x = H/Gamma
            double x = std::min(1.0, H * std::pow(r, N - 2) / g);
            double E = x > 0 ? std::expm1((p + 1) * std::log1p(-x)) / x : -(p + 1);
            return -std::pow(g, p) * H * std::pow(r, N - 1 - (N - 2) * p) * E;
        };
        double in = ts.integrate(inner, 0.0, rb, 1e-12);
        double ext = std::pow(g, p + 1) * std::pow(rb, -ext_exp) / ext_exp;
        return std::pow(s, N - 2) * (in + ext);
    };
    double val = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(theta_integrand, 0.0, M_PI, 8, 1e-12);
    return sphere_area(N - 1) * val;
}

TauBallTable::TauBallTable(const CriticalPair& cp, double radius, double max_frac, int nodes) : R_(radius)
{
    smax_ = max_frac * radius;
    Ball b{Vec::Zero(cp.N), radius};
    for (int i = 0; i < nodes; ++i) {
        // Chebyshev-like clustering toward the outer end where tau steepens
        double u = 0.5 * (1 - std::cos(M_PI * i / (nodes - 1)));
        double e = smax_ * u;
        s_.push_back(e * e);
        v_.push_back(std::log(tau_tilde_ball_oracle(cp, b, axis_point(cp.N, e))));
    }
    // natural cubic in e^2 through log tau
    interp_.reset(gsl_interp_alloc(gsl_interp_cspline, s_.size()), gsl_interp_free);
    gsl_interp_init(interp_.get(), s_.data(), v_.data(), s_.size());
}

double TauBallTable::operator()(double e) const
{
    e = std::abs(e);
    if (e > smax_ * (1 + 1e-12)) throw Error("config", "point outside the tabulated range");
    return std::exp(gsl_interp_eval(interp_.get(), s_.data(), v_.data(), std::min(e * e, s_.back()), nullptr));
}

namespace {

// Green21 (grad_x) or Green22 (grad_y) integrand at x = y = xi for a ball, antithetic about xi
MCVector gradient_mc(const Domain& dom, const CriticalPair& cp, const Vec& xi, const NLGParams& prm, bool wrt_y,
                     std::uint64_t seed)
{
    const int N = cp.N;
    const double p = cp.p, g = cp.gamma_N;
    const Ball B = dom.lobes()[0];
    std::vector<Mixture::Peak> peaks{{xi, (N - 2) * p}};
    const double t_int = N - 1 + (N - 2) * p;
    Mixture mix(dom.bounding_ball(), peaks, N + 0.5 * (t_int - N), prm);
    auto point = [&](const Vec& z, Vec& out) {
        Vec d = xi - z;
        double r = d.norm();
        double Gam = g * std::pow(r, 2.0 - N);
        Vec e = (N - 2) * g * std::pow(r, -N) * d;  // (N-2) gamma (xi - z)/|xi - z|^N
        if (!dom.inside(z)) {
            double fac = -std::pow(Gam, p);
            out = (wrt_y ? p : 1.0) * fac * e;
            return;
        }
        if (!wrt_y) {
            double Hz = ball_robin_H(B, z, xi);  // H(z, xi)
            double Gp = std::pow(Gam - Hz, p);
            double diff = std::pow(Gam, p) * std::expm1(p * std::log1p(-Hz / Gam));  // G^p - Gamma^p
            out = diff * e + Gp * ball_grad_x_H(B, xi, z);
        } else {
            double Hx = ball_robin_H(B, xi, z);  // H(x, z), x = xi
            double Hy = ball_robin_H(B, z, xi);  // H(z, y), y = xi
            double Gx = Gam - Hx, Gy = Gam - Hy;
            double base = Gam * std::pow(Gam, p - 1);
            double diff = base * std::expm1(std::log1p(-Hx / Gam) + (p - 1) * std::log1p(-Hy / Gam));
            out = p * (diff * e + Gx * std::pow(Gy, p - 1) * ball_grad_x_H(B, xi, z));
        }
    };
    auto f = [&](Stream& st, double* out) {
        Vec z = mix.sample(st);
        Vec z2 = 2 * xi - z;
        double q = mix.density(z);
        Vec a(N), b(N);
        point(z, a);
        point(z2, b);
        for (int i = 0; i < N; ++i) out[i] = 0.5 * (a(i) + b(i)) / q;
    };
    return mc_mean(prm.n_samples, seed, prm.threads, N, f);
}

MCVector combine(const MCVector& a, double ca, const MCVector& b, double cb)
{
    MCVector r = a;
    for (size_t i = 0; i < a.value.size(); ++i) {
        r.value[i] = ca * a.value[i] + cb * b.value[i];
        r.std_error[i] = std::hypot(ca * a.std_error[i], cb * b.std_error[i]);
    }
    r.n_samples = a.n_samples + b.n_samples;
    return r;
}

}  // namespace

GradientPair gradient_pair(const Domain& dom, const CriticalPair& cp, const Vec& xi, const NLGParams& prm)
{
    require_range(cp);
    if (!dom.is_ball()) throw Error("config", "gradients of the nonlinear regular part are implemented for balls");
    if (!dom.inside(xi)) throw Error("outside", "probe is not interior");
    GradientPair gp;
    gp.grad_x = gradient_mc(dom, cp, xi, prm, false, derive_seed(prm.seed, 101));
    gp.grad_y = gradient_mc(dom, cp, xi, prm, true, derive_seed(prm.seed, 202));
    gp.residual = combine(gp.grad_x, cp.p, gp.grad_y, -1.0);
    gp.grad_tau = combine(gp.grad_x, cp.p + 1, gp.grad_x, 0.0);
    return gp;
}

MCVector grad_tau(const Domain& dom, const CriticalPair& cp, const Vec& xi, const NLGParams& prm)
{
    require_range(cp);
    if (!dom.is_ball()) throw Error("config", "gradients of the nonlinear regular part are implemented for balls");
    auto gx = gradient_mc(dom, cp, xi, prm, false, derive_seed(prm.seed, 101));
    return combine(gx, cp.p + 1, gx, 0.0);
}

MCVector symmetry_residual(const Domain& dom, const CriticalPair& cp, const Vec& xi, const NLGParams& prm)
{
    return gradient_pair(dom, cp, xi, prm).residual;
}

GrowthReport boundary_growth_probe(const CriticalPair& cp, const std::vector<double>& dists, const NLGParams& prm)
{
    require_range(cp);
    const int N = cp.N;
    Domain dom = Domain::ball(N);
    Ball B = dom.lobes()[0];
    GrowthReport rep;
    rep.predicted = 1 - (N - 2) * cp.p;
    for (double dd : dists) {
        if (dd < 0.05 || dd > 0.5) throw Error("config", "probe distances must lie in [0.05, 0.5]");
        double e = 1 - dd;
        GrowthRow row;
        row.dist = dd;
        row.tau_oracle = tau_tilde_ball_oracle(cp, B, axis_point(N, e));
        double h = 1e-3 * dd;
        row.dtau_oracle = (tau_tilde_ball_oracle(cp, B, axis_point(N, e + h)) - tau_tilde_ball_oracle(cp, B, axis_point(N, e - h))) / (2 * h);
        NLGParams pp = prm;
        pp.seed = derive_seed(prm.seed, rep.rows.size());
        row.dtau = grad_tau(dom, cp, axis_point(N, e), pp).component(0);
        rep.rows.push_back(row);
    }
    std::sort(rep.rows.begin(), rep.rows.end(), [](const GrowthRow& a, const GrowthRow& b) { return a.dist < b.dist; });
    rep.monotone = true;
    for (size_t i = 1; i < rep.rows.size(); ++i)
        if (!(rep.rows[i - 1].tau_oracle > rep.rows[i].tau_oracle)) rep.monotone = false;
    for (const auto& r : rep.rows)
        if (r.dtau.value - 3 * r.dtau.std_error <= 0) rep.monotone = false;
    // least squares of log derivative against log dist on the probes nearest the boundary
    std::vector<double> lx, ly;
    for (const auto& r : rep.rows)
        if (lx.size() < std::max<size_t>(3, rep.rows.size() / 2)) {
            lx.push_back(std::log(r.dist));
            ly.push_back(std::log(r.dtau_oracle));
        }
    double mx = 0, my = 0;
    for (size_t i = 0; i < lx.size(); ++i) mx += lx[i] / lx.size(), my += ly[i] / lx.size();
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < lx.size(); ++i) sxy += (lx[i] - mx) * (ly[i] - my), sxx += (lx[i] - mx) * (lx[i] - mx);
    rep.slope = sxx > 0 ? sxy / sxx : 0;
    rep.pass = rep.monotone && rep.slope <= rep.predicted + 0.5;
    return rep;
}

}  // namespace lesys
