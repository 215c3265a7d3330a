#include "lesys/continuation.hpp"
#include "lesys/error.hpp"
#include "lesys/landscape.hpp"
#include "lesys/nonlinear_green.hpp"

#include <Eigen/SparseLU>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>

namespace lesys {

RadialGrid make_radial_grid(int N, int M, double r_min)
{
    if (M < 10) throw Error("config", "mesh needs at least 10 nodes");
    if (!(r_min > 0 && r_min < 1)) throw Error("config", "r_min must lie in (0, 1)");
    RadialGrid g;
    g.N = N;
    g.r.push_back(0.0);
    const double lr = std::log(r_min);
    for (int i = 0; i < M - 1; ++i) g.r.push_back(i == M - 2 ? 1.0 : std::exp(lr * (1 - double(i) / (M - 2))));
    const int n = M - 1;
    std::vector<double> rh(M + 1, 0.0);
    for (int i = 1; i < M; ++i) rh[i] = std::sqrt(g.r[i] * g.r[i - 1]);
    rh[1] = 0.5 * g.r[1];
    std::vector<Eigen::Triplet<double>> T;
    for (int i = 0; i < n; ++i) {
        g.vol.push_back((std::pow(rh[i + 1], N) - std::pow(rh[i], N)) / N);
        double cR = std::pow(rh[i + 1], N - 1) / (g.r[i + 1] - g.r[i]);
        T.emplace_back(i, i, cR);
        if (i + 1 < n) T.emplace_back(i, i + 1, -cR);
        if (i > 0) {
            double cL = std::pow(rh[i], N - 1) / (g.r[i] - g.r[i - 1]);
            T.emplace_back(i, i, cL);
            T.emplace_back(i, i - 1, -cL);
        }
    }
    g.L.resize(n, n);
    g.L.setFromTriplets(T.begin(), T.end());
    return g;
}

namespace {

double sgnpow(double x, double e) { return x >= 0 ? std::pow(x, e) : -std::pow(-x, e); }

// Right-hand sides, their derivatives in u, v, and in log eps
struct Nonlinearity {
    std::vector<double> fu, fv, fu_u, fu_v, fv_u, fv_v, fu_t, fv_t;
};

Nonlinearity evaluate(const CriticalPair& cp, const RateScenario& s, double eps, const std::vector<double>& u,
                      const std::vector<double>& v)
{
    const size_t n = u.size();
    Nonlinearity F;
    for (auto* w : {&F.fu, &F.fv, &F.fu_u, &F.fu_v, &F.fv_u, &F.fv_v, &F.fu_t, &F.fv_t}) w->assign(n, 0.0);
    const double p = cp.p, q = cp.q;
    for (size_t i = 0; i < n; ++i) {
        const double au = std::abs(u[i]), av = std::abs(v[i]);
        if (s.kind == ScenarioKind::Subcritical) {
            const double pe = p - s.alpha_sub * eps, qe = q - s.beta_sub * eps;
            F.fu[i] = sgnpow(v[i], pe);
            F.fv[i] = sgnpow(u[i], qe);
            F.fu_v[i] = pe * std::pow(av, pe - 1);
            F.fv_u[i] = qe * std::pow(au, qe - 1);
            F.fu_t[i] = av > 0 ? -s.alpha_sub * eps * F.fu[i] * std::log(av) : 0;
            F.fv_t[i] = au > 0 ? -s.beta_sub * eps * F.fv[i] * std::log(au) : 0;
        } else {
            F.fu[i] = sgnpow(v[i], p) + eps * (s.alpha * u[i] + s.beta1 * v[i]);
            F.fv[i] = sgnpow(u[i], q) + eps * (s.beta2 * u[i] + s.alpha * v[i]);
            F.fu_u[i] = eps * s.alpha;
            F.fu_v[i] = p * std::pow(av, p - 1) + eps * s.beta1;
            F.fv_u[i] = q * std::pow(au, q - 1) + eps * s.beta2;
            F.fv_v[i] = eps * s.alpha;
            F.fu_t[i] = eps * (s.alpha * u[i] + s.beta1 * v[i]);
            F.fv_t[i] = eps * (s.beta2 * u[i] + s.alpha * v[i]);
        }
    }
    return F;
}

double residual(const RadialGrid& g, const std::vector<double>& u, const std::vector<double>& v, const Nonlinearity& F)
{
    const int n = g.interior();
    Eigen::Map<const Eigen::VectorXd> U(u.data(), n), V(v.data(), n);
    Eigen::VectorXd Lu = g.L * U, Lv = g.L * V;
    double ru = 0, rv = 0, su = 0, sv = 0;
    for (int i = 0; i < n; ++i) {
        ru = std::max(ru, std::abs(Lu(i) - g.vol[i] * F.fu[i]));
        rv = std::max(rv, std::abs(Lv(i) - g.vol[i] * F.fv[i]));
        su = std::max(su, std::abs(g.vol[i] * F.fu[i]));
        sv = std::max(sv, std::abs(g.vol[i] * F.fv[i]));
    }
    return std::max(ru / su, rv / sv);
}

// Row-scaled Newton matrix; with bordered = true an extra column (log eps) and row (u_0) are appended
Eigen::SparseMatrix<double> jacobian(const RadialGrid& g, const Nonlinearity& F, bool bordered)
{
    const int n = g.interior();
    const int dim = 2 * n + (bordered ? 1 : 0);
    std::vector<Eigen::Triplet<double>> T;
    T.reserve(8 * n + 4);
    for (int k = 0; k < g.L.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(g.L, k); it; ++it) {
            double val = it.value() / g.vol[it.row()];
            T.emplace_back(it.row(), it.col(), val);
            T.emplace_back(n + it.row(), n + it.col(), val);
        }
    for (int i = 0; i < n; ++i) {
        if (F.fu_u[i] != 0) T.emplace_back(i, i, -F.fu_u[i]);
        T.emplace_back(i, n + i, -F.fu_v[i]);
        T.emplace_back(n + i, i, -F.fv_u[i]);
        if (F.fv_v[i] != 0) T.emplace_back(n + i, n + i, -F.fv_v[i]);
        if (bordered) {
            T.emplace_back(i, 2 * n, -F.fu_t[i]);
            T.emplace_back(n + i, 2 * n, -F.fv_t[i]);
        }
    }
    if (bordered) T.emplace_back(2 * n, 0, 1.0);
    Eigen::SparseMatrix<double> J(dim, dim);
    J.setFromTriplets(T.begin(), T.end());
    J.makeCompressed();
    return J;
}

Eigen::VectorXd scaled_residual(const RadialGrid& g, const std::vector<double>& u, const std::vector<double>& v,
                                const Nonlinearity& F, int extra)
{
    const int n = g.interior();
    Eigen::Map<const Eigen::VectorXd> U(u.data(), n), V(v.data(), n);
    Eigen::VectorXd Lu = g.L * U, Lv = g.L * V;
    Eigen::VectorXd R(2 * n + extra);
    for (int i = 0; i < n; ++i) {
        R(i) = Lu(i) / g.vol[i] - F.fu[i];
        R(n + i) = Lv(i) / g.vol[i] - F.fv[i];
    }
    return R;
}

Eigen::VectorXd lu_solve(const Eigen::SparseMatrix<double>& J, const Eigen::VectorXd& rhs)
{
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(J);
    if (lu.info() != Eigen::Success) throw Error("newton-diverged", "singular Newton matrix");
    Eigen::VectorXd d = lu.solve(rhs);
    if (!d.allFinite()) throw Error("newton-diverged", "non-finite Newton step");
    return d;
}

void require_positive(const std::vector<double>& u, const std::vector<double>& v)
{
    for (size_t i = 0; i < u.size(); ++i)
        if (!(u[i] > 0 && v[i] > 0)) throw Error("negative-solution", "solution is not positive in the interior");
}

}  // namespace

RadialSolution solve_radial_system(const CriticalPair& cp, const RateScenario& s, double eps, const RadialGrid& g,
                                   std::vector<double> u, std::vector<double> v, double tol, int max_iter)
{
    const int n = g.interior();
    if (int(u.size()) != n || int(v.size()) != n) throw Error("config", "guess does not match the grid");
    double res = 0;
    for (int it = 0; it <= max_iter; ++it) {
        Nonlinearity F = evaluate(cp, s, eps, u, v);
        res = residual(g, u, v, F);
        if (res < tol) {
            require_positive(u, v);
            return {u, v, eps, it, res};
        }
        if (it == max_iter) break;
        Eigen::VectorXd d = lu_solve(jacobian(g, F, false), -scaled_residual(g, u, v, F, 0));
        // halve the step until the residual decreases
        double lam = 1;
        for (int b = 0; b < 12; ++b, lam *= 0.5) {
            std::vector<double> u2 = u, v2 = v;
            for (int i = 0; i < n; ++i) {
                u2[i] += lam * d(i);
                v2[i] += lam * d(n + i);
            }
            double r2 = residual(g, u2, v2, evaluate(cp, s, eps, u2, v2));
            if (r2 < res || b == 11) {
                u = std::move(u2);
                v = std::move(v2);
                break;
            }
        }
    }
    throw Error("newton-diverged", "residual " + std::to_string(res) + " after " + std::to_string(max_iter) + " iterations");
}

RadialSolution solve_fixed_amplitude(const CriticalPair& cp, const RateScenario& s, double amplitude, double eps_guess,
                                     const RadialGrid& g, std::vector<double> u, std::vector<double> v, double tol,
                                     int max_iter)
{
    const int n = g.interior();
    if (int(u.size()) != n || int(v.size()) != n) throw Error("config", "guess does not match the grid");
    double t = std::log(eps_guess), res = 0;
    for (int it = 0; it <= max_iter; ++it) {
        const double eps = std::exp(t);
        Nonlinearity F = evaluate(cp, s, eps, u, v);
        res = residual(g, u, v, F);
        if (res < tol && std::abs(u[0] - amplitude) <= 1e-12 * amplitude) {
            require_positive(u, v);
            return {u, v, eps, it, res};
        }
        if (it == max_iter) break;
        Eigen::VectorXd R = scaled_residual(g, u, v, F, 1);
        R(2 * n) = u[0] - amplitude;
        Eigen::VectorXd d = lu_solve(jacobian(g, F, true), -R);
        double lam = std::abs(d(2 * n)) > 0.5 ? 0.5 / std::abs(d(2 * n)) : 1.0;
        for (int i = 0; i < n; ++i) {
            u[i] += lam * d(i);
            v[i] += lam * d(n + i);
        }
        t += lam * d(2 * n);
    }
    throw Error("newton-diverged", "residual " + std::to_string(res) + " after " + std::to_string(max_iter) + " iterations");
}

void bubble_guess(const BubbleProfile& prof, double mu, const RadialGrid& g, std::vector<double>& u, std::vector<double>& v)
{
    const int n = g.interior();
    auto edge = prof.scaled(mu, 1.0);
    u.resize(n);
    v.resize(n);
    for (int i = 0; i < n; ++i) {
        auto w = prof.scaled(mu, g.r[i]);
        u[i] = w[0] - edge[0];
        v[i] = w[1] - edge[1];
    }
}

namespace {

// piecewise linear through the interior values and 0 at r = 1; 0 beyond
double interp(const RadialGrid& g, const std::vector<double>& w, double x)
{
    const int n = g.interior();
    if (x >= 1) return 0;
    if (x <= 0) return w[0];
    size_t j = std::upper_bound(g.r.begin(), g.r.end(), x) - g.r.begin();
    double a = g.r[j - 1], b = g.r[j];
    double wa = w[j - 1], wb = int(j) < n ? w[j] : 0.0;
    return wa + (wb - wa) * (x - a) / (b - a);
}

std::vector<double> dilate(const RadialGrid& g, const std::vector<double>& w, double amp, double mu_ratio)
{
    std::vector<double> out(w.size());
    for (size_t i = 0; i < w.size(); ++i) out[i] = amp * interp(g, w, g.r[i] / mu_ratio);
    return out;
}

}  // namespace

double rescaled_profile_error(const BubbleProfile& prof, const RadialGrid& g, const std::vector<double>& u, double ymax)
{
    const double kU = prof.pair.kU();
    const double mu = std::pow(u[0], -1 / kU);
    double err = 0;
    for (int i = 0; i <= 200; ++i) {
        double y = ymax * i / 200;
        err = std::max(err, std::abs(std::pow(mu, kU) * interp(g, u, mu * y) - prof.Uat(y)));
    }
    return err;
}

double predicted_slope(const CriticalPair& cp, const RateScenario& s) { return -cp.kU() * mu_rate(s, cp.N, cp.p); }

ContinuationBranch continuation_run(const BubbleProfile& prof, const RateScenario& s, double eps_start, double eps_end,
                                    const ContinuationOptions& opt)
{
    s.validate();
    const CriticalPair& cp = prof.pair;
    if (!(eps_start > eps_end && eps_end > 0)) throw Error("config", "eps schedule must decrease to a positive end");
    const double rate = mu_rate(s, cp.N, cp.p);
    ContinuationBranch br;
    br.scenario = s;
    br.d_star = opt.d_star;
    if (br.d_star <= 0) {
        EnergyModel em = EnergyModel::from_profile(prof);
        br.d_star = optimal_d(em, s, tau_tilde_radial_oracle(cp));
    }
    const double mu_end = br.d_star * std::pow(eps_end, rate);
    RadialGrid g = make_radial_grid(cp.N, opt.mesh_nodes, opt.core_factor * mu_end);

    std::vector<double> u, v;
    bubble_guess(prof, br.d_star * std::pow(eps_start, rate), g, u, v);
    double lam = u[0];
    RadialSolution sol;
    try {
        sol = solve_fixed_amplitude(cp, s, lam, eps_start, g, u, v);
    } catch (const Error& e) {
        br.truncated = true;
        br.failure = e.what();
        return br;
    }
    u = sol.u;
    v = sol.v;
    double e = sol.eps;
    const double kU = cp.kU();
    const int steps = int(std::lround(opt.steps_per_decade * std::log10(eps_start / eps_end)));
    double slope = -kU * rate;  // d log u(0) / d log eps, refined by secant steps
    for (int k = 0; k <= steps; ++k) {
        const double target = eps_start * std::pow(10.0, -double(k) / opt.steps_per_decade);
        std::vector<std::pair<double, double>> hist;
        try {
            for (int j = 0;; ++j) {
                sol = solve_fixed_amplitude(cp, s, lam, e, g, u, v);
                u = sol.u;
                v = sol.v;
                e = sol.eps;
                hist.emplace_back(std::log(lam), std::log(e));
                if (std::abs(std::log(e / target)) < opt.eps_tol || j >= opt.secant_iters) break;
                if (hist.size() >= 2) {
                    auto [x0, y0] = hist[hist.size() - 2];
                    auto [x1, y1] = hist.back();
                    if (std::abs(y1 - y0) > 1e-12) slope = (x1 - x0) / (y1 - y0);
                }
                double nl = std::log(lam) + slope * (std::log(target) - std::log(e));
                double ratio = std::exp(nl) / lam;
                // warm start along the dilation orbit of the bubble
                double mu_ratio = std::pow(ratio, -1 / kU);
                u = dilate(g, u, ratio, mu_ratio);
                v = dilate(g, v, std::pow(ratio, (cp.q + 1) / (cp.p + 1)), mu_ratio);
                lam = std::exp(nl);
            }
        } catch (const Error& err) {
            br.truncated = true;
            br.failure = err.what();
            break;
        }
        if (!br.records.empty() && !(e < br.records.back().eps)) {
            br.truncated = true;
            br.failure = "eps did not decrease along the branch";
            break;
        }
        br.records.push_back({e, u[0], v[0], std::pow(u[0], -1 / kU), sol.residual, sol.iters, rescaled_profile_error(prof, g, u)});
    }
    return br;
}

namespace {

struct Ols {
    double slope, intercept, se;
};

Ols ols(const std::vector<double>& x, const std::vector<double>& y)
{
    const size_t n = x.size();
    double mx = 0, my = 0;
    for (size_t i = 0; i < n; ++i) mx += x[i] / n, my += y[i] / n;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    Ols o{sxy / sxx, 0, 0};
    o.intercept = my - o.slope * mx;
    double ss = 0;
    for (size_t i = 0; i < n; ++i) ss += std::pow(y[i] - o.intercept - o.slope * x[i], 2);
    o.se = n > 2 ? std::sqrt(ss / (n - 2) / sxx) : 0;
    return o;
}

}  // namespace

RateFit rate_fit(const std::vector<double>& eps, const std::vector<double>& u0, double predicted)
{
    if (eps.size() != u0.size()) throw Error("config", "branch columns differ in length");
    if (eps.size() < 6) throw Error("insufficient-branch", "fewer than 6 converged points");
    const double emin = *std::min_element(eps.begin(), eps.end()), emax = *std::max_element(eps.begin(), eps.end());
    if (emax < 10 * emin * (1 - 1e-9)) throw Error("insufficient-branch", "branch spans less than one decade");
    std::vector<double> x, y;
    for (size_t i = 0; i < eps.size(); ++i)
        if (eps[i] <= 10 * emin * (1 + 1e-9)) {
            x.push_back(std::log(eps[i]));
            y.push_back(std::log(u0[i]));
        }
    if (x.size() < 6) throw Error("insufficient-branch", "fewer than 6 points in the last decade");
    Ols o = ols(x, y);
    RateFit f;
    f.slope = o.slope;
    f.points = int(x.size());
    f.predicted = predicted;
    boost::math::students_t t(double(x.size() - 2));
    f.ci = boost::math::quantile(boost::math::complement(t, 0.025)) * o.se;
    size_t worst = 0;
    for (size_t i = 0; i < x.size(); ++i)
        if (std::abs(y[i] - o.intercept - o.slope * x[i]) > std::abs(y[worst] - o.intercept - o.slope * x[worst])) worst = i;
    x.erase(x.begin() + worst);
    y.erase(y.begin() + worst);
    f.robust_slope = ols(x, y).slope;
    f.pass = std::abs(f.slope - predicted) <= 0.15 * std::abs(predicted);
    return f;
}

RateFit rate_fit(const ContinuationBranch& br, const CriticalPair& cp)
{
    std::vector<double> e, u;
    for (const auto& r : br.records) {
        e.push_back(r.eps);
        u.push_back(r.u_center);
    }
    return rate_fit(e, u, predicted_slope(cp, br.scenario));
}

}  // namespace lesys
