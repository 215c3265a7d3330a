#include "lesys/projections.hpp"
#include "lesys/error.hpp"
#include "lesys/nonlinear_green.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>

namespace lesys {

namespace {

struct Spectral {
    int n;
    Eigen::VectorXd x, w;
    Eigen::MatrixXd S;  // S(j,i) = int_{-1}^{x_j} l_i
    Eigen::MatrixXd D;  // differentiation of the interpolant
};

// Legendre P_0..P_n and derivatives at x
void legendre(int n, double x, std::vector<double>& P, std::vector<double>& dP)
{
    P.assign(n + 2, 0.0);
    dP.assign(n + 2, 0.0);
    P[0] = 1;
    if (n + 1 >= 1) P[1] = x;
    for (int k = 1; k <= n; ++k) P[k + 1] = ((2 * k + 1) * x * P[k] - k * P[k - 1]) / (k + 1);
    dP[0] = 0;
    for (int k = 1; k <= n + 1; ++k) dP[k] = k * (x * P[k] - P[k - 1]) / (x * x - 1);
}

const Spectral& spectral(int n)
{
    thread_local std::vector<Spectral> cache;
    for (const auto& s : cache)
        if (s.n == n) return s;
    Spectral s;
    s.n = n;
    // Golub-Welsch
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = k / std::sqrt(4.0 * k * k - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    s.x = es.eigenvalues();
    s.w = 2 * es.eigenvectors().row(0).array().square().transpose();
    Eigen::MatrixXd V(n, n), Q(n, n), Vd(n, n);
    std::vector<double> P, dP;
    for (int j = 0; j < n; ++j) {
        legendre(n, s.x(j), P, dP);
        for (int k = 0; k < n; ++k) {
            V(j, k) = P[k];
            Vd(j, k) = dP[k];
            Q(j, k) = k == 0 ? s.x(j) + 1 : (P[k + 1] - P[k - 1]) / (2 * k + 1);
        }
    }
    Eigen::MatrixXd Vi = V.inverse();
    s.S = Q * Vi;
    s.D = Vd * Vi;
    cache.push_back(s);
    return cache.back();
}

double sup_on(const RadialField& fld, const std::function<double(size_t)>& err, double lo = 0.2, double hi = 0.9)
{
    double m = 0;
    for (size_t i = 0; i < fld.r.size(); ++i)
        if (fld.r[i] >= lo && fld.r[i] <= hi) m = std::max(m, std::abs(err(i)));
    return m;
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    double mx = 0, my = 0;
    for (size_t i = 0; i < x.size(); ++i) mx += x[i] / x.size(), my += y[i] / x.size();
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
    return sxy / sxx;
}

}  // namespace

RadialMesh make_radial_mesh(double r_first, int panels_per_decade, int order)
{
    if (!(r_first > 0 && r_first < 1)) throw Error("config", "first panel edge must lie in (0,1)");
    RadialMesh m;
    m.order = order;
    int P = std::max(1, int(std::ceil(-std::log10(r_first) * panels_per_decade)));
    m.edges.push_back(0);
    for (int k = 0; k <= P; ++k) m.edges.push_back(r_first * std::pow(1 / r_first, double(k) / P));
    m.edges.back() = 1;
    // sources like (PV)^p behave as (1-r)^p at the wall; grade toward r = 1 as well
    double last = m.edges[m.edges.size() - 2];
    m.edges.pop_back();
    for (double gap = 0.5 * (1 - last); gap > 1e-9; gap *= 0.5) m.edges.push_back(1 - gap);
    m.edges.push_back(1);
    const auto& sp = spectral(order);
    for (size_t k = 0; k + 1 < m.edges.size(); ++k) {
        double a = m.edges[k], b = m.edges[k + 1];
        for (int j = 0; j < order; ++j) m.nodes.push_back(a + 0.5 * (b - a) * (1 + sp.x(j)));
    }
    return m;
}

RadialField radial_dirichlet_solve(const RadialMesh& mesh, int N, const std::vector<double>& f)
{
    const int n = mesh.order;
    const size_t P = mesh.edges.size() - 1;
    if (f.size() != P * n) throw Error("config", "right-hand side does not match the mesh");
    const auto& sp = spectral(n);
    for (double v : f)
        if (!std::isfinite(v)) throw Error("singular-rhs", "right-hand side is not finite");
    std::vector<double> F(P * n), h(P * n);
    double Fa = 0;
    for (size_t k = 0; k < P; ++k) {
        double half = 0.5 * (mesh.edges[k + 1] - mesh.edges[k]);
        Eigen::VectorXd g(n);
        for (int j = 0; j < n; ++j) {
            double t = mesh.nodes[k * n + j];
            g(j) = f[k * n + j] * std::pow(t, N - 1);
        }
        Eigen::VectorXd Sg = sp.S * g;
        for (int j = 0; j < n; ++j) {
            double t = mesh.nodes[k * n + j];
            F[k * n + j] = Fa + half * Sg(j);
            h[k * n + j] = F[k * n + j] * std::pow(t, 1 - N);
        }
        Fa += half * sp.w.dot(g);
    }
    if (!std::isfinite(Fa)) throw Error("singular-rhs", "f r^{N-1} is not integrable");
    RadialField out;
    out.r = mesh.nodes;
    out.w.resize(P * n);
    double Wb = 0;
    for (size_t kk = P; kk-- > 0;) {
        double half = 0.5 * (mesh.edges[kk + 1] - mesh.edges[kk]);
        Eigen::VectorXd hv(n);
        for (int j = 0; j < n; ++j) hv(j) = h[kk * n + j];
        Eigen::VectorXd Sh = sp.S * hv;
        double tot = half * sp.w.dot(hv);
        for (int j = 0; j < n; ++j) out.w[kk * n + j] = Wb + tot - half * Sh(j);
        Wb += tot;
    }
    out.w0 = Wb;
    // re-apply the operator in flux form: -r^{N-1} w' against the cumulative source
    double num = 0, den = 0;
    for (size_t k = 0; k < P; ++k) {
        double half = 0.5 * (mesh.edges[k + 1] - mesh.edges[k]);
        Eigen::VectorXd wv(n);
        for (int j = 0; j < n; ++j) wv(j) = out.w[k * n + j];
        Eigen::VectorXd dw = sp.D * wv / half;
        for (int j = 0; j < n; ++j) {
            double t = mesh.nodes[k * n + j];
            num = std::max(num, std::abs(-std::pow(t, N - 1) * dw(j) - F[k * n + j]));
            den = std::max(den, std::abs(F[k * n + j]));
        }
    }
    out.residual = den > 0 ? num / den : num;
    return out;
}

RadialField radial_dirichlet_solve(const RadialMesh& mesh, int N, const std::function<double(double)>& f)
{
    std::vector<double> v(mesh.nodes.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = f(mesh.nodes[i]);
    return radial_dirichlet_solve(mesh, N, v);
}

double h_tilde_radial_ball(const CriticalPair& cp, double r)
{
    if (!(r >= 0 && r < 1)) throw Error("outside", "radius must lie in [0,1)");
    if (r == 0) return tau_tilde_radial_oracle(cp);
    const int N = cp.N;
    const double p = cp.p, gp = std::pow(cp.gamma_N, p);
    boost::math::quadrature::tanh_sinh<double> ts;
    auto brx = [&](double t) {
        double x = std::pow(t, N - 2);
        return x > 0 ? std::expm1(p * std::log1p(-x)) / x : -p;
    };
    auto dint = [&](double t) { return t > 0 ? std::pow(t, 2 * N - 3 - (N - 2) * p) * brx(t) : 0.0; };
    double Dr = gp * ts.integrate(dint, 0.0, r, 1e-14);
    double D1 = Dr + gp * ts.integrate(dint, r, 1.0, 1e-14);
    double I2 = gp * ts.integrate([&](double s) { return std::pow(s, N - 1 - (N - 2) * p) * brx(s); }, r, 1.0, 1e-14);
    double integral = (std::pow(r, 2 - N) * Dr - D1) / (N - 2) + I2 / (N - 2);
    return cp.gamma_tilde - integral;
}

ProjectionSample project_all(const BubbleProfile& prof, double mu)
{
    const CriticalPair& cp = prof.pair;
    if (!cp.regular_range()) throw Error("regime", "projection expansions need 2/(N-2) < p < (N-1)/(N-2)");
    if (!(mu > 0 && mu <= 0.2)) throw Error("config", "mu must lie in (0, 0.2]");
    const int N = cp.N;
    const double p = cp.p, q = cp.q, kU = cp.kU(), kV = cp.kV();
    const double a = prof.tail.a, b = prof.tail.b, g = cp.gamma_N;
    RadialMesh mesh = make_radial_mesh(1e-2 * mu);
    const size_t M = mesh.nodes.size();
    std::vector<double> Um(M), Vm(M), Psi(M), Phi(M), fU(M), fV(M), fPsi(M), fPhi(M);
    for (size_t i = 0; i < M; ++i) {
        double y = mesh.nodes[i] / mu;
        auto e = prof.eval(y);
        Um[i] = std::pow(mu, -kU) * e[0];
        Vm[i] = std::pow(mu, -kV) * e[1];
        Psi[i] = std::pow(mu, -kU - 1) * (y * e[2] + kU * e[0]);
        Phi[i] = std::pow(mu, -kV - 1) * (y * e[3] + kV * e[1]);
        fU[i] = std::pow(Vm[i], p);
        fV[i] = std::pow(Um[i], q);
        fPsi[i] = p * std::pow(Vm[i], p - 1) * Phi[i];
        fPhi[i] = q * std::pow(Um[i], q - 1) * Psi[i];
    }
    auto PU = radial_dirichlet_solve(mesh, N, fU);
    auto PV = radial_dirichlet_solve(mesh, N, fV);
    auto PPsi = radial_dirichlet_solve(mesh, N, fPsi);
    auto PPhi = radial_dirichlet_solve(mesh, N, fPhi);
    std::vector<double> fb(M);
    for (size_t i = 0; i < M; ++i) fb[i] = std::pow(std::max(PV.w[i], 0.0), p);
    auto bPU = radial_dirichlet_solve(mesh, N, fb);

    ProjectionSample s;
    s.mu = mu;
    const double lU = N * p / (q + 1), lV = N / (q + 1);
    const double cU = a * std::pow(mu, lU), cV = b * std::pow(mu, lV);
    const double cPsi = a * lU * std::pow(mu, lU - 1), cPhi = b * lV * std::pow(mu, lV - 1);
    const double cB = std::pow(mu, lU) * std::pow(b / g, p);
    s.e_U = sup_on(PU, [&](size_t i) { return PU.w[i] - Um[i] + cU; });
    s.e_V = sup_on(PV, [&](size_t i) { return PV.w[i] - Vm[i] + cV; });
    s.e_Psi = sup_on(PPsi, [&](size_t i) { return PPsi.w[i] - Psi[i] - cPsi; });
    s.e_Phi = sup_on(PPhi, [&](size_t i) { return PPhi.w[i] - Phi[i] - cPhi; });
    s.e_bPU = sup_on(bPU, [&](size_t i) { return bPU.w[i] - Um[i] + cB * h_tilde_radial_ball(cp, bPU.r[i]); });
    s.max_residual = std::max({PU.residual, PV.residual, PPsi.residual, PPhi.residual, bPU.residual});
    for (size_t i = 0; i < M; ++i) {
        if (!(PU.w[i] > 0 && PV.w[i] > 0 && bPU.w[i] > 0)) s.positive = false;
        if (!(PU.w[i] < Um[i] && PV.w[i] < Vm[i])) s.ordered = false;
    }
    return s;
}

ProjectionSweep expansion_sweep(const BubbleProfile& prof, const std::vector<double>& mus, double margin)
{
    if (mus.size() < 2) throw Error("config", "need at least two values of mu");
    const CriticalPair& cp = prof.pair;
    ProjectionSweep sw;
    std::vector<double> lm, eU, eV, ePsi, ePhi, eB;
    for (double mu : mus) {
        auto s = project_all(prof, mu);
        sw.samples.push_back(s);
        lm.push_back(std::log(mu));
        eU.push_back(std::log(s.e_U));
        eV.push_back(std::log(s.e_V));
        ePsi.push_back(std::log(s.e_Psi));
        ePhi.push_back(std::log(s.e_Phi));
        eB.push_back(std::log(s.e_bPU));
    }
    sw.order_U = ls_slope(lm, eU);
    sw.order_V = ls_slope(lm, eV);
    sw.order_Psi = ls_slope(lm, ePsi);
    sw.order_Phi = ls_slope(lm, ePhi);
    sw.order_bPU = ls_slope(lm, eB);
    sw.lead_U = cp.N * cp.p / (cp.q + 1);
    sw.lead_V = cp.N / (cp.q + 1);
    sw.lead_Psi = sw.lead_U - 1;
    sw.lead_Phi = sw.lead_V - 1;
    sw.lead_bPU = sw.lead_U;
    sw.pass = sw.order_U > sw.lead_U + margin && sw.order_V > sw.lead_V + margin && sw.order_Psi > sw.lead_Psi + margin &&
              sw.order_Phi > sw.lead_Phi + margin && sw.order_bPU > sw.lead_bPU + margin;
    return sw;
}

}  // namespace lesys
