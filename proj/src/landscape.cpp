#include "lesys/landscape.hpp"
#include "lesys/error.hpp"

#include <Eigen/Eigenvalues>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>

namespace lesys {

EnergyModel EnergyModel::from_profile(const BubbleProfile& prof)
{
    EnergyModel em;
    em.cp = prof.pair;
    em.a = prof.tail.a;
    em.b = prof.tail.b;
    em.K = bubble_constants(prof);
    return em;
}

LandscapeCoefficients landscape_coefficients(const EnergyModel& em, const RateScenario& s, int k)
{
    const auto& cp = em.cp;
    const double N = cp.N, p = cp.p, q = cp.q;
    const double al = s.alpha_sub, be = s.beta_sub;
    const double w = al / ((p + 1) * (p + 1)) + be / ((q + 1) * (q + 1));
    LandscapeCoefficients c;
    c.k = k;
    c.C0 = 2 * k * em.A(1) / N;
    c.C1 = em.A(2) * em.bg_p() / (p + 1);
    c.C2 = em.A(5) / 2;
    c.C3 = em.A(3);
    c.C4 = em.A(4) / 2;
    c.C5 = w * k * N * em.A(1);
    c.C6 = k * (al * em.A(7) / (p + 1) + be * em.A(6) / (q + 1) - w * k * em.A(1));
    c.C7 = w * N * em.A(1);
    return c;
}

EnergyExponents energy_exponents(const EnergyModel& em, const RateScenario& s)
{
    s.validate();
    const auto& cp = em.cp;
    const double N = cp.N, p = cp.p, q = cp.q;
    auto C = landscape_coefficients(em, s, 1);
    EnergyExponents e{cp.m(), 0, 0};
    switch (s.kind) {
    case ScenarioKind::CaseI:
        e.b = N * (p - 1) / (p + 1);
        e.B = C.C2 * s.beta1;
        break;
    case ScenarioKind::CaseII:
        e.b = 2;
        e.B = C.C3 * s.alpha;
        break;
    case ScenarioKind::CaseIII:
        e.b = N * (q - 1) / (q + 1);
        e.B = C.C4 * s.beta2;
        break;
    case ScenarioKind::Subcritical:
        e.b = 0;
        e.B = C.C7;
        break;
    }
    if (!(e.a > e.b)) throw Error("regime", "energy exponents out of order");
    return e;
}

namespace {

double competing_term(const EnergyExponents& e, double d) { return e.b == 0 ? e.B * std::log(d) : e.B * std::pow(d, e.b); }

}  // namespace

double single_spike_energy(const EnergyModel& em, const RateScenario& s, double d, double tau)
{
    auto e = energy_exponents(em, s);
    double C1 = landscape_coefficients(em, s, 1).C1;
    return C1 * std::pow(d, e.a) * tau - competing_term(e, d);
}

double optimal_d(const EnergyModel& em, const RateScenario& s, double tau)
{
    if (!(tau > 0)) throw Error("regime", "optimal height needs tau > 0");
    auto e = energy_exponents(em, s);
    double C1 = landscape_coefficients(em, s, 1).C1;
    if (e.b == 0) return std::pow(e.B / (e.a * C1 * tau), 1 / e.a);
    return std::pow(e.b * e.B / (e.a * C1 * tau), 1 / (e.a - e.b));
}

namespace {

double interaction(const EnergyModel& em, const SpikeConfig& c)
{
    const auto& cp = em.cp;
    double s = 0;
    for (int i = 0; i < c.k(); ++i)
        for (int j = 0; j < c.k(); ++j) {
            if (i == j) continue;
            double r = (c.xi[i] - c.xi[j]).norm();
            s += c.sign(i) * c.sign(j) * std::pow(c.d[i], cp.kU()) * std::pow(c.d[j], cp.p * cp.kU()) * std::pow(r, -cp.m());
        }
    return em.a * s;
}

// (b/gamma)^p sum lam_i c_i H~(xi_i) - a sum_{i != j} ..., without the A2/(p+1) factor
MCEstimate F_bracket(const EnergyModel& em, const Domain& dom, const SpikeConfig& c, const NLGParams& prm)
{
    std::vector<double> w;
    for (int i = 0; i < c.k(); ++i) w.push_back(em.bg_p() * c.sign(i) * std::pow(c.d[i], em.cp.kU()));
    MCEstimate e = h_tilde_weighted_sum(dom, em.cp, c, c.xi, w, prm);
    e.value -= interaction(em, c);
    return e;
}

}  // namespace

MCEstimate F1(const EnergyModel& em, const Domain& dom, const SpikeConfig& c, const NLGParams& prm)
{
    MCEstimate e = F_bracket(em, dom, c, prm);
    double f = em.A(2) / (em.cp.p + 1);
    e.value *= f;
    e.std_error *= f;
    return e;
}

double F2_reduced(const EnergyModel& em, const RateScenario& s, const SpikeConfig& c)
{
    auto e = energy_exponents(em, s);
    double t = 0;
    for (double d : c.d) t += competing_term(e, d);
    return t;
}

double F2(const EnergyModel& em, const RateScenario& s, const SpikeConfig& c, double mu)
{
    const auto& cp = em.cp;
    const double N = cp.N, p = cp.p, q = cp.q;
    auto C = landscape_coefficients(em, s, c.k());
    const double e1 = N * (p - 1) / (p + 1), e3 = N * (q - 1) / (q + 1);
    double s1 = 0, s2 = 0, s3 = 0;
    for (double d : c.d) {
        s1 += std::pow(d, e1);
        s2 += d * d;
        s3 += std::pow(d, e3);
    }
    return std::pow(mu, e1) * s.beta1 * C.C2 * s1 + mu * mu * s.alpha * C.C3 * s2 + std::pow(mu, e3) * s.beta2 * C.C4 * s3;
}

double F3(const EnergyModel& em, const RateScenario& s, const SpikeConfig& c)
{
    double C7 = landscape_coefficients(em, s, c.k()).C7;
    double L = 0;
    for (double d : c.d) L += std::log(d);
    return -C7 * L;
}

LobeTau::LobeTau(const CriticalPair& cp, const Domain& dom, double max_frac) : dom_(dom)
{
    if (dom.dim() != cp.N) throw Error("config", "domain dimension differs from N");
    std::map<double, size_t> built;
    std::vector<TauBallTable> distinct;
    for (const auto& b : dom.lobes()) {
        auto it = built.find(b.radius);
        if (it == built.end()) {
            it = built.emplace(b.radius, distinct.size()).first;
            distinct.emplace_back(cp, b.radius, max_frac);
        }
        tables_.push_back(distinct[it->second]);
    }
}

double LobeTau::operator()(const Vec& x) const
{
    int l = dom_.lobe_of(x);
    if (l < 0) return std::numeric_limits<double>::quiet_NaN();
    try {
        return tables_[l]((x - dom_.lobes()[l].center).norm());
    } catch (const Error&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

namespace {

// Unconstrained variables per spike mapped onto the admissible set of its lobe:
// d = exp(-log(delta1) tanh v0), xi = centre + (R - delta2) tanh|w| w/|w|
struct Layout {
    int N, k;
    std::vector<int> lobe;
    int size() const { return k * (N + 1); }
};

SpikeConfig decode(const Layout& L, const Domain& dom, const double* x, double delta1, double delta2)
{
    SpikeConfig c;
    c.delta1 = delta1;
    c.delta2 = delta2;
    const double l1 = -std::log(delta1);
    for (int i = 0; i < L.k; ++i) {
        const double* v = x + i * (L.N + 1);
        const Ball& b = dom.lobes()[L.lobe[i]];
        c.d.push_back(std::exp(l1 * std::tanh(v[0])));
        Vec w = Eigen::Map<const Eigen::VectorXd>(v + 1, L.N);
        double r = w.norm();
        double f = r > 1e-8 ? std::tanh(r) / r : 1 - r * r / 3;
        c.xi.push_back(b.center + (b.radius - delta2) * f * w);
    }
    return c;
}

void encode(const Layout& L, const Domain& dom, int i, double d, const Vec& xi, double delta1, double delta2, double* x)
{
    double* v = x + i * (L.N + 1);
    const Ball& b = dom.lobes()[L.lobe[i]];
    v[0] = std::atanh(std::log(d) / -std::log(delta1));
    Vec u = (xi - b.center) / (b.radius - delta2);
    double r = u.norm();
    double g = r > 1e-8 ? std::atanh(r) / r : 1;
    for (int j = 0; j < L.N; ++j) v[1 + j] = g * u(j);
}

// Distance to the boundary of the admissible set, relative to the bound; negative outside
double lambda_margin(const Domain& dom, const SpikeConfig& c)
{
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < c.k(); ++i) {
        double ld = std::log(c.d[i]), l1 = -std::log(c.delta1);
        m = std::min(m, (l1 - std::abs(ld)) / l1);
        m = std::min(m, (dom.inside_distance(c.xi[i]) - c.delta2) / c.delta2);
        for (int j = 0; j < i; ++j) m = std::min(m, ((c.xi[i] - c.xi[j]).norm() - c.delta2) / c.delta2);
    }
    return m;
}

struct Problem {
    std::function<double(const double*)> f;
    int n;
};

double gsl_trampoline(const gsl_vector* v, void* params)
{
    auto* P = static_cast<Problem*>(params);
    return P->f(v->data);
}

std::vector<double> nelder_mead(Problem& P, std::vector<double> x0, double step, double tol, int max_iter, int restarts,
                                double& fbest)
{
    const int n = P.n;
    gsl_multimin_function fn{&gsl_trampoline, size_t(n), &P};
    gsl_vector* x = gsl_vector_alloc(n);
    gsl_vector* ss = gsl_vector_alloc(n);
    gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
    for (int r = 0; r <= restarts; ++r) {
        for (int i = 0; i < n; ++i) gsl_vector_set(x, i, x0[i]);
        gsl_vector_set_all(ss, step);
        gsl_multimin_fminimizer_set(s, &fn, x, ss);
        for (int it = 0; it < max_iter; ++it) {
            if (gsl_multimin_fminimizer_iterate(s)) break;
            if (gsl_multimin_fminimizer_size(s) < tol) break;
        }
        for (int i = 0; i < n; ++i) x0[i] = gsl_vector_get(s->x, i);
        fbest = s->fval;
    }
    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(ss);
    gsl_vector_free(x);
    return x0;
}

bool same_point(const CriticalPointResult& A, const CriticalPointResult& B, double xi_tol)
{
    if (A.lobes != B.lobes) return false;
    for (size_t i = 0; i < A.lobes.size(); ++i) {
        if ((A.configuration.xi[i] - B.configuration.xi[i]).norm() > xi_tol) return false;
        double da = A.configuration.d[i], db = B.configuration.d[i];
        if (std::abs(da - db) > 0.1 * std::max(da, db)) return false;
    }
    return true;
}

// spikes ordered by lobe, then by x1, so permutations of one configuration compare equal
void canonicalize(CriticalPointResult& r)
{
    const int k = int(r.lobes.size());
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (r.lobes[a] != r.lobes[b]) return r.lobes[a] < r.lobes[b];
        return r.configuration.xi[a](0) < r.configuration.xi[b](0);
    });
    CriticalPointResult o = r;
    for (int i = 0; i < k; ++i) {
        o.lobes[i] = r.lobes[idx[i]];
        o.configuration.xi[i] = r.configuration.xi[idx[i]];
        o.configuration.d[i] = r.configuration.d[idx[i]];
    }
    r = o;
}

}  // namespace

LandscapeResult minimize_landscape(const EnergyModel& em, const Domain& dom, int k, const RateScenario& s,
                                   const LandscapeOptions& opt)
{
    s.validate();
    const auto& cp = em.cp;
    const int N = cp.N;
    if (dom.dim() != N) throw Error("config", "domain dimension differs from N");
    if (k < 1) throw Error("config", "at least one spike is required");
    if (!(opt.delta1 > 0 && opt.delta1 < 1)) throw Error("config", "delta1 must lie in (0, 1)");
    const int l = int(dom.lobes().size());
    double rmin = 1e300;
    for (const auto& b : dom.lobes()) rmin = std::min(rmin, b.radius);
    const double delta2 = opt.delta2 > 0 ? opt.delta2 : 0.2 * rmin;
    const bool mc = opt.objective == Objective::MonteCarlo && dom.is_ball();
    if (!mc && k > l) throw Error("config", "the decoupled objective needs one lobe per spike");
    if (mc && opt.mc.n_samples < 1000) throw Error("config", "Monte Carlo budget too small");

    std::unique_ptr<LobeTau> tau;
    if (!mc) tau = std::make_unique<LobeTau>(cp, dom);
    const double bigval = 1e30;

    auto energy = [&](const SpikeConfig& c, const std::vector<int>& lobes, std::uint64_t seed, double* se) -> double {
        if (se) *se = 0;
        if (lambda_margin(dom, c) <= 0) return bigval;
        if (!mc) {
            double v = 0;
            for (int i = 0; i < c.k(); ++i) {
                if (dom.lobe_of(c.xi[i]) != lobes[i]) return bigval;
                double t = (*tau)(c.xi[i]);
                if (!std::isfinite(t)) return bigval;
                v += single_spike_energy(em, s, c.d[i], t);
            }
            return v;
        }
        NLGParams prm = opt.mc;
        prm.seed = seed;
        MCEstimate f = F1(em, dom, c, prm);
        if (se) *se = f.std_error;
        return f.value - F2_reduced(em, s, c);
    };

    LandscapeResult res;
    std::vector<CriticalPointResult> found;
    for (int run = 0; run < opt.starts; ++run) {
        Stream st(derive_seed(opt.seed, run));
        Layout L{N, k, {}};
        std::vector<double> x0(L.size());
        // start spikes at uniform points of distinct lobes, heights log-uniform well inside the bounds
        std::vector<int> used;
        std::vector<Vec> starts;
        for (int i = 0; i < k; ++i) {
            for (int tries = 0;; ++tries) {
                if (tries > 100000) throw Error("config", "could not place a start point");
                int lz = std::min(l - 1, int(st.uniform() * l));
                const Ball& bb = dom.lobes()[lz];
                Vec dir(N);
                for (int j = 0; j < N; ++j) dir(j) = st.normal();
                Vec z = bb.center + dir.normalized() * (bb.radius * std::pow(st.uniform_open(), 1.0 / N));
                if (dom.inside_distance(z) < 1.5 * delta2) continue;
                if (!mc && std::find(used.begin(), used.end(), lz) != used.end()) continue;
                bool close = false;
                for (int j = 0; j < i; ++j)
                    if ((z - starts[j]).norm() < 1.5 * delta2) close = true;
                if (close) continue;
                used.push_back(lz);
                L.lobe.push_back(mc ? 0 : lz);
                starts.push_back(z);
                double span = 0.5 * std::log(1 / opt.delta1);
                encode(L, dom, i, std::exp(span * (2 * st.uniform() - 1)), z, opt.delta1, delta2, x0.data());
                break;
            }
        }
        std::vector<int> lobes_of_spikes = L.lobe;
        const std::uint64_t run_seed = derive_seed(opt.seed, 1000 + run);
        Problem P{[&](const double* x) {
                      return energy(decode(L, dom, x, opt.delta1, delta2), lobes_of_spikes, run_seed, nullptr);
                  },
                  L.size()};
        double fbest = 0;
        auto xb = nelder_mead(P, x0, 0.5, opt.tol, opt.max_iter, opt.restarts, fbest);
        ++res.runs;

        CriticalPointResult r;
        r.configuration = decode(L, dom, xb.data(), opt.delta1, delta2);
        if (fbest >= bigval || lambda_margin(dom, r.configuration) < 0.01) {
            ++res.boundary_runs;
            continue;
        }
        r.lobes.clear();
        for (const auto& xi : r.configuration.xi) r.lobes.push_back(dom.lobe_of(xi));

        // central differences in the scaled variables, same seed as the run
        const int n = L.size();
        const double h = mc ? 1e-2 : 1e-3;
        std::vector<double> xp = xb;
        auto at = [&](int i, double di, int j, double dj) {
            xp = xb;
            xp[i] += di;
            if (j >= 0) xp[j] += dj;
            return P.f(xp.data());
        };
        Eigen::VectorXd g(n);
        for (int i = 0; i < n; ++i) g(i) = (at(i, h, -1, 0) - at(i, -h, -1, 0)) / (2 * h);
        r.grad_norm = g.norm();
        r.classification = "unclassified";
        if (!mc) {
            Eigen::MatrixXd H(n, n);
            const double f0 = P.f(xb.data());
            for (int i = 0; i < n; ++i) {
                H(i, i) = (at(i, h, -1, 0) - 2 * f0 + at(i, -h, -1, 0)) / (h * h);
                for (int j = 0; j < i; ++j) {
                    double v = (at(i, h, j, h) - at(i, h, j, -h) - at(i, -h, j, h) + at(i, -h, j, -h)) / (4 * h * h);
                    H(i, j) = H(j, i) = v;
                }
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
            auto ev = es.eigenvalues();
            double scale = ev.cwiseAbs().maxCoeff();
            if (ev.minCoeff() > 1e-6 * scale)
                r.classification = "min";
            else if (ev.minCoeff() < -1e-6 * scale)
                r.classification = "saddle";
        }
        double se = 0;
        r.value = energy(r.configuration, L.lobe, mc ? derive_seed(opt.seed, 5000 + run) : 0, &se);
        r.sigma = se;
        canonicalize(r);
        bool merged = false;
        for (auto& f : found)
            if (same_point(f, r, 0.2 * delta2)) {
                ++f.hits;
                if (r.value < f.value) {
                    int hits = f.hits;
                    f = r;
                    f.hits = hits;
                }
                merged = true;
                break;
            }
        if (!merged) found.push_back(r);
    }
    for (auto& f : found)
        if (f.classification != "saddle") res.minima.push_back(f);
    std::sort(res.minima.begin(), res.minima.end(), [](const auto& a, const auto& b) { return a.lobes < b.lobes; });
    res.no_interior_min = res.minima.empty();
    return res;
}

DecouplingReport dumbbell_landscape(const EnergyModel& em, int lobes, const std::vector<double>& etas, const SpikeConfig& c,
                                    const NLGParams& prm)
{
    const auto& cp = em.cp;
    if (lobes < 2) throw Error("config", "a dumbbell needs at least two lobes");
    if (etas.empty()) throw Error("config", "no neck radii given");
    std::vector<double> es = etas;
    std::sort(es.begin(), es.end(), std::greater<>());
    Domain limit = Domain::chain(cp.N, lobes, es.back());
    double F0 = 0;
    for (int i = 0; i < c.k(); ++i) {
        int li = limit.lobe_of(c.xi[i]);
        if (li < 0) throw Error("config", "probe spikes must lie inside lobes");
        for (int j = 0; j < i; ++j)
            if (limit.lobe_of(c.xi[j]) == li) throw Error("config", "the decoupled limit needs one spike per lobe");
        F0 += em.bg_p() * std::pow(c.d[i], cp.m()) * tau_tilde_ball_oracle(cp, limit.lobes()[li], c.xi[i]);
    }
    DecouplingReport rep;
    for (double eta : es) {
        Domain dom = Domain::chain(cp.N, lobes, eta);
        DecouplingRow row{eta, F_bracket(em, dom, c, prm), F0, 0};
        row.z = row.F_eta.std_error > 0 ? (row.F_eta.value - F0) / row.F_eta.std_error : 0;
        rep.rows.push_back(row);
    }
    for (size_t i = 1; i < rep.rows.size(); ++i) {
        const auto &A = rep.rows[i - 1].F_eta, &B = rep.rows[i].F_eta;
        if (B.value < A.value - 2 * std::hypot(A.std_error, B.std_error)) rep.monotone = false;
    }
    rep.within_3sigma = std::abs(rep.rows.back().z) <= 3;
    return rep;
}

MCEstimate signed_F1(const EnergyModel& em, const Domain& dom, const SpikeConfig& c, const NLGParams& prm)
{
    if (c.k() != 2 || c.lambda.size() != 2 || c.lambda[0] != 1 || c.lambda[1] != -1)
        throw Error("config", "signed F1 takes two spikes with signs (+1, -1)");
    return F1(em, dom, c, prm);
}

ConjectureReport conjecture_scan(const EnergyModel& em, const Domain& dom, const std::vector<double>& sep,
                                 const std::vector<double>& d_grid, const NLGParams& prm, double delta1)
{
    const auto& cp = em.cp;
    const Vec c0 = dom.lobes()[0].center;
    ConjectureReport rep;
    rep.inf_ratio = std::numeric_limits<double>::infinity();
    std::uint64_t idx = 0;
    for (double s : sep)
        for (double d1 : d_grid)
            for (double d2 : d_grid) {
                SpikeConfig c;
                c.xi = {c0 + axis_point(cp.N, s), c0 + axis_point(cp.N, -s)};
                // grid ends at the height bounds are pulled inside by a relative 1e-9
                auto clampd = [&](double d) { return std::clamp(d, delta1 * (1 + 1e-9), (1 - 1e-9) / delta1); };
                c.d = {clampd(d1), clampd(d2)};
                c.lambda = {1, -1};
                c.delta1 = delta1;
                c.delta2 = std::min(s, dom.inside_distance(c.xi[0])) * 0.5;
                NLGParams pp = prm;
                pp.seed = derive_seed(prm.seed, idx++);
                ConjectureRow row{c.xi[0], c.xi[1], c.d[0], c.d[1], signed_F1(em, dom, c, pp), 0, 0};
                double norm = std::pow(c.d[0], cp.kU()) + std::pow(c.d[1], cp.kU());
                row.ratio = row.F1t.value / norm;
                row.ratio_se = row.F1t.std_error / norm;
                if (row.ratio < rep.inf_ratio) {
                    rep.inf_ratio = row.ratio;
                    rep.inf_se = row.ratio_se;
                }
                rep.rows.push_back(row);
            }
    return rep;
}

SliceGrid energy_slice(const EnergyModel& em, const RateScenario& s, const LobeTau& tau, double x0, double x1, double y0,
                       double y1, int nx, int ny)
{
    if (nx < 1 || ny < 1) throw Error("empty-grid", "slice needs at least one node per axis");
    SliceGrid g{nx, ny, x0, x1, y0, y1, {}};
    const int N = tau.domain().dim();
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            double x = nx > 1 ? x0 + (x1 - x0) * i / (nx - 1) : x0;
            double y = ny > 1 ? y0 + (y1 - y0) * j / (ny - 1) : y0;
            double t = tau(axis_point(N, x, y));
            g.v.push_back(std::isfinite(t) ? single_spike_energy(em, s, optimal_d(em, s, t), t)
                                           : std::numeric_limits<double>::quiet_NaN());
        }
    return g;
}

}  // namespace lesys
