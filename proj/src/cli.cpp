#include "lesys/cli.hpp"
#include "lesys/bubble.hpp"
#include "lesys/continuation.hpp"
#include "lesys/error.hpp"
#include "lesys/green.hpp"
#include "lesys/landscape.hpp"
#include "lesys/mc.hpp"
#include "lesys/nonlinear_green.hpp"
#include "lesys/svg.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace lesys {

using nlohmann::json;
namespace fs = std::filesystem;

std::string config_hash(const json& effective)
{
    const std::string s = effective.dump();
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(s.data(), s.size(), md, &len, EVP_sha256(), nullptr);
    char hex[17];
    for (int i = 0; i < 8; ++i) std::snprintf(hex + 2 * i, 3, "%02x", md[i]);
    return std::string(hex, 16);
}

namespace {

std::string fmt(double x)
{
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct Check {
    std::string name;
    bool pass;
    double value, reference;
    std::string detail;
};

struct Table {
    std::string name;
    std::vector<std::string> notes;  // header comment lines: units, exponents
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> r) { rows.push_back(std::move(r)); }
};

class Run {
public:
    Run(json cfg, const RunOverrides& ov, std::ostream& log) : cfg_(std::move(cfg)), log_(log)
    {
        if (!cfg_.is_object()) throw Error("config", "configuration must be a JSON object");
        if (ov.seed) cfg_["mc"]["seed"] = *ov.seed;
        if (!cfg_.contains("mc") || !cfg_["mc"].contains("seed"))
            throw Error("config", "mc.seed is required (or --seed); there is no default seed");
        seed_ = cfg_["mc"]["seed"].get<std::uint64_t>();
        threads_ = ov.threads ? *ov.threads : cfg_["mc"].value("threads", default_threads());
        if (threads_ < 1) throw Error("config", "threads must be positive");
        out_ = ov.out_dir ? *ov.out_dir : cfg_.value("out_dir", std::string("out"));
        task_ = req<std::string>(cfg_, "task");
        json eff = cfg_;
        eff.erase("out_dir");
        eff["mc"].erase("threads");
        hash_ = config_hash(eff);
    }

    int execute();

private:
    json cfg_;
    std::ostream& log_;
    std::uint64_t seed_ = 0;
    int threads_ = 1;
    std::string out_, task_, hash_;
    std::vector<Check> checks_;
    std::vector<Table> tables_;
    std::vector<std::pair<std::string, std::string>> svgs_;
    json extra_ = json::object();

    template <class T>
    static T req(const json& j, const std::string& key)
    {
        if (!j.contains(key)) throw Error("config", "missing key '" + key + "'");
        return j.at(key).get<T>();
    }

    const json& sec(const std::string& k) const
    {
        static const json empty = json::object();
        return cfg_.contains(k) ? cfg_.at(k) : empty;
    }

    CriticalPair pair() const { return make_pair(req<int>(cfg_, "N"), req<double>(cfg_, "p")); }

    RateScenario scenario() const
    {
        const json& s = sec("scenario");
        RateScenario r;
        r.kind = scenario_from_string(s.value("kind", std::string("case-i")));
        r.alpha = s.value("alpha", 0.0);
        r.beta1 = s.value("beta1", r.kind == ScenarioKind::CaseI ? 1.0 : 0.0);
        r.beta2 = s.value("beta2", r.kind == ScenarioKind::CaseIII ? 1.0 : 0.0);
        if (r.kind == ScenarioKind::CaseII && !s.contains("alpha")) r.alpha = 1;
        r.alpha_sub = s.value("alpha_sub", r.kind == ScenarioKind::Subcritical ? 1.0 : 0.0);
        r.beta_sub = s.value("beta_sub", r.kind == ScenarioKind::Subcritical ? 1.0 : 0.0);
        r.validate();
        return r;
    }

    Domain domain(int N) const
    {
        const json& d = sec("domain");
        std::string type = d.value("type", std::string("ball"));
        if (type == "ball") return Domain::ball(N, d.value("radius", 1.0));
        if (type == "dumbbell") return Domain::chain(N, d.value("lobes", 2), req<double>(d, "eta"), d.value("spacing", 3.0));
        throw Error("config", "unknown domain type '" + type + "'");
    }

    NLGParams mc(long long default_samples) const
    {
        const json& m = sec("mc");
        NLGParams p;
        p.n_samples = m.value("samples", default_samples);
        p.seed = seed_;
        p.threads = threads_;
        p.inner_walks = m.value("inner_walks", 4);
        p.wos.threads = threads_;
        p.wos.seed = seed_;
        if (p.n_samples < 64) throw Error("config", "mc.samples must be at least 64");
        return p;
    }

    static Vec point(const json& a, int N)
    {
        if (!a.is_array() || a.empty() || int(a.size()) > N) throw Error("config", "points are arrays of 1..N coordinates");
        Vec v = Vec::Zero(N);
        for (size_t i = 0; i < a.size(); ++i) v(i) = a[i].get<double>();
        return v;
    }

    void check(std::string name, bool pass, double value, double ref, std::string detail = "")
    {
        checks_.push_back({std::move(name), pass, value, ref, std::move(detail)});
    }

    Table& table(std::string name, std::vector<std::string> cols, std::vector<std::string> notes = {})
    {
        tables_.push_back({std::move(name), std::move(notes), std::move(cols), {}});
        return tables_.back();
    }

    void task_bubble();
    void task_green_probe();
    void task_tau_map();
    void task_landscape();
    void task_dumbbell();
    void task_continuation();
    void task_verify_all();
    void write_outputs(const std::string& failure);
};

void Run::task_bubble()
{
    auto cp = pair();
    auto prof = shoot_ground_state(cp);
    auto& t = table("bubble_profile", {"r", "U", "V", "dU", "dV"}, {"U(0) = 1; V(0) = v0 from shooting", "v0 = " + fmt(prof.v0)});
    for (size_t i = 0; i < prof.r.size(); ++i) t.add({fmt(prof.r[i]), fmt(prof.U[i]), fmt(prof.V[i]), fmt(prof.Up[i]), fmt(prof.Vp[i])});
    auto K = bubble_constants(prof);
    auto& c = table("bubble_constants", {"name", "value", "quad_error", "tail_fraction"}, {"A1..A7 as integrals over R^N"});
    for (int i = 0; i < 7; ++i) c.add({"A" + std::to_string(i + 1), fmt(K.A[i]), fmt(K.err[i]), fmt(K.tail_fraction[i])});
    extra_["v0"] = prof.v0;
    const double crit = double(cp.N + 2) / (cp.N - 2);
    if (cp.slow_decay()) {
        auto d = decay_constants(prof);
        extra_["a"] = d.a;
        extra_["b"] = d.b;
        check("pohozaev-decay-identity", d.pohozaev_residual < 1e-3, d.pohozaev_residual, 1e-3, "|b^p - a m (N-(N-2)p)| / b^p");
    }
    if (std::abs(cp.p - crit) < 1e-12) {
        double e = talenti_error(prof, 20);
        check("talenti-profile", e < 1e-6, e, 1e-6, "sup |U - (1+r^2/(N(N-2)))^{-(N-2)/2}| on [0,20]");
        double K0 = fast_decay_constant(prof), Kt = std::pow(double(cp.N * (cp.N - 2)), (cp.N - 2) / 2.0);
        check("talenti-decay-constant", std::abs(K0 - Kt) <= 1e-3 * Kt, K0, Kt);
    }
}

void Run::task_green_probe()
{
    auto cp = pair();
    const int N = cp.N;
    Domain dom = domain(N);
    NLGParams prm = mc(50000);
    WosParams wp = prm.wos;
    wp.n_walks = sec("mc").value("walks", 20000LL);
    json probes = cfg_.contains("probes") ? cfg_["probes"] : json::parse("[[0,0,0,0],[0.3,0,0,0],[0.5,0.2,-0.3,0]]");
    auto& t = table("green_probe", {"probe", "x1", "x2", "y1", "y2", "H_wos", "H_se", "H_exact", "Ht", "Ht_se"},
                    {"H: regular part of the Dirichlet Green function; Ht: regular part of the nonlinear Green function",
                     "points in the (x1,x2) plane, other coordinates 0"});
    int k = 0;
    for (const auto& pr : probes) {
        if (!pr.is_array() || pr.size() != 4) throw Error("config", "probes are [x1, x2, y1, y2]");
        Vec x = axis_point(N, pr[0], pr[1]), y = axis_point(N, pr[2], pr[3]);
        WosParams w = wp;
        w.seed = derive_seed(seed_, 2 * k);
        auto H = wos_harmonic(dom, x, [&](const Vec& z) { return newton_kernel(N, (z - y).norm()); }, w);
        double exact = dom.is_ball() ? ball_robin_H(dom.lobes()[0], x, y) : NAN;
        NLGParams q = prm;
        q.seed = derive_seed(seed_, 2 * k + 1);
        auto Ht = h_tilde_mc(dom, cp, x, y, q);
        t.add({std::to_string(k), fmt(pr[0]), fmt(pr[1]), fmt(pr[2]), fmt(pr[3]), fmt(H.value), fmt(H.std_error), fmt(exact),
               fmt(Ht.value), fmt(Ht.std_error)});
        if (dom.is_ball())
            check("wos-vs-closed-form-" + std::to_string(k), std::abs(H.value - exact) <= 3 * H.std_error + 1e-12 * std::abs(exact),
                  H.value, exact);
        if ((x - y).norm() == 0) check("tau-positive-" + std::to_string(k), Ht.value > 3 * Ht.std_error, Ht.value, 0);
        ++k;
    }
}

void Run::task_tau_map()
{
    auto cp = pair();
    const int N = cp.N;
    Domain dom = domain(N);
    const json& g = sec("grid");
    const Ball bb = dom.bounding_ball();
    double x0 = g.value("x0", bb.center(0) - bb.radius), x1 = g.value("x1", bb.center(0) + bb.radius);
    double y0 = g.value("y0", -1.0), y1 = g.value("y1", 1.0);
    int nx = g.value("nx", 21), ny = g.value("ny", 21);
    std::string method = sec("tau").value("method", std::string("oracle"));
    if (method != "oracle" && method != "mc") throw Error("config", "tau.method is oracle or mc");
    if (nx < 1 || ny < 1) throw Error("empty-grid", "grid needs at least one node per axis");
    NLGParams prm = mc(20000);
    std::unique_ptr<LobeTau> lt;
    if (method == "oracle" || dom.is_ball()) lt = std::make_unique<LobeTau>(cp, dom);
    SliceGrid sg{nx, ny, x0, x1, y0, y1, {}};
    auto& t = table("tau_map", {"x1", "x2", "tau", "se", "oracle"},
                    {"tau: diagonal of the nonlinear regular part; oracle: axisymmetric quadrature per lobe (decoupled)",
                     "method = " + method});
    bool positive = true;
    int compared = 0, within = 0;
    std::uint64_t idx = 0;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            double x = nx > 1 ? x0 + (x1 - x0) * i / (nx - 1) : x0, y = ny > 1 ? y0 + (y1 - y0) * j / (ny - 1) : y0;
            Vec xi = axis_point(N, x, y);
            double orc = lt ? (*lt)(xi) : NAN;
            double val = orc, se = 0;
            if (method == "mc" && dom.inside_distance(xi) > 0.05) {
                NLGParams q = prm;
                q.seed = derive_seed(seed_, idx);
                auto e = tau_tilde(dom, cp, xi, q);
                val = e.value;
                se = e.std_error;
                if (std::isfinite(orc)) {
                    ++compared;
                    if (std::abs(val - orc) <= 3 * se) ++within;
                }
            } else if (method == "mc") {
                val = NAN;
            }
            ++idx;
            if (std::isfinite(val) && !(val > 0)) positive = false;
            sg.v.push_back(val);
            t.add({fmt(x), fmt(y), fmt(val), fmt(se), fmt(orc)});
        }
    check("tau-positive", positive, positive, 1);
    if (compared > 0)
        check("mc-vs-oracle-3sigma", within >= 0.95 * compared, double(within) / compared, 0.95, "fraction of grid points within 3 sigma");
    svgs_.push_back({"tau_map.svg", heatmap_svg(sg, "tau on the (x1,x2) plane, N=" + std::to_string(N), &dom,
                                                "config_hash=" + hash_ + " seed=" + std::to_string(seed_))});
}

void Run::task_landscape()
{
    auto cp = pair();
    const int N = cp.N;
    Domain dom = domain(N);
    RateScenario s = scenario();
    const json& L = sec("landscape");
    LandscapeOptions opt;
    opt.seed = seed_;
    opt.starts = L.value("starts", 24);
    opt.delta1 = L.value("delta1", opt.delta1);
    opt.delta2 = L.value("delta2", opt.delta2);
    std::string obj = L.value("objective", std::string("oracle"));
    if (obj == "mc")
        opt.objective = Objective::MonteCarlo;
    else if (obj != "oracle")
        throw Error("config", "landscape.objective is oracle or mc");
    opt.mc = mc(20000);
    if (opt.objective == Objective::MonteCarlo) opt.tol = 1e-6;
    const int k = L.value("k", 1);
    auto prof = shoot_ground_state(cp);
    auto em = EnergyModel::from_profile(prof);
    auto res = minimize_landscape(em, dom, k, s, opt);
    auto& t = table("landscape", {"scenario", "k", "minimum", "spike", "lobe", "d", "xi1", "xi2", "xi_norm", "value", "grad_norm", "sigma",
                                  "class", "hits"},
                    {"value: reduced energy with the mu powers removed", "d exponent (N-2)p-2 = " + fmt(cp.m())});
    for (size_t m = 0; m < res.minima.size(); ++m) {
        const auto& r = res.minima[m];
        for (int i = 0; i < k; ++i) {
            const Vec& xi = r.configuration.xi[i];
            t.add({to_string(s.kind), std::to_string(k), std::to_string(m), std::to_string(i), std::to_string(r.lobes[i]),
                   fmt(r.configuration.d[i]), fmt(xi(0)), fmt(xi(1)), fmt(xi.norm()), fmt(r.value), fmt(r.grad_norm), fmt(r.sigma),
                   r.classification, std::to_string(r.hits)});
        }
    }
    extra_["runs"] = res.runs;
    extra_["boundary_runs"] = res.boundary_runs;
    check("interior-minimum", !res.no_interior_min, double(res.minima.size()), 1);
    const int l = int(dom.lobes().size());
    if (dom.is_ball() && k == 1 && !res.minima.empty()) {
        const auto& r = res.minima[0];
        double tau0 = tau_tilde_ball_oracle(cp, dom.lobes()[0], r.configuration.xi[0]);
        double dstar = optimal_d(em, s, tau0);
        double tol = opt.objective == Objective::MonteCarlo ? 0.05 : 1e-6;
        check("closed-form-height", std::abs(r.configuration.d[0] - dstar) <= tol * dstar, r.configuration.d[0], dstar);
        double xtol = opt.objective == Objective::MonteCarlo ? 0.1 : 1e-3;
        check("centred-minimizer", r.configuration.xi[0].norm() <= xtol, r.configuration.xi[0].norm(), 0);
    }
    if (!dom.is_ball() && opt.objective == Objective::OracleDecoupled) {
        double expect = std::round(std::tgamma(l + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(l - k + 1.0)));
        check("multiplicity-binomial", double(res.minima.size()) == expect, double(res.minima.size()), expect);
    }
    // slice of the single-spike energy at its optimal height
    const json& g = sec("grid");
    const Ball bb = dom.bounding_ball();
    LobeTau lt(cp, dom);
    auto sg = energy_slice(em, s, lt, g.value("x0", bb.center(0) - bb.radius), g.value("x1", bb.center(0) + bb.radius),
                           g.value("y0", -1.0), g.value("y1", 1.0), g.value("nx", 41), g.value("ny", 41));
    svgs_.push_back({"landscape.svg", heatmap_svg(sg, "single-spike energy at optimal height, " + to_string(s.kind), &dom,
                                                  "config_hash=" + hash_ + " seed=" + std::to_string(seed_))});
}

void Run::task_dumbbell()
{
    auto cp = pair();
    const int N = cp.N;
    const json& d = sec("domain");
    const int l = d.value("lobes", 2);
    std::vector<double> etas = cfg_.value("etas", std::vector<double>{0.1, 0.03});
    SpikeConfig c;
    if (cfg_.contains("spikes")) {
        for (const auto& x : req<json>(cfg_["spikes"], "xi")) c.xi.push_back(point(x, N));
        c.d = req<std::vector<double>>(cfg_["spikes"], "d");
    } else {
        for (int i = 0; i < l; ++i) {
            c.xi.push_back(axis_point(N, 3.0 * i));
            c.d.push_back(1.0);
        }
    }
    c.delta2 = 0.1;
    auto prof = shoot_ground_state(cp);
    auto em = EnergyModel::from_profile(prof);
    auto rep = dumbbell_landscape(em, l, etas, c, mc(400000));
    auto& t = table("dumbbell", {"eta", "F_eta", "se", "F_zero", "z"},
                    {"F_eta: interaction functional on the necked domain; F_zero: decoupled lobe limit from the ball oracle"});
    for (const auto& r : rep.rows) t.add({fmt(r.eta), fmt(r.F_eta.value), fmt(r.F_eta.std_error), fmt(r.F_zero), fmt(r.z)});
    const auto& last = rep.rows.back();
    check("decoupling-3sigma", rep.within_3sigma, last.F_eta.value, last.F_zero, "z = " + fmt(last.z));
    extra_["monotone_in_eta"] = rep.monotone;
}

void Run::task_continuation()
{
    auto cp = pair();
    RateScenario s = scenario();
    const json& m = sec("mesh");
    ContinuationOptions opt;
    opt.mesh_nodes = m.value("nodes", opt.mesh_nodes);
    opt.steps_per_decade = m.value("steps_per_decade", opt.steps_per_decade);
    const double e0 = m.value("eps_start", 1e-2), e1 = m.value("eps_end", 1e-4);
    auto prof = shoot_ground_state(cp);
    auto br = continuation_run(prof, s, e0, e1, opt);
    auto& t = table("continuation", {"eps", "u_center", "v_center", "mu_est", "residual", "iters", "profile_error"},
                    {"mu_est = u_center^{-(q+1)/N}", "profile_error: sup_{|y|<=5} |mu^{N/(q+1)} u(mu y) - U(y)|"});
    double worst = 0;
    for (const auto& r : br.records) {
        t.add({fmt(r.eps), fmt(r.u_center), fmt(r.v_center), fmt(r.mu_est), fmt(r.residual), std::to_string(r.iters), fmt(r.profile_error)});
        worst = std::max(worst, r.residual);
    }
    check("branch-complete", !br.truncated, double(br.records.size()), 0, br.failure);
    check("solve-residual", worst < 1e-9, worst, 1e-9);
    auto f = rate_fit(br, cp);
    extra_["slope"] = f.slope;
    extra_["slope_ci"] = f.ci;
    extra_["predicted"] = f.predicted;
    extra_["robust_slope"] = f.robust_slope;
    extra_["d_star"] = br.d_star;
    check("rate-slope", f.pass, f.slope, f.predicted, "within 15% relative");
    char line[200];
    std::snprintf(line, sizeof line, "slope %.4f +- %.4f predicted %.4f verdict %s", f.slope, f.ci, f.predicted, f.pass ? "PASS" : "FAIL");
    log_ << line << "\n";
}

void Run::task_verify_all()
{
    auto cp = pair();
    Domain dom = domain(cp.N);
    if (!dom.is_ball()) throw Error("config", "verify-all runs on a ball");
    auto& t = table("verify", {"check", "value", "reference", "pass"});
    auto add = [&](const std::string& n, bool pass, double v, double r, const std::string& det = "") {
        check(n, pass, v, r, det);
        t.add({n, fmt(v), fmt(r), pass ? "1" : "0"});
    };
    double ir = identity_residual(cp);
    add("exponent-identities", ir < 1e-12, ir, 1e-12, "hyperbola, Holder duality, (N-2)p-2 = N(p+1)/(q+1)");
    for (const auto& pr : validate_exponent_lemmas(cp)) add("exponent:" + pr.name, pr.pass, pr.lhs, pr.rhs);
    auto prof = shoot_ground_state(cp);
    if (cp.slow_decay()) {
        auto d = decay_constants(prof);
        add("pohozaev-decay-identity", d.pohozaev_residual < 1e-3, d.pohozaev_residual, 1e-3);
    }
    const Ball B = dom.lobes()[0];
    NLGParams prm = mc(200000);
    auto tau = tau_tilde(dom, cp, B.center, prm);
    double orc = tau_tilde_radial_oracle(cp, B.radius);
    add("tau-positive", tau.value > 3 * tau.std_error, tau.value, 0);
    add("tau-mc-vs-radial-oracle", std::abs(tau.value - orc) <= 3 * tau.std_error, tau.value, orc, "se = " + fmt(tau.std_error));
    NLGParams g = prm;
    g.n_samples = sec("mc").value("gradient_samples", 200000LL);
    Vec xi = B.center + axis_point(cp.N, 0.3 * B.radius);
    auto gp = gradient_pair(dom, cp, xi, g);
    double worst = 0;
    for (size_t i = 0; i < gp.residual.value.size(); ++i)
        if (gp.residual.std_error[i] > 0) worst = std::max(worst, std::abs(gp.residual.value[i]) / gp.residual.std_error[i]);
    add("green-symmetry", worst <= 3, worst, 3, "max |p grad_x - grad_y| / sigma over components");
}

void Run::write_outputs(const std::string& failure)
{
    fs::create_directories(out_);
    json summary;
    summary["task"] = task_;
    summary["config_hash"] = hash_;
    summary["seed"] = seed_;
    summary["threads"] = threads_;
    summary["checks"] = json::array();
    bool all = failure.empty();
    for (const auto& c : checks_) {
        summary["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"reference", c.reference}, {"detail", c.detail}});
        all = all && c.pass;
    }
    if (!failure.empty()) summary["failure"] = failure;
    summary["pass"] = all;
    summary["results"] = extra_;
    summary["outputs"] = json::array();
    for (const auto& t : tables_) {
        std::ofstream f(fs::path(out_) / (t.name + ".csv"), std::ios::binary);
        f << "# lesys task=" << task_ << " config_hash=" << hash_ << " seed=" << seed_ << " threads=" << threads_ << "\n";
        for (const auto& n : t.notes) f << "# " << n << "\n";
        for (size_t i = 0; i < t.columns.size(); ++i) f << (i ? "," : "") << t.columns[i];
        f << "\n";
        for (const auto& r : t.rows) {
            for (size_t i = 0; i < r.size(); ++i) f << (i ? "," : "") << r[i];
            f << "\n";
        }
        summary["outputs"].push_back(t.name + ".csv");
    }
    for (const auto& [name, body] : svgs_) {
        std::ofstream f(fs::path(out_) / name, std::ios::binary);
        f << body;
        summary["outputs"].push_back(name);
    }
    std::ofstream f(fs::path(out_) / "summary.json", std::ios::binary);
    f << summary.dump(2) << "\n";
    for (const auto& c : checks_) log_ << (c.pass ? "PASS " : "FAIL ") << c.name << " value=" << fmt(c.value) << " ref=" << fmt(c.reference) << "\n";
}

int Run::execute()
{
    std::string failure;
    try {
        if (task_ == "bubble")
            task_bubble();
        else if (task_ == "green-probe")
            task_green_probe();
        else if (task_ == "tau-map")
            task_tau_map();
        else if (task_ == "landscape")
            task_landscape();
        else if (task_ == "dumbbell")
            task_dumbbell();
        else if (task_ == "continuation")
            task_continuation();
        else if (task_ == "verify-all")
            task_verify_all();
        else
            throw Error("config", "unknown task '" + task_ + "'");
    } catch (const Error& e) {
        if (is_config_error(e) || e.kind() == "outside" || e.kind() == "empty-grid") throw;
        failure = e.what();
        log_ << "error: " << failure << "\n";
    }
    write_outputs(failure);
    bool all = failure.empty();
    for (const auto& c : checks_) all = all && c.pass;
    return all ? 0 : 1;
}

}  // namespace

int run_config(const json& cfg, const RunOverrides& ov, std::ostream& log)
{
    try {
        Run r(cfg, ov, log);
        return r.execute();
    } catch (const Error& e) {
        log << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        log << "configuration error: " << e.what() << "\n";
        return 2;
    }
}

int run_config_file(const std::string& path, const RunOverrides& ov, std::ostream& log)
{
    std::ifstream f(path);
    if (!f) {
        log << "configuration error: cannot read " << path << "\n";
        return 2;
    }
    json cfg;
    try {
        cfg = json::parse(f, nullptr, true, true);
    } catch (const json::exception& e) {
        log << "configuration error: " << e.what() << "\n";
        return 2;
    }
    return run_config(cfg, ov, log);
}

}  // namespace lesys
