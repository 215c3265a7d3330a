#include "lesys/bubble.hpp"
#include "lesys/cli.hpp"
#include "lesys/continuation.hpp"
#include "lesys/landscape.hpp"
#include "lesys/nonlinear_green.hpp"
#include "lesys/projections.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace lesys;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string f(const char* fmt, double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, x);
    return buf;
}

Outcome pohozaev()
{
    bool ok = true;
    std::string d;
    for (auto [N, p] : {std::pair{6, 1.15}, std::pair{8, 1.1}}) {
        auto t0 = std::chrono::steady_clock::now();
        auto r = decay_constants(shoot_ground_state(make_pair(N, p)));
        double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        ok = ok && r.pohozaev_residual < 1e-3 && sec < 30;
        d += "N=" + std::to_string(N) + " residual " + f("%.2e", r.pohozaev_residual) + " (" + f("%.1f", sec) + " s) ";
    }
    return {ok, d + "tol 1e-3"};
}

Outcome talenti_oracle()
{
    bool ok = true;
    std::string d;
    for (int N : {4, 6, 8}) {
        auto prof = shoot_ground_state(make_pair(N, double(N + 2) / (N - 2)));
        double e = talenti_error(prof, 20);
        ok = ok && e < 1e-6;
        d += "N=" + std::to_string(N) + " sup " + f("%.1e", e) + " ";
        if (N == 8) {
            double K = fast_decay_constant(prof);
            ok = ok && std::abs(K - 110592) <= 1e-3 * 110592;
            d += "decay " + f("%.2f", K) + " vs 110592";
        }
    }
    return {ok, d};
}

Outcome symmetry()
{
    auto cp = make_pair(8, 1.1);
    Domain dom = Domain::ball(8);
    NLGParams prm;
    prm.n_samples = 1000000;
    prm.threads = default_threads();
    bool ok = true;
    double worst_z = 0, worst_rel = 0;
    const double probes[5][2] = {{0.2, 0}, {0.4, 0.1}, {0, 0.5}, {-0.3, -0.3}, {0.6, 0}};
    for (int k = 0; k < 5; ++k) {
        prm.seed = derive_seed(2024, k);
        Vec xi = axis_point(8, probes[k][0], probes[k][1]);
        auto g = gradient_pair(dom, cp, xi, prm);
        double r2 = 0, s2 = 0, t2 = 0, ts2 = 0;
        for (int i = 0; i < 8; ++i) {
            r2 += g.residual.value[i] * g.residual.value[i];
            s2 += g.residual.std_error[i] * g.residual.std_error[i];
            t2 += g.grad_tau.value[i] * g.grad_tau.value[i];
            ts2 += g.grad_tau.std_error[i] * g.grad_tau.std_error[i];
        }
        // component along the gradient of tau, the only one with a nonzero mean
        Vec e = xi / xi.norm();
        double rpar = 0, spar = 0;
        for (int i = 0; i < 8; ++i) rpar += e(i) * g.residual.value[i], spar += e(i) * e(i) * g.residual.std_error[i] * g.residual.std_error[i];
        double z = std::max(std::sqrt(r2 / s2), std::abs(rpar) / std::sqrt(spar));
        double rel = std::sqrt(ts2 / t2);
        worst_z = std::max(worst_z, z);
        worst_rel = std::max(worst_rel, rel);
        ok = ok && z <= 3 && rel <= 0.05;
    }
    return {ok, "5 probes, 1e6 samples: max |p grad_x - grad_y| / sigma " + f("%.2f", worst_z) + " (tol 3), max sigma/|grad tau| " +
                    f("%.3f", worst_rel) + " (tol 0.05)"};
}

Outcome cross_oracle()
{
    bool ok = true;
    std::string d;
    for (auto [N, p] : {std::pair{6, 1.15}, std::pair{8, 1.1}}) {
        auto cp = make_pair(N, p);
        NLGParams prm;
        prm.n_samples = 200000;
        prm.seed = 99;
        prm.threads = default_threads();
        auto t = tau_tilde(Domain::ball(N), cp, axis_point(N, 0), prm);
        double o = tau_tilde_radial_oracle(cp);
        double z = std::abs(t.value - o) / t.std_error, rel = t.std_error / t.value;
        ok = ok && z <= 3 && rel <= 0.02;
        d += "N=" + std::to_string(N) + " MC " + f("%.6e", t.value) + " oracle " + f("%.6e", o) + " z " + f("%.2f", z) + " rel " +
             f("%.4f", rel) + " ";
    }
    return {ok, d};
}

Outcome projections()
{
    auto prof = shoot_ground_state(make_pair(8, 1.1));
    auto s = expansion_sweep(prof, {0.05, 0.02, 0.01}, 0.1);
    std::string d = "orders U " + f("%.3f", s.order_U) + ">" + f("%.3f", s.lead_U) + " V " + f("%.3f", s.order_V) + ">" +
                    f("%.3f", s.lead_V) + " Phi " + f("%.3f", s.order_Phi) + ">" + f("%.3f", s.lead_Phi) + " bPU " +
                    f("%.3f", s.order_bPU) + ">" + f("%.3f", s.lead_bPU) + " (margin 0.1)";
    return {s.pass, d};
}

Outcome rates()
{
    auto cp = make_pair(8, 1.1);
    auto prof = shoot_ground_state(cp);
    bool ok = true;
    std::string d;
    for (RateScenario s : {RateScenario{ScenarioKind::CaseI, 0, 1, 0, 0, 0}, RateScenario{ScenarioKind::CaseII, 1, 0, 0, 0, 0},
                           RateScenario{ScenarioKind::Subcritical, 0, 0, 0, 1, 1}}) {
        auto br = continuation_run(prof, s, 1e-2, 1e-4);
        auto r = rate_fit(br, cp);
        double decades = std::log10(br.records.front().eps / br.records.back().eps);
        ok = ok && !br.truncated && r.pass && decades >= 1;
        d += to_string(s.kind) + " " + f("%.4f", r.slope) + " vs " + f("%.4f", r.predicted) + " ";
    }
    return {ok, d + "(15% relative)"};
}

Outcome multiplicity()
{
    auto em = EnergyModel::from_profile(shoot_ground_state(make_pair(8, 1.1)));
    RateScenario s{ScenarioKind::CaseI, 0, 1, 0, 0, 0};
    LandscapeOptions opt;
    opt.starts = 24;
    opt.seed = 7;
    bool ok = true;
    std::string d;
    for (auto [l, k] : {std::pair{2, 1}, std::pair{2, 2}, std::pair{3, 1}}) {
        auto r = minimize_landscape(em, Domain::chain(8, l, 0.05), k, s, opt);
        int expect = l == 3 ? 3 : l == 2 && k == 1 ? 2 : 1;
        ok = ok && int(r.minima.size()) == expect;
        d += "(" + std::to_string(l) + "," + std::to_string(k) + ") " + std::to_string(r.minima.size()) + "/" + std::to_string(expect) + " ";
    }
    return {ok, d};
}

Outcome decoupling()
{
    auto em = EnergyModel::from_profile(shoot_ground_state(make_pair(8, 1.1)));
    SpikeConfig c{{axis_point(8, 0), axis_point(8, 3)}, {1, 0.8}, {}, 0.1, 0.1};
    NLGParams prm;
    prm.n_samples = 400000;
    prm.seed = 31;
    prm.threads = default_threads();
    auto rep = dumbbell_landscape(em, 2, {0.03}, c, prm);
    const auto& r = rep.rows.back();
    return {rep.within_3sigma, "eta 0.03: F " + f("%.1f", r.F_eta.value) + " +- " + f("%.1f", r.F_eta.std_error) + " vs lobe limit " +
                                   f("%.1f", r.F_zero) + ", z " + f("%.2f", r.z)};
}

Outcome predicates()
{
    std::mt19937_64 rng(12345);
    int bad = 0;
    double worst = 0;
    for (int t = 0; t < 1000; ++t) {
        int N = 4 + int(rng() % 9);
        std::uniform_real_distribution<double> U(1, double(N - 1) / (N - 2));
        double p;
        do p = U(rng);
        while (p <= 1);
        auto cp = make_pair(N, p);
        double r = identity_residual(cp);
        worst = std::max(worst, r);
        if (!(r < 1e-12)) ++bad;
        if (N >= 8)
            for (const auto& pr : validate_exponent_lemmas(cp))
                if (!pr.pass) ++bad;
    }
    return {bad == 0, "1000 pairs, failures " + std::to_string(bad) + ", worst identity residual " + f("%.1e", worst)};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome reproducibility()
{
    const char* configs[] = {
        R"({"task":"green-probe","N":8,"p":1.1,"mc":{"seed":5,"samples":5000,"walks":5000}})",
        R"({"task":"tau-map","N":8,"p":1.1,"mc":{"seed":5,"samples":2000},"tau":{"method":"mc"},"grid":{"nx":4,"ny":3}})",
        R"({"task":"landscape","N":8,"p":1.1,"mc":{"seed":5},"landscape":{"k":1,"starts":4},"grid":{"nx":9,"ny":9}})",
        R"({"task":"bubble","N":6,"p":1.15,"mc":{"seed":5}})"};
    int files = 0, diff = 0;
    std::ostringstream log;
    for (int i = 0; i < 4; ++i) {
        auto cfg = nlohmann::json::parse(configs[i]);
        fs::path a = fs::temp_directory_path() / ("lesys_repro_a" + std::to_string(i)), b = fs::temp_directory_path() / ("lesys_repro_b" + std::to_string(i));
        fs::remove_all(a);
        fs::remove_all(b);
        RunOverrides oa, ob;
        oa.out_dir = a.string();
        ob.out_dir = b.string();
        if (run_config(cfg, oa, log) == 2 || run_config(cfg, ob, log) == 2) return {false, "configuration error"};
        for (const auto& e : fs::directory_iterator(a)) {
            if (e.path().extension() != ".csv") continue;
            ++files;
            if (slurp(e.path()) != slurp(b / e.path().filename())) ++diff;
        }
    }
    return {files > 0 && diff == 0, std::to_string(files) + " CSVs re-run, " + std::to_string(diff) + " differ"};
}

}  // namespace

int main(int argc, char** argv)
{
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
        double budget;  // seconds
    };
    const Criterion all[] = {{"pohozaev decay identity", pohozaev, 60},
                             {"talenti oracle", talenti_oracle, 30},
                             {"green symmetry", symmetry, 600},
                             {"cross-oracle tau", cross_oracle, 600},
                             {"projection expansions", projections, 120},
                             {"rate exponents", rates, 1800},
                             {"dumbbell multiplicity", multiplicity, 300},
                             {"decoupling", decoupling, 900},
                             {"algebraic predicates", predicates, 1},
                             {"reproducibility", reproducibility, 600}};
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    int failed = 0;
    for (int i = 0; i < 10; ++i) {
        if (!only.empty() && !only.count(i + 1)) continue;
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = all[i].run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool pass = o.pass && sec <= all[i].budget;
        if (!pass) ++failed;
        std::printf("[%s] %2d %s: %s; %.1f s (budget %.0f s)\n", pass ? "PASS" : "FAIL", i + 1, all[i].name, o.detail.c_str(), sec,
                    all[i].budget);
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
