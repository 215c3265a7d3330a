#include "lesys/hyperbola.hpp"
#include "lesys/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lesys {

double critical_q(int N, double p)
{
    if (N < 3) throw Error("regime", "N must be at least 3");
    double m = (N - 2) * p - 2;
    if (!(m > 0)) throw Error("regime", "p must exceed 2/(N-2)");
    // 1/(q+1) = ((N-2)p-2)/(N(p+1))
    return N * (p + 1) / m - 1;
}

double sphere_area(int N)
{
    return 2 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
}

double gamma_N(int N) { return 1.0 / ((N - 2) * sphere_area(N)); }

CriticalPair make_pair(int N, double p)
{
    CriticalPair c;
    c.N = N;
    c.p = p;
    c.q = critical_q(N, p);
    c.p_star = 1.0 / (p / (p + 1) - 1.0 / N);
    c.q_star = 1.0 / (c.q / (c.q + 1) - 1.0 / N);
    c.gamma_N = gamma_N(N);
    if (c.slow_decay())
        c.gamma_tilde = std::pow(c.gamma_N, p) / (c.m() * (N - (N - 2) * p));
    return c;
}

std::string to_string(ScenarioKind k)
{
    switch (k) {
    case ScenarioKind::CaseI: return "case-i";
    case ScenarioKind::CaseII: return "case-ii";
    case ScenarioKind::CaseIII: return "case-iii";
    case ScenarioKind::Subcritical: return "subcritical";
    }
    return "?";
}

ScenarioKind scenario_from_string(const std::string& s)
{
    if (s == "case-i" || s == "i" || s == "beta1") return ScenarioKind::CaseI;
    if (s == "case-ii" || s == "ii" || s == "alpha") return ScenarioKind::CaseII;
    if (s == "case-iii" || s == "iii" || s == "beta2") return ScenarioKind::CaseIII;
    if (s == "subcritical" || s == "sub") return ScenarioKind::Subcritical;
    throw Error("config", "unknown scenario kind '" + s + "'");
}

void RateScenario::validate() const
{
    switch (kind) {
    case ScenarioKind::CaseI:
        if (!(beta1 > 0)) throw Error("regime", "case (i) needs beta1 > 0");
        break;
    case ScenarioKind::CaseII:
        if (beta1 != 0 || !(alpha > 0)) throw Error("regime", "case (ii) needs beta1 = 0 and alpha > 0");
        break;
    case ScenarioKind::CaseIII:
        if (beta1 != 0 || alpha != 0 || !(beta2 > 0))
            throw Error("regime", "case (iii) needs beta1 = alpha = 0 and beta2 > 0");
        break;
    case ScenarioKind::Subcritical:
        if (!(alpha_sub > 0 && beta_sub > 0)) throw Error("regime", "subcritical needs alpha_sub, beta_sub > 0");
        break;
    }
}

double mu_rate(const RateScenario& s, int N, double p)
{
    double den = 0;
    switch (s.kind) {
    case ScenarioKind::CaseI:
        if (N < 4) throw Error("regime", "case (i) needs N >= 4");
        return (p + 1) / ((N - 2) * p * p - 4 * p + N - 2);
    case ScenarioKind::CaseII:
        if (N < 6) throw Error("regime", "case (ii) needs N >= 6");
        den = (N - 2) * p - 4;
        if (!(den > 0)) throw Error("regime", "case (ii) needs (N-2)p > 4");
        return 1 / den;
    case ScenarioKind::CaseIII: {
        if (N < 8) throw Error("regime", "case (iii) needs N >= 8");
        double q = critical_q(N, p);
        den = N * (p - q + 2);
        if (!(den > 0)) throw Error("regime", "case (iii) needs p - q + 2 > 0");
        return (q + 1) / den;
    }
    case ScenarioKind::Subcritical:
        if (N < 4) throw Error("regime", "subcritical rate needs N >= 4");
        den = (N - 2) * p - 2;
        if (!(den > 0)) throw Error("regime", "subcritical rate needs (N-2)p > 2");
        return 1 / den;
    }
    return 0;
}

std::vector<Predicate> validate_exponent_lemmas(const CriticalPair& c)
{
    const int N = c.N;
    const double p = c.p, q = c.q;
    std::vector<Predicate> out;
    auto gt = [&](std::string name, double lhs, double rhs) { out.push_back({std::move(name), lhs > rhs, lhs, rhs}); };
    gt("((N-2)p-2)q>N+2", c.m() * q, N + 2.0);
    gt("p*q*q_star>p+1", p * q * c.q_star, p + 1);
    if (N >= 8) gt("p+2>q", p + 2, q);
    gt("A3-finite:N>2+4/p", N, 2 + 4 / p);
    gt("A4-finite:N>4(p+1)/(2p-1)", N, 2 * p - 1 > 0 ? 4 * (p + 1) / (2 * p - 1) : INFINITY);
    double lhs = c.m(), rhs = N * (p + 1) / (q + 1);
    out.push_back({"(N-2)p-2=N(p+1)/(q+1)", std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)), lhs, rhs});
    return out;
}

double identity_residual(const CriticalPair& c)
{
    const int N = c.N;
    double r1 = std::abs(1 / (c.p + 1) + 1 / (c.q + 1) - double(N - 2) / N);
    double r2 = std::abs(1 / c.p_star + 1 / c.q_star - 1);
    double r3 = std::abs(c.m() - N * (c.p + 1) / (c.q + 1)) / std::max(1.0, c.m());
    return std::max({r1, r2, r3});
}

}  // namespace lesys
