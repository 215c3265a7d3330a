#pragma once

#include <string>
#include <vector>

namespace lesys {

struct CriticalPair {
    int N = 0;
    double p = 0, q = 0;
    double p_star = 0, q_star = 0;
    double gamma_N = 0;
    double gamma_tilde = 0;  // 0 when p >= N/(N-2)

    // (N-2)p-2, the decay exponent of U
    double m() const { return (N - 2) * p - 2; }
    double kU() const { return N / (q + 1); }  // U_mu = mu^{-kU} U(x/mu)
    double kV() const { return N / (p + 1); }
    bool slow_decay() const { return p < double(N) / (N - 2); }
    // range where the nonlinear regular part is C^1
    bool regular_range() const { return p > 2.0 / (N - 2) && p < double(N - 1) / (N - 2); }
};

double critical_q(int N, double p);
double sphere_area(int N);  // |S^{N-1}|
double gamma_N(int N);
CriticalPair make_pair(int N, double p);

enum class ScenarioKind { CaseI, CaseII, CaseIII, Subcritical };

struct RateScenario {
    ScenarioKind kind = ScenarioKind::CaseI;
    double alpha = 0, beta1 = 0, beta2 = 0;  // LEs couplings
    double alpha_sub = 0, beta_sub = 0;     // subcritical exponent shifts

    void validate() const;
};

std::string to_string(ScenarioKind k);
ScenarioKind scenario_from_string(const std::string& s);

double mu_rate(const RateScenario& s, int N, double p);

struct Predicate {
    std::string name;
    bool pass;
    double lhs, rhs;  // pass means lhs > rhs (or |lhs-rhs| small for identities)
};

std::vector<Predicate> validate_exponent_lemmas(const CriticalPair& cp);

// worst residual over hyperbola, duality and (N-2)p-2 = N(p+1)/(q+1)
double identity_residual(const CriticalPair& cp);

}  // namespace lesys
