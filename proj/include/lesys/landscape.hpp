#pragma once

#include "lesys/bubble.hpp"
#include "lesys/nonlinear_green.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace lesys {

// Bubble data the reduced energy depends on
struct EnergyModel {
    CriticalPair cp;
    double a = 0, b = 0;  // decay constants of U and V
    BubbleConstants K;

    static EnergyModel from_profile(const BubbleProfile& prof);
    double A(int i) const { return K.A[i - 1]; }
    double bg_p() const { return std::pow(b / cp.gamma_N, cp.p); }  // (b/gamma_N)^p
};

struct LandscapeCoefficients {
    int k = 1;
    double C0, C1, C2, C3, C4, C5, C6, C7;
};

// alpha, beta of the logarithmic terms are the subcritical shifts of the scenario
LandscapeCoefficients landscape_coefficients(const EnergyModel& em, const RateScenario& s, int k);

// Exponents of d in the single-spike energy: C1 d^a tau - B d^b (b = 0 stands for the log term)
struct EnergyExponents {
    double a, b;
    double B;  // weight of the competing term including its coupling
};

EnergyExponents energy_exponents(const EnergyModel& em, const RateScenario& s);

double single_spike_energy(const EnergyModel& em, const RateScenario& s, double d, double tau);
double optimal_d(const EnergyModel& em, const RateScenario& s, double tau);

// F1 for a configuration with signs; the pair interaction is exact, H~ comes from Monte Carlo
MCEstimate F1(const EnergyModel& em, const Domain& dom, const SpikeConfig& c, const NLGParams& prm);
// scenario part of the energy with the mu powers removed: eps F2 / mu^{(N-2)p-2} at the scenario rate
double F2_reduced(const EnergyModel& em, const RateScenario& s, const SpikeConfig& c);
// F2 at an explicit mu, all three coupling terms
double F2(const EnergyModel& em, const RateScenario& s, const SpikeConfig& c, double mu);
double F3(const EnergyModel& em, const RateScenario& s, const SpikeConfig& c);

// tau~ of the lobe containing a point, from tabulated ball oracles
class LobeTau {
public:
    LobeTau(const CriticalPair& cp, const Domain& dom, double max_frac = 0.95);
    // NaN outside every lobe or beyond the tabulated range
    double operator()(const Vec& x) const;
    const Domain& domain() const { return dom_; }

private:
    Domain dom_;
    std::vector<TauBallTable> tables_;
};

enum class Objective { OracleDecoupled, MonteCarlo };

struct LandscapeOptions {
    Objective objective = Objective::OracleDecoupled;
    int starts = 24;
    std::uint64_t seed = 1;
    double delta1 = 1e-3;
    double delta2 = -1;  // <= 0: 0.2 * smallest lobe radius
    double tol = 1e-10;  // simplex size at convergence, scaled variables
    int max_iter = 40000;
    int restarts = 3;
    NLGParams mc;  // Monte Carlo objective: one seed per run, fresh seed for the final value
};

struct CriticalPointResult {
    SpikeConfig configuration;
    std::vector<int> lobes;  // lobe index of each spike
    double value = 0;
    double sigma = 0;        // Monte Carlo standard error of value, 0 for oracle objectives
    double grad_norm = 0;
    std::string classification;  // min, saddle, unclassified
    int hits = 1;                // runs that landed here
};

struct LandscapeResult {
    std::vector<CriticalPointResult> minima;
    int runs = 0;
    int boundary_runs = 0;
    bool no_interior_min = false;
};

LandscapeResult minimize_landscape(const EnergyModel& em, const Domain& dom, int k, const RateScenario& s,
                                   const LandscapeOptions& opt = {});

struct DecouplingRow {
    double eta;
    MCEstimate F_eta;
    double F_zero;  // (b/gamma)^p sum d_i^{N(p+1)/(q+1)} tau_lobe(xi_i)
    double z;
};

struct DecouplingReport {
    std::vector<DecouplingRow> rows;
    bool within_3sigma = false;  // at the smallest eta
    bool monotone = true;        // F^eta increasing as eta decreases, up to 2 sigma
};

// F^eta along a family of two-or-more-lobe chains at fixed spikes, against the decoupled limit
DecouplingReport dumbbell_landscape(const EnergyModel& em, int lobes, const std::vector<double>& etas, const SpikeConfig& c,
                                    const NLGParams& prm);

MCEstimate signed_F1(const EnergyModel& em, const Domain& dom, const SpikeConfig& c, const NLGParams& prm);

struct ConjectureRow {
    Vec xi1, xi2;
    double d1, d2;
    MCEstimate F1t;
    double ratio, ratio_se;
};

struct ConjectureReport {
    std::vector<ConjectureRow> rows;
    double inf_ratio = 0, inf_se = 0;
    std::string status = "open conjecture, evidence only";
};

// xi pairs on the x1-axis at +-s for s in sep, d1, d2 over d_grid, signs (+1,-1)
ConjectureReport conjecture_scan(const EnergyModel& em, const Domain& dom, const std::vector<double>& sep,
                                 const std::vector<double>& d_grid, const NLGParams& prm, double delta1 = 0.1);

struct SliceGrid {
    int nx = 0, ny = 0;
    double x0, x1, y0, y1;
    std::vector<double> v;  // row-major, ny rows; NaN outside the lobes
};

// single-spike energy at d = d*(xi) on the (x1, x2) plane from the lobe oracles
SliceGrid energy_slice(const EnergyModel& em, const RateScenario& s, const LobeTau& tau, double x0, double x1, double y0,
                       double y1, int nx, int ny);

}  // namespace lesys
