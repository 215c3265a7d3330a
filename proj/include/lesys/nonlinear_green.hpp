#pragma once

#include "lesys/green.hpp"
#include "lesys/hyperbola.hpp"

#include <gsl/gsl_interp.h>
#include <memory>
#include <vector>

namespace lesys {

struct NLGParams {
    long long n_samples = 200000;
    std::uint64_t seed = 1;
    int threads = 1;
    // mixture weights: uniform on the bounding ball, power laws at the singular points, exterior tail
    double w_uniform = 0.3;
    double w_singular = 0.5;
    double w_exterior = 0.2;
    // walks per sample and per factor when G has no closed form
    int inner_walks = 4;
    WosParams wos;
    double max_rel_error = 0.2;
};

// Spike configuration (k, d, xi, lambda) with the bounds of the configuration space
struct SpikeConfig {
    std::vector<Vec> xi;
    std::vector<double> d;
    std::vector<int> lambda;  // empty: all +1
    double delta1 = 0.1;
    double delta2 = -1;  // <= 0: 0.1 * diameter

    int k() const { return int(xi.size()); }
    int sign(int i) const { return lambda.empty() ? 1 : lambda[i]; }
    static SpikeConfig single(const Vec& xi, double d = 1) { return {{xi}, {d}, {}, 0.1, -1}; }
};

double resolved_delta2(const Domain& dom, const SpikeConfig& c);
// throws "config" unless the configuration lies in the admissible set
void check_config(const Domain& dom, const SpikeConfig& c);

// Regular part of the k-spike nonlinear Green function at each of the points xs (common samples)
MCVector h_tilde_config_multi(const Domain& dom, const CriticalPair& cp, const SpikeConfig& c, const std::vector<Vec>& xs,
                              const NLGParams& prm);
// sum_j w_j H~(x_j) with its own standard error
MCEstimate h_tilde_weighted_sum(const Domain& dom, const CriticalPair& cp, const SpikeConfig& c, const std::vector<Vec>& xs,
                                const std::vector<double>& w, const NLGParams& prm);
MCEstimate h_tilde_config(const Domain& dom, const CriticalPair& cp, const SpikeConfig& c, const Vec& x, const NLGParams& prm);

MCEstimate h_tilde_mc(const Domain& dom, const CriticalPair& cp, const Vec& x, const Vec& y, const NLGParams& prm);
MCEstimate tau_tilde(const Domain& dom, const CriticalPair& cp, const Vec& xi, const NLGParams& prm);

// tau at the centre of a ball of radius R from the radial problem
double tau_tilde_radial_oracle(const CriticalPair& cp, double R = 1);
// p = 1: regular part of the Navier Green function of the bi-Laplacian at the centre
double tau_tilde_navier_center(int N, double R = 1);
// tau at any point of a ball by axisymmetric quadrature of the representation formula
double tau_tilde_ball_oracle(const CriticalPair& cp, const Ball& b, const Vec& xi);

// Tabulated ball tau as a function of |xi - centre|, for optimisation loops
class TauBallTable {
public:
    TauBallTable(const CriticalPair& cp, double radius, double max_frac = 0.95, int nodes = 64);
    double operator()(double dist_from_center) const;
    double radius() const { return R_; }

private:
    double R_, smax_;
    std::vector<double> s_, v_;
    std::shared_ptr<gsl_interp> interp_;
};

struct GradientPair {
    MCVector grad_x;    // grad_x H~(x, xi) at x = xi
    MCVector grad_y;    // grad_y H~(xi, y) at y = xi, independent samples
    MCVector residual;  // p grad_x - grad_y
    MCVector grad_tau;  // (p + 1) grad_x
};

// Ball domains only
GradientPair gradient_pair(const Domain& dom, const CriticalPair& cp, const Vec& xi, const NLGParams& prm);
MCVector grad_tau(const Domain& dom, const CriticalPair& cp, const Vec& xi, const NLGParams& prm);
MCVector symmetry_residual(const Domain& dom, const CriticalPair& cp, const Vec& xi, const NLGParams& prm);

struct GrowthRow {
    double dist;
    double tau_oracle;
    MCEstimate dtau;      // radial derivative, Monte Carlo
    double dtau_oracle;   // radial derivative, central difference of the quadrature oracle
};

struct GrowthReport {
    std::vector<GrowthRow> rows;
    double slope;        // log-log slope of the radial derivative against dist over the inner probes
    double predicted;    // 1 - (N-2)p
    bool monotone;
    bool pass;
};

GrowthReport boundary_growth_probe(const CriticalPair& cp, const std::vector<double>& dists, const NLGParams& prm);

}  // namespace lesys
