#pragma once

#include "lesys/bubble.hpp"

#include <Eigen/SparseCore>
#include <string>
#include <vector>

namespace lesys {

// Node 0 at the origin, then geometric nodes from r_min to 1; the last node carries the Dirichlet value
struct RadialGrid {
    int N = 0;
    std::vector<double> r;
    std::vector<double> vol;  // control volumes |S^{N-1}|^{-1} |cell| of the interior nodes
    Eigen::SparseMatrix<double> L;  // flux form of -Delta on the interior nodes
    int interior() const { return int(r.size()) - 1; }
};

RadialGrid make_radial_grid(int N, int M, double r_min);

struct RadialSolution {
    std::vector<double> u, v;  // interior nodes
    double eps = 0;
    int iters = 0;
    double residual = 0;  // max |L w - vol f| / max |vol f| over both equations
};

// Newton at fixed eps from a guess; throws "newton-diverged" or "negative-solution"
RadialSolution solve_radial_system(const CriticalPair& cp, const RateScenario& s, double eps, const RadialGrid& g,
                                   std::vector<double> u, std::vector<double> v, double tol = 1e-10, int max_iter = 40);

// Newton on (u, v, log eps) with u(0) = amplitude fixed; eps is an output
RadialSolution solve_fixed_amplitude(const CriticalPair& cp, const RateScenario& s, double amplitude, double eps_guess,
                                     const RadialGrid& g, std::vector<double> u, std::vector<double> v, double tol = 1e-10,
                                     int max_iter = 40);

// Bubble ansatz mu^{-N/(q+1)} U(r/mu) - (its value at r = 1), and the same for V
void bubble_guess(const BubbleProfile& prof, double mu, const RadialGrid& g, std::vector<double>& u, std::vector<double>& v);

// sup over |y| <= ymax of |mu^{N/(q+1)} u(mu y) - U(y)| with mu = u(0)^{-(q+1)/N}
double rescaled_profile_error(const BubbleProfile& prof, const RadialGrid& g, const std::vector<double>& u, double ymax = 5);

struct BranchRecord {
    double eps, u_center, v_center, mu_est, residual;
    int iters;
    double profile_error;
};

struct ContinuationOptions {
    int mesh_nodes = 2000;
    int steps_per_decade = 20;
    double d_star = -1;      // <= 0: closed-form d* on the unit ball
    double core_factor = 0.05;  // r_min = core_factor * predicted mu at eps_end
    double eps_tol = 1e-6;      // |log(eps / target)| accepted per step
    int secant_iters = 8;
};

struct ContinuationBranch {
    RateScenario scenario;
    std::vector<BranchRecord> records;
    bool truncated = false;
    std::string failure;
    double d_star = 0;
};

ContinuationBranch continuation_run(const BubbleProfile& prof, const RateScenario& s, double eps_start, double eps_end,
                                    const ContinuationOptions& opt = {});

struct RateFit {
    double slope = 0, ci = 0;  // 95% half-width
    double predicted = 0;
    double robust_slope = 0;   // refit without the largest residual
    int points = 0;
    bool pass = false;         // |slope - predicted| <= 0.15 |predicted|
};

// least squares of log u(0) against log eps over the last decade of the branch
RateFit rate_fit(const std::vector<double>& eps, const std::vector<double>& u0, double predicted);
RateFit rate_fit(const ContinuationBranch& br, const CriticalPair& cp);

// -(N/(q+1)) times the scenario's mu exponent
double predicted_slope(const CriticalPair& cp, const RateScenario& s);

}  // namespace lesys
