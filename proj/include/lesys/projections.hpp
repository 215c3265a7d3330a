#pragma once

#include "lesys/bubble.hpp"

#include <functional>
#include <vector>

namespace lesys {

// Gauss-Legendre panels on [0,1]: one panel [0, r_first], geometric panels up to 1, halving toward r = 1
struct RadialMesh {
    int order = 12;
    std::vector<double> edges;
    std::vector<double> nodes;  // panel-major, `order` nodes per panel
};

RadialMesh make_radial_mesh(double r_first, int panels_per_decade = 24, int order = 12);

struct RadialField {
    std::vector<double> r, w;  // w at the mesh nodes
    double w0 = 0;             // value at r = 0
    double residual = 0;       // flux-form residual of the re-applied operator, relative
};

// -(w'' + (N-1) w'/r) = f on the unit ball, w(1) = 0; f given at the mesh nodes
RadialField radial_dirichlet_solve(const RadialMesh& mesh, int N, const std::vector<double>& f);
RadialField radial_dirichlet_solve(const RadialMesh& mesh, int N, const std::function<double(double)>& f);

// H~(x, 0) on the unit ball as a function of |x|
double h_tilde_radial_ball(const CriticalPair& cp, double r);

struct ProjectionSample {
    double mu = 0;
    double e_U = 0, e_V = 0, e_Psi = 0, e_Phi = 0, e_bPU = 0;
    double max_residual = 0;
    bool positive = true;   // projected fields positive in the interior
    bool ordered = true;    // PU < U_mu and PV < V_mu
};

// Single centred spike on the unit ball, sup norms over mesh nodes in [0.2, 0.9]
ProjectionSample project_all(const BubbleProfile& prof, double mu);

struct ProjectionSweep {
    std::vector<ProjectionSample> samples;
    // fitted log-log orders and the leading orders they must exceed
    double order_U, order_V, order_Psi, order_Phi, order_bPU;
    double lead_U, lead_V, lead_Psi, lead_Phi, lead_bPU;
    bool pass = false;  // every fitted order exceeds its leading order by the margin
};

ProjectionSweep expansion_sweep(const BubbleProfile& prof, const std::vector<double>& mus, double margin = 0.1);

}  // namespace lesys
