#pragma once

#include "lesys/mc.hpp"

#include <Eigen/Core>
#include <functional>
#include <string>
#include <vector>

namespace lesys {

constexpr int kMaxDim = 16;
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;

Vec axis_point(int N, double x1, double x2 = 0);

struct Ball {
    Vec center;
    double radius = 1;
};

// Lobes are balls centred on the x1-axis joined by cylinders of radius eta; the cylinder between
// consecutive lobes runs from one centre to the next.
class Domain {
public:
    static Domain ball(int N, double radius = 1, Vec center = {});
    static Domain dumbbell(int N, std::vector<Ball> lobes, double eta);
    // l unit balls with centres spaced `spacing` apart along x1, starting at the origin
    static Domain chain(int N, int l, double eta, double spacing = 3.0);

    int dim() const { return N_; }
    bool is_ball() const { return lobes_.size() == 1 && eta_ == 0; }
    const std::vector<Ball>& lobes() const { return lobes_; }
    double eta() const { return eta_; }

    // Lower bound on the distance to the boundary (exact for a ball); <= 0 outside
    double inside_distance(const Vec& x) const;
    bool inside(const Vec& x) const { return inside_distance(x) > 0; }
    Ball bounding_ball() const { return bound_; }
    double diameter() const { return 2 * bound_.radius; }
    // index of the lobe containing x, or -1 (neck or outside)
    int lobe_of(const Vec& x) const;
    // nearest point on the boundary piece that realises inside_distance
    Vec project_to_boundary(const Vec& x) const;
    std::string describe() const;

private:
    int N_ = 0;
    std::vector<Ball> lobes_;
    double eta_ = 0;
    Ball bound_;
};

double newton_kernel(int N, double dist);  // gamma_N |x-y|^{2-N}

double ball_robin_H(const Ball& b, const Vec& x, const Vec& y);
double ball_green(const Ball& b, const Vec& x, const Vec& y);
Vec ball_grad_x_H(const Ball& b, const Vec& x, const Vec& y);

struct WosParams {
    long long n_walks = 100000;
    double shell_eps = -1;  // <= 0: 1e-5 * diameter
    long long step_cap = 100000;
    std::uint64_t seed = 1;
    int threads = 1;
};

double resolved_shell(const Domain& d, const WosParams& p);

// One walk from x; returns the exit point (first point with inside distance below eps) projected onto the boundary
Vec wos_exit(const Domain& d, const Vec& x, double eps, long long step_cap, Stream& st);

MCEstimate wos_harmonic(const Domain& d, const Vec& x, const std::function<double(const Vec&)>& boundary,
                        const WosParams& p);

MCEstimate robin_H(const Domain& d, const Vec& x, const Vec& y, const WosParams& p);

struct NeckRow {
    double eta;
    int pair;
    MCEstimate H;
    double lobe_value;  // single-ball H for the lobe holding the pair
};

std::vector<NeckRow> neck_limit_check(int N, const std::vector<double>& etas, const std::vector<std::pair<Vec, Vec>>& probes,
                                      const WosParams& p, double spacing = 3.0);

}  // namespace lesys
