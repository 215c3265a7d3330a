#pragma once

#include "lesys/hyperbola.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace lesys {

struct ShootOptions {
    double R_max = 100;      // profile stored on [0, R_max]
    double tol = 1e-17;      // relative bisection width on v0
    int nodes = 4001;        // grid nodes, uniform in log(1+r)
    double R_cap = 1e6;      // classification horizon
    std::optional<std::array<double, 2>> bracket;  // initial v0 bracket
};

// Large-r laws U ~ sum uc[j] r^ue[j]; V = b r^{2-N} plus the flux correction of U^q.
// In the fast regime (p >= N/(N-2)) V ~ sum vc[j] r^ve[j] instead.
struct TailModel {
    std::vector<double> ue, uc, ve, vc;
    double a = 0, b = 0;
    bool fast = false;
    double a_variation = 0, b_variation = 0;  // spread of the corrected estimators over the fit window
};

class BubbleProfile {
public:
    CriticalPair pair;
    std::vector<double> r, U, V, Up, Vp;
    double v0 = 0;
    double v0_width = 0;  // final bisection bracket width
    int bisections = 0;
    TailModel tail;

    double R_max() const { return r.back(); }

    // (U, V, U', V') at radius s >= 0; tail laws beyond R_max
    std::array<double, 4> eval(double s) const;
    double Uat(double s) const { return eval(s)[0]; }
    double Vat(double s) const { return eval(s)[1]; }

    // mu^{-N/(q+1)} U(|x-xi|/mu), mu^{-N/(p+1)} V(|x-xi|/mu) given |x-xi|
    std::array<double, 2> scaled(double mu, double dist) const;

    double ds() const { return ds_; }
    void finalize_grid(double ds) { ds_ = ds; }

private:
    double ds_ = 0;
    std::array<double, 4> tail_eval(double s) const;
};

BubbleProfile shoot_ground_state(const CriticalPair& cp, const ShootOptions& opt = {});

// Which component of the radial solution started from V(0)=v0 turns negative first
// (+1: U first, v0 too large; -1: V first, v0 too small; 0: neither before R_cap)
int classify_shot(const CriticalPair& cp, long double v0, double R_cap);

struct DecayReport {
    double a = 0, b = 0;
    double pohozaev_residual = 0;  // |b^p - a m (N-(N-2)p)| / b^p
    double a_window_variation = 0, b_window_variation = 0;
    bool plateau = true;
};

DecayReport decay_constants(const BubbleProfile& prof);

struct RefinedDecay {
    double slope_V = 0, bound_V = 0;  // fitted log-log slope of |V - b r^{2-N}|
    double slope_U = 0, bound_U = 0;
    double remV5 = 0, remV10 = 0;
    bool pass = false;
};

RefinedDecay refined_decay_check(const BubbleProfile& prof);

struct BubbleConstants {
    std::array<double, 7> A{};      // A1..A7
    std::array<double, 7> err{};    // quadrature error estimate
    std::array<double, 7> tail_fraction{};
    std::array<bool, 7> finite{};
    bool flagged = false;  // a tail fraction above 1%
};

BubbleConstants bubble_constants(const BubbleProfile& prof);

struct KernelElement {
    int ell = 0;  // 0: dilation, >=1: translation (radial factor)
    std::vector<double> Psi, Phi;
};

std::vector<KernelElement> kernel_elements(const BubbleProfile& prof);
double kernel_residual(const BubbleProfile& prof, const KernelElement& el);

double talenti(int N, double r);

// sup |U - talenti| on [0, R] (p must be (N+2)/(N-2))
double talenti_error(const BubbleProfile& prof, double R);

// constant K in U ~ K r^{2-N} for the fast-decay case
double fast_decay_constant(const BubbleProfile& prof);

}  // namespace lesys
