#ifndef ADMMRATE_BOUNDS_HPP
#define ADMMRATE_BOUNDS_HPP

#include "admmrate/problem.hpp"

#include <cstdint>

namespace admmrate {

// h(x) = (1-x)/(1+x) on [-1, +inf]; h(inf) = -1, h(-1) = +inf.
ExtReal h_map(ExtReal x);
double h_map(double x);

// Normalized operator data of one direction: F = E^{1/2} A, M = A'EA,
// F~ = F M^{-1/2}, S~ = M^{-1/2} S M^{-1/2}, C~ = M^{-1/2} C M^{-1/2}.
struct DirectionModel {
    Matrix F;
    Matrix M;
    Matrix M_inv_sqrt;
    Matrix F_tilde;
    Matrix S_tilde;
    Matrix C_tilde;
    bool s_infinite = false;
    Eigen::Index rank = 0;
};

struct SpectralModel {
    DirectionModel d1, d2;
    Eigen::Index m = 0;
    const DirectionModel& dir(int i) const { return i == 1 ? d1 : d2; }
};

// Eigenvalues of the Lipschitz bound matrices L_i <= dD_i <= U_i in a shared
// orthogonal eigenbasis; columns of V are the eigenvectors, so
// L = V diag(ell) V' and U = V diag(nu) V'. The trailing kernel_count entries
// of ell and nu are exactly -1 (projector onto the kernel of F).
struct DirectionSpectrum {
    Vector ell;
    Vector nu;
    Matrix V;
    Eigen::Index kernel_count = 0;
};

struct BoundSpectrum {
    DirectionSpectrum d1, d2;
    Eigen::Index m = 0;
    const DirectionSpectrum& dir(int i) const { return i == 1 ? d1 : d2; }
};

// Slope ranges alpha_{i,j} in [-n_bar, -n_low] U [p_low, p_bar] per direction.
struct DirectionBox {
    double n_bar = 0.0;
    double n_low = 0.0;
    double p_low = 0.0;
    double p_bar = 0.0;
};

struct AlphaBox {
    DirectionBox d1, d2;
    const DirectionBox& dir(int i) const { return i == 1 ? d1 : d2; }
};

SpectralModel build_spectral_model(const SplitProblem& p);

// Throws NonCommuting if S M^{-1} C != C M^{-1} S beyond tolerance.
BoundSpectrum bound_spectrum(const SpectralModel& sm);

// Smallest per-direction alpha box covering all [ell_k, nu_k] intervals.
AlphaBox alpha_box_from_spectrum(const BoundSpectrum& bs);

// Single-operator contraction factor max(-ell_min, nu_max).
double mu_single(const BoundSpectrum& bs, int i);

// Separable factor (1-q) + q mu_1 mu_2.
double mu_separable(const BoundSpectrum& bs, double q);

struct MuResult {
    double value = 0.0;
    bool exact = false; // false when the heuristic search was used
};

// Joint contraction factor max ||(1-q) I + q V1 diag(a1) V1' V2 diag(a2) V2'||
// over the box a_i in [ell_i, nu_i]. The norm is convex in each a_i block, so
// the maximum sits at a vertex; vertices are enumerated exactly when their
// count is at most 2^16, otherwise coordinate ascent plus random sampling
// returns a certified lower bound flagged as inexact.
MuResult mu_joint(const BoundSpectrum& bs, double q);

// Sampled maximum spectral radius of R(alpha) over the same box. Always a
// lower estimate (the true maximum need not sit at a vertex).
MuResult rho_joint(const BoundSpectrum& bs, double q);

struct ScalarTuning {
    double gamma = 0.0; // optimal augmentation gamma* = sqrt(sigma beta)
    double q = 0.0;     // optimal relaxation
    double mu = 0.0;    // optimal contraction factor
};

// Closed-form optimum for the scalar family C1 = 0, S1 = beta I, C2 = sigma I,
// S2 = inf, A = I, E = gamma I.
ScalarTuning optimal_scalar_tuning(double sigma, double beta);

} // namespace admmrate

#endif
