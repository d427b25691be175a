#ifndef ADMMRATE_LASSO_HPP
#define ADMMRATE_LASSO_HPP

#include "admmrate/bounds.hpp"
#include "admmrate/engine.hpp"
#include "admmrate/locus.hpp"
#include "admmrate/problem.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace admmrate {

// Sparse-design lasso instance: minimize 0.5||Omega x - o||^2 + ||w . x||_1
// split as f1 quadratic, f2 weighted l1, A1 = A2 = I, b = 0, E = eps I.
struct LassoInstance {
    Matrix omega;
    Vector o;
    Vector w;
    double eps = 1.0;
    int rows = 0, cols = 0, nnz_per_row = 0;
    std::uint64_t seed = 0;
    SplitProblem problem() const;
};

LassoInstance gen_lasso(int rows, int cols, int nnz_per_row, double eps,
                        std::uint64_t seed);

struct LassoBounds {
    AlphaBox box;
    LocusParams locus;
    double lambda_min = 0.0; // extreme eigenvalues of Omega'Omega
    double lambda_max = 0.0;
};

// Slope box straight from the quadratic's spectrum: direction 1 from
// h(lambda/eps), direction 2 the full [-1, 1].
LassoBounds lasso_bounds(const LassoInstance& inst);

// Least-squares slope of log(state delta) over the last third of the usable
// prefix (deltas above 1e-13); needs at least 20 usable records.
double fit_rate(const std::vector<IterationRecord>& history);

// Eigenvalues of the local linearization (1-q) I + q J1 J2 at the fixed
// point: J1 is the exact linear reflected map of the quadratic, J2 reads a
// +/-1 slope per coordinate from the staircase segment active at z*.
// Throws BreakpointAmbiguity when a coordinate sits on a junction.
std::vector<std::complex<double>> local_jacobian_eigs(const SplitProblem& p,
                                                      const AdmmConfig& cfg,
                                                      const Vector& z_star);

struct RateReport {
    int rows = 0, cols = 0;
    double eps = 0.0;
    std::uint64_t seed = 0;
    double q = 0.0;
    double q_star = 0.0;
    double rho_star = 0.0;       // predicted optimal factor
    double rho_at_q = 0.0;       // locus bound at the q actually run
    double mu_separable_value = 0.0;
    double empirical_rate = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<std::complex<double>> jacobian_eigs;
    LocusParams locus;
    bool eigs_in_locus = false;
    bool rate_within_bound = false;
};

// End-to-end run used by the demo command: generate, bound, tune, solve,
// fit the empirical rate and check it against the prediction.
RateReport lasso_demo(int rows, int cols, int nnz_per_row, double eps,
                      double q, std::uint64_t seed, int max_iters);

} // namespace admmrate

#endif
