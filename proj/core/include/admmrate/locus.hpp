#ifndef ADMMRATE_LOCUS_HPP
#define ADMMRATE_LOCUS_HPP

#include "admmrate/bounds.hpp"
#include "admmrate/problem.hpp"

#include <complex>
#include <utility>
#include <vector>

namespace admmrate {

// Two-level slope model: direction i takes slope p_bar_i on p_i coordinates
// and -n_bar_i on the remaining n_i, with the two splittings related by the
// orthogonal basis change G (rows split p2|n2, columns split p1|n1).
struct LevelSpec {
    double p_bar1 = 0.0;
    double n_bar1 = 0.0;
    double p_bar2 = 0.0;
    double n_bar2 = 0.0;
    Eigen::Index p1 = 0, n1 = 0, p2 = 0, n2 = 0;
    Matrix G;
    Eigen::Index m() const { return p1 + n1; }
};

// Exact eigenvalues of J1 J2 for the two-level model, from the singular
// values of one off-diagonal block of G plus multiplicity bookkeeping.
std::vector<std::complex<double>> theorem1_eigs(const LevelSpec& ls);

// Region that contains every eigenvalue of J1 J2 when the slopes range over
// an alpha box: two real intervals [-n_bar,-n_low] and [p_low,p_bar] plus the
// annulus r_low <= |z| <= r_bar for non-real eigenvalues.
struct LocusParams {
    double n_bar = 0.0, p_bar = 0.0, r_bar = 0.0;
    double n_brv = 0.0, p_brv = 0.0; // min-products at the outer levels
    double n_low = 0.0, p_low = 0.0, r_low = 0.0;
    double k1 = 0.0, k2 = 0.0;
    double c_low = 0.0, c_high = 0.0; // principal-angle cosine thresholds
};

LocusParams locus_params(const AlphaBox& box);

bool locus_contains(const LocusParams& lp, std::complex<double> lambda,
                    double tol);

// Image of the locus under lambda -> (1-q) + q lambda.
struct RLocus {
    std::pair<double, double> neg_interval;
    std::pair<double, double> pos_interval;
    double center = 0.0;
    double inner = 0.0, outer = 0.0;
};

std::complex<double> map_to_R(std::complex<double> lambda, double q);
RLocus map_to_R(const LocusParams& lp, double q);
bool rlocus_contains(const RLocus& rl, std::complex<double> lambda,
                     double tol);

// Best relaxation for a purely real locus [-n_bar, p_bar]:
// rho(q) = max(|1-q-q n_bar|, |1-q+q p_bar|).
struct QTuning {
    double q = 0.0;
    double rho = 0.0;
    bool non_convergent = false; // p_bar >= 1: no q gives rho < 1
};

double rho_max(const LocusParams& lp, double q);
QTuning optimal_q(const LocusParams& lp);

// CS decomposition of an orthogonal G with row split p2|n2 and column split
// p1|n1 in canonical order p2 <= p1 <= n1 <= n2:
//   G = blkdiag(A1, A2) * M * blkdiag(B1, B2),
// where M is the cosine-sine pattern with identity tails of sizes
// q1 = p1 - p2 and q2 = n1 - p2.
struct CSFactors {
    Matrix A1, A2; // orthogonal, p2 x p2 and n2 x n2
    Matrix B1, B2; // orthogonal, p1 x p1 and n1 x n1
    Matrix M;      // the structured middle factor
    Vector c;      // cosines, length p2, descending
    Eigen::Index p1 = 0, n1 = 0, p2 = 0, n2 = 0;
    Eigen::Index q1 = 0, q2 = 0;
};

CSFactors cs_decompose(const Matrix& G, Eigen::Index p1, Eigen::Index n1,
                       Eigen::Index p2, Eigen::Index n2);

// Checks that H = M H1 M' H2 built from the CS middle factor is
// block-diagonal: p2 coupled 2x2 blocks with the predicted entries, then
// scalar blocks -p_bar1*n_bar2 (q1 of them) and n_bar1*n_bar2 (q2 of them).
struct HStructureReport {
    int pair_blocks = 0;
    int scalar_blocks = 0;
    double max_deviation = 0.0;
};

HStructureReport verify_H_structure(const CSFactors& cs, double p_bar1,
                                    double n_bar1, double p_bar2,
                                    double n_bar2, double tol = 1e-9);

} // namespace admmrate

#endif
