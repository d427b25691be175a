#ifndef ADMMRATE_TEST_HELPERS_HPP
#define ADMMRATE_TEST_HELPERS_HPP

#include <admmrate/bounds.hpp>
#include <admmrate/engine.hpp>
#include <admmrate/locus.hpp>
#include <admmrate/problem.hpp>
#include <admmrate/rng.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <limits>
#include <vector>

namespace testutil {

using admmrate::Matrix;
using admmrate::Rng;
using admmrate::Vector;

inline Matrix random_gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = rng.normal();
    return m;
}

inline Vector random_vector(Rng& rng, Eigen::Index n) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.normal();
    return v;
}

// Haar-ish orthogonal matrix: QR of a Gaussian with sign-fixed R diagonal.
inline Matrix random_orthogonal(Rng& rng, Eigen::Index n) {
    const Matrix g = random_gaussian(rng, n, n);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix Q = qr.householderQ() * Matrix::Identity(n, n);
    const Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (R(i, i) < 0) Q.col(i) = -Q.col(i);
    }
    return Q;
}

inline Matrix random_spd(Rng& rng, Eigen::Index n, double min_eig,
                         double max_eig) {
    const Matrix V = random_orthogonal(rng, n);
    Vector d(n);
    for (Eigen::Index i = 0; i < n; ++i) d[i] = rng.uniform(min_eig, max_eig);
    return V * d.asDiagonal() * V.transpose();
}

// Random convex quadratic/quadratic split problem with square full-rank A_i.
inline admmrate::SplitProblem random_quadratic_problem(Rng& rng,
                                                       Eigen::Index m) {
    admmrate::SplitProblem p;
    p.f1 = admmrate::SeparableFunction::quadratic(random_spd(rng, m, 0.1, 3.0),
                                                  random_vector(rng, m));
    p.f2 = admmrate::SeparableFunction::quadratic(random_spd(rng, m, 0.1, 3.0),
                                                  random_vector(rng, m));
    p.A1 = random_orthogonal(rng, m) +
           0.1 * random_gaussian(rng, m, m); // well-conditioned, non-trivial
    p.A2 = random_orthogonal(rng, m) + 0.1 * random_gaussian(rng, m, m);
    p.b = random_vector(rng, m);
    p.E = random_spd(rng, m, 0.5, 2.0);
    return p;
}

// Quadratic f1 / weighted-l1 f2 with diagonal A and E (prox-friendly).
inline admmrate::SplitProblem random_l1_problem(Rng& rng, Eigen::Index m) {
    admmrate::SplitProblem p;
    p.f1 = admmrate::SeparableFunction::quadratic(random_spd(rng, m, 0.1, 3.0),
                                                  random_vector(rng, m));
    Vector w(m);
    for (Eigen::Index i = 0; i < m; ++i) w[i] = rng.uniform(0.1, 1.0);
    p.f2 = admmrate::SeparableFunction::weighted_l1(w);
    p.A1 = random_gaussian(rng, m, m);
    Vector a2(m), e(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        a2[i] = rng.uniform(0.5, 1.5) * (rng.bits() & 1 ? 1.0 : -1.0);
        e[i] = rng.uniform(0.5, 2.0);
    }
    p.A2 = Matrix(a2.asDiagonal());
    p.E = Matrix(e.asDiagonal());
    p.b = Vector::Zero(m);
    return p;
}

// Max distance of a greedy globally-nearest matching between two complex
// multisets. Returns +inf on size mismatch.
inline double multiset_distance(std::vector<std::complex<double>> a,
                                std::vector<std::complex<double>> b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    std::vector<bool> used_a(a.size(), false), used_b(b.size(), false);
    for (std::size_t round = 0; round < a.size(); ++round) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (used_a[i]) continue;
            for (std::size_t j = 0; j < b.size(); ++j) {
                if (used_b[j]) continue;
                const double d = std::abs(a[i] - b[j]);
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        }
        used_a[bi] = used_b[bj] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

// Dense oracle for the two-level model: eigenvalues of G H1 G' H2.
inline std::vector<std::complex<double>> level_spec_oracle(
    const admmrate::LevelSpec& ls) {
    const Eigen::Index m = ls.m();
    Vector h1(m), h2(m);
    h1.head(ls.p1).setConstant(ls.p_bar1);
    h1.tail(ls.n1).setConstant(-ls.n_bar1);
    h2.head(ls.p2).setConstant(ls.p_bar2);
    h2.tail(ls.n2).setConstant(-ls.n_bar2);
    const Matrix N =
        ls.G * h1.asDiagonal() * ls.G.transpose() * h2.asDiagonal();
    Eigen::EigenSolver<Matrix> es(N, false);
    std::vector<std::complex<double>> out(m);
    for (Eigen::Index i = 0; i < m; ++i) out[i] = es.eigenvalues()[i];
    return out;
}

inline admmrate::LevelSpec random_level_spec(Rng& rng, Eigen::Index m,
                                             double level_lo = 0.05,
                                             double level_hi = 2.0) {
    admmrate::LevelSpec ls;
    ls.p_bar1 = rng.uniform(level_lo, level_hi);
    ls.n_bar1 = rng.uniform(level_lo, level_hi);
    ls.p_bar2 = rng.uniform(level_lo, level_hi);
    ls.n_bar2 = rng.uniform(level_lo, level_hi);
    ls.p1 = static_cast<Eigen::Index>(rng.integer(m + 1));
    ls.n1 = m - ls.p1;
    ls.p2 = static_cast<Eigen::Index>(rng.integer(m + 1));
    ls.n2 = m - ls.p2;
    ls.G = random_orthogonal(rng, m);
    return ls;
}

} // namespace testutil

#endif
