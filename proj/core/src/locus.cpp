#include "admmrate/locus.hpp"

#include "admmrate/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace admmrate {

namespace {

void check_orthogonal(const Matrix& G, const char* what) {
    if (G.rows() != G.cols()) throw NotOrthogonal(std::string(what) + " is not square");
    const Matrix R = G.transpose() * G - Matrix::Identity(G.cols(), G.cols());
    if (R.cwiseAbs().maxCoeff() > 1e-8 * std::max<double>(1, G.cols())) {
        throw NotOrthogonal(std::string(what) + " is not orthogonal");
    }
}

struct Side {
    double pb, nb;
    Eigen::Index p, n;
};

} // namespace

std::vector<std::complex<double>> theorem1_eigs(const LevelSpec& ls) {
    if (ls.p1 < 0 || ls.n1 < 0 || ls.p2 < 0 || ls.n2 < 0 ||
        ls.p1 + ls.n1 != ls.p2 + ls.n2 || ls.p1 + ls.n1 != ls.G.rows()) {
        throw DegenerateCounts("slope counts must be nonnegative with p1+n1 = p2+n2 = dim(G)");
    }
    if (ls.p_bar1 < 0 || ls.n_bar1 < 0 || ls.p_bar2 < 0 || ls.n_bar2 < 0) {
        throw std::invalid_argument("slope levels must be nonnegative");
    }
    check_orthogonal(ls.G, "G");

    const double pb1 = ls.p_bar1, nb1 = ls.n_bar1;
    const double pb2 = ls.p_bar2, nb2 = ls.n_bar2;
    const double r_bar = std::sqrt(pb1 * nb1 * pb2 * nb2);
    const double k1 = 0.5 * (pb1 + nb1) * (pb2 + nb2);
    const double k2 = 0.5 * (pb1 * nb2 + nb1 * pb2);

    // paired eigenvalues come from the principal angles between the two
    // positive-slope subspaces; read them off the smaller corner block
    const Eigen::Index pairs = std::min({ls.p1, ls.n1, ls.p2, ls.n2});
    Matrix block;
    if (std::min(ls.p1, ls.p2) <= std::min(ls.n1, ls.n2)) {
        block = ls.G.topLeftCorner(ls.p2, ls.p1);
    } else {
        block = ls.G.bottomRightCorner(ls.n2, ls.n1);
    }

    std::vector<std::complex<double>> eigs;
    eigs.reserve(static_cast<std::size_t>(ls.m()));
    if (pairs > 0) {
        Eigen::JacobiSVD<Matrix> svd(block);
        const Vector sv = svd.singularValues();
        for (Eigen::Index i = 0; i < pairs; ++i) {
            const double c2 = sv[i] * sv[i];
            const double t = k1 * c2 - k2;
            const double disc = t * t - r_bar * r_bar;
            if (disc >= 0.0) {
                const double root = std::sqrt(disc);
                eigs.emplace_back(t + root, 0.0);
                eigs.emplace_back(t - root, 0.0);
            } else {
                const double root = std::sqrt(-disc);
                eigs.emplace_back(t, root);
                eigs.emplace_back(t, -root);
            }
        }
    }

    // leftover eigenvalues beyond the pairs; the slope split with the
    // smallest count fixes which products appear and with what multiplicity
    Side s1{pb1, nb1, ls.p1, ls.n1};
    Side s2{pb2, nb2, ls.p2, ls.n2};
    if (std::min(s2.p, s2.n) > std::min(s1.p, s1.n)) std::swap(s1, s2);
    const auto add = [&eigs](double value, Eigen::Index count) {
        for (Eigen::Index i = 0; i < count; ++i) eigs.emplace_back(value, 0.0);
    };
    if (s2.p <= s2.n) {
        if (s1.p <= s1.n) {
            add(-s1.pb * s2.nb, s1.p - s2.p);
            add(s1.nb * s2.nb, s2.n - s1.p);
        } else {
            add(s1.nb * s2.nb, s1.n - s2.p);
            add(-s1.pb * s2.nb, s2.n - s1.n);
        }
    } else {
        if (s1.p <= s1.n) {
            add(s1.pb * s2.pb, s1.p - s2.n);
            add(-s1.nb * s2.pb, s2.p - s1.p);
        } else {
            add(-s1.nb * s2.pb, s1.n - s2.n);
            add(s1.pb * s2.pb, s2.p - s1.n);
        }
    }

    if (static_cast<Eigen::Index>(eigs.size()) != ls.m()) {
        throw DegenerateCounts("eigenvalue multiplicities do not add up to the dimension");
    }
    return eigs;
}

LocusParams locus_params(const AlphaBox& box) {
    const DirectionBox& b1 = box.d1;
    const DirectionBox& b2 = box.d2;
    LocusParams lp;
    lp.n_bar = std::max(b1.p_bar * b2.n_bar, b1.n_bar * b2.p_bar);
    lp.p_bar = std::max(b1.p_bar * b2.p_bar, b1.n_bar * b2.n_bar);
    lp.r_bar = std::sqrt(b1.p_bar * b1.n_bar * b2.p_bar * b2.n_bar);
    lp.n_brv = std::min(b1.p_bar * b2.n_bar, b1.n_bar * b2.p_bar);
    lp.p_brv = std::min(b1.p_bar * b2.p_bar, b1.n_bar * b2.n_bar);
    lp.n_low = std::min(b1.p_low * b2.n_low, b1.n_low * b2.p_low);
    lp.p_low = std::min(b1.p_low * b2.p_low, b1.n_low * b2.n_low);
    lp.r_low = std::sqrt(b1.p_low * b1.n_low * b2.p_low * b2.n_low);
    lp.k1 = 0.5 * (b1.p_bar + b1.n_bar) * (b2.p_bar + b2.n_bar);
    lp.k2 = 0.5 * (b1.p_bar * b2.n_bar + b1.n_bar * b2.p_bar);
    if (lp.k1 > 0.0) {
        const double a = std::sqrt(b1.p_bar * b2.n_bar);
        const double b = std::sqrt(b1.n_bar * b2.p_bar);
        lp.c_low = std::abs(a - b) / std::sqrt(2.0 * lp.k1);
        lp.c_high = (a + b) / std::sqrt(2.0 * lp.k1);
    }
    return lp;
}

bool locus_contains(const LocusParams& lp, std::complex<double> lambda,
                    double tol) {
    if (std::abs(lambda.imag()) <= tol * (1.0 + std::abs(lambda))) {
        const double x = lambda.real();
        const bool in_neg = x >= -lp.n_bar - tol && x <= -lp.n_low + tol;
        const bool in_pos = x >= lp.p_low - tol && x <= lp.p_bar + tol;
        return in_neg || in_pos;
    }
    const double r = std::abs(lambda);
    return r >= lp.r_low - tol && r <= lp.r_bar + tol;
}

std::complex<double> map_to_R(std::complex<double> lambda, double q) {
    return std::complex<double>(1.0 - q, 0.0) + q * lambda;
}

RLocus map_to_R(const LocusParams& lp, double q) {
    RLocus rl;
    rl.center = 1.0 - q;
    const double a = rl.center - q * lp.n_bar;
    const double b = rl.center - q * lp.n_low;
    rl.neg_interval = {std::min(a, b), std::max(a, b)};
    const double c = rl.center + q * lp.p_low;
    const double d = rl.center + q * lp.p_bar;
    rl.pos_interval = {std::min(c, d), std::max(c, d)};
    rl.inner = std::abs(q) * lp.r_low;
    rl.outer = std::abs(q) * lp.r_bar;
    return rl;
}

bool rlocus_contains(const RLocus& rl, std::complex<double> lambda,
                     double tol) {
    if (std::abs(lambda.imag()) <= tol * (1.0 + std::abs(lambda))) {
        const double x = lambda.real();
        const bool in_neg =
            x >= rl.neg_interval.first - tol && x <= rl.neg_interval.second + tol;
        const bool in_pos =
            x >= rl.pos_interval.first - tol && x <= rl.pos_interval.second + tol;
        return in_neg || in_pos;
    }
    const double r = std::abs(lambda - std::complex<double>(rl.center, 0.0));
    return r >= rl.inner - tol && r <= rl.outer + tol;
}

double rho_max(const LocusParams& lp, double q) {
    return std::max(std::abs(1.0 - q - q * lp.n_bar),
                    std::abs(1.0 - q + q * lp.p_bar));
}

QTuning optimal_q(const LocusParams& lp) {
    QTuning t;
    if (lp.p_bar >= 1.0) {
        t.q = 0.0;
        t.rho = 1.0;
        t.non_convergent = true;
        return t;
    }
    t.q = 2.0 / (2.0 + lp.n_bar - lp.p_bar);
    t.rho = (lp.p_bar + lp.n_bar) / (2.0 + lp.n_bar - lp.p_bar);
    return t;
}

namespace {

// Orthonormal basis of the orthogonal complement of the columns of P.
Matrix orthonormal_complement(const Matrix& P, Eigen::Index n) {
    const Eigen::Index k = P.cols();
    if (k == 0) return Matrix::Identity(n, n);
    Eigen::HouseholderQR<Matrix> qr(P);
    const Matrix Q = qr.householderQ() * Matrix::Identity(n, n);
    return Q.rightCols(n - k).eval();
}

} // namespace

CSFactors cs_decompose(const Matrix& G, Eigen::Index p1, Eigen::Index n1,
                       Eigen::Index p2, Eigen::Index n2) {
    if (!(p2 <= p1 && p1 <= n1 && n1 <= n2)) {
        throw std::invalid_argument("counts must satisfy p2 <= p1 <= n1 <= n2");
    }
    if (p1 + n1 != p2 + n2 || G.rows() != p1 + n1) {
        throw DegenerateCounts("counts must satisfy p1+n1 = p2+n2 = dim(G)");
    }
    check_orthogonal(G, "G");

    const Eigen::Index m = p1 + n1;
    const Eigen::Index q1 = p1 - p2;
    const Eigen::Index q2 = n1 - p2;
    const Matrix G1 = G.topLeftCorner(p2, p1);
    const Matrix G2 = G.topRightCorner(p2, n1);
    const Matrix G3 = G.bottomLeftCorner(n2, p1);
    const Matrix G4 = G.bottomRightCorner(n2, n1);

    CSFactors cs;
    cs.p1 = p1; cs.n1 = n1; cs.p2 = p2; cs.n2 = n2;
    cs.q1 = q1; cs.q2 = q2;

    Matrix U1(p2, p2), V1(p1, p1);
    cs.c.resize(p2);
    if (p2 > 0) {
        Eigen::JacobiSVD<Matrix> svd(
            G1, Eigen::ComputeFullU | Eigen::ComputeFullV);
        U1 = svd.matrixU();
        V1 = svd.matrixV();
        cs.c = svd.singularValues().head(p2);
    } else {
        V1 = Matrix::Identity(p1, p1);
    }
    for (Eigen::Index i = 0; i < p2; ++i) cs.c[i] = std::min(cs.c[i], 1.0);

    const double stol = 1e-7;
    const Matrix X = G3 * V1; // columns i < p2 have norm s_i, the rest norm 1

    // V2 columns: matched partners for s_i > 0 come from G2'U1; for
    // degenerate cosines (s_i ~ 0) and the trailing q2 block any orthonormal
    // completion works, and G4 maps it to the matching U2 columns
    Matrix V2(n1, n1);
    std::vector<Eigen::Index> degenerate;
    Eigen::Index built = 0;
    Matrix partial(n1, p2);
    for (Eigen::Index i = 0; i < p2; ++i) {
        const double s = std::sqrt(std::max(0.0, 1.0 - cs.c[i] * cs.c[i]));
        if (s > stol) {
            partial.col(built++) = -(G2.transpose() * U1.col(i)) / s;
        } else {
            degenerate.push_back(i);
        }
    }
    const Matrix comp =
        orthonormal_complement(partial.leftCols(built), n1);
    {
        Eigen::Index next = 0;
        Eigen::Index from_partial = 0;
        for (Eigen::Index i = 0; i < p2; ++i) {
            const double s = std::sqrt(std::max(0.0, 1.0 - cs.c[i] * cs.c[i]));
            if (s > stol) {
                V2.col(i) = partial.col(from_partial++);
            } else {
                V2.col(i) = comp.col(next++);
            }
        }
        V2.rightCols(q2) = comp.rightCols(comp.cols() - next);
    }

    Matrix U2(n2, n2);
    for (Eigen::Index i = 0; i < p2; ++i) {
        const double s = std::sqrt(std::max(0.0, 1.0 - cs.c[i] * cs.c[i]));
        U2.col(i) = s > stol ? Vector(X.col(i) / s) : Vector(G4 * V2.col(i));
    }
    for (Eigen::Index k = 0; k < q1; ++k) {
        Vector w = X.col(p2 + k);
        U2.col(p2 + k) = w / w.norm();
    }
    for (Eigen::Index j = 0; j < q2; ++j) {
        Vector u = G4 * V2.col(p2 + j);
        U2.col(p2 + q1 + j) = u / u.norm();
    }

    check_orthogonal(U2, "assembled U2");
    check_orthogonal(V2, "assembled V2");

    Matrix L = Matrix::Zero(m, m);
    L.topLeftCorner(p2, p2) = U1;
    L.bottomRightCorner(n2, n2) = U2;
    Matrix R = Matrix::Zero(m, m);
    R.topLeftCorner(p1, p1) = V1;
    R.bottomRightCorner(n1, n1) = V2;
    cs.M = L.transpose() * G * R;

    cs.A1 = U1;
    cs.A2 = U2;
    cs.B1 = V1.transpose();
    cs.B2 = V2.transpose();
    return cs;
}

HStructureReport verify_H_structure(const CSFactors& cs, double p_bar1,
                                    double n_bar1, double p_bar2,
                                    double n_bar2, double tol) {
    const Eigen::Index m = cs.p1 + cs.n1;
    Vector h1(m), h2(m);
    h1.head(cs.p1).setConstant(p_bar1);
    h1.tail(cs.n1).setConstant(-n_bar1);
    h2.head(cs.p2).setConstant(p_bar2);
    h2.tail(cs.n2).setConstant(-n_bar2);
    const Matrix H =
        cs.M * h1.asDiagonal() * cs.M.transpose() * h2.asDiagonal();

    Matrix expected = Matrix::Zero(m, m);
    for (Eigen::Index i = 0; i < cs.p2; ++i) {
        const double c = cs.c[i];
        const double c2 = c * c;
        const double s2 = std::max(0.0, 1.0 - c2);
        const double sc = std::sqrt(s2) * c;
        expected(i, i) = (c2 * p_bar1 - s2 * n_bar1) * p_bar2;
        expected(i, cs.p2 + i) = -sc * (p_bar1 + n_bar1) * n_bar2;
        expected(cs.p2 + i, i) = sc * (p_bar1 + n_bar1) * p_bar2;
        expected(cs.p2 + i, cs.p2 + i) = (c2 * n_bar1 - s2 * p_bar1) * n_bar2;
    }
    for (Eigen::Index k = 0; k < cs.q1; ++k) {
        expected(2 * cs.p2 + k, 2 * cs.p2 + k) = -p_bar1 * n_bar2;
    }
    for (Eigen::Index j = 0; j < cs.q2; ++j) {
        const Eigen::Index idx = 2 * cs.p2 + cs.q1 + j;
        expected(idx, idx) = n_bar1 * n_bar2;
    }

    // each coupled pair must reproduce the closed-form eigenvalues
    const double r_bar = std::sqrt(p_bar1 * n_bar1 * p_bar2 * n_bar2);
    const double k1 = 0.5 * (p_bar1 + n_bar1) * (p_bar2 + n_bar2);
    const double k2 = 0.5 * (p_bar1 * n_bar2 + n_bar1 * p_bar2);
    for (Eigen::Index i = 0; i < cs.p2; ++i) {
        const double tr =
            expected(i, i) + expected(cs.p2 + i, cs.p2 + i);
        const double det =
            expected(i, i) * expected(cs.p2 + i, cs.p2 + i) -
            expected(i, cs.p2 + i) * expected(cs.p2 + i, i);
        const double t = k1 * cs.c[i] * cs.c[i] - k2;
        if (std::abs(tr - 2.0 * t) > 1e-9 * (1.0 + std::abs(tr)) ||
            std::abs(det - r_bar * r_bar) > 1e-9 * (1.0 + std::abs(det))) {
            throw StructureMismatch("closed-form eigenvalues violated at pair block " +
                                    std::to_string(i));
        }
    }

    const double scale = 1.0 + expected.cwiseAbs().maxCoeff();
    HStructureReport rep;
    rep.pair_blocks = static_cast<int>(cs.p2);
    rep.scalar_blocks = static_cast<int>(cs.q1 + cs.q2);
    const Matrix dev = (H - expected).cwiseAbs();
    rep.max_deviation = dev.maxCoeff();
    if (rep.max_deviation > tol * scale) {
        Eigen::Index r = 0, c = 0;
        dev.maxCoeff(&r, &c);
        throw StructureMismatch(
            "coupled-pair structure violated near row " + std::to_string(r) +
            ", column " + std::to_string(c));
    }
    return rep;
}

} // namespace admmrate
