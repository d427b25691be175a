#include "admmrate/bounds.hpp"

#include "admmrate/errors.hpp"
#include "admmrate/prox.hpp"
#include "admmrate/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace admmrate {

double h_map(double x) {
    return (1.0 - x) / (1.0 + x);
}

ExtReal h_map(ExtReal x) {
    if (x.is_infinite) return ExtReal::finite(-1.0);
    if (x.value == -1.0) return ExtReal::infinity();
    return ExtReal::finite(h_map(x.value));
}

namespace {

DirectionModel build_direction(const SplitProblem& p, int i) {
    DirectionModel d;
    const Matrix& A = p.A(i);
    const Matrix E_sqrt = symmetric_sqrt(p.E);
    d.F = E_sqrt * A;
    d.M = A.transpose() * p.E * A;
    d.M_inv_sqrt = symmetric_inv_sqrt(d.M);
    d.F_tilde = d.F * d.M_inv_sqrt;

    Eigen::SelfAdjointEigenSolver<Matrix> es(d.M);
    const double mmax = es.eigenvalues().size() > 0
                            ? es.eigenvalues().cwiseAbs().maxCoeff()
                            : 0.0;
    const double cut = 1e-12 * std::max(1.0, mmax);
    d.rank = (es.eigenvalues().array() > cut).count();

    const CurvatureBounds cb = curvature_bounds(p.f(i));
    d.s_infinite = cb.s_is_infinite;
    d.C_tilde = d.M_inv_sqrt * cb.C * d.M_inv_sqrt;
    if (!cb.s_is_infinite) {
        d.S_tilde = d.M_inv_sqrt * cb.S * d.M_inv_sqrt;
    }
    return d;
}

// Basis of the range of M, as orthonormal columns.
Matrix range_basis(const Matrix& M, Eigen::Index rank) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(M);
    const Eigen::Index n = M.rows();
    // eigenvalues ascending; the top `rank` carry the range
    return es.eigenvectors().rightCols(rank).eval();
}

// Diagonalize A, then refine each eigenvalue cluster of A with B so that both
// end up diagonal in the same basis. Requires [A, B] = 0 up to tolerance.
void joint_diagonalize(const Matrix& A, const Matrix& B, Vector& a_out,
                       Vector& b_out, Matrix& Y_out) {
    const Eigen::Index r = A.rows();
    Eigen::SelfAdjointEigenSolver<Matrix> ea(A);
    Matrix Y = ea.eigenvectors();
    const Vector a = ea.eigenvalues();
    const double ctol = 1e-9 * (1.0 + (r > 0 ? a.cwiseAbs().maxCoeff() : 0.0));

    Eigen::Index k = 0;
    while (k < r) {
        Eigen::Index j = k + 1;
        while (j < r && a[j] - a[k] <= ctol) ++j;
        if (j - k > 1) {
            const Matrix Yc = Y.middleCols(k, j - k);
            Eigen::SelfAdjointEigenSolver<Matrix> eb(
                (Yc.transpose() * B * Yc).eval());
            Y.middleCols(k, j - k) = Yc * eb.eigenvectors();
        }
        k = j;
    }
    a_out = a;
    b_out = (Y.transpose() * B * Y).diagonal();
    Y_out = Y;
}

DirectionSpectrum spectrum_for(const DirectionModel& d, Eigen::Index m) {
    DirectionSpectrum sp;
    const Eigen::Index r = d.rank;
    sp.kernel_count = m - r;
    sp.ell.resize(m);
    sp.nu.resize(m);

    Matrix Q_span(m, r);
    Vector s_vals, c_vals;
    if (r > 0) {
        const Matrix W = range_basis(d.M, r);
        const Matrix Cr = W.transpose() * d.C_tilde * W;
        Matrix Y;
        if (d.s_infinite) {
            Eigen::SelfAdjointEigenSolver<Matrix> ec(Cr);
            Y = ec.eigenvectors();
            c_vals = ec.eigenvalues();
            s_vals = Vector();
        } else {
            const Matrix Sr = W.transpose() * d.S_tilde * W;
            const double comm = (Sr * Cr - Cr * Sr).norm();
            const double scale =
                1.0 + Sr.norm() * Cr.norm();
            if (comm > 1e-8 * scale) {
                throw NonCommuting(
                    "curvature and smoothness matrices do not commute on the "
                    "range of A'EA");
            }
            Vector s_tmp, c_tmp;
            joint_diagonalize(Sr, Cr, s_tmp, c_tmp, Y);
            s_vals = s_tmp;
            c_vals = c_tmp;
        }
        Q_span = d.F_tilde * (W * Y);
    }

    for (Eigen::Index k = 0; k < r; ++k) {
        sp.ell[k] = d.s_infinite ? -1.0 : h_map(s_vals[k]);
        sp.nu[k] = h_map(c_vals[k]);
        if (sp.nu[k] < sp.ell[k]) sp.nu[k] = sp.ell[k];
    }
    for (Eigen::Index k = r; k < m; ++k) {
        sp.ell[k] = -1.0;
        sp.nu[k] = -1.0;
    }

    sp.V.resize(m, m);
    if (r > 0) sp.V.leftCols(r) = Q_span;
    if (m - r > 0) {
        if (r == 0) {
            sp.V = Matrix::Identity(m, m);
        } else {
            Eigen::HouseholderQR<Matrix> qr(Q_span);
            const Matrix Qfull = qr.householderQ() * Matrix::Identity(m, m);
            sp.V.rightCols(m - r) = Qfull.rightCols(m - r);
        }
    }
    return sp;
}

} // namespace

SpectralModel build_spectral_model(const SplitProblem& p) {
    SpectralModel sm;
    sm.m = p.m();
    sm.d1 = build_direction(p, 1);
    sm.d2 = build_direction(p, 2);
    return sm;
}

BoundSpectrum bound_spectrum(const SpectralModel& sm) {
    BoundSpectrum bs;
    bs.m = sm.m;
    bs.d1 = spectrum_for(sm.d1, sm.m);
    bs.d2 = spectrum_for(sm.d2, sm.m);
    return bs;
}

AlphaBox alpha_box_from_spectrum(const BoundSpectrum& bs) {
    AlphaBox box;
    for (int i = 1; i <= 2; ++i) {
        const DirectionSpectrum& sp = bs.dir(i);
        DirectionBox b;
        bool straddles = false;
        double neg_inner = std::numeric_limits<double>::infinity();
        double pos_inner = std::numeric_limits<double>::infinity();
        bool has_neg = false, has_pos = false;
        for (Eigen::Index k = 0; k < bs.m; ++k) {
            const double lo = bs.dir(i).ell[k], hi = sp.nu[k];
            b.n_bar = std::max(b.n_bar, -lo);
            b.p_bar = std::max(b.p_bar, hi);
            if (hi < 0.0) {
                has_neg = true;
                neg_inner = std::min(neg_inner, -hi);
            } else if (lo > 0.0) {
                has_pos = true;
                pos_inner = std::min(pos_inner, lo);
            } else {
                straddles = true;
            }
        }
        b.n_bar = std::max(b.n_bar, 0.0);
        b.p_bar = std::max(b.p_bar, 0.0);
        b.n_low = (straddles || !has_neg) ? 0.0 : neg_inner;
        b.p_low = (straddles || !has_pos) ? 0.0 : pos_inner;
        if (i == 1) box.d1 = b; else box.d2 = b;
    }
    return box;
}

double mu_single(const BoundSpectrum& bs, int i) {
    if (i != 1 && i != 2) throw std::invalid_argument("direction must be 1 or 2");
    const DirectionSpectrum& sp = bs.dir(i);
    if (sp.ell.size() == 0) return 0.0;
    return std::max(-sp.ell.minCoeff(), sp.nu.maxCoeff());
}

double mu_separable(const BoundSpectrum& bs, double q) {
    return (1.0 - q) + q * mu_single(bs, 1) * mu_single(bs, 2);
}

namespace {

struct BoxSearch {
    const BoundSpectrum& bs;
    double q;
    Matrix K; // V2' V1; conjugating R by V2 leaves the objective unchanged
    std::vector<std::pair<int, Eigen::Index>> free_coords;
    Vector a1, a2;

    explicit BoxSearch(const BoundSpectrum& b, double q_in) : bs(b), q(q_in) {
        K = bs.d2.V.transpose() * bs.d1.V;
        a1 = bs.d1.ell;
        a2 = bs.d2.ell;
        for (int i = 1; i <= 2; ++i) {
            const DirectionSpectrum& sp = bs.dir(i);
            for (Eigen::Index k = 0; k < bs.m; ++k) {
                const double gap = sp.nu[k] - sp.ell[k];
                if (gap > 1e-12 * (1.0 + std::abs(sp.nu[k]) +
                                   std::abs(sp.ell[k]))) {
                    free_coords.emplace_back(i, k);
                }
            }
        }
    }

    Vector& coords(int i) { return i == 1 ? a1 : a2; }

    Matrix build() const {
        const Eigen::Index m = bs.m;
        const Matrix P = (K * a1.asDiagonal()) * (K.transpose() * a2.asDiagonal());
        return (1.0 - q) * Matrix::Identity(m, m) + q * P;
    }

    double norm_obj() const {
        const Matrix R = build();
        Eigen::SelfAdjointEigenSolver<Matrix> es(
            (R.transpose() * R).eval());
        return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
    }

    double rho_obj() const {
        Eigen::EigenSolver<Matrix> es(build(), false);
        return es.eigenvalues().cwiseAbs().maxCoeff();
    }
};

MuResult box_maximize(const BoundSpectrum& bs, double q, bool spectral_radius) {
    BoxSearch s(bs, q);
    const auto objective = [&]() {
        return spectral_radius ? s.rho_obj() : s.norm_obj();
    };
    const std::size_t d = s.free_coords.size();
    MuResult out;

    if (d <= 16) {
        // exact over vertices; for the operator norm the objective is convex
        // in alpha, so the box maximum is attained here
        out.exact = !spectral_radius;
        const std::uint64_t total = std::uint64_t(1) << d;
        for (std::uint64_t mask = 0; mask < total; ++mask) {
            for (std::size_t j = 0; j < d; ++j) {
                const auto [i, k] = s.free_coords[j];
                const DirectionSpectrum& sp = bs.dir(i);
                s.coords(i)[k] = (mask >> j) & 1 ? sp.nu[k] : sp.ell[k];
            }
            out.value = std::max(out.value, objective());
        }
        if (!spectral_radius) return out;
    } else {
        out.exact = false;
    }

    Rng rng(0x5eedULL);
    const auto set_random_vertex = [&]() {
        for (const auto& [i, k] : s.free_coords) {
            const DirectionSpectrum& sp = bs.dir(i);
            s.coords(i)[k] = rng.bits() & 1 ? sp.nu[k] : sp.ell[k];
        }
    };

    if (d > 16) {
        for (int start = 0; start < 32; ++start) {
            set_random_vertex();
            double best = objective();
            for (int sweep = 0; sweep < 8; ++sweep) {
                bool improved = false;
                for (const auto& [i, k] : s.free_coords) {
                    const DirectionSpectrum& sp = bs.dir(i);
                    const double cur = s.coords(i)[k];
                    const double alt = cur == sp.nu[k] ? sp.ell[k] : sp.nu[k];
                    s.coords(i)[k] = alt;
                    const double v = objective();
                    if (v > best) {
                        best = v;
                        improved = true;
                    } else {
                        s.coords(i)[k] = cur;
                    }
                }
                if (!improved) break;
            }
            out.value = std::max(out.value, best);
        }
    }

    // interior samples; for the spectral radius the maximum can sit strictly
    // inside the box
    const int samples = spectral_radius || d > 16 ? 1024 : 0;
    for (int t = 0; t < samples; ++t) {
        for (const auto& [i, k] : s.free_coords) {
            const DirectionSpectrum& sp = bs.dir(i);
            s.coords(i)[k] = rng.uniform(sp.ell[k], sp.nu[k]);
        }
        out.value = std::max(out.value, objective());
    }
    return out;
}

} // namespace

MuResult mu_joint(const BoundSpectrum& bs, double q) {
    return box_maximize(bs, q, false);
}

MuResult rho_joint(const BoundSpectrum& bs, double q) {
    return box_maximize(bs, q, true);
}

ScalarTuning optimal_scalar_tuning(double sigma, double beta) {
    if (!(sigma >= 0.0) || !(beta > 0.0)) {
        throw std::invalid_argument("sigma must be nonnegative and beta positive");
    }
    const double t = std::sqrt(sigma / beta);
    ScalarTuning out;
    out.gamma = std::sqrt(sigma * beta);
    double H1 = 0.0;
    if (sigma <= beta) {
        H1 = 2.0 / (1.0 + t) - 1.0;
    } else {
        H1 = 2.0 / (1.0 + 0.5 * t + 0.5 / t) - 1.0;
    }
    out.q = 2.0 / (3.0 - H1);
    out.mu = 2.0 * out.q - 1.0;
    return out;
}

} // namespace admmrate
