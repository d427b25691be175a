#include <doctest.h>

#include "helpers.hpp"

#include <admmrate/errors.hpp>
#include <admmrate/locus.hpp>

#include <cmath>
#include <complex>

using namespace admmrate;
using testutil::level_spec_oracle;
using testutil::multiset_distance;
using testutil::random_level_spec;
using testutil::random_orthogonal;

TEST_CASE("closed-form eigenvalues match the dense solver on random instances") {
    Rng rng(51);
    for (int trial = 0; trial < 60; ++trial) {
        const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng.integer(11));
        const LevelSpec ls = random_level_spec(rng, m);
        const auto got = theorem1_eigs(ls);
        const auto want = level_spec_oracle(ls);
        CHECK(multiset_distance(got, want) < 1e-8);
    }
}

TEST_CASE("unit levels put every eigenvalue on the unit circle") {
    Rng rng(52);
    LevelSpec ls;
    ls.p_bar1 = ls.n_bar1 = ls.p_bar2 = ls.n_bar2 = 1.0;
    ls.p1 = 3; ls.n1 = 3; ls.p2 = 2; ls.n2 = 4;
    ls.G = random_orthogonal(rng, 6);
    for (const auto& lam : theorem1_eigs(ls)) {
        CHECK(std::abs(std::abs(lam) - 1.0) < 1e-10);
    }
}

TEST_CASE("all-positive counts collapse to a single product value") {
    Rng rng(53);
    LevelSpec ls;
    ls.p_bar1 = 0.7; ls.n_bar1 = 0.4; ls.p_bar2 = 1.3; ls.n_bar2 = 0.2;
    ls.p1 = 5; ls.n1 = 0; ls.p2 = 5; ls.n2 = 0;
    ls.G = random_orthogonal(rng, 5);
    for (const auto& lam : theorem1_eigs(ls)) {
        CHECK(lam.imag() == doctest::Approx(0.0));
        CHECK(lam.real() == doctest::Approx(0.7 * 1.3).epsilon(1e-10));
    }
}

TEST_CASE("two-level model input validation") {
    Rng rng(54);
    LevelSpec ls = random_level_spec(rng, 4);
    ls.p2 += 1; // breaks p2 + n2 = m
    CHECK_THROWS_AS(theorem1_eigs(ls), DegenerateCounts);
    LevelSpec ls2 = random_level_spec(rng, 4);
    ls2.G(0, 0) += 0.5;
    CHECK_THROWS_AS(theorem1_eigs(ls2), NotOrthogonal);
}

TEST_CASE("locus constants for simple boxes") {
    AlphaBox box;
    box.d1 = {1.0, 0.0, 0.0, 1.0};
    box.d2 = {1.0, 0.0, 0.0, 1.0};
    const LocusParams lp = locus_params(box);
    CHECK(lp.n_bar == doctest::Approx(1.0));
    CHECK(lp.p_bar == doctest::Approx(1.0));
    CHECK(lp.r_bar == doctest::Approx(1.0));
    CHECK(lp.n_low == doctest::Approx(0.0));
    CHECK(lp.p_low == doctest::Approx(0.0));
    CHECK(lp.r_low == doctest::Approx(0.0));
    CHECK(lp.c_low == doctest::Approx(0.0));
    CHECK(lp.c_high == doctest::Approx(1.0));

    AlphaBox degenerate = box;
    degenerate.d2.n_bar = 0.0;
    const LocusParams lpd = locus_params(degenerate);
    CHECK(lpd.r_bar == doctest::Approx(0.0));
    CHECK(lpd.n_bar == doctest::Approx(1.0)); // n_bar1 * p_bar2
}

TEST_CASE("locus membership boundary cases") {
    AlphaBox box;
    box.d1 = {0.8, 0.4, 0.3, 0.9};
    box.d2 = {1.0, 0.2, 0.1, 1.0};
    const LocusParams lp = locus_params(box);
    CHECK(locus_contains(lp, {lp.p_bar, 0.0}, 1e-9));
    CHECK(locus_contains(lp, {-lp.n_bar, 0.0}, 1e-9));
    CHECK(locus_contains(lp, {0.0, lp.r_bar}, 1e-9));
    // real gap between the two intervals
    if (lp.p_low > lp.n_low && lp.p_low > 1e-3) {
        CHECK(!locus_contains(lp, {0.5 * (lp.p_low - lp.n_low), 0.0}, 1e-9));
    }
    CHECK(!locus_contains(lp, {lp.p_bar + 1.0, 0.0}, 1e-9));
    CHECK(!locus_contains(lp, {0.0, lp.r_bar + 1.0}, 1e-9));
}

TEST_CASE("containment of sampled eigenvalues in random boxes") {
    Rng rng(55);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng.integer(7));
        AlphaBox box;
        for (int i = 1; i <= 2; ++i) {
            DirectionBox b;
            b.n_bar = rng.uniform(0.0, 1.5);
            b.n_low = rng.uniform(0.0, b.n_bar);
            b.p_bar = rng.uniform(0.0, 1.5);
            b.p_low = rng.uniform(0.0, b.p_bar);
            if (i == 1) box.d1 = b; else box.d2 = b;
        }
        const LocusParams lp = locus_params(box);
        const Matrix V1 = random_orthogonal(rng, m);
        const Matrix V2 = random_orthogonal(rng, m);
        Vector a1(m), a2(m);
        for (Eigen::Index k = 0; k < m; ++k) {
            const DirectionBox& b1 = box.d1;
            a1[k] = rng.bits() & 1 ? rng.uniform(b1.p_low, b1.p_bar)
                                   : -rng.uniform(b1.n_low, b1.n_bar);
            const DirectionBox& b2 = box.d2;
            a2[k] = rng.bits() & 1 ? rng.uniform(b2.p_low, b2.p_bar)
                                   : -rng.uniform(b2.n_low, b2.n_bar);
        }
        const Matrix N = V1 * a1.asDiagonal() * V1.transpose() * V2 *
                         a2.asDiagonal() * V2.transpose();
        Eigen::EigenSolver<Matrix> es(N, false);
        for (Eigen::Index k = 0; k < m; ++k) {
            CHECK(locus_contains(lp, es.eigenvalues()[k], 1e-9));
        }
    }
}

TEST_CASE("affine map to the relaxed iteration") {
    CHECK(map_to_R(std::complex<double>(0.3, -0.2), 1.0) == std::complex<double>(0.3, -0.2));
    CHECK(map_to_R(std::complex<double>(5.0, 2.0), 0.0) == std::complex<double>(1.0, 0.0));
    for (double q : {-0.5, 0.3, 1.0, 1.7}) {
        CHECK(std::abs(map_to_R(std::complex<double>(1.0, 0.0), q) -
                       std::complex<double>(1.0, 0.0)) < 1e-15);
    }

    // spectral radius of R equals the mapped eigenvalue maximum
    Rng rng(56);
    const Eigen::Index m = 5;
    const Matrix V1 = random_orthogonal(rng, m);
    const Matrix V2 = random_orthogonal(rng, m);
    Vector a1 = testutil::random_vector(rng, m);
    Vector a2 = testutil::random_vector(rng, m);
    const double q = 0.8;
    const Matrix N = V1 * a1.asDiagonal() * V1.transpose() * V2 *
                     a2.asDiagonal() * V2.transpose();
    const Matrix R = (1.0 - q) * Matrix::Identity(m, m) + q * N;
    Eigen::EigenSolver<Matrix> en(N, false), er(R, false);
    double mapped_max = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) {
        mapped_max =
            std::max(mapped_max, std::abs(map_to_R(en.eigenvalues()[k], q)));
    }
    CHECK(er.eigenvalues().cwiseAbs().maxCoeff() ==
          doctest::Approx(mapped_max).epsilon(1e-10));
}

TEST_CASE("mapped locus geometry") {
    AlphaBox box;
    box.d1 = {0.8, 0.1, 0.2, 0.9};
    box.d2 = {1.0, 0.0, 0.0, 1.0};
    const LocusParams lp = locus_params(box);
    const double q = 0.75;
    const RLocus rl = map_to_R(lp, q);
    CHECK(rl.center == doctest::Approx(0.25));
    CHECK(rl.outer == doctest::Approx(q * lp.r_bar));
    CHECK(rl.neg_interval.first == doctest::Approx(0.25 - q * lp.n_bar));
    CHECK(rl.pos_interval.second == doctest::Approx(0.25 + q * lp.p_bar));
    CHECK(rlocus_contains(rl, map_to_R(std::complex<double>(lp.p_bar, 0.0), q), 1e-9));
    CHECK(rlocus_contains(rl, map_to_R(std::complex<double>(0.0, lp.r_bar), q), 1e-9));
}

TEST_CASE("optimal q formula and grid check") {
    SUBCASE("symmetric case returns exactly 1") {
        AlphaBox box;
        box.d1 = {0.9676, 0.0, 0.0, 0.4853};
        box.d2 = {1.0, 0.0, 0.0, 1.0};
        const LocusParams lp = locus_params(box);
        CHECK(lp.n_bar == doctest::Approx(lp.p_bar)); // max picks 0.9676 twice
        const QTuning t = optimal_q(lp);
        CHECK(t.q == doctest::Approx(1.0));
        CHECK(t.rho == doctest::Approx(lp.p_bar));
        CHECK(!t.non_convergent);
    }
    SUBCASE("non-convergent branch") {
        LocusParams lp;
        lp.p_bar = 1.2;
        lp.n_bar = 0.5;
        const QTuning t = optimal_q(lp);
        CHECK(t.non_convergent);
        CHECK(t.q == doctest::Approx(0.0));
        CHECK(t.rho == doctest::Approx(1.0));
    }
    SUBCASE("grid minimization agrees") {
        Rng rng(57);
        for (int trial = 0; trial < 20; ++trial) {
            LocusParams lp;
            lp.p_bar = rng.uniform(0.05, 0.95);
            lp.n_bar = rng.uniform(0.0, 1.5);
            const QTuning t = optimal_q(lp);
            double best_q = 0.0, best = 1e300;
            for (double q = -2.0; q <= 2.0 + 1e-12; q += 1e-3) {
                const double v = rho_max(lp, q);
                if (v < best) {
                    best = v;
                    best_q = q;
                }
            }
            CHECK(std::abs(t.q - best_q) <= 1e-3 + 1e-9);
            CHECK(t.rho <= best + 1e-6);
        }
    }
}

TEST_CASE("CS decomposition reassembles and exposes cosines") {
    Rng rng(58);
    SUBCASE("identity") {
        const CSFactors cs = cs_decompose(Matrix::Identity(6, 6), 3, 3, 2, 4);
        for (Eigen::Index i = 0; i < 2; ++i) {
            CHECK(cs.c[i] == doctest::Approx(1.0));
        }
        Matrix L = Matrix::Zero(6, 6);
        L.topLeftCorner(2, 2) = cs.A1;
        L.bottomRightCorner(4, 4) = cs.A2;
        Matrix R = Matrix::Zero(6, 6);
        R.topLeftCorner(3, 3) = cs.B1;
        R.bottomRightCorner(3, 3) = cs.B2;
        CHECK((L * cs.M * R - Matrix::Identity(6, 6)).norm() < 1e-9);
    }
    SUBCASE("2x2 rotation") {
        const double th = 0.9;
        Matrix G(2, 2);
        G << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
        const CSFactors cs = cs_decompose(G, 1, 1, 1, 1);
        CHECK(cs.c[0] == doctest::Approx(std::abs(std::cos(th))));
    }
    SUBCASE("random instances reassemble") {
        for (int trial = 0; trial < 30; ++trial) {
            Eigen::Index p2 = static_cast<Eigen::Index>(rng.integer(3));
            Eigen::Index p1 = p2 + static_cast<Eigen::Index>(rng.integer(3));
            Eigen::Index n1 = p1 + static_cast<Eigen::Index>(rng.integer(3));
            Eigen::Index n2 = p1 + n1 - p2;
            const Eigen::Index m = p1 + n1;
            if (m == 0) continue;
            const Matrix G = random_orthogonal(rng, m);
            const CSFactors cs = cs_decompose(G, p1, n1, p2, n2);
            Matrix L = Matrix::Zero(m, m);
            L.topLeftCorner(p2, p2) = cs.A1;
            L.bottomRightCorner(n2, n2) = cs.A2;
            Matrix R = Matrix::Zero(m, m);
            R.topLeftCorner(p1, p1) = cs.B1;
            R.bottomRightCorner(n1, n1) = cs.B2;
            CHECK((L * cs.M * R - G).norm() < 1e-9);
            for (Eigen::Index i = 0; i < p2; ++i) {
                CHECK(cs.c[i] >= -1e-12);
                CHECK(cs.c[i] <= 1.0 + 1e-12);
            }
        }
    }
    SUBCASE("non-canonical order is rejected") {
        CHECK_THROWS(cs_decompose(Matrix::Identity(4, 4), 3, 1, 2, 2));
    }
}

TEST_CASE("H structure verification") {
    Rng rng(59);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::Index p2 = 2, p1 = 3, n1 = 4, n2 = 5;
        const Matrix G = random_orthogonal(rng, p1 + n1);
        const CSFactors cs = cs_decompose(G, p1, n1, p2, n2);
        const HStructureReport rep =
            verify_H_structure(cs, 0.7, 0.9, 1.1, 0.5);
        CHECK(rep.pair_blocks == 2);
        CHECK(rep.scalar_blocks == (p1 - p2) + (n1 - p2));
        CHECK(rep.max_deviation < 1e-9 * 10);
    }
    // corrupting the middle factor must be detected
    const Matrix G = random_orthogonal(rng, 7);
    CSFactors cs = cs_decompose(G, 3, 4, 2, 5);
    cs.M(0, 1) += 1e-3;
    CHECK_THROWS_AS(verify_H_structure(cs, 0.7, 0.9, 1.1, 0.5),
                    StructureMismatch);
}

TEST_CASE("threshold classification of closed-form pairs") {
    Rng rng(60);
    int done = 0;
    while (done < 40) {
        const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng.integer(9));
        const LevelSpec ls = random_level_spec(rng, m, 0.1, 2.0);
        const AlphaBox box{{ls.n_bar1, ls.n_bar1, ls.p_bar1, ls.p_bar1},
                           {ls.n_bar2, ls.n_bar2, ls.p_bar2, ls.p_bar2}};
        const LocusParams lp = locus_params(box);
        const Eigen::Index pairs = std::min({ls.p1, ls.n1, ls.p2, ls.n2});
        if (pairs == 0) continue;
        const Matrix block =
            std::min(ls.p1, ls.p2) <= std::min(ls.n1, ls.n2)
                ? Matrix(ls.G.topLeftCorner(ls.p2, ls.p1))
                : Matrix(ls.G.bottomRightCorner(ls.n2, ls.n1));
        Eigen::JacobiSVD<Matrix> svd(block);
        bool near_threshold = false;
        for (Eigen::Index i = 0; i < pairs; ++i) {
            const double c = svd.singularValues()[i];
            if (std::abs(c - lp.c_low) <= 1e-6 ||
                std::abs(c - lp.c_high) <= 1e-6) {
                near_threshold = true;
            }
        }
        if (near_threshold) continue; // classification is ill-posed there
        ++done;

        const auto eigs = theorem1_eigs(ls);
        for (Eigen::Index i = 0; i < pairs; ++i) {
            const double c = svd.singularValues()[i];
            const auto& l1 = eigs[2 * i];
            const auto& l2 = eigs[2 * i + 1];
            if (c < lp.c_low) {
                CHECK(l1.imag() == 0.0);
                CHECK(l1.real() <= -lp.n_brv + 1e-10);
                CHECK(l1.real() >= -lp.n_bar - 1e-10);
                CHECK(l2.real() <= -lp.n_brv + 1e-10);
                CHECK(l2.real() >= -lp.n_bar - 1e-10);
            } else if (c > lp.c_high) {
                CHECK(l1.imag() == 0.0);
                CHECK(l1.real() >= lp.p_brv - 1e-10);
                CHECK(l1.real() <= lp.p_bar + 1e-10);
            } else {
                CHECK(std::abs(l1.imag()) > 0.0);
                CHECK(std::abs(std::abs(l1) - lp.r_bar) < 1e-10);
                CHECK(l1 == std::conj(l2));
            }
        }
    }
}
