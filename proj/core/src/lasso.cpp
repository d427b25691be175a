#include "admmrate/lasso.hpp"

#include "admmrate/errors.hpp"
#include "admmrate/prox.hpp"
#include "admmrate/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace admmrate {

SplitProblem LassoInstance::problem() const {
    SplitProblem p;
    p.f1 = SeparableFunction::quadratic(omega.transpose() * omega,
                                        omega.transpose() * o);
    p.f2 = SeparableFunction::weighted_l1(w);
    p.A1 = Matrix::Identity(cols, cols);
    p.A2 = Matrix::Identity(cols, cols);
    p.b = Vector::Zero(cols);
    p.E = eps * Matrix::Identity(cols, cols);
    return p;
}

LassoInstance gen_lasso(int rows, int cols, int nnz_per_row, double eps,
                        std::uint64_t seed) {
    if (rows < 1 || cols < 1 || nnz_per_row < 1 || nnz_per_row > cols ||
        !(eps > 0.0)) {
        throw std::invalid_argument("lasso sizes must be positive, nnz <= cols, eps > 0");
    }
    LassoInstance inst;
    inst.rows = rows;
    inst.cols = cols;
    inst.nnz_per_row = nnz_per_row;
    inst.eps = eps;
    inst.seed = seed;

    Rng rng(seed);
    inst.omega = Matrix::Zero(rows, cols);
    for (int r = 0; r < rows; ++r) {
        std::set<int> active;
        while (static_cast<int>(active.size()) < nnz_per_row) {
            active.insert(static_cast<int>(rng.integer(cols)));
        }
        for (int c : active) inst.omega(r, c) = rng.normal();
    }
    inst.o.resize(rows);
    for (int r = 0; r < rows; ++r) inst.o[r] = rng.normal();
    inst.w.resize(cols);
    for (int c = 0; c < cols; ++c) inst.w[c] = rng.uniform();
    return inst;
}

LassoBounds lasso_bounds(const LassoInstance& inst) {
    const Matrix Q = inst.omega.transpose() * inst.omega;
    Eigen::SelfAdjointEigenSolver<Matrix> es(Q);
    LassoBounds lb;
    lb.lambda_min = std::max(0.0, es.eigenvalues().minCoeff());
    lb.lambda_max = es.eigenvalues().maxCoeff();

    const double hi = h_map(lb.lambda_min / inst.eps); // h is decreasing
    const double lo = h_map(lb.lambda_max / inst.eps);
    lb.box.d1.p_bar = std::max(0.0, hi);
    lb.box.d1.n_bar = std::max(0.0, -lo);
    lb.box.d1.p_low = std::max(0.0, lo);
    lb.box.d1.n_low = std::max(0.0, -hi);

    // soft threshold slopes cover the whole of [-1, 1]
    lb.box.d2.p_bar = 1.0;
    lb.box.d2.n_bar = 1.0;
    lb.box.d2.p_low = 0.0;
    lb.box.d2.n_low = 0.0;

    lb.locus = locus_params(lb.box);
    return lb;
}

double fit_rate(const std::vector<IterationRecord>& history) {
    const double floor = 1e-13;
    std::size_t usable = 0;
    while (usable < history.size() && history[usable].state_delta > floor) {
        ++usable;
    }
    if (usable < 20) {
        throw InsufficientHistory("need at least 20 iterations with state deltas above 1e-13");
    }
    const std::size_t start = usable - usable / 3;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(usable - start);
    for (std::size_t k = start; k < usable; ++k) {
        const double x = static_cast<double>(history[k].iteration);
        const double y = std::log(history[k].state_delta);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return std::exp(slope);
}

namespace {

double staircase_slope_strict(const SeparableFunction& f, Eigen::Index j,
                              double a, double eps, double u) {
    StaircaseOperator op;
    if (f.kind == FunctionKind::WeightedL1) {
        op = staircase_build({0.0}, {-f.w[j], f.w[j]}, a, eps);
    } else if (f.kind == FunctionKind::PiecewiseLinear1DArray) {
        op = staircase_build(f.pieces[j].breakpoints, f.pieces[j].slopes, a, eps);
    } else {
        throw UnsupportedCombination(
            "local slopes need a weighted l1 or piecewise-linear function");
    }
    for (const StaircaseSegment& seg : op.segments) {
        if (std::isfinite(seg.u_lo) &&
            std::abs(u - seg.u_lo) <= 1e-9 * (1.0 + std::abs(u))) {
            throw BreakpointAmbiguity(
                "coordinate " + std::to_string(j) +
                " of the fixed point sits on a segment junction");
        }
    }
    const auto [lo, hi] = op.slope_at(u);
    if (lo != hi) {
        throw BreakpointAmbiguity("coordinate " + std::to_string(j) +
                                  " of the fixed point sits on a segment junction");
    }
    return lo;
}

} // namespace

std::vector<std::complex<double>> local_jacobian_eigs(const SplitProblem& p,
                                                      const AdmmConfig& cfg,
                                                      const Vector& z_star) {
    if (p.f1.kind != FunctionKind::Quadratic) {
        throw UnsupportedCombination("direction 1 must be quadratic for the local linearization");
    }
    const Eigen::Index m = p.m();
    const Matrix E_sqrt = symmetric_sqrt(p.E);
    const Matrix K = p.f1.Q + p.A1.transpose() * p.E * p.A1;
    const Matrix rhs = p.A1.transpose() * E_sqrt;
    const Matrix J1 =
        2.0 * E_sqrt * p.A1 * K.ldlt().solve(rhs) - Matrix::Identity(m, m);

    Vector slopes(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        slopes[j] = staircase_slope_strict(p.f2, j, p.A2(j, j), p.E(j, j),
                                           z_star[j]);
    }
    const Matrix R = (1.0 - cfg.q) * Matrix::Identity(m, m) +
                     cfg.q * J1 * slopes.asDiagonal();

    Eigen::EigenSolver<Matrix> es(R, false);
    std::vector<std::complex<double>> out(m);
    for (Eigen::Index k = 0; k < m; ++k) out[k] = es.eigenvalues()[k];
    return out;
}

RateReport lasso_demo(int rows, int cols, int nnz_per_row, double eps,
                      double q, std::uint64_t seed, int max_iters) {
    const LassoInstance inst = gen_lasso(rows, cols, nnz_per_row, eps, seed);
    const SplitProblem prob = inst.problem();
    const LassoBounds lb = lasso_bounds(inst);
    const QTuning qt = optimal_q(lb.locus);

    RateReport rep;
    rep.rows = rows;
    rep.cols = cols;
    rep.eps = eps;
    rep.seed = seed;
    rep.q_star = qt.q;
    rep.rho_star = qt.rho;
    rep.locus = lb.locus;
    rep.q = (std::isfinite(q) && q != 0.0) ? q : qt.q;
    rep.rho_at_q = rho_max(lb.locus, rep.q);

    AdmmConfig cfg;
    cfg.q = rep.q;
    cfg.max_iters = max_iters;
    cfg.tol_state = 1e-12;
    cfg.record_history = true;

    AdmmEngine engine(prob);
    const Vector z0 = Vector::Zero(prob.m());
    const RunResult res = engine.run(cfg, z0);
    rep.iterations = res.iterations;
    rep.converged = res.reason == TerminationReason::StateTolerance;
    rep.empirical_rate = fit_rate(res.history);

    const SpectralModel sm = build_spectral_model(prob);
    rep.mu_separable_value = mu_separable(bound_spectrum(sm), rep.q);

    rep.jacobian_eigs = local_jacobian_eigs(prob, cfg, res.z);
    const RLocus rl = map_to_R(lb.locus, rep.q);
    rep.eigs_in_locus = true;
    for (const auto& lam : rep.jacobian_eigs) {
        if (!rlocus_contains(rl, lam, 1e-6)) rep.eigs_in_locus = false;
    }
    rep.rate_within_bound = rep.empirical_rate <= rep.rho_at_q + 1e-2;
    return rep;
}

} // namespace admmrate
