#include "admmrate/problem.hpp"

#include "admmrate/errors.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

namespace admmrate {

Eigen::Index SeparableFunction::dim() const {
    switch (kind) {
    case FunctionKind::Quadratic:
        return Q.rows();
    case FunctionKind::WeightedL1:
        return w.size();
    case FunctionKind::PiecewiseLinear1DArray:
        return static_cast<Eigen::Index>(pieces.size());
    }
    return 0;
}

namespace {

double piecewise_eval(const PiecewiseLinear1D& f, double x) {
    // Value anchored at the first breakpoint (or at 0 for a pure line); the
    // derivative on segment k is slopes[k] over (breakpoints[k-1], breakpoints[k]).
    if (f.breakpoints.empty()) return f.slopes[0] * x;
    const double inf = std::numeric_limits<double>::infinity();
    const auto& bk = f.breakpoints;
    const std::size_t K = bk.size();
    const double x0 = bk[0];
    const double lo = std::min(x, x0), hi = std::max(x, x0);
    double v = 0.0;
    for (std::size_t k = 0; k <= K; ++k) {
        double seg_lo = (k == 0) ? -inf : bk[k - 1];
        double seg_hi = (k == K) ? inf : bk[k];
        double a = std::max(lo, seg_lo), b = std::min(hi, seg_hi);
        if (b > a) v += f.slopes[k] * (b - a);
    }
    return x >= x0 ? v : -v;
}

} // namespace

double SeparableFunction::evaluate(const Vector& x) const {
    switch (kind) {
    case FunctionKind::Quadratic:
        return 0.5 * x.dot(Q * x) - c.dot(x);
    case FunctionKind::WeightedL1:
        return w.cwiseProduct(x.cwiseAbs()).sum();
    case FunctionKind::PiecewiseLinear1DArray: {
        double v = 0.0;
        for (Eigen::Index j = 0; j < x.size(); ++j)
            v += piecewise_eval(pieces[static_cast<std::size_t>(j)], x[j]);
        return v;
    }
    }
    return 0.0;
}

SeparableFunction SeparableFunction::quadratic(Matrix Q, Vector c) {
    SeparableFunction f;
    f.kind = FunctionKind::Quadratic;
    f.Q = std::move(Q);
    f.c = std::move(c);
    return f;
}

SeparableFunction SeparableFunction::weighted_l1(Vector w) {
    SeparableFunction f;
    f.kind = FunctionKind::WeightedL1;
    f.w = std::move(w);
    return f;
}

SeparableFunction SeparableFunction::piecewise_linear(std::vector<PiecewiseLinear1D> pieces) {
    SeparableFunction f;
    f.kind = FunctionKind::PiecewiseLinear1DArray;
    f.pieces = std::move(pieces);
    return f;
}

double psd_tolerance(const Matrix& m) {
    double mx = m.size() > 0 ? m.cwiseAbs().maxCoeff() : 0.0;
    return 1e-10 * (1.0 + mx);
}

CurvatureBounds curvature_bounds(const SeparableFunction& f) {
    CurvatureBounds cb;
    const Eigen::Index n = f.dim();
    switch (f.kind) {
    case FunctionKind::Quadratic:
        cb.C = f.Q;
        cb.S = f.Q;
        break;
    case FunctionKind::WeightedL1:
    case FunctionKind::PiecewiseLinear1DArray:
        cb.C = Matrix::Zero(n, n);
        cb.c_is_zero = true;
        cb.s_is_infinite = true;
        break;
    }
    return cb;
}

ValidationReport validate_problem(const SplitProblem& p) {
    ValidationReport rep;
    auto add = [&](const std::string& s) { rep.violations.push_back(s); };

    const Eigen::Index m = p.b.size();
    if (p.E.rows() != m || p.E.cols() != m)
        add("dimension mismatch: E must be " + std::to_string(m) + "x" + std::to_string(m));
    if (p.A1.rows() != m) add("dimension mismatch: A1 row count != length of b");
    if (p.A2.rows() != m) add("dimension mismatch: A2 row count != length of b");
    if (p.A1.cols() != p.f1.dim()) add("dimension mismatch: A1 columns != dim of f1");
    if (p.A2.cols() != p.f2.dim()) add("dimension mismatch: A2 columns != dim of f2");

    if (p.E.rows() == m && p.E.cols() == m) {
        if (!p.E.isApprox(p.E.transpose(), 1e-12))
            add("E not symmetric");
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (p.E + p.E.transpose()));
        if (es.eigenvalues().minCoeff() <= psd_tolerance(p.E))
            add("E not positive definite");
    }

    for (int i = 1; i <= 2; ++i) {
        const SeparableFunction& f = p.f(i);
        const Matrix& A = p.A(i);
        switch (f.kind) {
        case FunctionKind::Quadratic:
            if (f.Q.rows() != f.Q.cols() || f.c.size() != f.Q.rows())
                add("f" + std::to_string(i) + ": quadratic parameter dimensions inconsistent");
            else if (!f.Q.isApprox(f.Q.transpose(), 1e-12))
                add("f" + std::to_string(i) + ": Q not symmetric");
            break;
        case FunctionKind::WeightedL1:
            if ((f.w.array() < 0.0).any())
                add("f" + std::to_string(i) + ": weighted l1 weights must be non-negative");
            break;
        case FunctionKind::PiecewiseLinear1DArray:
            for (std::size_t j = 0; j < f.pieces.size(); ++j) {
                const auto& pc = f.pieces[j];
                if (pc.slopes.size() != pc.breakpoints.size() + 1)
                    add("f" + std::to_string(i) + "[" + std::to_string(j) +
                        "]: slope count must be breakpoint count + 1");
                for (std::size_t k = 1; k < pc.breakpoints.size(); ++k)
                    if (pc.breakpoints[k] <= pc.breakpoints[k - 1]) {
                        add("f" + std::to_string(i) + "[" + std::to_string(j) +
                            "]: breakpoints not strictly increasing");
                        break;
                    }
                for (std::size_t k = 1; k < pc.slopes.size(); ++k)
                    if (pc.slopes[k] < pc.slopes[k - 1]) {
                        add("f" + std::to_string(i) + "[" + std::to_string(j) +
                            "]: slopes not non-decreasing");
                        break;
                    }
            }
            break;
        }

        // Convexity of g_i = f_i + q_{M_i}: min eigenvalue of C_i + M_i >= -tol.
        if (A.rows() == m && A.cols() == f.dim() && p.E.rows() == m && rep.valid()) {
            CurvatureBounds cb = curvature_bounds(f);
            Matrix M = A.transpose() * p.E * A;
            Matrix CM = cb.C + M;
            Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (CM + CM.transpose()));
            if (es.eigenvalues().minCoeff() < -psd_tolerance(CM))
                add("f" + std::to_string(i) + ": C + A'EA not positive semidefinite (g_i non-convex)");
        }
    }
    return rep;
}

} // namespace admmrate
