#include "admmrate/prox.hpp"

#include "admmrate/errors.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

namespace admmrate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_diagonal(const Matrix& m, double tol) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (i != j && std::abs(m(i, j)) > tol) return false;
    return true;
}

// Soft threshold: argmin_x w|x| + e/2 (x - u)^2 for w, e > 0.
double soft_threshold(double u, double w_over_e) {
    double mag = std::abs(u) - w_over_e;
    return mag > 0.0 ? (u > 0 ? mag : -mag) : 0.0;
}

// argmin_x f(x) + e/2 (a x - u)^2 for convex piecewise-linear f, by bisection
// over breakpoints on the subgradient optimality condition
//   e a^2 x - e a u + df(x) = 0.
double piecewise_prox_1d(const PiecewiseLinear1D& f, double a, double e, double u) {
    const double ea2 = e * a * a;
    const double eau = e * a * u;
    const auto& bk = f.breakpoints;
    const auto& sl = f.slopes;
    const std::size_t K = bk.size();
    if (K == 0) return (eau - sl[0]) / ea2;

    // Right subgradient at breakpoint k is non-decreasing in k.
    auto right_grad = [&](std::size_t k) { return ea2 * bk[k] - eau + sl[k + 1]; };
    std::size_t lo = 0, hi = K; // first k with right_grad(k) >= 0, or K
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (right_grad(mid) < 0.0) lo = mid + 1; else hi = mid;
    }
    if (lo == K) return (eau - sl[K]) / ea2;          // right of all breakpoints
    double left_grad = ea2 * bk[lo] - eau + sl[lo];
    if (left_grad <= 0.0) return bk[lo];              // kink absorbs the optimum
    return (eau - sl[lo]) / ea2;                      // interior of segment lo
}

} // namespace

Matrix symmetric_sqrt(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()));
    Vector d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

Matrix symmetric_inv_sqrt(const Matrix& m, double rtol) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()));
    const Vector& ev = es.eigenvalues();
    double mx = ev.size() > 0 ? ev.cwiseAbs().maxCoeff() : 0.0;
    Vector d(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        d[i] = ev[i] > rtol * mx ? 1.0 / std::sqrt(ev[i]) : 0.0;
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

ProxContext::ProxContext(const SplitProblem& p, int direction)
    : dir_(direction),
      f_(direction == 1 ? p.f1 : p.f2),
      A_(direction == 1 ? p.A1 : p.A2),
      E_(p.E),
      b_(p.b) {
    E_sqrt_ = symmetric_sqrt(E_);
    E_inv_sqrt_ = symmetric_inv_sqrt(E_);

    switch (f_.kind) {
    case FunctionKind::Quadratic: {
        Matrix sys = f_.Q + A_.transpose() * E_ * A_;
        system_.compute(sys);
        Vector d = system_.vectorD().cwiseAbs();
        if (d.size() == 0 || d.minCoeff() <= 1e-12 * d.maxCoeff())
            throw SingularSystem("prox system matrix Q + A'EA is singular");
        break;
    }
    case FunctionKind::WeightedL1:
    case FunctionKind::PiecewiseLinear1DArray: {
        double tol = 1e-12 * (1.0 + E_.cwiseAbs().maxCoeff());
        if (A_.rows() != A_.cols() || !is_diagonal(A_, tol) || !is_diagonal(E_, tol))
            throw UnsupportedCombination(
                "non-smooth separable prox requires diagonal A and diagonal E");
        a_diag_ = A_.diagonal();
        e_diag_ = E_.diagonal();
        if ((a_diag_.cwiseAbs().array() <= 0.0).any())
            throw UnsupportedCombination("diagonal of A contains a zero entry");
        break;
    }
    }
}

Vector ProxContext::prox(const Vector& u) const {
    switch (f_.kind) {
    case FunctionKind::Quadratic:
        return system_.solve(f_.c + A_.transpose() * (E_ * u));
    case FunctionKind::WeightedL1: {
        Vector x(n());
        for (Eigen::Index j = 0; j < x.size(); ++j) {
            double a = a_diag_[j], e = e_diag_[j];
            // argmin_x w|x| + e/2 (a x - u)^2, solved in y = a x.
            double y = soft_threshold(u[j], f_.w[j] / (e * std::abs(a)));
            x[j] = y / a;
        }
        return x;
    }
    case FunctionKind::PiecewiseLinear1DArray: {
        Vector x(n());
        for (Eigen::Index j = 0; j < x.size(); ++j)
            x[j] = piecewise_prox_1d(f_.pieces[static_cast<std::size_t>(j)],
                                     a_diag_[j], e_diag_[j], u[j]);
        return x;
    }
    }
    return Vector();
}

Vector ProxContext::reflected(const Vector& u) const {
    Vector x = prox(E_inv_sqrt_ * u);
    Vector r = 2.0 * (E_sqrt_ * (A_ * x)) - u;
    if (dir_ == 1)
        r -= E_sqrt_ * b_;
    else
        r += E_sqrt_ * b_;
    return r;
}

Vector prox_point(const ProxContext& ctx, const Vector& u) { return ctx.prox(u); }
Vector reflected_prox(const ProxContext& ctx, const Vector& u) { return ctx.reflected(u); }

namespace {

void check_piecewise_monotone(const std::vector<double>& breakpoints,
                              const std::vector<double>& slopes) {
    if (slopes.size() != breakpoints.size() + 1)
        throw InvalidPiecewise("slope count must be breakpoint count + 1");
    for (std::size_t k = 1; k < breakpoints.size(); ++k)
        if (breakpoints[k] <= breakpoints[k - 1])
            throw InvalidPiecewise("breakpoints must be strictly increasing");
    for (std::size_t k = 1; k < slopes.size(); ++k)
        if (slopes[k] < slopes[k - 1])
            throw InvalidPiecewise("slopes must be non-decreasing");
}

} // namespace

StaircaseOperator staircase_build(const std::vector<double>& breakpoints,
                                  const std::vector<double>& slopes,
                                  double a, double eps) {
    if (a == 0.0) throw InvalidPiecewise("a must be non-zero");
    if (eps <= 0.0) throw InvalidPiecewise("eps must be positive");
    check_piecewise_monotone(breakpoints, slopes);

    StaircaseOperator op;
    op.breakpoints = breakpoints;
    op.slopes = slopes;
    op.a = a;
    op.eps = eps;

    // Build for |a|; a < 0 is the point reflection u -> -D(-u).
    const double s = std::sqrt(eps) * std::abs(a);
    const std::size_t K = breakpoints.size();
    // Intersection of the breakpoint-k line with the slope-j line.
    auto v = [&](std::size_t k, std::size_t j) { return s * breakpoints[k] + slopes[j] / s; };

    std::vector<StaircaseSegment> segs;
    for (std::size_t j = 0; j <= K; ++j) {
        double lo = (j == 0) ? -kInf : v(j - 1, j);
        double hi = (j == K) ? kInf : v(j, j);
        segs.push_back({lo, hi, 1.0, -2.0 * slopes[j] / s, false});
        if (j < K) {
            double nlo = v(j, j), nhi = v(j, j + 1);
            if (nhi > nlo)
                segs.push_back({nlo, nhi, -1.0, 2.0 * s * breakpoints[j], true});
        }
    }
    if (a < 0.0) {
        std::reverse(segs.begin(), segs.end());
        for (auto& seg : segs) {
            double lo = -seg.u_hi, hi = -seg.u_lo;
            seg.u_lo = lo;
            seg.u_hi = hi;
            seg.intercept = -seg.intercept;
        }
    }
    op.segments = std::move(segs);
    return op;
}

double StaircaseOperator::evaluate(double u) const {
    for (const auto& seg : segments)
        if (u <= seg.u_hi) return seg.slope * u + seg.intercept;
    const auto& last = segments.back();
    return last.slope * u + last.intercept;
}

std::pair<double, double> StaircaseOperator::slope_at(double u) const {
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto& seg = segments[i];
        if (u < seg.u_hi) return {seg.slope, seg.slope};
        if (u == seg.u_hi && i + 1 < segments.size())
            return {seg.slope, segments[i + 1].slope};
    }
    double sl = segments.back().slope;
    return {sl, sl};
}

std::pair<double, double> staircase_slope(const StaircaseOperator& op, double u) {
    return op.slope_at(u);
}

} // namespace admmrate
