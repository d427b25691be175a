#ifndef ADMMRATE_PROX_HPP
#define ADMMRATE_PROX_HPP

#include "admmrate/problem.hpp"

#include <Eigen/Cholesky>
#include <utility>
#include <vector>

namespace admmrate {

// Proximity / reflected-proximity operator pair for one direction of a split
// problem. Immutable after construction; evaluation is pure.
class ProxContext {
public:
    ProxContext(const SplitProblem& p, int direction);

    int direction() const { return dir_; }
    Eigen::Index m() const { return b_.size(); }
    Eigen::Index n() const { return A_.cols(); }

    const Matrix& E_sqrt() const { return E_sqrt_; }
    const Matrix& E_inv_sqrt() const { return E_inv_sqrt_; }
    const SeparableFunction& function() const { return f_; }
    const Matrix& A() const { return A_; }

    // argmin_x f(x) + 1/2 ||A x - u||_E^2
    Vector prox(const Vector& u) const;

    // 2 E^{1/2} A prox(E^{-1/2} u) - u - E^{1/2} b  (direction 1)
    // 2 E^{1/2} A prox(E^{-1/2} u) - u + E^{1/2} b  (direction 2)
    Vector reflected(const Vector& u) const;

private:
    int dir_;
    SeparableFunction f_;
    Matrix A_, E_;
    Vector b_;
    Matrix E_sqrt_, E_inv_sqrt_;

    // Quadratic kind: cached factorization of Q + A'EA.
    Eigen::LDLT<Matrix> system_;

    // Separable kinds: diagonal entries of A and E.
    Vector a_diag_, e_diag_;
};

Vector prox_point(const ProxContext& ctx, const Vector& u);
Vector reflected_prox(const ProxContext& ctx, const Vector& u);

// Symmetric PSD square root (and pseudo-inverse square root) of a symmetric
// positive semidefinite matrix. Eigenvalues below rtol * max are treated as 0.
Matrix symmetric_sqrt(const Matrix& m);
Matrix symmetric_inv_sqrt(const Matrix& m, double rtol = 1e-12);

// One straight piece of a staircase operator: D(u) = slope * u + intercept on
// [u_lo, u_hi] (infinite at the outer ends).
struct StaircaseSegment {
    double u_lo;
    double u_hi;
    double slope;
    double intercept;
    bool at_breakpoint; // true on the -1-sloped pieces generated by a kink
};

// Piecewise-linear shape of the 1-D reflected proximity operator of a convex
// piecewise-linear function, for scalar A = a and E = eps.
struct StaircaseOperator {
    std::vector<StaircaseSegment> segments; // ordered, tiling the real line
    std::vector<double> breakpoints;
    std::vector<double> slopes;
    double a = 1.0;
    double eps = 1.0;

    double evaluate(double u) const;
    // Slope of the active segment; at a junction both one-sided slopes.
    std::pair<double, double> slope_at(double u) const;
};

StaircaseOperator staircase_build(const std::vector<double>& breakpoints,
                                  const std::vector<double>& slopes,
                                  double a, double eps);

std::pair<double, double> staircase_slope(const StaircaseOperator& op, double u);

} // namespace admmrate

#endif
