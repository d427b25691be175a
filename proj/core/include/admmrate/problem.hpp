#ifndef ADMMRATE_PROBLEM_HPP
#define ADMMRATE_PROBLEM_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace admmrate {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Extended real value on [-1, +inf]. Infinity is an explicit flag, never a
// sentinel double.
struct ExtReal {
    double value = 0.0;
    bool is_infinite = false;

    static ExtReal finite(double v) { return {v, false}; }
    static ExtReal infinity() { return {0.0, true}; }
};

enum class FunctionKind {
    Quadratic,            // f(x) = 1/2 x'Qx - c'x
    WeightedL1,           // f(x) = sum_j w_j |x_j|
    PiecewiseLinear1DArray // per-coordinate convex piecewise-linear
};

// Per-coordinate convex piecewise-linear description: strictly increasing
// breakpoints, non-decreasing slopes, slopes.size() == breakpoints.size()+1.
struct PiecewiseLinear1D {
    std::vector<double> breakpoints;
    std::vector<double> slopes;
};

struct SeparableFunction {
    FunctionKind kind = FunctionKind::Quadratic;

    // Quadratic
    Matrix Q;
    Vector c;

    // WeightedL1
    Vector w;

    // PiecewiseLinear1DArray, one entry per coordinate
    std::vector<PiecewiseLinear1D> pieces;

    Eigen::Index dim() const;
    double evaluate(const Vector& x) const;

    static SeparableFunction quadratic(Matrix Q, Vector c);
    static SeparableFunction weighted_l1(Vector w);
    static SeparableFunction piecewise_linear(std::vector<PiecewiseLinear1D> pieces);
};

// min f1(x1) + f2(x2)  s.t.  A1 x1 = A2 x2 + b, with augmentation E > 0.
struct SplitProblem {
    SeparableFunction f1, f2;
    Matrix A1, A2;
    Vector b;
    Matrix E;

    Eigen::Index m() const { return b.size(); }
    const SeparableFunction& f(int i) const { return i == 1 ? f1 : f2; }
    const Matrix& A(int i) const { return i == 1 ? A1 : A2; }
};

// Strong-convexity lower bound C and smoothness upper bound S for a function;
// C = 0 and S = +inf are explicit flags.
struct CurvatureBounds {
    Matrix C;
    Matrix S;
    bool c_is_zero = false;
    bool s_is_infinite = false;
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool valid() const { return violations.empty(); }
};

CurvatureBounds curvature_bounds(const SeparableFunction& f);

ValidationReport validate_problem(const SplitProblem& p);

// PSD test tolerance used throughout: 1e-10 * (1 + max |entry|).
double psd_tolerance(const Matrix& m);

} // namespace admmrate

#endif
