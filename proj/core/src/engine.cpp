#include "admmrate/engine.hpp"

#include "admmrate/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace admmrate {

std::string to_string(TerminationReason r) {
    switch (r) {
    case TerminationReason::StateTolerance: return "state_tolerance";
    case TerminationReason::PrimalTolerance: return "primal_tolerance";
    case TerminationReason::MaxIterations: return "max_iterations";
    case TerminationReason::NonFinite: return "non_finite";
    }
    return "unknown";
}

namespace {

void check_config(const AdmmConfig& cfg) {
    if (cfg.q == 0.0) throw std::invalid_argument("relaxation parameter q must be non-zero");
    if (cfg.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
    if (cfg.tol_state < 0.0 || cfg.tol_primal < 0.0)
        throw std::invalid_argument("tolerances must be non-negative");
}

} // namespace

AdmmEngine::AdmmEngine(const SplitProblem& p) : prob_(p), p1_(p, 1), p2_(p, 2) {}

AdmmState AdmmEngine::step_scaled(const AdmmConfig& cfg, const AdmmState& s) const {
    check_config(cfg);
    const double q = cfg.q;
    const Vector a2x2_b = prob_.A2 * s.x2 + prob_.b;

    AdmmState next;
    next.x1 = p1_.prox(a2x2_b - s.lambda_tilde);
    next.y = 2.0 * q * (prob_.A1 * next.x1) + (1.0 - 2.0 * q) * a2x2_b;
    next.x2 = p2_.prox(next.y - prob_.b + s.lambda_tilde);
    next.lambda_tilde = s.lambda_tilde + next.y - prob_.A2 * next.x2 - prob_.b;
    next.z = p1_.E_sqrt() * (next.y - prob_.b + s.lambda_tilde);
    next.iteration = s.iteration + 1;
    return next;
}

AdmmEngine::DrStepDetail AdmmEngine::step_dr_detailed(const AdmmConfig& cfg,
                                                      const Vector& z) const {
    check_config(cfg);
    DrStepDetail d;
    d.x2 = p2_.prox(p2_.E_inv_sqrt() * z);
    Vector d2 = 2.0 * (p2_.E_sqrt() * (prob_.A2 * d.x2)) - z + p2_.E_sqrt() * prob_.b;
    d.x1 = p1_.prox(p1_.E_inv_sqrt() * d2);
    Vector d1d2 = 2.0 * (p1_.E_sqrt() * (prob_.A1 * d.x1)) - d2 - p1_.E_sqrt() * prob_.b;
    d.z_next = (1.0 - cfg.q) * z + cfg.q * d1d2;
    d.constraint_residual = (prob_.A1 * d.x1 - prob_.A2 * d.x2 - prob_.b).norm();
    return d;
}

Vector AdmmEngine::step_dr(const AdmmConfig& cfg, const Vector& z) const {
    return step_dr_detailed(cfg, z).z_next;
}

std::pair<Vector, Vector> AdmmEngine::recover_primal(const Vector& z) const {
    Vector x2 = p2_.prox(p2_.E_inv_sqrt() * z);
    Vector x1 = p1_.prox(p1_.E_inv_sqrt() * p2_.reflected(z));
    return {x1, x2};
}

AdmmState AdmmEngine::state_from_z(const Vector& z) const {
    AdmmState s;
    s.z = z;
    Vector ez = p2_.E_inv_sqrt() * z;
    s.x2 = p2_.prox(ez);
    s.lambda_tilde = ez - prob_.A2 * s.x2;
    s.y = prob_.A2 * s.x2 + prob_.b;
    s.x1 = Vector::Zero(prob_.A1.cols());
    s.iteration = 0;
    return s;
}

RunResult AdmmEngine::run(const AdmmConfig& cfg, const Vector& z0) const {
    check_config(cfg);
    RunResult res;
    Vector z = z0;
    res.reason = TerminationReason::MaxIterations;
    for (int it = 1; it <= cfg.max_iters; ++it) {
        DrStepDetail d = step_dr_detailed(cfg, z);
        res.iterations = it;
        if (!d.z_next.allFinite()) {
            res.reason = TerminationReason::NonFinite;
            res.z = z;
            return res;
        }
        double delta = (d.z_next - z).norm();
        if (cfg.record_history) {
            IterationRecord rec;
            rec.iteration = it;
            rec.state_delta = delta;
            rec.constraint_residual = d.constraint_residual;
            rec.objective = prob_.f1.evaluate(d.x1) + prob_.f2.evaluate(d.x2);
            res.history.push_back(rec);
        }
        z = d.z_next;
        if (delta <= cfg.tol_state) {
            res.reason = TerminationReason::StateTolerance;
            break;
        }
        if (d.constraint_residual <= cfg.tol_primal) {
            res.reason = TerminationReason::PrimalTolerance;
            break;
        }
    }
    res.z = z;
    auto [x1, x2] = recover_primal(z);
    res.x1 = x1;
    res.x2 = x2;
    return res;
}

AdmmState step_scaled(const SplitProblem& p, const AdmmConfig& cfg, const AdmmState& s) {
    return AdmmEngine(p).step_scaled(cfg, s);
}

Vector step_dr(const SplitProblem& p, const AdmmConfig& cfg, const Vector& z) {
    return AdmmEngine(p).step_dr(cfg, z);
}

std::pair<Vector, Vector> recover_primal(const SplitProblem& p, const Vector& z) {
    return AdmmEngine(p).recover_primal(z);
}

RunResult run(const SplitProblem& p, const AdmmConfig& cfg, const Vector& z0) {
    return AdmmEngine(p).run(cfg, z0);
}

} // namespace admmrate
