#ifndef ADMMRATE_ENGINE_HPP
#define ADMMRATE_ENGINE_HPP

#include "admmrate/problem.hpp"
#include "admmrate/prox.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace admmrate {

struct AdmmConfig {
    double q = 1.0;            // relaxation parameter, != 0; q = 1/2 is standard ADMM
    int max_iters = 1000;
    double tol_state = 1e-10;  // stop when ||z+ - z|| <= tol_state
    double tol_primal = 0.0;   // stop when ||A1 x1 - A2 x2 - b|| <= tol_primal
    bool record_history = false;
    std::uint64_t seed = 0;
};

struct AdmmState {
    Vector z;
    Vector x1, x2;
    Vector y;
    Vector lambda_tilde;
    int iteration = 0;
};

struct IterationRecord {
    int iteration = 0;
    double state_delta = 0.0;          // ||z+ - z||
    double constraint_residual = 0.0;  // ||A1 x1 - A2 x2 - b||
    double objective = 0.0;
};

enum class TerminationReason { StateTolerance, PrimalTolerance, MaxIterations, NonFinite };

std::string to_string(TerminationReason r);

struct RunResult {
    Vector z;
    Vector x1, x2;
    int iterations = 0;
    TerminationReason reason = TerminationReason::MaxIterations;
    std::vector<IterationRecord> history;
    bool converged() const {
        return reason == TerminationReason::StateTolerance ||
               reason == TerminationReason::PrimalTolerance;
    }
};

// Caches the per-direction proximity operators of one problem and runs the
// scaled-update and state-recursion forms of the iteration.
class AdmmEngine {
public:
    explicit AdmmEngine(const SplitProblem& p);

    const ProxContext& prox1() const { return p1_; }
    const ProxContext& prox2() const { return p2_; }

    // Scaled-variable update: x1+ = P1(A2 x2 + b - lt); y+ = 2q A1 x1+ +
    // (1-2q)(A2 x2 + b); x2+ = P2(y+ - b + lt); lt+ = lt + y+ - A2 x2+ - b.
    // The z field tracks E^{1/2}(y+ - b + lt) with the pre-update multiplier.
    AdmmState step_scaled(const AdmmConfig& cfg, const AdmmState& s) const;

    // State recursion z+ = (1-q) z + q D1(D2(z)).
    Vector step_dr(const AdmmConfig& cfg, const Vector& z) const;

    struct DrStepDetail {
        Vector z_next;
        Vector x1, x2;
        double constraint_residual;
    };
    DrStepDetail step_dr_detailed(const AdmmConfig& cfg, const Vector& z) const;

    // x2 = P2(E^{-1/2} z), x1 = P1(E^{-1/2} D2(z)).
    std::pair<Vector, Vector> recover_primal(const Vector& z) const;

    // Scaled-form state matching a given z, for trajectory comparisons.
    AdmmState state_from_z(const Vector& z) const;

    RunResult run(const AdmmConfig& cfg, const Vector& z0) const;

private:
    SplitProblem prob_;
    ProxContext p1_, p2_;
};

// Convenience wrappers building a fresh engine per call.
AdmmState step_scaled(const SplitProblem& p, const AdmmConfig& cfg, const AdmmState& s);
Vector step_dr(const SplitProblem& p, const AdmmConfig& cfg, const Vector& z);
std::pair<Vector, Vector> recover_primal(const SplitProblem& p, const Vector& z);
RunResult run(const SplitProblem& p, const AdmmConfig& cfg, const Vector& z0);

} // namespace admmrate

#endif
