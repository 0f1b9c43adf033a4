#pragma once

#include <optional>
#include <vector>

#include "lamecouple/coupling.hpp"

namespace lamecouple {

enum class SolverMethod { Direct, Picard, Newton };
SolverMethod parse_solver_method(const std::string& s);

struct SolveOptions {
    SolverMethod method = SolverMethod::Direct;
    double tol = 1e-10;
    int max_iter = 200;
    std::optional<double> theta;  // Picard damping; sampled when empty
    unsigned seed = 20240611u;
    int samples = 24;
};

struct SolveTrace {
    std::vector<double> residuals;  // Euclidean residual norms per iterate
    int iterations = 0;
    bool converged = false;
    double theta = 0.0;             // Picard damping actually used
    double c_mon = 0.0, c_lip = 0.0;
};

// Sampled strong-monotonicity and Lipschitz constants of x -> P^{-1} apply(x)
// in the energy inner product, over random pairs in a ball around P^{-1} rhs;
// P is the factorized tangent at zero.
struct PicardConstants {
    double c_mon, c_lip;
};
PicardConstants sample_picard_constants(const CoupledSystem& sys, const LuFactor& p, int samples, unsigned seed);

// Never throws on non-convergence: trace.converged reports it.
// Throws SingularMatrixError on a singular tangent and std::invalid_argument
// when Direct is requested for a nonlinear law.
std::pair<CoupledSolution, SolveTrace> solve(const CoupledSystem& sys, const SolveOptions& opts);

}  // namespace lamecouple
