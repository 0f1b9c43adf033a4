#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lamecouple/manufactured.hpp"
#include "lamecouple/solver.hpp"

namespace lamecouple {

struct VerificationReport {
    std::string name;
    bool pass = false;
    std::vector<std::pair<std::string, double>> certificates;
    std::string note;

    double certificate(const std::string& key) const;
};

// Gram of the P0-projected rigid motions in L2 over arbitrary segments.
VerificationReport check_rbm_independence(const std::vector<Segment>& edges);
VerificationReport check_rbm_independence(const BoundarySpace& bs);
VerificationReport check_rbm_independence(const SurfaceMesh3& s);

struct CentroidTriple {
    std::array<int, 3> tri{};
    double area2 = 0.0;  // |(b - a) x (c - a)|
};

// Three triangles with non-collinear centroids, or empty when none exist.
std::optional<CentroidTriple> find_noncollinear_centroids(const SurfaceMesh3& s);
VerificationReport check_centroids(const SurfaceMesh3& s, const std::string& name = "centroid_noncollinear");

struct ContractionEstimate {
    double c_K_h = 0.0;
    int level = 0;
    double lambda_ext = 0.0, mu_ext = 0.0;
};

// sup over P1 traces of ||(1/2 + K) v||_{V^-1} / ||v||_{V^-1}; the V^-1 norm is
// realized with P0 densities on the once-bisected loop.
ContractionEstimate estimate_contraction_constant(const BoundarySpace& bs, double lambda_ext, double mu_ext);

enum class JnVariant { Theorem, Linear, Hencky };

struct JnInputs {
    double c_A = 0.0, c_K = 0.0, lambda_ext = 1.0, mu_ext = 1.0;
    double lambda_int = 0.0, mu_int = 0.0;  // Linear variant
    std::optional<MaterialLaw> hencky;      // Hencky variant
};

VerificationReport check_jn_condition(const JnInputs& in, JnVariant variant);

// Scaled mesh with its spaces and layer matrices.
struct Discretization {
    std::shared_ptr<const Mesh> mesh;  // scaled coordinates
    ScaleRecord scale;
    std::shared_ptr<const FemSpace> fem;
    std::shared_ptr<const BoundarySpace> boundary;
    std::shared_ptr<const LayerMatrices> layers;
};

Discretization discretize(const Mesh& physical, double lambda_ext, double mu_ext, const LayerOptions& opt = {});

struct SolveReport {
    CoupledSolution solution;  // scaled coordinates
    SolveTrace trace;
    double err_eps = NAN, err_phi = NAN;
};

// Solves the problem on one discretization and measures errors when the exact
// solution is known. err_phi is NaN for BMC, whose density is not the
// exterior traction.
SolveReport solve_problem(const ManufacturedProblem& p, const Discretization& d, Method method, bool stabilize,
                          XiKind xi, const SolveOptions& opts);

struct StudyOptions {
    Method method = Method::Symmetric;
    bool stabilize = false;
    XiKind xi = XiKind::P0Projected;
    SolveOptions solver;
    std::vector<Vec2> polygon = unit_square_polygon();
    double h0 = 0.5;
    int levels = 4;
};

struct LevelResult {
    int level = 0;
    double h = 0.0;
    int dofs = 0;
    double err_eps = NAN, err_phi = NAN, rate_eps = NAN, rate_phi = NAN;
    int iters = 0;
    bool converged = false;
};

std::vector<LevelResult> convergence_study(const ManufacturedProblem& p, const StudyOptions& opt);

// ||eps(u - u_h)||_{L2(Omega)} in scaled coordinates.
double strain_error(const ManufacturedProblem& p, const Discretization& d, const CoefVector& u);
// <dphi, V dphi>^{1/2} with dphi the P0 projection error of phi_h.
double density_error(const ManufacturedProblem& p, const Discretization& d, const Vector& phi);

}  // namespace lamecouple
