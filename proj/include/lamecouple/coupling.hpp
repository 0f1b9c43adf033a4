#pragma once

#include <memory>
#include <optional>
#include <string>

#include "lamecouple/bem.hpp"

namespace lamecouple {

enum class Method { Symmetric, JohnsonNedelec, BielakMacCamy };
Method parse_method(const std::string& s);
const char* to_string(Method m);

enum class XiKind { P0Projected, P1Rigid };

// Boundary data that may depend on the outward normal.
using TractionField = std::function<Vec2(const Vec2& x, const Vec2& n)>;

struct ProblemData {
    VectorField f = [](const Vec2&) { return Vec2(0, 0); };
    VectorField u0 = [](const Vec2&) { return Vec2(0, 0); };
    TractionField phi0 = [](const Vec2&, const Vec2&) { return Vec2(0, 0); };
    double lambda_ext = 1.0, mu_ext = 1.0;
    MaterialLaw material{LinearLame{1.0, 1.0}};

    // Data in coordinates x' = (x - c) t.
    ProblemData scaled(const ScaleRecord& rec) const;
};

// <f, e_j>_Omega + <phi0, e_j>_Gamma for the two translations.
std::array<double, 2> compatibility_residuals(const FemSpace& sp, const BoundarySpace& bs, const ProblemData& data);

// P0 (or P1 trace) coefficients of the rigid-body functionals.
struct RigidFunctionals {
    XiKind kind = XiKind::P0Projected;
    std::vector<Vector> xi;
};

// xi^1, xi^2 constant unit vectors, xi^3 = (-s_2, s_1) at edge midpoints.
RigidFunctionals project_rbm(const BoundarySpace& bs);
RigidFunctionals rigid_traces(const BoundarySpace& bs);

struct Stabilization {
    Matrix G;  // D x n
    Vector s;  // D
};

struct CoupledSolution {
    CoefVector u;
    Vector phi;

    // Physical-coordinate solution: u unchanged, phi multiplied by t.
    CoupledSolution unscaled(const ScaleRecord& rec) const { return {u, phi * rec.factor}; }
};

// Block unknown x = (u, phi).
class CoupledSystem {
public:
    CoupledSystem(Method method, std::shared_ptr<const FemSpace> sp, std::shared_ptr<const BoundarySpace> bs,
                  std::shared_ptr<const LayerMatrices> layers, const ProblemData& data);

    Method method() const { return method_; }
    const FemSpace& fem() const { return *sp_; }
    const BoundarySpace& boundary() const { return *bs_; }
    const LayerMatrices& layers() const { return *layers_; }
    const MaterialLaw& law() const { return law_; }
    int size() const { return nu_ + nphi_; }
    int u_size() const { return nu_; }
    int phi_size() const { return nphi_; }
    bool stabilized() const { return stab_.has_value(); }
    const Stabilization* stabilization() const { return stab_ ? &*stab_ : nullptr; }
    const Vector& u0_trace() const { return u0h_; }

    // b(x) (plus G^T G x when stabilized).
    Vector apply(const Vector& x) const;
    // F (plus G^T s when stabilized).
    Vector rhs() const;
    Vector residual(const Vector& x) const { return apply(x) - rhs(); }
    Vector residual_unstabilized(const Vector& x) const;
    Matrix tangent(const Vector& x) const;
    // Constant (boundary) part of the block operator, n x n.
    const Matrix& boundary_block() const { return lin_; }
    // Trace restriction, trace_dofs x u_size.
    Matrix trace_matrix() const;

    void set_stabilization(Stabilization s);

    Vector pack(const CoupledSolution& s) const;
    CoupledSolution unpack(const Vector& x) const;

private:
    Method method_;
    std::shared_ptr<const FemSpace> sp_;
    std::shared_ptr<const BoundarySpace> bs_;
    std::shared_ptr<const LayerMatrices> layers_;
    MaterialLaw law_;
    int nu_, nphi_;
    std::vector<int> trace_dofs_;  // trace dof -> u dof
    Matrix lin_;
    Vector rhs_;
    Vector u0h_;
    std::optional<Stabilization> stab_;
};

CoupledSystem assemble_system(Method method, std::shared_ptr<const FemSpace> sp, std::shared_ptr<const BoundarySpace> bs,
                              std::shared_ptr<const LayerMatrices> layers, const ProblemData& data, bool stabilize,
                              XiKind xi = XiKind::P0Projected);

Vector assemble_rhs(Method method, const FemSpace& sp, const BoundarySpace& bs, const LayerMatrices& layers,
                    const ProblemData& data);

// Functionals g_j as rows of G and data s_j for the given method.
Stabilization stabilization_terms(const CoupledSystem& sys, const RigidFunctionals& xi);
// Throws std::invalid_argument when the functionals are linearly dependent.
void add_stabilization(CoupledSystem& sys, const RigidFunctionals& xi);

// Gram matrix of |||(u, phi)|||^2 = ||eps(u)||^2 + <phi, V phi> + sum_j g_j^2
// with the symmetric/JN functionals.
Matrix energy_gram(const CoupledSystem& sys, const RigidFunctionals& xi);
double energy_norm(const CoupledSystem& sys, const RigidFunctionals& xi, const CoupledSolution& x);

}  // namespace lamecouple
