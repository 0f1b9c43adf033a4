#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "lamecouple/material.hpp"
#include "lamecouple/mesh.hpp"

namespace lamecouple {

using CoefVector = Vector;
using VectorField = std::function<Vec2(const Vec2&)>;

// Vector P1 space; dof 2*node + component.
class FemSpace {
public:
    explicit FemSpace(std::shared_ptr<const Mesh> mesh);

    const Mesh& mesh() const { return *mesh_; }
    std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
    int dof_count() const { return 2 * mesh_->node_count(); }
    // Boundary nodes in loop order (matches BoundarySpace trace numbering).
    const std::vector<int>& trace_nodes() const { return trace_nodes_; }

    // Constant gradients of the three barycentric functions on triangle t.
    const Eigen::Matrix<double, 3, 2>& grads(int t) const { return grads_[t]; }
    double area(int t) const { return areas_[t]; }

private:
    std::shared_ptr<const Mesh> mesh_;
    std::vector<int> trace_nodes_;
    std::vector<Eigen::Matrix<double, 3, 2>> grads_;
    std::vector<double> areas_;
};

SymTensor2 strain_at(const FemSpace& sp, const CoefVector& u, int t);
double h1_seminorm(const FemSpace& sp, const CoefVector& u);

// Residual <A eps(u), eps(v_i)>; OpenMP over elements.
CoefVector assemble_nonlinear_form(const FemSpace& sp, const MaterialLaw& law, const CoefVector& u);
CoefVector assemble_nonlinear_form_serial(const FemSpace& sp, const MaterialLaw& law, const CoefVector& u);

Matrix assemble_tangent_matrix(const FemSpace& sp, const MaterialLaw& law, const CoefVector& u);
Matrix assemble_tangent_matrix_serial(const FemSpace& sp, const MaterialLaw& law, const CoefVector& u);

// Gram matrix of <eps(u), eps(v)>.
Matrix strain_gram(const FemSpace& sp);

// Edge-midpoint rule, exact for quadratic integrands.
CoefVector assemble_load(const FemSpace& sp, const VectorField& f);

CoefVector interpolate(const FemSpace& sp, const VectorField& f);

std::vector<VectorField> rigid_body_basis2();
using VectorField3 = std::function<Vec3(const Vec3&)>;
std::vector<VectorField3> rigid_body_basis3();
// D = 3 for d = 2 and D = 6 for d = 3; throws for other d.
int rigid_body_dimension(int d);
std::vector<CoefVector> rigid_coefficients(const FemSpace& sp);

}  // namespace lamecouple
