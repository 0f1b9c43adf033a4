#include "lamecouple/fem.hpp"

#include <stdexcept>

namespace lamecouple {

namespace {

using ElemMat = Eigen::Matrix<double, 6, 6>;
using ElemVec = Eigen::Matrix<double, 6, 1>;
using BMat = Eigen::Matrix<double, 3, 6>;

// Maps local dofs (node a, component c) -> voigt strain (xx, yy, xy).
BMat strain_operator(const Eigen::Matrix<double, 3, 2>& g)
{
    BMat b = BMat::Zero();
    for (int a = 0; a < 3; ++a) {
        b(0, 2 * a) = g(a, 0);
        b(1, 2 * a + 1) = g(a, 1);
        b(2, 2 * a) = 0.5 * g(a, 1);
        b(2, 2 * a + 1) = 0.5 * g(a, 0);
    }
    return b;
}

const Eigen::Vector3d kFrob(1.0, 1.0, 2.0);

ElemVec local_dofs(const FemSpace& sp, const CoefVector& u, int t)
{
    const Tri& T = sp.mesh().triangles()[t];
    ElemVec v;
    for (int a = 0; a < 3; ++a) {
        v[2 * a] = u[2 * T[a]];
        v[2 * a + 1] = u[2 * T[a] + 1];
    }
    return v;
}

void check_size(const FemSpace& sp, const CoefVector& u)
{
    if (u.size() != sp.dof_count()) throw std::invalid_argument("coefficient vector does not match FemSpace");
}

// P1 strains are element-constant, so one evaluation per element is exact
// for both material laws.
ElemVec element_residual(const FemSpace& sp, const MaterialLaw& law, const CoefVector& u, int t)
{
    BMat b = strain_operator(sp.grads(t));
    SymTensor2 e = SymTensor2::from_voigt(b * local_dofs(sp, u, t));
    Eigen::Vector3d s = eval_stress(law, e).voigt();
    return sp.area(t) * b.transpose() * kFrob.asDiagonal() * s;
}

ElemMat element_tangent(const FemSpace& sp, const MaterialLaw& law, const CoefVector& u, int t)
{
    BMat b = strain_operator(sp.grads(t));
    SymTensor2 e = SymTensor2::from_voigt(b * local_dofs(sp, u, t));
    Eigen::Matrix3d d = kFrob.asDiagonal() * eval_tangent(law, e);
    ElemMat k = sp.area(t) * b.transpose() * d * b;
    return 0.5 * (k + k.transpose());
}

void scatter(const FemSpace& sp, int t, const ElemVec& v, CoefVector& out)
{
    const Tri& T = sp.mesh().triangles()[t];
    for (int a = 0; a < 3; ++a)
        for (int c = 0; c < 2; ++c) out[2 * T[a] + c] += v[2 * a + c];
}

void scatter(const FemSpace& sp, int t, const ElemMat& k, Matrix& out)
{
    const Tri& T = sp.mesh().triangles()[t];
    for (int a = 0; a < 3; ++a)
        for (int c = 0; c < 2; ++c)
            for (int b = 0; b < 3; ++b)
                for (int d = 0; d < 2; ++d) out(2 * T[a] + c, 2 * T[b] + d) += k(2 * a + c, 2 * b + d);
}

}  // namespace

FemSpace::FemSpace(std::shared_ptr<const Mesh> mesh) : mesh_(std::move(mesh))
{
    if (!mesh_) throw std::invalid_argument("FemSpace: null mesh");
    const Mesh& m = *mesh_;
    for (auto& e : m.boundary_edges()) trace_nodes_.push_back(e[0]);
    grads_.resize(m.triangle_count());
    areas_.resize(m.triangle_count());
    for (int t = 0; t < m.triangle_count(); ++t) {
        const Tri& T = m.triangles()[t];
        const Vec2 &p0 = m.nodes()[T[0]], &p1 = m.nodes()[T[1]], &p2 = m.nodes()[T[2]];
        Eigen::Matrix2d j;
        j.col(0) = p1 - p0;
        j.col(1) = p2 - p0;
        // reference gradients of (1-s-t, s, t)
        Eigen::Matrix<double, 3, 2> ref;
        ref << -1, -1, 1, 0, 0, 1;
        grads_[t] = ref * j.inverse();
        areas_[t] = m.signed_area(t);
    }
}

SymTensor2 strain_at(const FemSpace& sp, const CoefVector& u, int t)
{
    check_size(sp, u);
    return SymTensor2::from_voigt(strain_operator(sp.grads(t)) * local_dofs(sp, u, t));
}

double h1_seminorm(const FemSpace& sp, const CoefVector& u)
{
    check_size(sp, u);
    double s = 0.0;
    for (int t = 0; t < sp.mesh().triangle_count(); ++t) {
        SymTensor2 e = strain_at(sp, u, t);
        s += sp.area(t) * ddot(e, e);
    }
    return std::sqrt(s);
}

CoefVector assemble_nonlinear_form(const FemSpace& sp, const MaterialLaw& law, const CoefVector& u)
{
    check_size(sp, u);
    const int nt = sp.mesh().triangle_count();
    std::vector<ElemVec> local(nt);
#pragma omp parallel for schedule(static)
    for (int t = 0; t < nt; ++t) local[t] = element_residual(sp, law, u, t);
    CoefVector r = CoefVector::Zero(sp.dof_count());
    for (int t = 0; t < nt; ++t) scatter(sp, t, local[t], r);
    return r;
}

CoefVector assemble_nonlinear_form_serial(const FemSpace& sp, const MaterialLaw& law, const CoefVector& u)
{
    check_size(sp, u);
    CoefVector r = CoefVector::Zero(sp.dof_count());
    for (int t = 0; t < sp.mesh().triangle_count(); ++t) scatter(sp, t, element_residual(sp, law, u, t), r);
    return r;
}

Matrix assemble_tangent_matrix(const FemSpace& sp, const MaterialLaw& law, const CoefVector& u)
{
    check_size(sp, u);
    const int nt = sp.mesh().triangle_count();
    std::vector<ElemMat> local(nt);
#pragma omp parallel for schedule(static)
    for (int t = 0; t < nt; ++t) local[t] = element_tangent(sp, law, u, t);
    Matrix k = Matrix::Zero(sp.dof_count(), sp.dof_count());
    for (int t = 0; t < nt; ++t) scatter(sp, t, local[t], k);
    return k;
}

Matrix assemble_tangent_matrix_serial(const FemSpace& sp, const MaterialLaw& law, const CoefVector& u)
{
    check_size(sp, u);
    Matrix k = Matrix::Zero(sp.dof_count(), sp.dof_count());
    for (int t = 0; t < sp.mesh().triangle_count(); ++t) scatter(sp, t, element_tangent(sp, law, u, t), k);
    return k;
}

Matrix strain_gram(const FemSpace& sp)
{
    // lambda = 0, mu = 1/2 gives sigma = eps; bypasses the positivity check
    Matrix k = Matrix::Zero(sp.dof_count(), sp.dof_count());
    for (int t = 0; t < sp.mesh().triangle_count(); ++t) {
        BMat b = strain_operator(sp.grads(t));
        ElemMat e = sp.area(t) * b.transpose() * kFrob.asDiagonal() * b;
        scatter(sp, t, e, k);
    }
    return k;
}

CoefVector assemble_load(const FemSpace& sp, const VectorField& f)
{
    const Mesh& m = sp.mesh();
    CoefVector r = CoefVector::Zero(sp.dof_count());
    for (int t = 0; t < m.triangle_count(); ++t) {
        const Tri& T = m.triangles()[t];
        const double w = sp.area(t) / 3.0;
        for (int k = 0; k < 3; ++k) {
            int a = T[k], b = T[(k + 1) % 3];
            Vec2 fv = f(0.5 * (m.nodes()[a] + m.nodes()[b]));
            // both endpoint hats equal 1/2 at the midpoint
            for (int c = 0; c < 2; ++c) {
                r[2 * a + c] += 0.5 * w * fv[c];
                r[2 * b + c] += 0.5 * w * fv[c];
            }
        }
    }
    return r;
}

CoefVector interpolate(const FemSpace& sp, const VectorField& f)
{
    CoefVector u(sp.dof_count());
    for (int i = 0; i < sp.mesh().node_count(); ++i) u.segment<2>(2 * i) = f(sp.mesh().nodes()[i]);
    return u;
}

std::vector<VectorField> rigid_body_basis2()
{
    return {[](const Vec2&) { return Vec2(1, 0); }, [](const Vec2&) { return Vec2(0, 1); },
            [](const Vec2& x) { return Vec2(-x.y(), x.x()); }};
}

std::vector<VectorField3> rigid_body_basis3()
{
    return {[](const Vec3&) { return Vec3(1, 0, 0); },
            [](const Vec3&) { return Vec3(0, 1, 0); },
            [](const Vec3&) { return Vec3(0, 0, 1); },
            [](const Vec3& x) { return Vec3(-x.y(), x.x(), 0); },
            [](const Vec3& x) { return Vec3(0, -x.z(), x.y()); },
            [](const Vec3& x) { return Vec3(x.z(), 0, -x.x()); }};
}

int rigid_body_dimension(int d)
{
    if (d == 2) return 3;
    if (d == 3) return 6;
    throw std::invalid_argument("rigid body motions are defined for d = 2 or 3");
}

std::vector<CoefVector> rigid_coefficients(const FemSpace& sp)
{
    std::vector<CoefVector> out;
    for (auto& r : rigid_body_basis2()) out.push_back(interpolate(sp, r));
    return out;
}

}  // namespace lamecouple
