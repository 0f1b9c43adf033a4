#include "lamecouple/coupling.hpp"

#include <stdexcept>

#include "lamecouple/quadrature.hpp"

namespace lamecouple {

Method parse_method(const std::string& s)
{
    if (s == "symmetric") return Method::Symmetric;
    if (s == "jn") return Method::JohnsonNedelec;
    if (s == "bmc") return Method::BielakMacCamy;
    throw std::invalid_argument("unknown coupling method '" + s + "'");
}

const char* to_string(Method m)
{
    switch (m) {
    case Method::Symmetric: return "symmetric";
    case Method::JohnsonNedelec: return "jn";
    case Method::BielakMacCamy: return "bmc";
    }
    return "?";
}

ProblemData ProblemData::scaled(const ScaleRecord& rec) const
{
    ProblemData d = *this;
    const double t = rec.factor;
    VectorField f0 = f, g0 = u0;
    TractionField p0 = phi0;
    d.f = [f0, rec, t](const Vec2& x) { return Vec2(f0(rec.invert(x)) / (t * t)); };
    d.u0 = [g0, rec](const Vec2& x) { return g0(rec.invert(x)); };
    d.phi0 = [p0, rec, t](const Vec2& x, const Vec2& n) { return Vec2(p0(rec.invert(x), n) / t); };
    d.material = material.rescaled(t);
    return d;
}

std::array<double, 2> compatibility_residuals(const FemSpace& sp, const BoundarySpace& bs, const ProblemData& data)
{
    Vec2 acc = Vec2::Zero();
    const Mesh& m = sp.mesh();
    const TriRule& tr = triangle_rule_deg5();
    for (int t = 0; t < m.triangle_count(); ++t) {
        const Tri& T = m.triangles()[t];
        for (size_t q = 0; q < tr.w.size(); ++q) {
            Vec2 x = tr.bary[q][0] * m.nodes()[T[0]] + tr.bary[q][1] * m.nodes()[T[1]] + tr.bary[q][2] * m.nodes()[T[2]];
            acc += tr.w[q] * sp.area(t) * data.f(x);
        }
    }
    const Rule1D& g = gauss_legendre(8);
    for (int k = 0; k < bs.edge_count(); ++k) {
        Segment e = bs.edge(k);
        for (size_t q = 0; q < g.x.size(); ++q) acc += g.w[q] * e.length() * data.phi0(e.at(g.x[q]), e.normal());
    }
    return {acc.x(), acc.y()};
}

RigidFunctionals project_rbm(const BoundarySpace& bs)
{
    // rigid fields are affine, so the P0 projection is the midpoint value
    RigidFunctionals out;
    out.kind = XiKind::P0Projected;
    for (auto& r : rigid_body_basis2()) out.xi.push_back(bs.interpolate_density(r));
    return out;
}

RigidFunctionals rigid_traces(const BoundarySpace& bs)
{
    RigidFunctionals out;
    out.kind = XiKind::P1Rigid;
    for (auto& r : rigid_body_basis2()) out.xi.push_back(bs.interpolate_trace(r));
    return out;
}

namespace {

Matrix selection(int rows, int cols, const std::vector<int>& map)
{
    Matrix t = Matrix::Zero(rows, cols);
    for (int i = 0; i < rows; ++i) t(i, map[i]) = 1.0;
    return t;
}

std::vector<int> trace_dof_map(const FemSpace& sp, const BoundarySpace& bs)
{
    const auto& tn = sp.trace_nodes();
    if (int(tn.size()) != bs.node_count()) throw std::invalid_argument("FemSpace and BoundarySpace are not trace-compatible");
    std::vector<int> map(bs.trace_dofs());
    for (int b = 0; b < bs.node_count(); ++b) {
        if ((sp.mesh().nodes()[tn[b]] - bs.points()[b]).norm() > 1e-12)
            throw std::invalid_argument("FemSpace and BoundarySpace are not trace-compatible");
        map[2 * b] = 2 * tn[b];
        map[2 * b + 1] = 2 * tn[b] + 1;
    }
    return map;
}

}  // namespace

Vector assemble_rhs(Method method, const FemSpace& sp, const BoundarySpace& bs, const LayerMatrices& lm,
                    const ProblemData& data)
{
    const auto map = trace_dof_map(sp, bs);
    const int nu = sp.dof_count(), nphi = bs.density_dofs();
    Vector rhs = Vector::Zero(nu + nphi);
    rhs.head(nu) = assemble_load(sp, data.f);
    const Vector phi0h = bs.interpolate_density(data.phi0);
    const Vector u0h = bs.interpolate_trace(data.u0);
    Vector tr = lm.M.transpose() * phi0h;
    if (method == Method::Symmetric) tr += lm.W * u0h;
    for (int i = 0; i < int(map.size()); ++i) rhs[map[i]] += tr[i];
    if (method == Method::BielakMacCamy)
        rhs.tail(nphi) = -lm.M * u0h;
    else
        rhs.tail(nphi) = (0.5 * lm.M - lm.K) * u0h;
    return rhs;
}

CoupledSystem::CoupledSystem(Method method, std::shared_ptr<const FemSpace> sp, std::shared_ptr<const BoundarySpace> bs,
                             std::shared_ptr<const LayerMatrices> layers, const ProblemData& data)
    : method_(method), sp_(std::move(sp)), bs_(std::move(bs)), layers_(std::move(layers)), law_(data.material)
{
    if (!sp_ || !bs_ || !layers_) throw std::invalid_argument("CoupledSystem: null component");
    nu_ = sp_->dof_count();
    nphi_ = bs_->density_dofs();
    trace_dofs_ = trace_dof_map(*sp_, *bs_);
    const LayerMatrices& L = *layers_;
    if (L.V.rows() != nphi_ || L.M.cols() != bs_->trace_dofs()) throw std::invalid_argument("CoupledSystem: layer matrix sizes");
    const Matrix T = trace_matrix();
    lin_ = Matrix::Zero(size(), size());
    const Matrix half_m_minus_k = 0.5 * L.M - L.K;
    switch (method_) {
    case Method::Symmetric:
        lin_.topLeftCorner(nu_, nu_) = T.transpose() * L.W * T;
        lin_.topRightCorner(nu_, nphi_) = -(T.transpose() * half_m_minus_k.transpose());
        lin_.bottomLeftCorner(nphi_, nu_) = half_m_minus_k * T;
        break;
    case Method::JohnsonNedelec:
        lin_.topRightCorner(nu_, nphi_) = -(T.transpose() * L.M.transpose());
        lin_.bottomLeftCorner(nphi_, nu_) = half_m_minus_k * T;
        break;
    case Method::BielakMacCamy:
        lin_.topRightCorner(nu_, nphi_) = T.transpose() * half_m_minus_k.transpose();
        lin_.bottomLeftCorner(nphi_, nu_) = -L.M * T;
        break;
    }
    lin_.bottomRightCorner(nphi_, nphi_) = L.V;
    rhs_ = assemble_rhs(method_, *sp_, *bs_, L, data);
    u0h_ = bs_->interpolate_trace(data.u0);
}

Matrix CoupledSystem::trace_matrix() const { return selection(bs_->trace_dofs(), nu_, trace_dofs_); }

Vector CoupledSystem::residual_unstabilized(const Vector& x) const
{
    if (x.size() != size()) throw std::invalid_argument("block vector size mismatch");
    Vector r = lin_ * x - rhs_;
    r.head(nu_) += assemble_nonlinear_form(*sp_, law_, x.head(nu_));
    return r;
}

Vector CoupledSystem::apply(const Vector& x) const
{
    if (x.size() != size()) throw std::invalid_argument("block vector size mismatch");
    Vector r = lin_ * x;
    r.head(nu_) += assemble_nonlinear_form(*sp_, law_, x.head(nu_));
    if (stab_) r += stab_->G.transpose() * (stab_->G * x);
    return r;
}

Vector CoupledSystem::rhs() const
{
    if (!stab_) return rhs_;
    return rhs_ + stab_->G.transpose() * stab_->s;
}

Matrix CoupledSystem::tangent(const Vector& x) const
{
    if (x.size() != size()) throw std::invalid_argument("block vector size mismatch");
    Matrix t = lin_;
    t.topLeftCorner(nu_, nu_) += assemble_tangent_matrix(*sp_, law_, x.head(nu_));
    if (stab_) t += stab_->G.transpose() * stab_->G;
    return t;
}

void CoupledSystem::set_stabilization(Stabilization s)
{
    if (s.G.cols() != size() || s.G.rows() != s.s.size()) throw std::invalid_argument("stabilization size mismatch");
    stab_ = std::move(s);
}

Vector CoupledSystem::pack(const CoupledSolution& s) const
{
    if (s.u.size() != nu_ || s.phi.size() != nphi_) throw std::invalid_argument("solution size mismatch");
    Vector x(size());
    x << s.u, s.phi;
    return x;
}

CoupledSolution CoupledSystem::unpack(const Vector& x) const
{
    if (x.size() != size()) throw std::invalid_argument("block vector size mismatch");
    return {x.head(nu_), x.tail(nphi_)};
}

namespace {

struct FunctionalBlocks {
    Matrix X;           // columns xi^j
    const Matrix* V;    // tested against xi
    const Matrix* K;
    const Matrix* M;
};

FunctionalBlocks functional_blocks(const CoupledSystem& sys, const RigidFunctionals& xi)
{
    const LayerMatrices& L = sys.layers();
    const bool p1 = xi.kind == XiKind::P1Rigid;
    if (p1 && L.V1.size() == 0) throw std::invalid_argument("P1 rigid functionals need P1-tested layer matrices");
    FunctionalBlocks fb{Matrix(), p1 ? &L.V1 : &L.V, p1 ? &L.K1 : &L.K, p1 ? &L.M1 : &L.M};
    const int expected = p1 ? sys.boundary().trace_dofs() : sys.boundary().density_dofs();
    fb.X.resize(expected, int(xi.xi.size()));
    for (int j = 0; j < int(xi.xi.size()); ++j) {
        if (xi.xi[j].size() != expected) throw std::invalid_argument("functional size mismatch");
        fb.X.col(j) = xi.xi[j];
    }
    return fb;
}

// Rows g_j(u, phi) = <xi^j, (1/2 - K)u + V phi>, or <xi^j, V phi - u> when bmc.
Stabilization functional_rows(const CoupledSystem& sys, const RigidFunctionals& xi, bool bmc)
{
    FunctionalBlocks fb = functional_blocks(sys, xi);
    const Matrix T = sys.trace_matrix();
    const Matrix trace_op = bmc ? Matrix(-*fb.M) : Matrix(0.5 * *fb.M - *fb.K);
    Stabilization st;
    st.G = Matrix::Zero(fb.X.cols(), sys.size());
    st.G.leftCols(sys.u_size()) = fb.X.transpose() * trace_op * T;
    st.G.rightCols(sys.phi_size()) = fb.X.transpose() * *fb.V;
    st.s = fb.X.transpose() * trace_op * sys.u0_trace();
    return st;
}

}  // namespace

Stabilization stabilization_terms(const CoupledSystem& sys, const RigidFunctionals& xi)
{
    return functional_rows(sys, xi, sys.method() == Method::BielakMacCamy);
}

namespace {

void check_independent(const BoundarySpace& bs, const RigidFunctionals& xi, const LayerMatrices& L)
{
    const int d = int(xi.xi.size());
    if (d == 0) throw std::invalid_argument("no stabilization functionals");
    Matrix mass = xi.kind == XiKind::P1Rigid ? L.M1 : bs.density_mass();
    Matrix gram(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) gram(i, j) = xi.xi[i].dot(mass * xi.xi[j]);
    Vector sv = singular_values(gram);
    if (!(sv[d - 1] > 1e-12 * sv[0])) throw std::invalid_argument("stabilization functionals are linearly dependent");
}

}  // namespace

void add_stabilization(CoupledSystem& sys, const RigidFunctionals& xi)
{
    check_independent(sys.boundary(), xi, sys.layers());
    sys.set_stabilization(stabilization_terms(sys, xi));
}

CoupledSystem assemble_system(Method method, std::shared_ptr<const FemSpace> sp, std::shared_ptr<const BoundarySpace> bs,
                              std::shared_ptr<const LayerMatrices> layers, const ProblemData& data, bool stabilize, XiKind xi)
{
    CoupledSystem sys(method, sp, bs, layers, data);
    if (stabilize) add_stabilization(sys, xi == XiKind::P1Rigid ? rigid_traces(*bs) : project_rbm(*bs));
    return sys;
}

Matrix energy_gram(const CoupledSystem& sys, const RigidFunctionals& xi)
{
    const int nu = sys.u_size(), np = sys.phi_size();
    Matrix e = Matrix::Zero(sys.size(), sys.size());
    e.topLeftCorner(nu, nu) = strain_gram(sys.fem());
    e.bottomRightCorner(np, np) = sys.layers().V;
    const Matrix g = functional_rows(sys, xi, false).G;
    return e + g.transpose() * g;
}

double energy_norm(const CoupledSystem& sys, const RigidFunctionals& xi, const CoupledSolution& x)
{
    Vector v = sys.pack(x);
    return std::sqrt(std::max(0.0, v.dot(energy_gram(sys, xi) * v)));
}

}  // namespace lamecouple
