#include "lamecouple/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "lamecouple/quadrature.hpp"

namespace lamecouple {

double VerificationReport::certificate(const std::string& key) const
{
    for (auto& [k, v] : certificates)
        if (k == key) return v;
    throw std::out_of_range("no certificate '" + key + "' in report " + name);
}

namespace {

VerificationReport gram_report(const Matrix& gram, int dim)
{
    VerificationReport r;
    r.name = "rbm_independence";
    Vector sv = singular_values(gram);
    const double smax = sv[0], smin = sv[sv.size() - 1];
    r.pass = smin > 1e-12 * smax;
    r.certificates = {{"sigma_min", smin}, {"sigma_max", smax}, {"D", double(dim)}, {"tol_rel", 1e-12}};
    return r;
}

}  // namespace

VerificationReport check_rbm_independence(const std::vector<Segment>& edges)
{
    if (edges.empty()) throw std::invalid_argument("check_rbm_independence: no edges");
    const auto basis = rigid_body_basis2();
    Matrix gram = Matrix::Zero(3, 3);
    for (const auto& e : edges) {
        const double len = e.length();
        if (!(len > 0.0)) throw std::invalid_argument("check_rbm_independence: degenerate edge");
        Vec2 xi[3];
        for (int j = 0; j < 3; ++j) xi[j] = basis[j](e.midpoint());
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) gram(i, j) += len * xi[i].dot(xi[j]);
    }
    return gram_report(gram, 3);
}

VerificationReport check_rbm_independence(const BoundarySpace& bs)
{
    std::vector<Segment> edges;
    for (int k = 0; k < bs.edge_count(); ++k) edges.push_back(bs.edge(k));
    return check_rbm_independence(edges);
}

VerificationReport check_rbm_independence(const SurfaceMesh3& s)
{
    validate_closed_surface(s);
    const auto basis = rigid_body_basis3();
    Matrix gram = Matrix::Zero(6, 6);
    for (int t = 0; t < int(s.triangles.size()); ++t) {
        const double a = s.area(t);
        const Vec3 c = s.centroid(t);
        Vec3 xi[6];
        for (int j = 0; j < 6; ++j) xi[j] = basis[j](c);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) gram(i, j) += a * xi[i].dot(xi[j]);
    }
    return gram_report(gram, 6);
}

std::optional<CentroidTriple> find_noncollinear_centroids(const SurfaceMesh3& s)
{
    const int nt = int(s.triangles.size());
    if (nt < 3) return std::nullopt;
    Vec3 lo = s.nodes[0], hi = s.nodes[0];
    for (auto& p : s.nodes) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const double scale = (hi - lo).norm();
    if (!(scale > 0.0)) return std::nullopt;
    std::vector<Vec3> c(nt);
    for (int t = 0; t < nt; ++t) c[t] = s.centroid(t);
    int b = 0;
    for (int t = 1; t < nt; ++t)
        if ((c[t] - c[0]).squaredNorm() > (c[b] - c[0]).squaredNorm()) b = t;
    CentroidTriple best{{0, b, 0}, 0.0};
    for (int t = 0; t < nt; ++t) {
        double a2 = (c[b] - c[0]).cross(c[t] - c[0]).norm();
        if (a2 > best.area2) best = {{0, b, t}, a2};
    }
    if (!(best.area2 > 1e-12 * scale * scale)) return std::nullopt;
    return best;
}

VerificationReport check_centroids(const SurfaceMesh3& s, const std::string& name)
{
    VerificationReport r;
    r.name = name;
    auto found = find_noncollinear_centroids(s);
    r.pass = found.has_value();
    r.certificates = {{"triangles", double(s.triangles.size())}, {"area2", found ? found->area2 : 0.0}};
    if (found) {
        r.certificates.push_back({"A", double(found->tri[0])});
        r.certificates.push_back({"B", double(found->tri[1])});
        r.certificates.push_back({"C", double(found->tri[2])});
    } else {
        r.note = "no three triangles with non-collinear centroids";
    }
    return r;
}

ContractionEstimate estimate_contraction_constant(const BoundarySpace& bs, double lambda_ext, double mu_ext)
{
    const BoundarySpace fine = bs.bisected();
    const LayerMatrices lf = assemble_layer_matrices(fine, lambda_ext, mu_ext);
    const Matrix p = bs.prolongation();
    Eigen::LLT<Matrix> v(lf.V);
    if (v.info() != Eigen::Success) throw SingularMatrixError("estimate_contraction_constant: V not positive definite");
    const Matrix c = (0.5 * lf.M + lf.K) * p;
    const Matrix m = lf.M * p;
    const Matrix a = c.transpose() * v.solve(c);
    const Matrix b = m.transpose() * v.solve(m);
    Vector ev = generalized_sym_eigenvalues(a, b);
    return {std::sqrt(std::max(0.0, ev[ev.size() - 1])), 0, lambda_ext, mu_ext};
}

VerificationReport check_jn_condition(const JnInputs& in, JnVariant variant)
{
    if (!(in.c_K > 0.0) || !(in.lambda_ext > 0.0) || !(in.mu_ext > 0.0))
        throw std::invalid_argument("check_jn_condition: inputs must be positive");
    VerificationReport r;
    switch (variant) {
    case JnVariant::Theorem: {
        if (!(in.c_A > 0.0)) throw std::invalid_argument("check_jn_condition: c_A must be positive");
        const double lhs = 2.0 * in.c_A, rhs = in.c_K * (3.0 * in.lambda_ext + 2.0 * in.mu_ext);
        r.name = "jn_condition";
        r.pass = lhs > rhs;
        r.certificates = {{"lhs", lhs}, {"rhs", rhs}, {"margin", lhs - rhs}};
        break;
    }
    case JnVariant::Linear: {
        if (!(in.lambda_int > 0.0) || !(in.mu_int > 0.0)) throw std::invalid_argument("check_jn_condition: interior moduli must be positive");
        const double eta = std::min(in.lambda_int / in.lambda_ext, in.mu_int / in.mu_ext);
        r.name = "jn_condition_linear";
        r.pass = eta > in.c_K / 4.0;
        r.certificates = {{"eta", eta}, {"c_K/4", in.c_K / 4.0}, {"margin", eta - in.c_K / 4.0}};
        break;
    }
    case JnVariant::Hencky: {
        if (!in.hencky || !in.hencky->hencky()) throw std::invalid_argument("check_jn_condition: Hencky law required");
        const Hencky& h = *in.hencky->hencky();
        double inf_lam = INFINITY, inf_mu = INFINITY;
        for (double x : shear_profile_samples()) {
            inf_lam = std::min(inf_lam, h.K - h.mu_tilde(x));
            inf_mu = std::min(inf_mu, h.mu_tilde(x));
        }
        const double eta = std::min(inf_lam / in.lambda_ext, inf_mu / in.mu_ext);
        r.name = "jn_condition_hencky";
        r.pass = eta > in.c_K / 4.0;
        r.certificates = {{"eta", eta}, {"c_K/4", in.c_K / 4.0}, {"margin", eta - in.c_K / 4.0}};
        r.note = "infima sampled on [0, 1e7]";
        break;
    }
    }
    return r;
}

Discretization discretize(const Mesh& physical, double lambda_ext, double mu_ext, const LayerOptions& opt)
{
    Discretization d;
    auto [scaled, rec] = scale_to_unit(physical);
    d.mesh = std::make_shared<const Mesh>(std::move(scaled));
    d.scale = rec;
    d.fem = std::make_shared<const FemSpace>(d.mesh);
    d.boundary = std::make_shared<const BoundarySpace>(*d.fem);
    d.layers = std::make_shared<const LayerMatrices>(assemble_layer_matrices(*d.boundary, lambda_ext, mu_ext, opt));
    return d;
}

double strain_error(const ManufacturedProblem& p, const Discretization& d, const CoefVector& u)
{
    if (!p.has_exact()) return NAN;
    const Mesh& m = *d.mesh;
    const TriRule& tr = triangle_rule_deg5();
    const double t = d.scale.factor;
    double s = 0.0;
    for (int k = 0; k < m.triangle_count(); ++k) {
        const Tri& T = m.triangles()[k];
        SymTensor2 eh = strain_at(*d.fem, u, k);
        for (size_t q = 0; q < tr.w.size(); ++q) {
            Vec2 x = tr.bary[q][0] * m.nodes()[T[0]] + tr.bary[q][1] * m.nodes()[T[1]] + tr.bary[q][2] * m.nodes()[T[2]];
            Mat2 g = p.grad_u(d.scale.invert(x)) / t;
            SymTensor2 e{g(0, 0), g(1, 1), 0.5 * (g(0, 1) + g(1, 0))};
            SymTensor2 diff = e - eh;
            s += tr.w[q] * d.fem->area(k) * ddot(diff, diff);
        }
    }
    return std::sqrt(s);
}

double density_error(const ManufacturedProblem& p, const Discretization& d, const Vector& phi)
{
    if (!p.phi) return NAN;
    const BoundarySpace& bs = *d.boundary;
    const Rule1D& g = gauss_legendre(8);
    Vector delta(bs.density_dofs());
    for (int k = 0; k < bs.edge_count(); ++k) {
        Segment e = bs.edge(k);
        Vec2 mean = Vec2::Zero();
        for (size_t q = 0; q < g.x.size(); ++q) mean += g.w[q] * p.phi(d.scale.invert(e.at(g.x[q])), e.normal());
        delta.segment<2>(2 * k) = mean / d.scale.factor - phi.segment<2>(2 * k);
    }
    return std::sqrt(std::max(0.0, delta.dot(d.layers->V * delta)));
}

SolveReport solve_problem(const ManufacturedProblem& p, const Discretization& d, Method method, bool stabilize, XiKind xi,
                          const SolveOptions& opts)
{
    ProblemData data = p.data.scaled(d.scale);
    CoupledSystem sys = assemble_system(method, d.fem, d.boundary, d.layers, data, stabilize, xi);
    auto [sol, trace] = solve(sys, opts);
    SolveReport r{sol, trace};
    r.err_eps = strain_error(p, d, sol.u);
    if (method != Method::BielakMacCamy) r.err_phi = density_error(p, d, sol.phi);
    return r;
}

std::vector<LevelResult> convergence_study(const ManufacturedProblem& p, const StudyOptions& opt)
{
    if (opt.levels < 1) throw std::invalid_argument("convergence_study: levels >= 1");
    std::vector<LevelResult> out;
    Mesh m = build_polygon_mesh(opt.polygon, opt.h0);
    LayerOptions lo;
    lo.p1_test = opt.xi == XiKind::P1Rigid;
    for (int l = 1; l <= opt.levels; ++l) {
        if (l > 1) m = refine_uniform(m);
        Discretization d = discretize(m, p.data.lambda_ext, p.data.mu_ext, lo);
        SolveReport s = solve_problem(p, d, opt.method, opt.stabilize, opt.xi, opt.solver);
        LevelResult r;
        r.level = l;
        r.h = opt.h0 * std::pow(0.5, l - 1);
        r.dofs = d.fem->dof_count() + d.boundary->density_dofs();
        r.err_eps = s.err_eps;
        r.err_phi = s.err_phi;
        r.iters = s.trace.iterations;
        r.converged = s.trace.converged;
        if (!out.empty()) {
            r.rate_eps = std::log2(out.back().err_eps / r.err_eps);
            r.rate_phi = std::log2(out.back().err_phi / r.err_phi);
        }
        out.push_back(r);
    }
    return out;
}

}  // namespace lamecouple
