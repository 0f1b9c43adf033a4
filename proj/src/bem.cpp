#include "lamecouple/bem.hpp"

#include <cmath>
#include <stdexcept>

namespace lamecouple {

BoundarySpace::BoundarySpace(std::vector<Vec2> loop) : points_(std::move(loop))
{
    if (points_.size() < 3) throw std::invalid_argument("BoundarySpace: loop needs at least three nodes");
    double a = 0.0;
    for (int k = 0; k < edge_count(); ++k) {
        Segment e = edge(k);
        if (!(e.length() > 0.0)) throw std::invalid_argument("BoundarySpace: zero-length edge");
        a += e.a.x() * e.b.y() - e.a.y() * e.b.x();
    }
    if (!(a > 0.0)) throw std::invalid_argument("BoundarySpace: loop must be counterclockwise");
}

namespace {

std::vector<Vec2> trace_points(const FemSpace& sp)
{
    if (sp.mesh().loop_offsets().size() != 2)
        throw std::invalid_argument("BoundarySpace: mesh boundary must be a single closed loop");
    std::vector<Vec2> pts;
    for (int n : sp.trace_nodes()) pts.push_back(sp.mesh().nodes()[n]);
    return pts;
}

}  // namespace

BoundarySpace::BoundarySpace(const FemSpace& sp) : BoundarySpace(trace_points(sp)) {}

double BoundarySpace::length() const
{
    double l = 0.0;
    for (int k = 0; k < edge_count(); ++k) l += edge(k).length();
    return l;
}

BoundarySpace BoundarySpace::bisected() const
{
    std::vector<Vec2> pts;
    for (int k = 0; k < edge_count(); ++k) {
        pts.push_back(points_[k]);
        pts.push_back(edge(k).midpoint());
    }
    return BoundarySpace(std::move(pts));
}

Matrix BoundarySpace::prolongation() const
{
    const int nb = node_count();
    Matrix p = Matrix::Zero(4 * nb, 2 * nb);
    for (int i = 0; i < nb; ++i)
        for (int c = 0; c < 2; ++c) {
            p(2 * (2 * i) + c, 2 * i + c) = 1.0;
            p(2 * (2 * i + 1) + c, 2 * i + c) = 0.5;
            p(2 * (2 * i + 1) + c, 2 * ((i + 1) % nb) + c) = 0.5;
        }
    return p;
}

Vector BoundarySpace::interpolate_density(const VectorField& f) const
{
    Vector v(density_dofs());
    for (int k = 0; k < edge_count(); ++k) v.segment<2>(2 * k) = f(edge(k).midpoint());
    return v;
}

Vector BoundarySpace::interpolate_density(const std::function<Vec2(const Vec2&, const Vec2&)>& f) const
{
    Vector v(density_dofs());
    for (int k = 0; k < edge_count(); ++k) v.segment<2>(2 * k) = f(edge(k).midpoint(), edge(k).normal());
    return v;
}

Vector BoundarySpace::interpolate_trace(const VectorField& f) const
{
    Vector v(trace_dofs());
    for (int b = 0; b < node_count(); ++b) v.segment<2>(2 * b) = f(points_[b]);
    return v;
}

Matrix BoundarySpace::density_mass() const
{
    Matrix m = Matrix::Zero(density_dofs(), density_dofs());
    for (int k = 0; k < edge_count(); ++k) m(2 * k, 2 * k) = m(2 * k + 1, 2 * k + 1) = edge(k).length();
    return m;
}

Matrix tangential_derivative(const BoundarySpace& bs)
{
    const int ne = bs.edge_count(), nb = bs.node_count();
    Matrix d = Matrix::Zero(2 * ne, 2 * nb);
    for (int k = 0; k < ne; ++k) {
        const double inv = 1.0 / bs.edge(k).length();
        for (int c = 0; c < 2; ++c) {
            d(2 * k + c, 2 * k + c) = -inv;
            d(2 * k + c, 2 * ((k + 1) % nb) + c) = inv;
        }
    }
    return d;
}

Matrix mass_matrix(const BoundarySpace& bs)
{
    const int ne = bs.edge_count(), nb = bs.node_count();
    Matrix m = Matrix::Zero(2 * ne, 2 * nb);
    for (int k = 0; k < ne; ++k) {
        const double h = 0.5 * bs.edge(k).length();
        for (int c = 0; c < 2; ++c) {
            m(2 * k + c, 2 * k + c) = h;
            m(2 * k + c, 2 * ((k + 1) % nb) + c) = h;
        }
    }
    return m;
}

namespace {

struct PairData {
    SingleLayerPanel sl;
    DoubleLayerPanel dl;
};

std::vector<PairData> panel_pairs(const BoundarySpace& bs, double lambda, double mu, bool parallel)
{
    const int ne = bs.edge_count();
    std::vector<PairData> pairs(size_t(ne) * ne);
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
    for (int k = 0; k < ne; ++k) {
        const Segment ek = bs.edge(k);
        for (int j = 0; j < ne; ++j) {
            const Segment ej = bs.edge(j);
            PairData& p = pairs[size_t(k) * ne + j];
            p.sl = singular_edge_quadrature(ek, ej);
            p.dl = double_layer_panel(ek, ej, lambda, mu);
        }
    }
    return pairs;
}

}  // namespace

LayerMatrices assemble_layer_matrices(const BoundarySpace& bs, double lambda, double mu, const LayerOptions& opt)
{
    if (!(lambda > 0.0) || !(mu > 0.0)) throw std::invalid_argument("exterior Lame constants must be positive");
    const int ne = bs.edge_count(), nb = bs.node_count();
    const auto pairs = panel_pairs(bs, lambda, mu, opt.parallel);

    const double den = 4.0 * M_PI * mu * (lambda + 2.0 * mu);
    const double c1 = (lambda + 3.0 * mu) / den, c2 = (lambda + mu) / den;
    const double c3 = mu / (2.0 * M_PI * (lambda + 2.0 * mu));
    const double cw = mu * (lambda + mu) / (M_PI * (lambda + 2.0 * mu));
    Mat2 eps;
    eps << 0, 1, -1, 0;

    // log and zz Galerkin blocks, P0 test; optional P1 test rows
    Matrix lg = Matrix::Zero(ne, ne);
    Matrix lg1 = Matrix::Zero(opt.p1_test ? nb : 0, ne);
    Matrix zz = Matrix::Zero(2 * ne, 2 * ne);
    Matrix zz1 = Matrix::Zero(opt.p1_test ? 2 * nb : 0, 2 * ne);
    Matrix kreg = Matrix::Zero(2 * ne, 2 * nb);
    Matrix kreg1 = Matrix::Zero(opt.p1_test ? 2 * nb : 0, 2 * nb);
    for (int k = 0; k < ne; ++k)
        for (int j = 0; j < ne; ++j) {
            const PairData& p = pairs[size_t(k) * ne + j];
            const int tn[2] = {j, (j + 1) % nb};
            const int on[2] = {k, (k + 1) % nb};
            lg(k, j) = p.sl.log[0] + p.sl.log[1];
            zz.block<2, 2>(2 * k, 2 * j) = p.sl.zz[0] + p.sl.zz[1];
            for (int q = 0; q < 2; ++q) kreg.block<2, 2>(2 * k, 2 * tn[q]) += p.dl.k[0][q] + p.dl.k[1][q];
            if (opt.p1_test)
                for (int w = 0; w < 2; ++w) {
                    lg1(on[w], j) += p.sl.log[w];
                    zz1.block<2, 2>(2 * on[w], 2 * j) += p.sl.zz[w];
                    for (int q = 0; q < 2; ++q) kreg1.block<2, 2>(2 * on[w], 2 * tn[q]) += p.dl.k[w][q];
                }
        }

    auto expand = [](const Matrix& s) {
        Matrix out = Matrix::Zero(2 * s.rows(), 2 * s.cols());
        for (int i = 0; i < s.rows(); ++i)
            for (int j = 0; j < s.cols(); ++j) out(2 * i, 2 * j) = out(2 * i + 1, 2 * j + 1) = s(i, j);
        return out;
    };
    auto rotate = [&](const Matrix& s) {
        Matrix out = Matrix::Zero(2 * s.rows(), 2 * s.cols());
        for (int i = 0; i < s.rows(); ++i)
            for (int j = 0; j < s.cols(); ++j) out.block<2, 2>(2 * i, 2 * j) = s(i, j) * eps;
        return out;
    };
    const Matrix d = tangential_derivative(bs);
    // tangential derivative acts componentwise, so scalar D rows suffice
    Matrix ds = Matrix::Zero(ne, nb);
    for (int k = 0; k < ne; ++k) {
        ds(k, k) = d(2 * k, 2 * k);
        ds(k, (k + 1) % nb) = d(2 * k, 2 * ((k + 1) % nb));
    }

    LayerMatrices out;
    out.lambda = lambda;
    out.mu = mu;
    double diam = 0.0;
    for (const Vec2& a : bs.points())
        for (const Vec2& b : bs.points()) diam = std::max(diam, (a - b).norm());
    out.unscaled = diam > 0.5 * (1.0 + 1e-12);
    out.V = -c1 * expand(lg) + c2 * zz;
    out.V = 0.5 * (out.V + out.V.transpose());
    out.M = mass_matrix(bs);
    out.K = kreg + c3 * rotate(lg * ds);
    Matrix wk = -expand(lg) + zz;
    out.W = cw * d.transpose() * wk * d;
    out.W = 0.5 * (out.W + out.W.transpose());
    if (opt.p1_test) {
        out.V1 = -c1 * expand(lg1) + c2 * zz1;
        out.K1 = kreg1 + c3 * rotate(lg1 * ds);
        out.M1 = Matrix::Zero(2 * nb, 2 * nb);
        for (int k = 0; k < ne; ++k) {
            const double l = bs.edge(k).length();
            const int a = k, b = (k + 1) % nb;
            for (int c = 0; c < 2; ++c) {
                out.M1(2 * a + c, 2 * a + c) += l / 3.0;
                out.M1(2 * b + c, 2 * b + c) += l / 3.0;
                out.M1(2 * a + c, 2 * b + c) += l / 6.0;
                out.M1(2 * b + c, 2 * a + c) += l / 6.0;
            }
        }
    }
    return out;
}

Matrix assemble_V(const BoundarySpace& bs, double lambda, double mu) { return assemble_layer_matrices(bs, lambda, mu).V; }

std::pair<Matrix, Matrix> assemble_K_and_M(const BoundarySpace& bs, double lambda, double mu)
{
    auto lm = assemble_layer_matrices(bs, lambda, mu);
    return {lm.K, lm.M};
}

Matrix assemble_W(const BoundarySpace& bs, double lambda, double mu) { return assemble_layer_matrices(bs, lambda, mu).W; }

Matrix assemble_W_calderon(const Matrix& V, const Matrix& K, const Matrix& M)
{
    Eigen::LLT<Matrix> llt(V);
    if (llt.info() != Eigen::Success) throw SingularMatrixError("assemble_W_calderon: V is not positive definite");
    Matrix w = (0.5 * M - K).transpose() * llt.solve(0.5 * M + K);
    return 0.5 * (w + w.transpose());
}

}  // namespace lamecouple
