#include <algorithm>
#include <cmath>
#include <functional>

#include "lamecouple/bem.hpp"
#include "lamecouple/quadrature.hpp"

namespace lamecouple {

namespace {

double point_segment_distance(const Vec2& p, const Segment& s)
{
    Vec2 d = s.b - s.a;
    double t = std::clamp((p - s.a).dot(d) / d.squaredNorm(), 0.0, 1.0);
    return (p - s.a - t * d).norm();
}

// Antiderivatives in s = t - p of the inner integrands with offset q.
struct InnerPrimitive {
    double q;
    double log_part(double s) const
    {
        if (q == 0.0) return s == 0.0 ? 0.0 : s * std::log(std::abs(s)) - s;
        return 0.5 * s * std::log(s * s + q * q) - s + q * std::atan(s / q);
    }
    double ss(double s) const { return q == 0.0 ? s : s - q * std::atan(s / q); }
    double sq(double s) const { return q == 0.0 ? 0.0 : 0.5 * q * std::log(s * s + q * q); }
    double qq(double s) const { return q == 0.0 ? 0.0 : q * std::atan(s / q); }
};

// int_inner log|x - y| dy and int_inner zz^T/|z|^2 dy, z = x - y.
void inner_single_layer(const Segment& in, const Vec2& x, double& lg, Mat2& zz)
{
    const double len = in.length();
    const Vec2 tau = in.tangent(), nrm = in.normal();
    const Vec2 r = x - in.a;
    const double p = r.dot(tau), q = r.dot(nrm);
    InnerPrimitive f{q};
    const double s0 = -p, s1 = len - p;
    lg = f.log_part(s1) - f.log_part(s0);
    // z = -s tau + q n
    const double iss = f.ss(s1) - f.ss(s0);
    const double isq = f.sq(s1) - f.sq(s0);
    const double iqq = f.qq(s1) - f.qq(s0);
    Mat2 tt = tau * tau.transpose(), nn = nrm * nrm.transpose(), tn = tau * nrm.transpose() + nrm * tau.transpose();
    zz = iss * tt - isq * tn + iqq * nn;
}

bool same(const Vec2& a, const Vec2& b) { return a == b; }

void accumulate_outer(const Segment& out, const Segment& in, double s0, double s1, SingleLayerPanel& acc)
{
    const Rule1D& g = gauss_legendre(8);
    const double len = out.length();
    for (size_t i = 0; i < g.x.size(); ++i) {
        const double s = s0 + (s1 - s0) * g.x[i];
        const double w = (s1 - s0) * g.w[i] * len;
        double lg;
        Mat2 zz;
        inner_single_layer(in, out.at(s), lg, zz);
        acc.log[0] += (1.0 - s) * w * lg;
        acc.log[1] += s * w * lg;
        acc.zz[0] += (1.0 - s) * w * zz;
        acc.zz[1] += s * w * zz;
    }
}

void adaptive_outer(const Segment& out, const Segment& in, double s0, double s1, int depth, SingleLayerPanel& acc)
{
    const double len = out.length() * (s1 - s0);
    Segment piece{out.at(s0), out.at(s1)};
    if (depth > 60 || len < 1e-13 * out.length() || segment_distance(piece, in) >= 2.0 * len) {
        accumulate_outer(out, in, s0, s1, acc);
        return;
    }
    const double m = 0.5 * (s0 + s1);
    adaptive_outer(out, in, s0, m, depth + 1, acc);
    adaptive_outer(out, in, m, s1, depth + 1, acc);
}

// Regular part of the traction kernel, r = y - x, n = n(y).
Mat2 regular_kernel(const Vec2& x, const Vec2& y, const Vec2& ny, double lambda, double mu)
{
    const Vec2 r = y - x;
    const double r2 = r.squaredNorm();
    const double c = -1.0 / (2.0 * M_PI * (lambda + 2.0 * mu)) * r.dot(ny) / r2;
    return c * (mu * Mat2::Identity() + 2.0 * (lambda + mu) * (r * r.transpose()) / r2);
}

void tensor_gauss_dl(const Segment& out, const Segment& in, double a0, double a1, double b0, double b1, double lambda,
                     double mu, DoubleLayerPanel& acc)
{
    const Rule1D& g = gauss_legendre(8);
    const double lo = out.length(), li = in.length();
    const Vec2 ny = in.normal();
    for (size_t i = 0; i < g.x.size(); ++i) {
        const double s = a0 + (a1 - a0) * g.x[i];
        const Vec2 x = out.at(s);
        const double wx = (a1 - a0) * g.w[i] * lo;
        for (size_t j = 0; j < g.x.size(); ++j) {
            const double t = b0 + (b1 - b0) * g.x[j];
            const double w = wx * (b1 - b0) * g.w[j] * li;
            Mat2 k = w * regular_kernel(x, in.at(t), ny, lambda, mu);
            const double ws[2] = {1.0 - s, s}, wt[2] = {1.0 - t, t};
            for (int p = 0; p < 2; ++p)
                for (int q = 0; q < 2; ++q) acc.k[p][q] += ws[p] * wt[q] * k;
        }
    }
}

void subdivided_dl(const Segment& out, const Segment& in, double a0, double a1, double b0, double b1, int depth,
                   double lambda, double mu, DoubleLayerPanel& acc)
{
    Segment po{out.at(a0), out.at(a1)}, pi{in.at(b0), in.at(b1)};
    const double size = std::max(po.length(), pi.length());
    if (depth >= 12 || segment_distance(po, pi) >= 2.0 * size) {
        tensor_gauss_dl(out, in, a0, a1, b0, b1, lambda, mu, acc);
        return;
    }
    const double am = 0.5 * (a0 + a1), bm = 0.5 * (b0 + b1);
    subdivided_dl(out, in, a0, am, b0, bm, depth + 1, lambda, mu, acc);
    subdivided_dl(out, in, a0, am, bm, b1, depth + 1, lambda, mu, acc);
    subdivided_dl(out, in, am, a1, b0, bm, depth + 1, lambda, mu, acc);
    subdivided_dl(out, in, am, a1, bm, b1, depth + 1, lambda, mu, acc);
}

// Segments sharing one vertex: polar-type splitting of the parameter square
// at the common corner cancels the 1/r behaviour of the kernel.
void duffy_dl(const Segment& out, const Segment& in, bool out_at_start, bool in_at_start, double lambda, double mu,
              DoubleLayerPanel& acc)
{
    const Rule1D& gr = gauss_legendre(6);
    const Rule1D& gw = gauss_legendre(24);
    const double lx = out.length(), ly = in.length();
    const Vec2 v = out_at_start ? out.a : out.b;
    const Vec2 ux = (out_at_start ? 1.0 : -1.0) * out.tangent();
    const Vec2 uy = (in_at_start ? 1.0 : -1.0) * in.tangent();
    const Vec2 ny = in.normal();
    for (int half = 0; half < 2; ++half)
        for (size_t i = 0; i < gr.x.size(); ++i)
            for (size_t j = 0; j < gw.x.size(); ++j) {
                const double rho = gr.x[i], w = gw.x[j];
                const double a = half == 0 ? lx * rho : lx * rho * w;
                const double b = half == 0 ? ly * rho * w : ly * rho;
                const double jac = lx * ly * rho * gr.w[i] * gw.w[j];
                Mat2 k = jac * regular_kernel(v + a * ux, v + b * uy, ny, lambda, mu);
                const double s = out_at_start ? a / lx : 1.0 - a / lx;
                const double t = in_at_start ? b / ly : 1.0 - b / ly;
                const double ws[2] = {1.0 - s, s}, wt[2] = {1.0 - t, t};
                for (int p = 0; p < 2; ++p)
                    for (int q = 0; q < 2; ++q) acc.k[p][q] += ws[p] * wt[q] * k;
            }
}

}  // namespace

double segment_distance(const Segment& p, const Segment& q)
{
    return std::min({point_segment_distance(p.a, q), point_segment_distance(p.b, q), point_segment_distance(q.a, p),
                     point_segment_distance(q.b, p)});
}

Mat2 kelvin_tensor(const Vec2& z, double lambda, double mu)
{
    const double r2 = z.squaredNorm();
    if (!(r2 > 0.0)) throw std::domain_error("kelvin_tensor: singular at z = 0");
    const double den = 4.0 * M_PI * mu * (lambda + 2.0 * mu);
    const double c1 = (lambda + 3.0 * mu) / den, c2 = (lambda + mu) / den;
    const double g = c1 * (-0.5 * std::log(r2)), off = c2 * z.x() * z.y() / r2;
    Mat2 out;
    out << g + c2 * z.x() * z.x() / r2, off, off, g + c2 * z.y() * z.y() / r2;
    return out;
}

SingleLayerPanel singular_edge_quadrature(const Segment& outer, const Segment& inner)
{
    SingleLayerPanel acc;
    for (auto& m : acc.zz) m.setZero();
    const double lo = outer.length(), li = inner.length();
    const bool identical = (same(outer.a, inner.a) && same(outer.b, inner.b)) || (same(outer.a, inner.b) && same(outer.b, inner.a));
    if (identical) {
        const double total = lo * lo * (std::log(lo) - 1.5);
        const Vec2 t = outer.tangent();
        acc.log = {0.5 * total, 0.5 * total};
        acc.zz[0] = acc.zz[1] = 0.5 * lo * lo * t * t.transpose();
        return acc;
    }
    if (segment_distance(outer, inner) >= 2.0 * std::max(lo, li)) {
        const Rule1D& g = gauss_legendre(8);
        for (size_t i = 0; i < g.x.size(); ++i) {
            const double s = g.x[i];
            const Vec2 x = outer.at(s);
            for (size_t j = 0; j < g.x.size(); ++j) {
                const Vec2 z = x - inner.at(g.x[j]);
                const double w = g.w[i] * g.w[j] * lo * li;
                const double r2 = z.squaredNorm();
                const double lg = 0.5 * std::log(r2);
                Mat2 zz = z * z.transpose() / r2;
                acc.log[0] += (1.0 - s) * w * lg;
                acc.log[1] += s * w * lg;
                acc.zz[0] += (1.0 - s) * w * zz;
                acc.zz[1] += s * w * zz;
            }
        }
        return acc;
    }
    adaptive_outer(outer, inner, 0.0, 1.0, 0, acc);
    return acc;
}

DoubleLayerPanel double_layer_panel(const Segment& outer, const Segment& inner, double lambda, double mu)
{
    DoubleLayerPanel acc;
    for (auto& row : acc.k)
        for (auto& m : row) m.setZero();
    const bool identical = (same(outer.a, inner.a) && same(outer.b, inner.b)) || (same(outer.a, inner.b) && same(outer.b, inner.a));
    if (identical) return acc;  // r . n(y) vanishes on a straight panel
    const double lo = outer.length(), li = inner.length();
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) {
            const Vec2& vo = p == 0 ? outer.a : outer.b;
            const Vec2& vi = q == 0 ? inner.a : inner.b;
            if (same(vo, vi)) {
                duffy_dl(outer, inner, p == 0, q == 0, lambda, mu, acc);
                return acc;
            }
        }
    if (segment_distance(outer, inner) >= 2.0 * std::max(lo, li))
        tensor_gauss_dl(outer, inner, 0.0, 1.0, 0.0, 1.0, lambda, mu, acc);
    else
        subdivided_dl(outer, inner, 0.0, 1.0, 0.0, 1.0, 0, lambda, mu, acc);
    return acc;
}

}  // namespace lamecouple
