#include "lamecouple/manufactured.hpp"

#include <cmath>
#include <stdexcept>

namespace lamecouple {

Mat2 stress_of_gradient(const MaterialLaw& law, const Mat2& g)
{
    SymTensor2 e{g(0, 0), g(1, 1), 0.5 * (g(0, 1) + g(1, 0))};
    SymTensor2 s = eval_stress(law, e);
    Mat2 out;
    out << s.xx, s.xy, s.xy, s.yy;
    return out;
}

Mat2 kelvin_gradient(const Vec2& z, const Vec2& c, double lambda, double mu)
{
    const double den = 4.0 * M_PI * mu * (lambda + 2.0 * mu);
    const double c1 = (lambda + 3.0 * mu) / den, c2 = (lambda + mu) / den;
    const double r2 = z.squaredNorm(), zc = z.dot(c);
    Mat2 g = -c1 / r2 * c * z.transpose();
    g += c2 / r2 * (zc * Mat2::Identity() + z * c.transpose());
    g -= 2.0 * c2 * zc / (r2 * r2) * z * z.transpose();
    return g;
}

namespace {

VectorField zero_field() { return [](const Vec2&) { return Vec2(0, 0); }; }

// f = -div A(grad u), fourth-order central differences of the stress.
VectorField body_force(const MaterialLaw& law, const TensorField& grad)
{
    return [law, grad](const Vec2& x) {
        const double h = 1e-3;
        Vec2 f = Vec2::Zero();
        for (int k = 0; k < 2; ++k) {
            Vec2 e = Vec2::Zero();
            e[k] = h;
            Mat2 d = (-stress_of_gradient(law, grad(x + 2 * e)) + 8.0 * stress_of_gradient(law, grad(x + e)) -
                      8.0 * stress_of_gradient(law, grad(x - e)) + stress_of_gradient(law, grad(x - 2 * e))) /
                     (12.0 * h);
            f -= d.col(k);
        }
        return f;
    };
}

void smooth_interior(ManufacturedProblem& p)
{
    p.u = [](const Vec2& x) { return Vec2(std::sin(x.x()) * std::exp(x.y()), std::cos(x.x() + 2.0 * x.y())); };
    p.grad_u = [](const Vec2& x) {
        const double s = std::sin(x.x() + 2.0 * x.y());
        Mat2 g;
        g << std::cos(x.x()) * std::exp(x.y()), std::sin(x.x()) * std::exp(x.y()), -s, -2.0 * s;
        return g;
    };
}

}  // namespace

ManufacturedProblem build_manufactured(const std::string& name, const MaterialLaw& law, double lambda_ext, double mu_ext)
{
    ManufacturedProblem p;
    p.name = name;
    p.data.lambda_ext = lambda_ext;
    p.data.mu_ext = mu_ext;
    p.data.material = law;
    MaterialLaw ext(LinearLame{lambda_ext, mu_ext});
    p.u_ext = zero_field();
    p.grad_u_ext = [](const Vec2&) { return Mat2::Zero().eval(); };

    if (name == "linear-patch") {
        Mat2 g;
        g << 0.3, -0.1, 0.2, 0.4;
        const Vec2 b(0.05, -0.02);
        p.u = [g, b](const Vec2& x) { return Vec2(g * x + b); };
        p.grad_u = [g](const Vec2&) { return g; };
    } else if (name == "smooth" || name == "smooth-biharmonic-free") {
        smooth_interior(p);
    } else if (name == "kelvin-exterior") {
        smooth_interior(p);
        // opposite point forces inside the domain: zero net force, O(1/|x|) decay
        const Vec2 x1(0.3, 0.25), x2(0.2, 0.3), c(1.0, 0.5);
        p.u_ext = [=](const Vec2& x) {
            return Vec2(kelvin_tensor(x - x1, lambda_ext, mu_ext) * c - kelvin_tensor(x - x2, lambda_ext, mu_ext) * c);
        };
        p.grad_u_ext = [=](const Vec2& x) {
            return Mat2(kelvin_gradient(x - x1, c, lambda_ext, mu_ext) - kelvin_gradient(x - x2, c, lambda_ext, mu_ext));
        };
    } else if (name == "hencky-square") {
        // compatible data on the unit square (|Omega| / |Gamma| = 1/4), strains of order one
        const double a = 10.0;
        p.data.f = [a](const Vec2&) { return Vec2(a, 0.0); };
        p.data.phi0 = [a](const Vec2&, const Vec2&) { return Vec2(-0.25 * a, 0.0); };
        p.data.u0 = [a](const Vec2& x) { return Vec2(0.1 * a * x.x() * x.y(), 0.05 * a * (x.x() - x.y())); };
        p.u = nullptr;
        p.grad_u = nullptr;
        p.u_ext = nullptr;
        p.grad_u_ext = nullptr;
        return p;
    } else {
        throw std::invalid_argument("unknown manufactured problem '" + name + "'");
    }

    auto u = p.u, ue = p.u_ext;
    auto gu = p.grad_u, gue = p.grad_u_ext;
    p.data.f = body_force(law, gu);
    p.data.u0 = [u, ue](const Vec2& x) { return Vec2(u(x) - ue(x)); };
    p.phi = [ext, gue](const Vec2& x, const Vec2& n) { return Vec2(stress_of_gradient(ext, gue(x)) * n); };
    p.data.phi0 = [law, ext, gu, gue](const Vec2& x, const Vec2& n) {
        return Vec2(stress_of_gradient(law, gu(x)) * n - stress_of_gradient(ext, gue(x)) * n);
    };
    return p;
}

}  // namespace lamecouple
