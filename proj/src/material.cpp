#include "lamecouple/material.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <regex>

namespace lamecouple {

double ShearProfile::slope(double x) const
{
    if (derivative) return derivative(x);
    double h = 1e-6 * std::max(1.0, x);
    if (x < h) return (value(x + h) - value(x)) / h;
    return (value(x + h) - value(x - h)) / (2.0 * h);
}

ShearProfile parse_shear_profile(const std::string& text)
{
    static const std::regex re(R"(\s*([a-z]+)\s*\(\s*([-+0-9.eE]+)\s*(?:,\s*([-+0-9.eE]+)\s*)?\)\s*)");
    std::smatch m;
    if (!std::regex_match(text, m, re)) throw MaterialError("bad shear profile '" + text + "'");
    const std::string kind = m[1];
    const double a = std::stod(m[2]);
    const bool has_b = m[3].matched;
    const double b = has_b ? std::stod(m[3]) : 0.0;
    ShearProfile p;
    p.name = text;
    if (kind == "const" && !has_b) {
        p.value = [a](double) { return a; };
        p.derivative = [](double) { return 0.0; };
    } else if (kind == "rational" && has_b) {
        p.value = [a, b](double x) { return a + b / (1.0 + x); };
        p.derivative = [b](double x) { return -b / ((1.0 + x) * (1.0 + x)); };
    } else if (kind == "arctan" && has_b) {
        p.value = [a, b](double x) { return a + b * (1.0 - 2.0 * std::atan(x) / M_PI); };
        p.derivative = [b](double x) { return -2.0 * b / (M_PI * (1.0 + x * x)); };
    } else {
        throw MaterialError("unknown shear profile '" + text + "'");
    }
    return p;
}

const std::vector<double>& shear_profile_samples()
{
    static const std::vector<double> xs = [] {
        std::vector<double> v{0.0};
        for (int i = 0; i <= 480; ++i) v.push_back(std::pow(10.0, -8.0 + i * 0.03125));
        return v;
    }();
    return xs;
}

namespace {

// Deviatoric tangent modulus in the radial direction at invariant x.
double radial_modulus(const ShearProfile& p, double x) { return p(x) + 2.0 * x * p.slope(x); }

}  // namespace

MaterialLaw::MaterialLaw(LinearLame l) : law_(l)
{
    if (!(l.lambda > 0.0) || !(l.mu > 0.0)) throw MaterialError("LinearLame requires lambda > 0 and mu > 0");
}

MaterialLaw::MaterialLaw(Hencky h) : law_(h)
{
    if (!h.mu_tilde.value) throw MaterialError("Hencky law needs a shear profile");
    if (!(h.K > 0.0) || !(h.alpha > 0.0) || !(h.beta > 0.0)) throw MaterialError("Hencky requires K, alpha, beta > 0");
    for (double x : shear_profile_samples()) {
        double m = h.mu_tilde(x);
        if (!(m >= h.alpha)) throw MaterialError("Hencky: mu_tilde drops below alpha at x=" + std::to_string(x));
        if (!(m <= h.K - h.beta)) throw MaterialError("Hencky: mu_tilde exceeds K - beta at x=" + std::to_string(x));
        if (!(radial_modulus(h.mu_tilde, x) >= h.alpha))
            throw MaterialError("Hencky: mu_tilde + 2x mu_tilde' drops below alpha at x=" + std::to_string(x));
    }
}

MaterialLaw MaterialLaw::rescaled(double t) const
{
    if (is_linear()) return *this;
    Hencky h = *hencky();
    ShearProfile base = h.mu_tilde;
    const double t2 = t * t;
    h.mu_tilde.name = base.name + " scaled";
    h.mu_tilde.value = [base, t2](double x) { return base(t2 * x); };
    h.mu_tilde.derivative = [base, t2](double x) { return t2 * base.slope(t2 * x); };
    return MaterialLaw(h);
}

SymTensor2 eval_stress(const MaterialLaw& law, const SymTensor2& e)
{
    if (auto l = law.linear()) return l->lambda * e.trace() * SymTensor2::identity() + 2.0 * l->mu * e;
    const Hencky& h = *law.hencky();
    SymTensor2 d = e.dev();
    double m = h.mu_tilde(ddot(d, d));
    return (h.K - m) * e.trace() * SymTensor2::identity() + 2.0 * m * e;
}

Eigen::Matrix3d eval_tangent(const MaterialLaw& law, const SymTensor2& e)
{
    auto isotropic = [](double lam, double mu) {
        Eigen::Matrix3d t;
        t << lam + 2 * mu, lam, 0, lam, lam + 2 * mu, 0, 0, 0, 2 * mu;
        return t;
    };
    if (auto l = law.linear()) return isotropic(l->lambda, l->mu);
    const Hencky& h = *law.hencky();
    SymTensor2 d = e.dev();
    double g = ddot(d, d);
    double m = h.mu_tilde(g);
    Eigen::Matrix3d t = isotropic(h.K - m, m);
    Eigen::Vector3d dv = d.voigt();
    Eigen::Vector3d wd(d.xx, d.yy, 2.0 * d.xy);
    t += 4.0 * h.mu_tilde.slope(g) * dv * wd.transpose();
    return t;
}

MonotonicityConstants monotonicity_constants(const MaterialLaw& law)
{
    if (auto l = law.linear()) return {2.0 * l->mu, 6.0 * l->lambda + 4.0 * l->mu};
    const Hencky& h = *law.hencky();
    double top = h.K;
    for (double x : shear_profile_samples()) top = std::max({top, h.mu_tilde(x), radial_modulus(h.mu_tilde, x)});
    return {2.0 * h.alpha, 2.0 * top};
}

MonotonicityConstants sample_monotonicity(const MaterialLaw& law, int samples, unsigned seed, double scale)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-scale, scale);
    MonotonicityConstants out{INFINITY, 0.0};
    for (int i = 0; i < samples; ++i) {
        SymTensor2 a{u(rng), u(rng), u(rng)}, b{u(rng), u(rng), u(rng)};
        SymTensor2 de = a - b;
        double n2 = ddot(de, de);
        if (n2 < 1e-20) continue;
        SymTensor2 ds = eval_stress(law, a) - eval_stress(law, b);
        out.c_A = std::min(out.c_A, ddot(ds, de) / n2);
        out.L_A = std::max(out.L_A, fnorm(ds) / std::sqrt(n2));
    }
    return out;
}

}  // namespace lamecouple
