#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "lamecouple/linalg.hpp"

namespace lamecouple {

// Symmetric 2x2 tensor; the off-diagonal entry is stored once.
struct SymTensor2 {
    double xx = 0.0, yy = 0.0, xy = 0.0;

    double trace() const { return xx + yy; }
    SymTensor2 dev() const
    {
        double m = 0.5 * trace();
        return {xx - m, yy - m, xy};
    }
    Eigen::Vector3d voigt() const { return {xx, yy, xy}; }
    static SymTensor2 from_voigt(const Eigen::Vector3d& v) { return {v[0], v[1], v[2]}; }
    static SymTensor2 identity() { return {1.0, 1.0, 0.0}; }
};

inline SymTensor2 operator+(SymTensor2 a, const SymTensor2& b) { return {a.xx + b.xx, a.yy + b.yy, a.xy + b.xy}; }
inline SymTensor2 operator-(SymTensor2 a, const SymTensor2& b) { return {a.xx - b.xx, a.yy - b.yy, a.xy - b.xy}; }
inline SymTensor2 operator*(double s, SymTensor2 a) { return {s * a.xx, s * a.yy, s * a.xy}; }
// Frobenius product, shear counted twice.
inline double ddot(const SymTensor2& a, const SymTensor2& b) { return a.xx * b.xx + a.yy * b.yy + 2.0 * a.xy * b.xy; }
inline double fnorm(const SymTensor2& a) { return std::sqrt(ddot(a, a)); }

// Scalar shear profile mu_tilde(x) on [0, inf) with derivative.
struct ShearProfile {
    std::string name;
    std::function<double(double)> value;
    std::function<double(double)> derivative;  // may be empty: central differences

    double operator()(double x) const { return value(x); }
    double slope(double x) const;
};

// "const(m)", "rational(a,b)" = a + b/(1+x), "arctan(a,b)" = a + b(1 - 2 atan(x)/pi).
ShearProfile parse_shear_profile(const std::string& text);

// Sample points in [0, 1e7] used to audit shear profiles.
const std::vector<double>& shear_profile_samples();

struct LinearLame {
    double lambda, mu;
};

struct Hencky {
    double K;
    ShearProfile mu_tilde;
    double alpha, beta;
};

class MaterialError : public std::invalid_argument {
public:
    explicit MaterialError(const std::string& what) : std::invalid_argument(what) {}
};

class MaterialLaw {
public:
    // Throws MaterialError when the moduli violate the admissibility bounds.
    explicit MaterialLaw(LinearLame l);
    explicit MaterialLaw(Hencky h);

    bool is_linear() const { return std::holds_alternative<LinearLame>(law_); }
    const LinearLame* linear() const { return std::get_if<LinearLame>(&law_); }
    const Hencky* hencky() const { return std::get_if<Hencky>(&law_); }

    // A'(e) = A(t e)/t, the law seen in coordinates shrunk by t.
    MaterialLaw rescaled(double t) const;

private:
    std::variant<LinearLame, Hencky> law_;
};

SymTensor2 eval_stress(const MaterialLaw& law, const SymTensor2& e);
// Matrix T with stress increment components T * [dxx, dyy, dxy].
Eigen::Matrix3d eval_tangent(const MaterialLaw& law, const SymTensor2& e);

struct MonotonicityConstants {
    double c_A, L_A;
};

MonotonicityConstants monotonicity_constants(const MaterialLaw& law);

// Sampled secant quotients over random tensor pairs with entries in
// [-scale, scale]; returns the observed (min monotone, max Lipschitz) ratios.
MonotonicityConstants sample_monotonicity(const MaterialLaw& law, int samples, unsigned seed, double scale = 2.0);

}  // namespace lamecouple
