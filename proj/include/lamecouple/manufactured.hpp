#pragma once

#include <string>

#include "lamecouple/coupling.hpp"

namespace lamecouple {

using TensorField = std::function<Mat2(const Vec2&)>;

// Transmission problem with known solution, in physical coordinates.
// Problems without a closed-form solution leave the exact fields empty.
struct ManufacturedProblem {
    std::string name;
    ProblemData data;
    VectorField u;          // interior displacement
    TensorField grad_u;     // row i = gradient of u_i
    VectorField u_ext;      // exterior displacement
    TensorField grad_u_ext;
    TractionField phi;      // exact density sigma_ext(u_ext) n

    bool has_exact() const { return bool(grad_u); }
};

// linear-patch, smooth (alias smooth-biharmonic-free), kelvin-exterior,
// hencky-square.
ManufacturedProblem build_manufactured(const std::string& name, const MaterialLaw& law, double lambda_ext, double mu_ext);

Mat2 stress_of_gradient(const MaterialLaw& law, const Mat2& grad);

// Gradient of x -> kelvin_tensor(x - y) c.
Mat2 kelvin_gradient(const Vec2& z, const Vec2& c, double lambda, double mu);

}  // namespace lamecouple
