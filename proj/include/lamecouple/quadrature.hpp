#pragma once

#include <array>
#include <vector>

namespace lamecouple {

// Gauss-Legendre rule on [0,1].
struct Rule1D {
    std::vector<double> x;
    std::vector<double> w;
};

const Rule1D& gauss_legendre(int n);

// Degree-5 rule on the reference triangle, barycentric points, weights sum to 1.
struct TriRule {
    std::vector<std::array<double, 3>> bary;
    std::vector<double> w;
};

const TriRule& triangle_rule_deg5();

}  // namespace lamecouple
