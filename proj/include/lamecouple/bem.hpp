#pragma once

#include <array>
#include <memory>
#include <vector>

#include "lamecouple/fem.hpp"

namespace lamecouple {

struct Segment {
    Vec2 a, b;

    double length() const { return (b - a).norm(); }
    Vec2 tangent() const { return (b - a) / length(); }
    // outward for a counterclockwise loop
    Vec2 normal() const
    {
        Vec2 t = tangent();
        return {t.y(), -t.x()};
    }
    Vec2 at(double s) const { return a + s * (b - a); }
    Vec2 midpoint() const { return 0.5 * (a + b); }
};

double segment_distance(const Segment& p, const Segment& q);

// Single closed CCW polygonal loop. Edge k runs from node k to node k+1.
// Densities are P0 (dof 2k+c on edge k), traces P1 (dof 2b+c on node b).
class BoundarySpace {
public:
    explicit BoundarySpace(std::vector<Vec2> loop);
    // Trace of a mesh; the node order follows FemSpace::trace_nodes().
    explicit BoundarySpace(const FemSpace& sp);

    int edge_count() const { return int(points_.size()); }
    int node_count() const { return int(points_.size()); }
    int density_dofs() const { return 2 * edge_count(); }
    int trace_dofs() const { return 2 * node_count(); }
    const std::vector<Vec2>& points() const { return points_; }
    Segment edge(int k) const { return {points_[k], points_[(k + 1) % points_.size()]}; }
    double length() const;

    // Loop with every edge bisected; node 2i is old node i.
    BoundarySpace bisected() const;
    // P1 prolongation onto bisected(), size (2 * trace_dofs) x trace_dofs.
    Matrix prolongation() const;

    // P0 coefficients from edge-midpoint values / P1 from nodal values.
    Vector interpolate_density(const VectorField& f) const;
    Vector interpolate_density(const std::function<Vec2(const Vec2&, const Vec2&)>& f) const;
    Vector interpolate_trace(const VectorField& f) const;
    // L2(Gamma) mass of P0 densities (diagonal, edge lengths).
    Matrix density_mass() const;

private:
    std::vector<Vec2> points_;
};

// Kelvin fundamental solution of the Lame system in the plane.
Mat2 kelvin_tensor(const Vec2& z, double lambda, double mu);

// Panel integrals over a pair of segments; index w selects the outer test
// weight (1 - s) or s, the sum of both is the P0 x P0 integral.
struct SingleLayerPanel {
    std::array<double, 2> log{};  // int int log|x-y|
    std::array<Mat2, 2> zz{Mat2::Zero(), Mat2::Zero()};  // int int (x-y)(x-y)^T / |x-y|^2
};

SingleLayerPanel singular_edge_quadrature(const Segment& outer, const Segment& inner);

// Regular part of the double-layer kernel integrated against outer weight w
// and inner hat function i: k[w][i].
struct DoubleLayerPanel {
    std::array<std::array<Mat2, 2>, 2> k{};
};

DoubleLayerPanel double_layer_panel(const Segment& outer, const Segment& inner, double lambda, double mu);

struct LayerOptions {
    bool parallel = true;
    bool p1_test = false;  // also build P1-tested V1, K1, M1
};

struct LayerMatrices {
    double lambda = 0.0, mu = 0.0;
    Matrix V;  // density x density
    Matrix K;  // density x trace, <psi_k, K u_j>
    Matrix M;  // density x trace
    Matrix W;  // trace x trace
    // boundary wider than 1/2: V may fail to be elliptic
    bool unscaled = false;
    // P1-tested variants (empty unless requested)
    Matrix V1;  // trace x density
    Matrix K1;  // trace x trace
    Matrix M1;  // trace x trace
};

LayerMatrices assemble_layer_matrices(const BoundarySpace& bs, double lambda, double mu, const LayerOptions& opt = {});

Matrix assemble_V(const BoundarySpace& bs, double lambda, double mu);
std::pair<Matrix, Matrix> assemble_K_and_M(const BoundarySpace& bs, double lambda, double mu);
// Hypersingular operator via tangential derivatives of traces.
Matrix assemble_W(const BoundarySpace& bs, double lambda, double mu);
// sym((M/2 - K)^T V^-1 (M/2 + K)) with the given blocks.
Matrix assemble_W_calderon(const Matrix& V, const Matrix& K, const Matrix& M);
// Tangential derivative of P1 traces as P0 densities.
Matrix tangential_derivative(const BoundarySpace& bs);
Matrix mass_matrix(const BoundarySpace& bs);

}  // namespace lamecouple
