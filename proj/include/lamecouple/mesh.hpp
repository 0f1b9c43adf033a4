#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lamecouple/linalg.hpp"

namespace lamecouple {

using Tri = std::array<int, 3>;
using Edge = std::array<int, 2>;

class MeshError : public std::runtime_error {
public:
    explicit MeshError(const std::string& what) : std::runtime_error(what) {}
};

struct Violation {
    enum class Kind { NegativeArea, NonManifold, OpenBoundary, BoundaryMismatch, BadIndex };
    Kind kind;
    int index;  // triangle, edge or node depending on kind
    std::string message;
};

// Planar conforming triangulation. Triangles are CCW; boundary edges are
// stored as closed CCW loops, one after another.
class Mesh {
public:
    Mesh() = default;

    // Validated construction: boundary computed from the triangles.
    static Mesh from_triangles(std::vector<Vec2> nodes, std::vector<Tri> tris);
    // No validation; used to hold malformed input for validate_regularity.
    static Mesh unchecked(std::vector<Vec2> nodes, std::vector<Tri> tris, std::vector<Edge> boundary);

    const std::vector<Vec2>& nodes() const { return nodes_; }
    const std::vector<Tri>& triangles() const { return tris_; }
    const std::vector<Edge>& boundary_edges() const { return boundary_; }
    // Starting offsets of each closed loop in boundary_edges(), plus the end.
    const std::vector<int>& loop_offsets() const { return loops_; }
    // Triangles adjacent to each undirected edge (key: sorted node pair).
    const std::map<std::pair<int, int>, std::vector<int>>& edge_triangles() const { return edge_tris_; }

    int node_count() const { return int(nodes_.size()); }
    int triangle_count() const { return int(tris_.size()); }

    double signed_area(int t) const;
    double diameter(int t) const;
    double max_diameter() const;
    double area() const;

private:
    void build_adjacency();

    std::vector<Vec2> nodes_;
    std::vector<Tri> tris_;
    std::vector<Edge> boundary_;
    std::vector<int> loops_;
    std::map<std::pair<int, int>, std::vector<int>> edge_tris_;
};

std::vector<Violation> validate_regularity(const Mesh& m);
const char* to_string(Violation::Kind k);

// Triangulates a simple CCW polygon, then refines uniformly until every
// element diameter is at most sqrt(2) * target_h.
Mesh build_polygon_mesh(const std::vector<Vec2>& polygon, double target_h);
Mesh refine_uniform(const Mesh& m);

std::vector<Vec2> unit_square_polygon();
std::vector<Vec2> lshape_polygon();

struct ScaleRecord {
    double factor = 1.0;
    Vec2 center = Vec2::Zero();

    Vec2 apply(const Vec2& p) const { return (p - center) * factor; }
    Vec2 invert(const Vec2& q) const { return q / factor + center; }
};

// Translates the bounding-box center to the origin and shrinks (never grows)
// so the mesh fits in a disc of diameter 1/2.
std::pair<Mesh, ScaleRecord> scale_to_unit(const Mesh& m);

void write_mesh(std::ostream& os, const Mesh& m);
Mesh read_mesh(std::istream& is);

// Closed triangulated surface in R^3.
struct SurfaceMesh3 {
    std::vector<Vec3> nodes;
    std::vector<Tri> triangles;

    double area(int t) const;
    Vec3 centroid(int t) const;
};

// Throws MeshError unless every edge is shared by exactly two triangles and
// no triangle is degenerate.
void validate_closed_surface(const SurfaceMesh3& s);

SurfaceMesh3 tetrahedron_surface();
SurfaceMesh3 cube_surface();
SurfaceMesh3 icosahedron_surface();
// Midpoint subdivision; project_radius > 0 pushes new nodes to that sphere.
SurfaceMesh3 refine_surface(const SurfaceMesh3& s, double project_radius = 0.0);

void write_surface(std::ostream& os, const SurfaceMesh3& s);
SurfaceMesh3 read_surface(std::istream& is);
SurfaceMesh3 load_surface(const std::string& path_or_name);

}  // namespace lamecouple
