#include <sstream>

#include "doctest.h"
#include "lamecouple/mesh.hpp"

using namespace lamecouple;

namespace {

bool has_kind(const std::vector<Violation>& v, Violation::Kind k)
{
    for (auto& x : v)
        if (x.kind == k) return true;
    return false;
}

Mesh two_triangle_square() { return build_polygon_mesh(unit_square_polygon(), 1.0); }

}  // namespace

TEST_CASE("unit square at h = 1 is the minimal triangulation")
{
    Mesh m = two_triangle_square();
    CHECK(m.triangle_count() == 2);
    CHECK(m.boundary_edges().size() == 4);
    CHECK(validate_regularity(m).empty());
    CHECK(m.area() == doctest::Approx(1.0));
}

TEST_CASE("unit square at h = 1/2 is one red refinement")
{
    Mesh m = build_polygon_mesh(unit_square_polygon(), 0.5);
    CHECK(m.triangle_count() == 8);
    CHECK(m.boundary_edges().size() == 8);
    CHECK(m.max_diameter() <= std::sqrt(2.0) * 0.5 + 1e-14);
}

TEST_CASE("L-shape coarse mesh has 8 boundary edges")
{
    Mesh m = build_polygon_mesh(lshape_polygon(), 1.0);
    CHECK(m.boundary_edges().size() == 8);
    CHECK(validate_regularity(m).empty());
    CHECK(m.area() == doctest::Approx(0.75));
}

TEST_CASE("boundary loop is closed and counterclockwise")
{
    for (auto poly : {unit_square_polygon(), lshape_polygon()}) {
        Mesh m = build_polygon_mesh(poly, 0.2);
        const auto& be = m.boundary_edges();
        REQUIRE(m.loop_offsets().size() == 2);
        double shoelace = 0.0;
        for (size_t k = 0; k < be.size(); ++k) {
            CHECK(be[k][1] == be[(k + 1) % be.size()][0]);
            const Vec2 &a = m.nodes()[be[k][0]], &b = m.nodes()[be[k][1]];
            shoelace += a.x() * b.y() - a.y() * b.x();
        }
        CHECK(0.5 * shoelace == doctest::Approx(m.area()));
    }
}

TEST_CASE("refine_uniform combinatorics and geometry")
{
    Mesh m = build_polygon_mesh(lshape_polygon(), 0.5);
    for (int step = 0; step < 3; ++step) {
        const int edges = int(m.edge_triangles().size());
        Mesh r = refine_uniform(m);
        CHECK(r.triangle_count() == 4 * m.triangle_count());
        CHECK(r.node_count() == m.node_count() + edges);
        CHECK(r.boundary_edges().size() == 2 * m.boundary_edges().size());
        CHECK(r.max_diameter() == doctest::Approx(0.5 * m.max_diameter()).epsilon(1e-13));
        CHECK(r.area() == doctest::Approx(m.area()).epsilon(1e-14));
        CHECK(validate_regularity(r).empty());
        m = r;
    }
}

TEST_CASE("two-triangle square refines to 8 triangles and 8 boundary edges")
{
    Mesh r = refine_uniform(two_triangle_square());
    CHECK(r.triangle_count() == 8);
    CHECK(r.boundary_edges().size() == 8);
}

TEST_CASE("non-simple polygons are rejected")
{
    std::vector<Vec2> bowtie{{0, 0}, {1, 1}, {1, 0}, {0, 1}};
    CHECK_THROWS_AS(build_polygon_mesh(bowtie, 0.5), MeshError);
    std::vector<Vec2> cw{{0, 0}, {0, 1}, {1, 1}, {1, 0}};
    CHECK_THROWS_AS(build_polygon_mesh(cw, 0.5), MeshError);
}

TEST_CASE("scale_to_unit")
{
    SUBCASE("small centered mesh is left alone")
    {
        std::vector<Vec2> p{{-0.14, -0.14}, {0.14, -0.14}, {0.14, 0.14}, {-0.14, 0.14}};  // diameter ~0.396
        Mesh m = build_polygon_mesh(p, 0.3);
        auto [s, rec] = scale_to_unit(m);
        CHECK(rec.factor == 1.0);
        for (int i = 0; i < m.node_count(); ++i) CHECK((s.nodes()[i] - m.nodes()[i]).norm() <= 1e-15);
    }
    SUBCASE("unit square shrinks to diameter 1/2")
    {
        Mesh m = build_polygon_mesh(unit_square_polygon(), 0.25);
        auto [s, rec] = scale_to_unit(m);
        CHECK(rec.factor <= 1.0 / (2.0 * std::sqrt(2.0)) + 1e-15);
        double diam = 0.0;
        for (auto& a : s.nodes())
            for (auto& b : s.nodes()) diam = std::max(diam, (a - b).norm());
        CHECK(diam <= 0.5 + 1e-14);
        for (auto& a : s.nodes()) CHECK(a.norm() <= 0.25 + 1e-14);
        for (int i = 0; i < m.node_count(); ++i)
            CHECK((rec.invert(s.nodes()[i]) - m.nodes()[i]).norm() <= 1e-14 * m.nodes()[i].norm() + 1e-15);
    }
    SUBCASE("far-away L-shape")
    {
        std::vector<Vec2> p = lshape_polygon();
        for (auto& x : p) x = 30.0 * x + Vec2(100, -7);
        auto [s, rec] = scale_to_unit(build_polygon_mesh(p, 10.0));
        for (auto& a : s.nodes()) CHECK(a.norm() <= 0.25 + 1e-14);
        CHECK(validate_regularity(s).empty());
    }
}

TEST_CASE("validate_regularity reports violations as data")
{
    Mesh good = two_triangle_square();
    CHECK(validate_regularity(good).empty());

    SUBCASE("flipped triangle")
    {
        auto tris = good.triangles();
        std::swap(tris[0][1], tris[0][2]);
        Mesh bad = Mesh::unchecked(good.nodes(), tris, good.boundary_edges());
        CHECK(has_kind(validate_regularity(bad), Violation::Kind::NegativeArea));
    }
    SUBCASE("dangling edge: a third triangle on an interior edge")
    {
        auto nodes = good.nodes();
        auto tris = good.triangles();
        // the diagonal of the square is shared by both triangles; hang a third one on it
        auto diag = good.edge_triangles().begin();
        for (auto it = good.edge_triangles().begin(); it != good.edge_triangles().end(); ++it)
            if (it->second.size() == 2) diag = it;
        nodes.push_back(Vec2(2.0, 2.0));
        tris.push_back({diag->first.first, diag->first.second, int(nodes.size()) - 1});
        Mesh bad = Mesh::unchecked(nodes, tris, good.boundary_edges());
        CHECK(has_kind(validate_regularity(bad), Violation::Kind::NonManifold));
    }
    SUBCASE("boundary list disagreeing with the triangles")
    {
        auto be = good.boundary_edges();
        be.pop_back();
        Mesh bad = Mesh::unchecked(good.nodes(), good.triangles(), be);
        CHECK(!validate_regularity(bad).empty());
    }
    SUBCASE("bad index")
    {
        auto tris = good.triangles();
        tris[1][2] = 17;
        Mesh bad = Mesh::unchecked(good.nodes(), tris, good.boundary_edges());
        CHECK(has_kind(validate_regularity(bad), Violation::Kind::BadIndex));
    }
    SUBCASE("validated construction throws")
    {
        auto tris = good.triangles();
        std::swap(tris[0][1], tris[0][2]);
        CHECK_THROWS_AS(Mesh::from_triangles(good.nodes(), tris), MeshError);
    }
}

TEST_CASE("mesh2d text round trip")
{
    Mesh m = build_polygon_mesh(lshape_polygon(), 0.25);
    std::stringstream ss;
    write_mesh(ss, m);
    CHECK(ss.str().rfind("mesh2d ", 0) == 0);
    Mesh r = read_mesh(ss);
    REQUIRE(r.node_count() == m.node_count());
    REQUIRE(r.triangle_count() == m.triangle_count());
    for (int i = 0; i < m.node_count(); ++i) CHECK((r.nodes()[i] - m.nodes()[i]).norm() <= 1e-15);
    CHECK(r.boundary_edges().size() == m.boundary_edges().size());

    std::stringstream junk("mesh2d 3 1\n0 0\n1 0\n");
    CHECK_THROWS_AS(read_mesh(junk), MeshError);
}

TEST_CASE("closed surfaces")
{
    CHECK_NOTHROW(validate_closed_surface(tetrahedron_surface()));
    CHECK_NOTHROW(validate_closed_surface(cube_surface()));
    CHECK(cube_surface().triangles.size() == 12);
    CHECK_NOTHROW(validate_closed_surface(icosahedron_surface()));
    CHECK_NOTHROW(validate_closed_surface(refine_surface(icosahedron_surface(), 1.0)));
    CHECK_NOTHROW(validate_closed_surface(load_surface(std::string(LAMECOUPLE_DATA_DIR) + "/tetra.mesh3")));
    CHECK_NOTHROW(validate_closed_surface(load_surface(std::string(LAMECOUPLE_DATA_DIR) + "/cube.mesh3")));

    SurfaceMesh3 open = tetrahedron_surface();
    open.triangles.pop_back();
    CHECK_THROWS_AS(validate_closed_surface(open), MeshError);

    SurfaceMesh3 s = refine_surface(cube_surface());
    std::stringstream ss;
    write_surface(ss, s);
    SurfaceMesh3 r = read_surface(ss);
    CHECK(r.triangles.size() == 48);
    CHECK_NOTHROW(validate_closed_surface(r));
}

TEST_CASE("shipped surfaces are outward oriented")
{
    for (const char* name : {"/tetra.mesh3", "/cube.mesh3"}) {
        SurfaceMesh3 s = load_surface(std::string(LAMECOUPLE_DATA_DIR) + name);
        double vol = 0.0;  // divergence theorem: sum a . (b x c) / 6
        for (auto& t : s.triangles) vol += s.nodes[t[0]].dot(s.nodes[t[1]].cross(s.nodes[t[2]])) / 6.0;
        CHECK(vol > 0.0);
    }
}
