#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "lamecouple/mesh.hpp"

namespace lamecouple {

double SurfaceMesh3::area(int t) const
{
    const auto& T = triangles[t];
    return 0.5 * (nodes[T[1]] - nodes[T[0]]).cross(nodes[T[2]] - nodes[T[0]]).norm();
}

Vec3 SurfaceMesh3::centroid(int t) const
{
    const auto& T = triangles[t];
    return (nodes[T[0]] + nodes[T[1]] + nodes[T[2]]) / 3.0;
}

void validate_closed_surface(const SurfaceMesh3& s)
{
    if (s.triangles.size() < 4) throw MeshError("closed surface needs at least four triangles");
    const int n = int(s.nodes.size());
    double scale = 0.0;
    for (auto& p : s.nodes) scale = std::max(scale, p.norm());
    std::map<std::pair<int, int>, int> directed;
    for (int t = 0; t < int(s.triangles.size()); ++t) {
        const auto& T = s.triangles[t];
        for (int v : T)
            if (v < 0 || v >= n) throw MeshError("surface triangle references missing node");
        if (!(s.area(t) > 1e-14 * scale * scale)) throw MeshError("degenerate surface triangle " + std::to_string(t));
        for (int k = 0; k < 3; ++k) ++directed[{T[k], T[(k + 1) % 3]}];
    }
    for (auto& [e, c] : directed) {
        auto it = directed.find({e.second, e.first});
        int opp = it == directed.end() ? 0 : it->second;
        if (c != 1 || opp != 1) throw MeshError("surface is not closed and consistently oriented");
    }
}

SurfaceMesh3 tetrahedron_surface()
{
    SurfaceMesh3 s;
    s.nodes = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    s.triangles = {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {0, 3, 2}};
    return s;
}

SurfaceMesh3 cube_surface()
{
    SurfaceMesh3 s;
    for (int i = 0; i < 8; ++i) s.nodes.push_back(Vec3(i & 1, (i >> 1) & 1, (i >> 2) & 1));
    // outward-oriented quads split along a diagonal
    const int quads[6][4] = {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4}, {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
    for (auto& q : quads) {
        s.triangles.push_back({q[0], q[1], q[2]});
        s.triangles.push_back({q[0], q[2], q[3]});
    }
    return s;
}

SurfaceMesh3 icosahedron_surface()
{
    SurfaceMesh3 s;
    const double p = (1.0 + std::sqrt(5.0)) / 2.0;
    s.nodes = {{-1, p, 0}, {1, p, 0}, {-1, -p, 0}, {1, -p, 0}, {0, -1, p}, {0, 1, p},
               {0, -1, -p}, {0, 1, -p}, {p, 0, -1}, {p, 0, 1}, {-p, 0, -1}, {-p, 0, 1}};
    for (auto& v : s.nodes) v.normalize();
    s.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                   {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                   {3, 8, 9},   {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
    return s;
}

SurfaceMesh3 refine_surface(const SurfaceMesh3& s, double project_radius)
{
    SurfaceMesh3 r;
    r.nodes = s.nodes;
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
        auto k = a < b ? std::pair{a, b} : std::pair{b, a};
        auto it = mid.find(k);
        if (it != mid.end()) return it->second;
        Vec3 m = 0.5 * (r.nodes[a] + r.nodes[b]);
        if (project_radius > 0.0) m *= project_radius / m.norm();
        r.nodes.push_back(m);
        int id = int(r.nodes.size()) - 1;
        mid.emplace(k, id);
        return id;
    };
    for (const auto& T : s.triangles) {
        int a = T[0], b = T[1], c = T[2];
        int ab = midpoint(a, b), bc = midpoint(b, c), ca = midpoint(c, a);
        r.triangles.push_back({a, ab, ca});
        r.triangles.push_back({ab, b, bc});
        r.triangles.push_back({ca, bc, c});
        r.triangles.push_back({ab, bc, ca});
    }
    return r;
}

void write_surface(std::ostream& os, const SurfaceMesh3& s)
{
    os.precision(17);
    os << "mesh3d-surface " << s.nodes.size() << ' ' << s.triangles.size() << '\n';
    for (auto& p : s.nodes) os << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
    for (auto& t : s.triangles) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

SurfaceMesh3 read_surface(std::istream& is)
{
    std::string tag;
    int nn = 0, nt = 0;
    if (!(is >> tag >> nn >> nt) || tag != "mesh3d-surface" || nn < 3 || nt < 1)
        throw MeshError("read_surface: bad header");
    SurfaceMesh3 s;
    s.nodes.resize(nn);
    for (auto& p : s.nodes)
        if (!(is >> p.x() >> p.y() >> p.z())) throw MeshError("read_surface: truncated node list");
    s.triangles.resize(nt);
    for (auto& t : s.triangles)
        if (!(is >> t[0] >> t[1] >> t[2])) throw MeshError("read_surface: truncated triangle list");
    return s;
}

SurfaceMesh3 load_surface(const std::string& path_or_name)
{
    if (path_or_name == "tetra" || path_or_name == "tetrahedron") return tetrahedron_surface();
    if (path_or_name == "cube") return cube_surface();
    if (path_or_name == "icosahedron") return icosahedron_surface();
    std::ifstream in(path_or_name);
    if (!in) throw MeshError("cannot open surface mesh '" + path_or_name + "'");
    SurfaceMesh3 s = read_surface(in);
    validate_closed_surface(s);
    return s;
}

}  // namespace lamecouple
