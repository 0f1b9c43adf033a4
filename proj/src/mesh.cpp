#include "lamecouple/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace lamecouple {

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

std::pair<int, int> key(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

// Orders directed edges into closed loops. Returns false if some node does
// not have exactly one outgoing and one incoming edge.
bool chain_loops(const std::vector<Edge>& edges, std::vector<Edge>& out, std::vector<int>& offsets)
{
    std::map<int, int> next_edge;
    std::map<int, int> in_count;
    for (int i = 0; i < int(edges.size()); ++i) {
        if (!next_edge.emplace(edges[i][0], i).second) return false;
        ++in_count[edges[i][1]];
    }
    for (auto& [n, c] : in_count)
        if (c != 1 || !next_edge.count(n)) return false;
    std::vector<char> used(edges.size(), 0);
    out.clear();
    offsets.assign(1, 0);
    for (int s = 0; s < int(edges.size()); ++s) {
        if (used[s]) continue;
        int e = s;
        while (!used[e]) {
            used[e] = 1;
            out.push_back(edges[e]);
            e = next_edge.at(edges[e][1]);
        }
        if (e != s) return false;
        offsets.push_back(int(out.size()));
    }
    return true;
}

}  // namespace

void Mesh::build_adjacency()
{
    edge_tris_.clear();
    for (int t = 0; t < int(tris_.size()); ++t)
        for (int k = 0; k < 3; ++k) {
            int a = tris_[t][k], b = tris_[t][(k + 1) % 3];
            edge_tris_[key(a, b)].push_back(t);
        }
}

Mesh Mesh::unchecked(std::vector<Vec2> nodes, std::vector<Tri> tris, std::vector<Edge> boundary)
{
    Mesh m;
    m.nodes_ = std::move(nodes);
    m.tris_ = std::move(tris);
    for (auto& t : m.tris_)
        for (int v : t)
            if (v < 0 || v >= int(m.nodes_.size())) {
                m.boundary_ = std::move(boundary);
                m.loops_ = {0, int(m.boundary_.size())};
                return m;
            }
    m.build_adjacency();
    std::vector<Edge> ordered;
    std::vector<int> offsets;
    if (chain_loops(boundary, ordered, offsets)) {
        m.boundary_ = std::move(ordered);
        m.loops_ = std::move(offsets);
    } else {
        m.boundary_ = std::move(boundary);
        m.loops_ = {0, int(m.boundary_.size())};
    }
    return m;
}

Mesh Mesh::from_triangles(std::vector<Vec2> nodes, std::vector<Tri> tris)
{
    std::map<std::pair<int, int>, int> count;
    std::map<std::pair<int, int>, Edge> directed;
    for (auto& t : tris)
        for (int k = 0; k < 3; ++k) {
            int a = t[k], b = t[(k + 1) % 3];
            ++count[key(a, b)];
            directed[key(a, b)] = {a, b};
        }
    std::vector<Edge> boundary;
    for (auto& [k, c] : count)
        if (c == 1) boundary.push_back(directed[k]);
    Mesh m = unchecked(std::move(nodes), std::move(tris), std::move(boundary));
    auto report = validate_regularity(m);
    if (!report.empty()) {
        std::ostringstream os;
        os << "invalid mesh: " << report.size() << " violation(s); first: " << report.front().message;
        throw MeshError(os.str());
    }
    return m;
}

double Mesh::signed_area(int t) const
{
    const auto& T = tris_[t];
    return 0.5 * cross2(nodes_[T[1]] - nodes_[T[0]], nodes_[T[2]] - nodes_[T[0]]);
}

double Mesh::diameter(int t) const
{
    const auto& T = tris_[t];
    double d = 0.0;
    for (int k = 0; k < 3; ++k) d = std::max(d, (nodes_[T[k]] - nodes_[T[(k + 1) % 3]]).norm());
    return d;
}

double Mesh::max_diameter() const
{
    double d = 0.0;
    for (int t = 0; t < triangle_count(); ++t) d = std::max(d, diameter(t));
    return d;
}

double Mesh::area() const
{
    double a = 0.0;
    for (int t = 0; t < triangle_count(); ++t) a += signed_area(t);
    return a;
}

const char* to_string(Violation::Kind k)
{
    switch (k) {
    case Violation::Kind::NegativeArea: return "negative-area";
    case Violation::Kind::NonManifold: return "non-manifold";
    case Violation::Kind::OpenBoundary: return "open-boundary";
    case Violation::Kind::BoundaryMismatch: return "boundary-mismatch";
    case Violation::Kind::BadIndex: return "bad-index";
    }
    return "unknown";
}

std::vector<Violation> validate_regularity(const Mesh& m)
{
    using K = Violation::Kind;
    std::vector<Violation> out;
    auto add = [&](K k, int i, std::string msg) { out.push_back({k, i, std::move(msg)}); };
    const int n = m.node_count();
    for (int t = 0; t < m.triangle_count(); ++t)
        for (int v : m.triangles()[t])
            if (v < 0 || v >= n) {
                add(K::BadIndex, t, "triangle " + std::to_string(t) + " references missing node");
                return out;
            }
    for (auto& e : m.boundary_edges())
        if (e[0] < 0 || e[0] >= n || e[1] < 0 || e[1] >= n || e[0] == e[1]) {
            add(K::BadIndex, -1, "boundary edge references missing node");
            return out;
        }

    for (int t = 0; t < m.triangle_count(); ++t)
        if (!(m.signed_area(t) > 0.0))
            add(K::NegativeArea, t, "triangle " + std::to_string(t) + " has non-positive signed area");

    // topological boundary with the orientation inherited from its triangle
    std::set<std::pair<int, int>> topo;
    for (auto& [k, ts] : m.edge_triangles()) {
        if (ts.size() > 2) add(K::NonManifold, ts.front(), "edge shared by more than two triangles");
        if (ts.size() == 1) {
            const auto& T = m.triangles()[ts[0]];
            for (int j = 0; j < 3; ++j) {
                int a = T[j], b = T[(j + 1) % 3];
                if (key(a, b) == k) topo.insert({a, b});
            }
        }
    }
    std::set<std::pair<int, int>> stored;
    for (int i = 0; i < int(m.boundary_edges().size()); ++i) {
        auto e = m.boundary_edges()[i];
        auto it = m.edge_triangles().find(key(e[0], e[1]));
        if (it == m.edge_triangles().end())
            add(K::NonManifold, i, "dangling boundary edge not attached to any triangle");
        else if (it->second.size() != 1)
            add(K::NonManifold, i, "boundary edge is interior to the triangulation");
        if (!stored.insert({e[0], e[1]}).second) add(K::NonManifold, i, "duplicate boundary edge");
    }
    for (auto& e : topo)
        if (!stored.count(e))
            add(K::BoundaryMismatch, e.first, "topological boundary edge missing or misoriented in boundary list");

    std::map<int, int> out_deg, in_deg;
    for (auto& e : m.boundary_edges()) {
        ++out_deg[e[0]];
        ++in_deg[e[1]];
    }
    for (auto& [v, c] : out_deg)
        if (c != 1 || in_deg[v] != 1) add(K::NonManifold, v, "boundary node " + std::to_string(v) + " is not a simple loop vertex");
    for (auto& [v, c] : in_deg)
        if (!out_deg.count(v)) add(K::OpenBoundary, v, "boundary loop is open at node " + std::to_string(v));

    // each loop must close on itself in stored order
    const auto& off = m.loop_offsets();
    const auto& be = m.boundary_edges();
    for (int l = 0; l + 1 < int(off.size()); ++l)
        for (int i = off[l]; i < off[l + 1]; ++i) {
            int j = (i + 1 < off[l + 1]) ? i + 1 : off[l];
            if (be[i][1] != be[j][0]) {
                add(K::OpenBoundary, i, "boundary edges do not form a closed loop");
                break;
            }
        }
    return out;
}

namespace {

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2)
{
    auto orient = [](const Vec2& a, const Vec2& b, const Vec2& c) { return cross2(b - a, c - a); };
    auto on_seg = [](const Vec2& a, const Vec2& b, const Vec2& c) {
        return std::min(a.x(), b.x()) <= c.x() && c.x() <= std::max(a.x(), b.x()) && std::min(a.y(), b.y()) <= c.y() &&
               c.y() <= std::max(a.y(), b.y());
    };
    double d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2), d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
    if (d1 == 0 && on_seg(q1, q2, p1)) return true;
    if (d2 == 0 && on_seg(q1, q2, p2)) return true;
    if (d3 == 0 && on_seg(p1, p2, q1)) return true;
    if (d4 == 0 && on_seg(p1, p2, q2)) return true;
    return false;
}

void check_simple_ccw(const std::vector<Vec2>& poly)
{
    const int n = int(poly.size());
    if (n < 3) throw MeshError("polygon needs at least three vertices");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if ((poly[i] - poly[j]).norm() == 0.0) throw MeshError("polygon has repeated vertices");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            if (segments_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n]))
                throw MeshError("polygon is not simple");
        }
    double a = 0.0;
    for (int i = 0; i < n; ++i) a += cross2(poly[i], poly[(i + 1) % n]);
    if (!(a > 0.0)) throw MeshError("polygon must be counterclockwise");
}

double tri_quality(const Vec2& a, const Vec2& b, const Vec2& c)
{
    double area = 0.5 * cross2(b - a, c - a);
    double s = (b - a).squaredNorm() + (c - b).squaredNorm() + (a - c).squaredNorm();
    return 4.0 * std::sqrt(3.0) * area / s;
}

bool point_in_closed_triangle(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c)
{
    return cross2(b - a, p - a) >= 0 && cross2(c - b, p - b) >= 0 && cross2(a - c, p - c) >= 0;
}

std::vector<Tri> ear_clip(const std::vector<Vec2>& pts)
{
    std::vector<int> ring(pts.size());
    for (int i = 0; i < int(pts.size()); ++i) ring[i] = i;
    std::vector<Tri> tris;
    while (ring.size() > 3) {
        const int n = int(ring.size());
        int best = -1;
        double best_q = 0.0;
        for (int i = 0; i < n; ++i) {
            int ia = ring[(i + n - 1) % n], ib = ring[i], ic = ring[(i + 1) % n];
            const Vec2 &a = pts[ia], &b = pts[ib], &c = pts[ic];
            if (cross2(b - a, c - a) <= 1e-14 * (c - a).squaredNorm()) continue;
            bool blocked = false;
            for (int j = 0; j < n && !blocked; ++j) {
                int v = ring[j];
                if (v == ia || v == ib || v == ic) continue;
                blocked = point_in_closed_triangle(pts[v], a, b, c);
            }
            if (blocked) continue;
            double q = tri_quality(a, b, c);
            if (q > best_q) {
                best_q = q;
                best = i;
            }
        }
        if (best < 0) throw MeshError("ear clipping failed: no valid ear");
        tris.push_back({ring[(best + n - 1) % n], ring[best], ring[(best + 1) % n]});
        ring.erase(ring.begin() + best);
    }
    if (cross2(pts[ring[1]] - pts[ring[0]], pts[ring[2]] - pts[ring[0]]) <= 0.0)
        throw MeshError("ear clipping left a degenerate triangle");
    tris.push_back({ring[0], ring[1], ring[2]});
    return tris;
}

}  // namespace

Mesh refine_uniform(const Mesh& m)
{
    std::vector<Vec2> nodes = m.nodes();
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
        auto k = key(a, b);
        auto it = mid.find(k);
        if (it != mid.end()) return it->second;
        int id = int(nodes.size());
        nodes.push_back(0.5 * (nodes[a] + nodes[b]));
        mid.emplace(k, id);
        return id;
    };
    std::vector<Tri> tris;
    tris.reserve(4 * m.triangles().size());
    for (const auto& T : m.triangles()) {
        int a = T[0], b = T[1], c = T[2];
        int ab = midpoint(a, b), bc = midpoint(b, c), ca = midpoint(c, a);
        tris.push_back({a, ab, ca});
        tris.push_back({ab, b, bc});
        tris.push_back({ca, bc, c});
        tris.push_back({ab, bc, ca});
    }
    std::vector<Edge> boundary;
    for (const auto& e : m.boundary_edges()) {
        int mm = midpoint(e[0], e[1]);
        boundary.push_back({e[0], mm});
        boundary.push_back({mm, e[1]});
    }
    Mesh r = Mesh::unchecked(std::move(nodes), std::move(tris), std::move(boundary));
    auto report = validate_regularity(r);
    if (!report.empty()) throw MeshError("refine_uniform produced an invalid mesh: " + report.front().message);
    return r;
}

Mesh build_polygon_mesh(const std::vector<Vec2>& polygon, double target_h)
{
    if (!(target_h > 0.0)) throw MeshError("target_h must be positive");
    check_simple_ccw(polygon);
    const int n = int(polygon.size());
    double lmin = INFINITY;
    for (int i = 0; i < n; ++i) lmin = std::min(lmin, (polygon[(i + 1) % n] - polygon[i]).norm());
    std::vector<Vec2> pts;
    for (int i = 0; i < n; ++i) {
        const Vec2 &a = polygon[i], &b = polygon[(i + 1) % n];
        int pieces = std::max(1, int(std::ceil((b - a).norm() / lmin - 1e-9)));
        for (int k = 0; k < pieces; ++k) pts.push_back(a + (b - a) * (double(k) / pieces));
    }
    std::vector<Tri> tris = ear_clip(pts);
    Mesh m = Mesh::from_triangles(pts, tris);
    const double limit = std::sqrt(2.0) * target_h * (1.0 + 1e-12);
    for (int guard = 0; m.max_diameter() > limit; ++guard) {
        if (guard > 20) throw MeshError("target_h too small");
        m = refine_uniform(m);
    }
    return m;
}

std::vector<Vec2> unit_square_polygon() { return {{0, 0}, {1, 0}, {1, 1}, {0, 1}}; }

std::vector<Vec2> lshape_polygon() { return {{0, 0}, {1, 0}, {1, 0.5}, {0.5, 0.5}, {0.5, 1}, {0, 1}}; }

std::pair<Mesh, ScaleRecord> scale_to_unit(const Mesh& m)
{
    if (m.node_count() == 0) throw MeshError("scale_to_unit: empty mesh");
    Vec2 lo = m.nodes()[0], hi = m.nodes()[0];
    for (auto& p : m.nodes()) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    ScaleRecord rec;
    rec.center = 0.5 * (lo + hi);
    double r = 0.0;
    for (auto& p : m.nodes()) r = std::max(r, (p - rec.center).norm());
    if (!(r > 0.0)) throw MeshError("scale_to_unit: zero-diameter mesh");
    rec.factor = std::min(1.0, 0.25 / r);
    std::vector<Vec2> nodes;
    nodes.reserve(m.nodes().size());
    for (auto& p : m.nodes()) nodes.push_back(rec.apply(p));
    return {Mesh::unchecked(std::move(nodes), m.triangles(), m.boundary_edges()), rec};
}

void write_mesh(std::ostream& os, const Mesh& m)
{
    os.precision(17);
    os << "mesh2d " << m.node_count() << ' ' << m.triangle_count() << '\n';
    for (auto& p : m.nodes()) os << p.x() << ' ' << p.y() << '\n';
    for (auto& t : m.triangles()) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

Mesh read_mesh(std::istream& is)
{
    std::string tag;
    int nn = 0, nt = 0;
    if (!(is >> tag >> nn >> nt) || tag != "mesh2d" || nn < 3 || nt < 1) throw MeshError("read_mesh: bad header");
    std::vector<Vec2> nodes(nn);
    for (auto& p : nodes)
        if (!(is >> p.x() >> p.y())) throw MeshError("read_mesh: truncated node list");
    std::vector<Tri> tris(nt);
    for (auto& t : tris)
        if (!(is >> t[0] >> t[1] >> t[2])) throw MeshError("read_mesh: truncated triangle list");
    return Mesh::from_triangles(std::move(nodes), std::move(tris));
}

}  // namespace lamecouple
