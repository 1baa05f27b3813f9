#include "ks/mesh.hpp"

#include "ks/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace ks::fem {

double TriMesh::triangle_area(int t) const {
    const auto& tri = triangles[t];
    const Vec2 &a = vertices[tri[0]], &b = vertices[tri[1]], &c = vertices[tri[2]];
    return 0.5 * cross(b - a, c - a);
}

std::array<Vec2, 3> TriMesh::basis_gradients(int t) const {
    const auto& tri = triangles[t];
    const Vec2 &a = vertices[tri[0]], &b = vertices[tri[1]], &c = vertices[tri[2]];
    const double inv = 1.0 / (2.0 * triangle_area(t));
    // gradient of the hat function at each corner = rotated opposite edge
    return {inv * Vec2{b.y - c.y, c.x - b.x}, inv * Vec2{c.y - a.y, a.x - c.x},
            inv * Vec2{a.y - b.y, b.x - a.x}};
}

double TriMesh::total_area() const {
    double s = 0.0;
    for (int t = 0; t < n_triangles(); ++t) s += triangle_area(t);
    return s;
}

double TriMesh::max_edge_length() const {
    double m = 0.0;
    for (const auto& e : edges) m = std::max(m, norm(vertices[e.a] - vertices[e.b]));
    return m;
}

bool TriMesh::nonobtuse(double tol) const {
    for (const auto& tri : triangles) {
        for (int k = 0; k < 3; ++k) {
            const Vec2& p = vertices[tri[k]];
            const Vec2 u = vertices[tri[(k + 1) % 3]] - p;
            const Vec2 v = vertices[tri[(k + 2) % 3]] - p;
            if (dot(u, v) < -tol * norm(u) * norm(v)) return false;
        }
    }
    return true;
}

void TriMesh::finalize(bool keep_markers) {
    const int nv = n_vertices();
    for (auto& tri : triangles) {
        for (int k : tri)
            if (k < 0 || k >= nv) throw ValidationError("mesh: triangle index out of range");
        const Vec2 &a = vertices[tri[0]], &b = vertices[tri[1]], &c = vertices[tri[2]];
        const double s = cross(b - a, c - a);
        if (s == 0.0) throw ValidationError("mesh: degenerate triangle");
        if (s < 0.0) std::swap(tri[1], tri[2]);
    }

    edges.clear();
    std::map<std::pair<int, int>, int> edge_of;
    for (int t = 0; t < n_triangles(); ++t) {
        const auto& tri = triangles[t];
        for (int k = 0; k < 3; ++k) {
            const auto key = std::minmax(tri[k], tri[(k + 1) % 3]);
            auto it = edge_of.find(key);
            if (it == edge_of.end()) {
                MeshEdge e;
                e.a = key.first;
                e.b = key.second;
                e.tri[0] = t;
                edge_of.emplace(key, static_cast<int>(edges.size()));
                edges.push_back(e);
            } else {
                MeshEdge& e = edges[it->second];
                if (e.tri[1] != -1)
                    throw ValidationError("mesh: edge shared by more than two triangles");
                e.tri[1] = t;
            }
        }
    }

    if (!keep_markers || static_cast<int>(is_boundary.size()) != nv) {
        is_boundary.assign(nv, 0);
        for (const auto& e : edges)
            if (e.tri[1] == -1) is_boundary[e.a] = is_boundary[e.b] = 1;
    }
    boundary_vertices.clear();
    for (int v = 0; v < nv; ++v)
        if (is_boundary[v]) boundary_vertices.push_back(v);
}

TriMesh generate_mesh(const MeshSpec& spec, double target_h) {
    if (!(target_h > 0.0)) throw ValidationError("mesh: target h must be positive");
    return std::visit(
        [&](const auto& s) -> TriMesh {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, RectSpec>)
                return rect_mesh(s.width, s.height, s.angle, target_h, s.center);
            else if constexpr (std::is_same_v<T, SlotSpec>)
                return slot_mesh(s.outer_lo, s.outer_hi, s.slot_lo, s.slot_hi, target_h);
            else
                return disk_mesh(s.center, s.radius, target_h);
        },
        spec);
}

} // namespace ks::fem
