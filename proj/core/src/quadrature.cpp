#include "ks/quadrature.hpp"

#include "ks/error.hpp"

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <utility>

namespace ks::dom {

namespace {

struct Triangulation {
    std::vector<Vec2> verts;
    std::vector<std::array<int, 3>> tris;
};

bool on_circle(const Vec2& v, double radius) {
    return std::abs(norm(v) - radius) < 1e-12 * radius;
}

// one 4-way subdivision; midpoints of chords between circle points are
// projected back onto the circle
Triangulation subdivide(const Triangulation& t, double radius) {
    Triangulation out;
    out.verts = t.verts;
    std::map<std::pair<int, int>, int> midpoint;

    auto mid = [&](int a, int b) {
        auto key = std::minmax(a, b);
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        Vec2 m = 0.5 * (out.verts[a] + out.verts[b]);
        if (on_circle(out.verts[a], radius) && on_circle(out.verts[b], radius))
            m = (radius / norm(m)) * m;
        const int id = static_cast<int>(out.verts.size());
        out.verts.push_back(m);
        midpoint.emplace(key, id);
        return id;
    };

    for (const auto& tri : t.tris) {
        const int a = tri[0], b = tri[1], c = tri[2];
        const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
        out.tris.push_back({a, ab, ca});
        out.tris.push_back({ab, b, bc});
        out.tris.push_back({ca, bc, c});
        out.tris.push_back({ab, bc, ca});
    }
    return out;
}

} // namespace

QuadratureRule disk_quadrature(double radius, int refinement) {
    if (refinement < 1) throw ValidationError("disk quadrature: refinement must be >= 1");
    if (!(radius > 0.0)) throw ValidationError("disk quadrature: radius must be positive");

    constexpr int sectors = 12;
    Triangulation t;
    t.verts.push_back({0.0, 0.0});
    for (int k = 0; k < sectors; ++k) {
        const double a = 2.0 * std::numbers::pi * k / sectors;
        t.verts.push_back({radius * std::cos(a), radius * std::sin(a)});
    }
    for (int k = 0; k < sectors; ++k) t.tris.push_back({0, 1 + k, 1 + (k + 1) % sectors});

    for (int level = 1; level < refinement; ++level) t = subdivide(t, radius);

    QuadratureRule rule;
    rule.nodes.reserve(t.tris.size());
    rule.weights.reserve(t.tris.size());
    double total = 0.0;
    for (const auto& tri : t.tris) {
        const Vec2 &a = t.verts[tri[0]], &b = t.verts[tri[1]], &c = t.verts[tri[2]];
        const double area = 0.5 * std::abs(cross(b - a, c - a));
        rule.nodes.push_back((1.0 / 3.0) * (a + b + c));
        rule.weights.push_back(area);
        total += area;
    }
    // the triangulation inscribes the disk; rescale so constants integrate exactly
    const double correction = std::numbers::pi * radius * radius / total;
    for (double& w : rule.weights) w *= correction;
    return rule;
}

QuadratureRule disk_quadrature(const Disk& disk, int refinement) {
    QuadratureRule rule = disk_quadrature(disk.radius, refinement);
    for (Vec2& p : rule.nodes) p += disk.center;
    return rule;
}

} // namespace ks::dom
