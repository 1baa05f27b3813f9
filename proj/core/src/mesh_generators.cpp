#include "ks/mesh.hpp"

#include "ks/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>

namespace ks::fem {

namespace {

// tensor-product grid split into right triangles along the (lo, hi) diagonal
TriMesh lattice_mesh(const std::vector<double>& xs, const std::vector<double>& ys,
                     const std::function<bool(int, int)>& keep_cell) {
    const int nx = static_cast<int>(xs.size()) - 1;
    const int ny = static_cast<int>(ys.size()) - 1;
    TriMesh mesh;

    std::vector<int> vid(static_cast<std::size_t>(nx + 1) * (ny + 1), -1);
    auto vertex = [&](int i, int j) {
        int& id = vid[static_cast<std::size_t>(j) * (nx + 1) + i];
        if (id == -1) {
            id = mesh.n_vertices();
            mesh.vertices.push_back({xs[i], ys[j]});
        }
        return id;
    };

    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            if (!keep_cell(i, j)) continue;
            const int v00 = vertex(i, j), v10 = vertex(i + 1, j);
            const int v01 = vertex(i, j + 1), v11 = vertex(i + 1, j + 1);
            mesh.triangles.push_back({v00, v10, v11});
            mesh.triangles.push_back({v00, v11, v01});
        }
    }
    mesh.finalize();
    return mesh;
}

std::vector<double> uniform_ticks(double lo, double hi, double target_h) {
    const int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / target_h - 1e-12)));
    std::vector<double> t(n + 1);
    for (int i = 0; i <= n; ++i) t[i] = lo + (hi - lo) * i / n;
    return t;
}

// uniform ticks with the given interior lines inserted exactly; ticks landing
// within a quarter cell of an inserted line are snapped onto it
std::vector<double> snapped_ticks(double lo, double hi, double target_h,
                                  std::vector<double> lines) {
    std::vector<double> t = uniform_ticks(lo, hi, target_h);
    const double snap = 0.25 * (hi - lo) / (static_cast<double>(t.size()) - 1.0);
    for (double line : lines) {
        if (line <= lo || line >= hi) continue;
        bool snapped = false;
        for (double& x : t)
            if (std::abs(x - line) <= snap) {
                x = line;
                snapped = true;
            }
        if (!snapped) t.push_back(line);
    }
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
}

} // namespace

TriMesh rect_mesh(double width, double height, double angle, double target_h,
                  const Vec2& center) {
    if (!(width > 0.0) || !(height > 0.0)) throw ValidationError("rect mesh: empty rectangle");
    TriMesh mesh = lattice_mesh(uniform_ticks(-0.5 * width, 0.5 * width, target_h),
                                uniform_ticks(-0.5 * height, 0.5 * height, target_h),
                                [](int, int) { return true; });
    const double c = std::cos(angle), s = std::sin(angle);
    for (Vec2& v : mesh.vertices) v = center + Vec2{c * v.x - s * v.y, s * v.x + c * v.y};
    return mesh;
}

TriMesh slot_mesh(const Vec2& outer_lo, const Vec2& outer_hi, const Vec2& slot_lo,
                  const Vec2& slot_hi, double target_h) {
    if (!(outer_lo.x < outer_hi.x && outer_lo.y < outer_hi.y))
        throw ValidationError("slot mesh: empty outer rectangle");
    if (!(slot_lo.x < slot_hi.x && slot_lo.y < slot_hi.y))
        throw ValidationError("slot mesh: empty slot");
    if (slot_lo.x < outer_lo.x - 1e-14 || slot_hi.x > outer_hi.x + 1e-14 ||
        slot_lo.y < outer_lo.y - 1e-14 || slot_hi.y > outer_hi.y + 1e-14)
        throw ValidationError("slot mesh: slot not contained in the outer rectangle");

    const auto xs = snapped_ticks(outer_lo.x, outer_hi.x, target_h, {slot_lo.x, slot_hi.x});
    const auto ys = snapped_ticks(outer_lo.y, outer_hi.y, target_h, {slot_lo.y, slot_hi.y});

    auto inside_slot = [&](double a, double b, double lo, double hi) {
        return a >= lo - 1e-14 && b <= hi + 1e-14;
    };
    return lattice_mesh(xs, ys, [&](int i, int j) {
        return !(inside_slot(xs[i], xs[i + 1], slot_lo.x, slot_hi.x) &&
                 inside_slot(ys[j], ys[j + 1], slot_lo.y, slot_hi.y));
    });
}

TriMesh disk_mesh(const Vec2& center, double radius, double target_h) {
    if (!(radius > 0.0)) throw ValidationError("disk mesh: radius must be positive");

    constexpr int sectors = 12;
    std::vector<Vec2> verts;
    std::vector<std::array<int, 3>> tris;
    verts.push_back({0.0, 0.0});
    for (int k = 0; k < sectors; ++k) {
        const double a = 2.0 * std::numbers::pi * k / sectors;
        verts.push_back({radius * std::cos(a), radius * std::sin(a)});
    }
    for (int k = 0; k < sectors; ++k) tris.push_back({0, 1 + k, 1 + (k + 1) % sectors});

    auto longest_edge = [&]() {
        double m = 0.0;
        for (const auto& t : tris)
            for (int k = 0; k < 3; ++k)
                m = std::max(m, norm(verts[t[k]] - verts[t[(k + 1) % 3]]));
        return m;
    };

    while (longest_edge() > target_h) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            Vec2 m = 0.5 * (verts[a] + verts[b]);
            if (std::abs(norm(verts[a]) - radius) < 1e-12 * radius &&
                std::abs(norm(verts[b]) - radius) < 1e-12 * radius)
                m = (radius / norm(m)) * m;
            const int id = static_cast<int>(verts.size());
            verts.push_back(m);
            midpoint.emplace(key, id);
            return id;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(tris.size() * 4);
        for (const auto& t : tris) {
            const int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
            next.push_back({t[0], ab, ca});
            next.push_back({ab, t[1], bc});
            next.push_back({ca, bc, t[2]});
            next.push_back({ab, bc, ca});
        }
        tris = std::move(next);
    }

    TriMesh mesh;
    mesh.vertices = std::move(verts);
    for (Vec2& v : mesh.vertices) v += center;
    mesh.triangles = std::move(tris);
    mesh.finalize();
    return mesh;
}

} // namespace ks::fem
