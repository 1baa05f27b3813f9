#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <set>

#include "ks/error.hpp"
#include "ks/mesh.hpp"

using namespace ks;
using namespace ks::fem;

namespace {

constexpr double kPi = std::numbers::pi;

RectSpec unit_square() {
    RectSpec r;
    r.width = 1.0;
    r.height = 1.0;
    r.center = {0.5, 0.5};
    r.angle = 0.0;
    return r;
}

} // namespace

TEST_CASE("unit square at h = 0.5") {
    const auto mesh = generate_mesh(unit_square(), 0.5);
    CHECK(mesh.n_vertices() == 9);
    CHECK(mesh.n_triangles() == 8);
    CHECK(mesh.total_area() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(mesh.nonobtuse(1e-12));
    // 8 boundary vertices, 1 interior
    CHECK(static_cast<int>(mesh.boundary_vertices.size()) == 8);
    for (int t = 0; t < mesh.n_triangles(); ++t) CHECK(mesh.triangle_area(t) > 0);
}

TEST_CASE("rotated rectangle keeps its area") {
    RectSpec r;
    r.width = 1.8;
    r.height = 0.6;
    r.center = {0, 0};
    r.angle = -kPi / 4;
    const auto mesh = generate_mesh(r, 0.05);
    CHECK(mesh.total_area() == doctest::Approx(1.8 * 0.6).epsilon(1e-12));
    CHECK(mesh.nonobtuse(1e-9));
    // the corner (0.9, 0.3) rotated clockwise by pi/4
    const double s = std::sqrt(0.5);
    const Vec2 corner{0.9 * s + 0.3 * s, -0.9 * s + 0.3 * s};
    double best = 1e9;
    for (const auto& v : mesh.vertices) best = std::min(best, norm(v - corner));
    CHECK(best < 1e-12);
}

TEST_CASE("slot domain drops the notch cells") {
    SlotSpec s;
    s.outer_lo = {-0.18, -0.18};
    s.outer_hi = {0.18, 0.18};
    s.slot_lo = {-0.02, -0.18};
    s.slot_hi = {0.02, 0.0};
    const auto mesh = generate_mesh(s, 0.01);
    const double want = 0.36 * 0.36 - 0.04 * 0.18;
    CHECK(mesh.total_area() == doctest::Approx(want).epsilon(1e-12));
    CHECK(mesh.nonobtuse(1e-9));
    // no vertex strictly inside the notch
    for (const auto& v : mesh.vertices) {
        const bool inside = v.x > s.slot_lo.x + 1e-12 && v.x < s.slot_hi.x - 1e-12 &&
                            v.y > s.slot_lo.y + 1e-12 && v.y < s.slot_hi.y - 1e-12;
        CHECK(!inside);
    }
    // slot walls are boundary: find a vertex on the wall x = -0.02, y < 0
    bool wall_found = false;
    for (int b : mesh.boundary_vertices) {
        const auto& v = mesh.vertices[b];
        if (std::abs(v.x + 0.02) < 1e-12 && v.y < -0.05) wall_found = true;
    }
    CHECK(wall_found);

    SlotSpec bad = s;
    bad.slot_hi = {0.3, 0.0}; // pokes outside the outer box
    CHECK_THROWS_AS((void)generate_mesh(bad, 0.01), ValidationError);
}

TEST_CASE("disk mesh covers the disk") {
    DiskSpec d;
    d.center = {0.5, -0.5};
    d.radius = 1.0;
    const auto mesh = generate_mesh(d, 0.1);
    CHECK(mesh.total_area() == doctest::Approx(kPi).epsilon(2e-3));
    CHECK(mesh.max_edge_length() < 0.16);
    for (const auto& v : mesh.vertices) CHECK(norm(v - d.center) <= 1.0 + 1e-12);
    // boundary vertices lie on the circle
    for (int b : mesh.boundary_vertices) {
        CHECK(norm(mesh.vertices[b] - d.center) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("finalize orients triangles and finds the boundary") {
    TriMesh m;
    m.vertices = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    m.triangles = {{0, 2, 1}, {1, 2, 3}}; // first one is clockwise on purpose
    m.finalize();
    CHECK(m.triangle_area(0) > 0);
    CHECK(m.triangle_area(1) > 0);
    CHECK(m.boundary_vertices.size() == 4);
    CHECK(m.edges.size() == 5);

    TriMesh degenerate;
    degenerate.vertices = {{0, 0}, {1, 0}, {2, 0}};
    degenerate.triangles = {{0, 1, 2}};
    CHECK_THROWS_AS(degenerate.finalize(), ValidationError);

    TriMesh overfull;
    overfull.vertices = {{0, 0}, {1, 0}, {0, 1}, {1, 1}, {-1, 1}};
    overfull.triangles = {{0, 1, 2}, {1, 3, 2}, {0, 2, 4}, {0, 1, 4}};
    // edge (0,1) and (0,2) fine; reuse edge (0,1) a third time
    overfull.triangles.push_back({0, 1, 3});
    CHECK_THROWS_AS(overfull.finalize(), ValidationError);
}

TEST_CASE("basis gradients reproduce linear functions") {
    const auto mesh = generate_mesh(unit_square(), 0.25);
    // u(x, y) = 3x - 2y + 1 has constant gradient (3, -2)
    std::vector<double> u(mesh.n_vertices());
    for (int i = 0; i < mesh.n_vertices(); ++i) {
        u[i] = 3 * mesh.vertices[i].x - 2 * mesh.vertices[i].y + 1;
    }
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto g = mesh.basis_gradients(t);
        Vec2 grad{0, 0};
        Vec2 sum{0, 0};
        for (int k = 0; k < 3; ++k) {
            grad += u[mesh.triangles[t][k]] * g[k];
            sum += g[k];
        }
        CHECK(grad.x == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(grad.y == doctest::Approx(-2.0).epsilon(1e-12));
        CHECK(norm(sum) < 1e-12);
    }
}

TEST_CASE("mesh text io round trip") {
    const auto mesh = generate_mesh(unit_square(), 0.5);
    const auto path = std::filesystem::temp_directory_path() / "ks_mesh_roundtrip.txt";
    write_mesh_file(mesh, path.string());
    const auto back = read_mesh_file(path.string());
    REQUIRE(back.n_vertices() == mesh.n_vertices());
    REQUIRE(back.n_triangles() == mesh.n_triangles());
    for (int i = 0; i < mesh.n_vertices(); ++i) {
        CHECK(back.vertices[i].x == mesh.vertices[i].x);
        CHECK(back.vertices[i].y == mesh.vertices[i].y);
    }
    CHECK(back.boundary_vertices == mesh.boundary_vertices);
    std::filesystem::remove(path);

    CHECK_THROWS_AS((void)read_mesh_file("/nonexistent/mesh.txt"), ValidationError);
}
