#pragma once

#include "ks/geom.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace ks::fem {

struct MeshEdge {
    int a = -1, b = -1;      // vertex ids, a < b
    int tri[2] = {-1, -1};   // adjacent triangles, tri[1] = -1 on the boundary
};

// conforming triangle mesh with positively oriented cells
struct TriMesh {
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<MeshEdge> edges;
    std::vector<char> is_boundary;      // per vertex
    std::vector<int> boundary_vertices; // sorted ids

    int n_vertices() const { return static_cast<int>(vertices.size()); }
    int n_triangles() const { return static_cast<int>(triangles.size()); }

    double triangle_area(int t) const;
    // gradients of the three nodal basis functions on triangle t
    std::array<Vec2, 3> basis_gradients(int t) const;
    double total_area() const;
    double max_edge_length() const;
    bool nonobtuse(double tol = 1e-12) const;

    // orients triangles, builds edge table, marks the topological boundary
    // (unless markers were supplied), and validates conformity
    void finalize(bool keep_markers = false);
};

// nodal values over the mesh vertices at one instant
struct ScalarField {
    double time = 0.0;
    std::vector<double> values;
};

// --- structured generators ------------------------------------------------
// All generators produce right-triangle lattices (nonobtuse) where the
// geometry allows and mark the topological boundary.

// axis-aligned lattice over a width x height rectangle centered at `center`,
// then rotated by `angle` radians counterclockwise about the center
TriMesh rect_mesh(double width, double height, double angle, double target_h,
                  const Vec2& center = {0.0, 0.0});

// tensor grid over [outer_lo, outer_hi] with grid lines snapped to the slot
// edges, slot cells removed
TriMesh slot_mesh(const Vec2& outer_lo, const Vec2& outer_hi, const Vec2& slot_lo,
                  const Vec2& slot_hi, double target_h);

// 12-sector fan subdivided until the edge length reaches target_h, boundary
// vertices kept on the circle
TriMesh disk_mesh(const Vec2& center, double radius, double target_h);

struct RectSpec {
    double width = 1.0, height = 1.0, angle = 0.0;
    Vec2 center;
};
struct SlotSpec {
    Vec2 outer_lo, outer_hi, slot_lo, slot_hi;
};
struct DiskSpec {
    Vec2 center;
    double radius = 1.0;
};
using MeshSpec = std::variant<RectSpec, SlotSpec, DiskSpec>;

TriMesh generate_mesh(const MeshSpec& spec, double target_h);

// --- text format ------------------------------------------------------------
// line 1: vertex count, then one "x y" line per vertex;
// next: triangle count, then one "i j k" line per triangle (0-based);
// last line: per-vertex boundary markers (0/1), space separated.
TriMesh read_mesh_text(std::istream& in);
TriMesh read_mesh_file(const std::string& path);
void write_mesh_text(const TriMesh& mesh, std::ostream& out);
void write_mesh_file(const TriMesh& mesh, const std::string& path);

} // namespace ks::fem
