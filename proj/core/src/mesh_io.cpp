#include "ks/mesh.hpp"

#include "ks/error.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace ks::fem {

TriMesh read_mesh_text(std::istream& in) {
    TriMesh mesh;
    int nv = 0;
    if (!(in >> nv) || nv <= 0) throw ValidationError("mesh file: bad vertex count");
    mesh.vertices.resize(nv);
    for (auto& v : mesh.vertices)
        if (!(in >> v.x >> v.y)) throw ValidationError("mesh file: bad vertex line");

    int nt = 0;
    if (!(in >> nt) || nt <= 0) throw ValidationError("mesh file: bad triangle count");
    mesh.triangles.resize(nt);
    for (auto& t : mesh.triangles)
        if (!(in >> t[0] >> t[1] >> t[2])) throw ValidationError("mesh file: bad triangle line");

    mesh.is_boundary.resize(nv);
    bool have_markers = true;
    for (int i = 0; i < nv; ++i) {
        int m = 0;
        if (!(in >> m)) {
            if (i == 0) {
                have_markers = false;
                break;
            }
            throw ValidationError("mesh file: incomplete boundary marker line");
        }
        mesh.is_boundary[i] = m != 0 ? 1 : 0;
    }
    mesh.finalize(have_markers);
    return mesh;
}

TriMesh read_mesh_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open mesh file: " + path);
    return read_mesh_text(in);
}

void write_mesh_text(const TriMesh& mesh, std::ostream& out) {
    out << mesh.n_vertices() << "\n";
    out << std::setprecision(17);
    for (const auto& v : mesh.vertices) out << v.x << " " << v.y << "\n";
    out << mesh.n_triangles() << "\n";
    for (const auto& t : mesh.triangles) out << t[0] << " " << t[1] << " " << t[2] << "\n";
    for (int i = 0; i < mesh.n_vertices(); ++i)
        out << (i ? " " : "") << static_cast<int>(mesh.is_boundary[i]);
    out << "\n";
}

void write_mesh_file(const TriMesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open mesh file for writing: " + path);
    write_mesh_text(mesh, out);
}

} // namespace ks::fem
