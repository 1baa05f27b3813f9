#include "ks/vtk.hpp"

#include "ks/error.hpp"

#include <fstream>
#include <iomanip>

namespace ks::pde {

void write_vtk(const std::string& path, const fem::TriMesh& mesh,
               const fem::ScalarField& field) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open vtk file for writing: " + path);
    out << std::setprecision(12);
    out << "# vtk DataFile Version 3.0\n";
    out << "concentration snapshot t=" << field.time << "\n";
    out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.n_vertices() << " double\n";
    for (const auto& v : mesh.vertices) out << v.x << " " << v.y << " 0\n";
    out << "CELLS " << mesh.n_triangles() << " " << 4 * mesh.n_triangles() << "\n";
    for (const auto& t : mesh.triangles) out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
    out << "CELL_TYPES " << mesh.n_triangles() << "\n";
    for (int t = 0; t < mesh.n_triangles(); ++t) out << "5\n";
    out << "POINT_DATA " << mesh.n_vertices() << "\n";
    out << "SCALARS concentration double 1\nLOOKUP_TABLE default\n";
    for (double v : field.values) out << v << "\n";
}

void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRow>& rows) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open diagnostics file for writing: " + path);
    out << std::setprecision(12);
    out << "t,mass,min,max,com_x,com_y\n";
    for (const auto& r : rows)
        out << r.t << "," << r.mass << "," << r.min_value << "," << r.max_value << ","
            << r.center_of_mass.x << "," << r.center_of_mass.y << "\n";
}

} // namespace ks::pde
