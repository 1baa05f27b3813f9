#pragma once

#include "ks/mesh.hpp"
#include "ks/transport.hpp"

#include <string>
#include <vector>

namespace ks::pde {

// legacy-VTK unstructured grid with one point-data scalar named "concentration"
void write_vtk(const std::string& path, const fem::TriMesh& mesh,
               const fem::ScalarField& field);

// header: t,mass,min,max,com_x,com_y
void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRow>& rows);

} // namespace ks::pde
