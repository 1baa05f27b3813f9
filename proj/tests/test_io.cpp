#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ks/controls_io.hpp"
#include "ks/error.hpp"
#include "ks/mesh.hpp"
#include "ks/vtk.hpp"

using namespace ks;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

struct FileGuard {
    std::string path;
    ~FileGuard() { std::remove(path.c_str()); }
};

obj::ControlTrajectory random_trajectory(int dim, int n_steps, double tau, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    obj::ControlTrajectory t;
    t.tau = tau;
    t.dim = dim;
    t.values.resize(static_cast<std::size_t>(n_steps + 1) * dim);
    for (auto& v : t.values) v = u(rng);
    return t;
}

} // namespace

TEST_CASE("controls round trip is exact") {
    const auto traj = random_trajectory(6, 7, 0.125, 404);
    for (auto mode : {mag::ControlMode::IntensityDirection, mag::ControlMode::IntensityPosition}) {
        std::ostringstream out;
        obj::write_controls_csv(out, traj, mode);
        std::istringstream in(out.str());
        const auto back = obj::read_controls_csv(in);
        CHECK(back.mode == mode);
        CHECK(back.trajectory.dim == traj.dim);
        CHECK(back.trajectory.n_steps() == traj.n_steps());
        CHECK(back.trajectory.tau == doctest::Approx(traj.tau).epsilon(1e-15));
        REQUIRE(back.trajectory.values.size() == traj.values.size());
        for (std::size_t i = 0; i < traj.values.size(); ++i)
            CHECK(back.trajectory.values[i] == traj.values[i]); // bitwise, 17 digits suffice
    }
}

TEST_CASE("controls header names the placement by mode") {
    const auto traj = random_trajectory(4, 2, 0.5, 7);
    std::ostringstream dir, pos;
    obj::write_controls_csv(dir, traj, mag::ControlMode::IntensityDirection);
    obj::write_controls_csv(pos, traj, mag::ControlMode::IntensityPosition);
    CHECK(dir.str().substr(0, dir.str().find('\n')) == "t,alpha_1,alpha_2,theta_1,theta_2");
    CHECK(pos.str().substr(0, pos.str().find('\n')) == "t,alpha_1,alpha_2,phi_1,phi_2");
}

TEST_CASE("controls reader rejects malformed input") {
    SUBCASE("empty stream") {
        std::istringstream in("");
        CHECK_THROWS_AS((void)obj::read_controls_csv(in), ValidationError);
    }
    SUBCASE("wrong first column") {
        std::istringstream in("time,alpha_1,theta_1\n0,1,2\n1,1,2\n");
        CHECK_THROWS_AS((void)obj::read_controls_csv(in), ValidationError);
    }
    SUBCASE("unknown column") {
        std::istringstream in("t,alpha_1,gamma_1\n0,1,2\n1,1,2\n");
        CHECK_THROWS_AS((void)obj::read_controls_csv(in), ValidationError);
    }
    SUBCASE("mismatched column groups") {
        std::istringstream in("t,alpha_1,alpha_2,theta_1\n0,1,2,3\n1,1,2,3\n");
        CHECK_THROWS_AS((void)obj::read_controls_csv(in), ValidationError);
    }
    SUBCASE("ragged row") {
        std::istringstream in("t,alpha_1,theta_1\n0,1,2\n1,1\n");
        try {
            (void)obj::read_controls_csv(in);
            FAIL("expected a validation error");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        }
    }
    SUBCASE("bad number reports the cell") {
        std::istringstream in("t,alpha_1,theta_1\n0,1,2\n1,abc,2\n");
        try {
            (void)obj::read_controls_csv(in);
            FAIL("expected a validation error");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("abc") != std::string::npos);
        }
    }
    SUBCASE("single row is not a trajectory") {
        std::istringstream in("t,alpha_1,theta_1\n0,1,2\n");
        CHECK_THROWS_AS((void)obj::read_controls_csv(in), ValidationError);
    }
    SUBCASE("nonuniform spacing") {
        std::istringstream in("t,alpha_1,theta_1\n0,1,2\n0.1,1,2\n0.5,1,2\n");
        CHECK_THROWS_AS((void)obj::read_controls_csv(in), ValidationError);
    }
    SUBCASE("decreasing times") {
        std::istringstream in("t,alpha_1,theta_1\n1,1,2\n0,1,2\n");
        CHECK_THROWS_AS((void)obj::read_controls_csv(in), ValidationError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS((void)obj::read_controls_file("/nonexistent/controls.csv"),
                        ValidationError);
    }
}

TEST_CASE("controls file round trip through disk") {
    FileGuard guard{temp_path("ks_test_controls.csv")};
    const auto traj = random_trajectory(2, 4, 0.25, 90);
    obj::write_controls_file(guard.path, traj, mag::ControlMode::IntensityPosition);
    const auto back = obj::read_controls_file(guard.path);
    CHECK(back.mode == mag::ControlMode::IntensityPosition);
    CHECK(back.trajectory.values == traj.values);
}

TEST_CASE("vtk output is a well formed unstructured grid") {
    fem::RectSpec spec;
    const auto mesh = generate_mesh(spec, 0.5);
    fem::ScalarField field;
    field.time = 0.375;
    field.values.assign(static_cast<std::size_t>(mesh.n_vertices()), 0.0);
    for (int i = 0; i < mesh.n_vertices(); ++i) field.values[i] = i * 0.5;

    FileGuard guard{temp_path("ks_test_snapshot.vtk")};
    pde::write_vtk(guard.path, mesh, field);

    std::ifstream in(guard.path);
    REQUIRE(in.good());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);

    REQUIRE(lines.size() > 10);
    CHECK(lines[0] == "# vtk DataFile Version 3.0");
    CHECK(lines[1] == "concentration snapshot t=0.375");
    CHECK(lines[2] == "ASCII");
    CHECK(lines[3] == "DATASET UNSTRUCTURED_GRID");
    CHECK(lines[4] == "POINTS " + std::to_string(mesh.n_vertices()) + " double");

    const std::size_t cells_at = 5 + static_cast<std::size_t>(mesh.n_vertices());
    CHECK(lines[cells_at] == "CELLS " + std::to_string(mesh.n_triangles()) + " " +
                                 std::to_string(4 * mesh.n_triangles()));
    // every cell row lists a triangle
    for (int t = 0; t < mesh.n_triangles(); ++t)
        CHECK(lines[cells_at + 1 + t].substr(0, 2) == "3 ");
    const std::size_t types_at = cells_at + 1 + static_cast<std::size_t>(mesh.n_triangles());
    CHECK(lines[types_at] == "CELL_TYPES " + std::to_string(mesh.n_triangles()));
    CHECK(lines[types_at + 1] == "5");
    const std::size_t data_at = types_at + 1 + static_cast<std::size_t>(mesh.n_triangles());
    CHECK(lines[data_at] == "POINT_DATA " + std::to_string(mesh.n_vertices()));
    CHECK(lines[data_at + 1] == "SCALARS concentration double 1");
    CHECK(lines[data_at + 2] == "LOOKUP_TABLE default");
    CHECK(lines.size() == data_at + 3 + static_cast<std::size_t>(mesh.n_vertices()));
}

TEST_CASE("diagnostics csv carries the summary columns") {
    std::vector<pde::DiagnosticsRow> rows(2);
    rows[0].t = 0.0;
    rows[0].mass = 1.5;
    rows[0].min_value = 0.0;
    rows[0].max_value = 2.0;
    rows[0].center_of_mass = {0.25, -0.5};
    rows[1].t = 0.1;
    rows[1].mass = 1.25;
    rows[1].min_value = -0.125;
    rows[1].max_value = 1.75;
    rows[1].center_of_mass = {0.5, 0.5};

    FileGuard guard{temp_path("ks_test_diag.csv")};
    pde::write_diagnostics_csv(guard.path, rows);

    std::ifstream in(guard.path);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "t,mass,min,max,com_x,com_y");
    REQUIRE(std::getline(in, line));
    CHECK(line == "0,1.5,0,2,0.25,-0.5");
    REQUIRE(std::getline(in, line));
    CHECK(line == "0.1,1.25,-0.125,1.75,0.5,0.5");
    CHECK_FALSE(std::getline(in, line));
}
