#include "ks/controls_io.hpp"

#include "ks/error.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace ks::obj {

void write_controls_csv(std::ostream& out, const ControlTrajectory& traj,
                        mag::ControlMode mode) {
    const int np = traj.dim / 2;
    out << "t";
    for (int j = 1; j <= np; ++j) out << ",alpha_" << j;
    const char* placement =
        mode == mag::ControlMode::IntensityDirection ? ",theta_" : ",phi_";
    for (int j = 1; j <= np; ++j) out << placement << j;
    out << "\n";
    out << std::setprecision(17);
    for (int n = 0; n <= traj.n_steps(); ++n) {
        out << n * traj.tau;
        for (double v : traj.node(n)) out << "," << v;
        out << "\n";
    }
}

void write_controls_file(const std::string& path, const ControlTrajectory& traj,
                         mag::ControlMode mode) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open controls file for writing: " + path);
    write_controls_csv(out, traj, mode);
}

ControlsFile read_controls_csv(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw ValidationError("controls file: empty");

    ControlsFile file;
    int n_alpha = 0, n_placement = 0;
    {
        std::istringstream hs(header);
        std::string col;
        bool first = true;
        while (std::getline(hs, col, ',')) {
            if (first) {
                if (col != "t") throw ValidationError("controls file: first column must be t");
                first = false;
            } else if (col.rfind("alpha_", 0) == 0) {
                ++n_alpha;
            } else if (col.rfind("theta_", 0) == 0) {
                file.mode = mag::ControlMode::IntensityDirection;
                ++n_placement;
            } else if (col.rfind("phi_", 0) == 0) {
                file.mode = mag::ControlMode::IntensityPosition;
                ++n_placement;
            } else {
                throw ValidationError("controls file: unknown column " + col);
            }
        }
    }
    if (n_alpha == 0 || n_alpha != n_placement)
        throw ValidationError("controls file: need matching alpha and placement columns");

    const int dim = 2 * n_alpha;
    std::vector<double> times;
    ControlTrajectory& traj = file.trajectory;
    traj.dim = dim;

    std::string line;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ls, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ValidationError("controls file line " + std::to_string(lineno) +
                                      ": bad number '" + cell + "'");
            }
        }
        if (static_cast<int>(row.size()) != dim + 1)
            throw ValidationError("controls file line " + std::to_string(lineno) +
                                  ": expected " + std::to_string(dim + 1) + " values");
        times.push_back(row[0]);
        traj.values.insert(traj.values.end(), row.begin() + 1, row.end());
    }
    if (times.size() < 2) throw ValidationError("controls file: need at least two time nodes");

    traj.tau = (times.back() - times.front()) / (static_cast<double>(times.size()) - 1.0);
    if (!(traj.tau > 0.0)) throw ValidationError("controls file: times must increase");
    for (std::size_t n = 0; n < times.size(); ++n)
        if (std::abs(times[n] - static_cast<double>(n) * traj.tau) >
            1e-9 * std::max(1.0, times.back()))
            throw ValidationError("controls file: time nodes must be uniformly spaced");
    return file;
}

ControlsFile read_controls_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open controls file: " + path);
    return read_controls_csv(in);
}

} // namespace ks::obj
