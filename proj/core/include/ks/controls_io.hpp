#pragma once

#include "ks/dipole.hpp"
#include "ks/trajectory.hpp"

#include <iosfwd>
#include <string>

namespace ks::obj {

// CSV with one row per time node: t, the intensity columns, then the
// placement columns (named theta_* or phi_* by control mode). Values carry
// 17 significant digits so a read-back reproduces the trajectory exactly.
void write_controls_csv(std::ostream& out, const ControlTrajectory& traj,
                        mag::ControlMode mode);
void write_controls_file(const std::string& path, const ControlTrajectory& traj,
                         mag::ControlMode mode);

struct ControlsFile {
    ControlTrajectory trajectory;
    mag::ControlMode mode = mag::ControlMode::IntensityDirection;
};

ControlsFile read_controls_csv(std::istream& in);
ControlsFile read_controls_file(const std::string& path);

} // namespace ks::obj
