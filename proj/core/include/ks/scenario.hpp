#pragma once

#include "ks/dipole.hpp"
#include "ks/mesh.hpp"
#include "ks/moving_domain.hpp"
#include "ks/objective.hpp"
#include "ks/optimize.hpp"
#include "ks/target_field.hpp"
#include "ks/transport.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ks::app {

// optional PDE stage of a scenario
struct PdeBlock {
    fem::MeshSpec mesh_spec = fem::RectSpec{};
    double target_h = 0.01;
    pde::TransportSettings settings;
    // dt chosen at run time from the explicit stability bound
    bool auto_dt = false;
    Vec2 initial_center;
    double initial_sigma2 = 1e-3;
    std::vector<double> snapshot_times;
};

// everything a run needs, parsed from one JSON file
struct Scenario {
    std::string name;
    mag::DipoleConfig dipoles;
    dom::MovingDomain domain;
    dom::TargetField target;
    obj::ObjectiveConfig weights;
    opt::OptimizerSettings optimizer;
    opt::HorizonSettings horizon;
    int n_steps = 100;
    int quadrature_refinement = 4;
    std::optional<PdeBlock> pde;
    std::string output_dir = "out";

    double t_end() const { return domain.t_end(); }
    void validate() const;
};

Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& text, const std::string& origin = "scenario");

} // namespace ks::app
