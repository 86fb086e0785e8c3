// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "hhowave/run_config.hpp"

namespace hhowave {

struct LoadedMesh {
    PolyMesh mesh;
    std::vector<std::string> material_names; // empty for generated meshes
    double h = 0.0; // nominal size for generated meshes, largest cell diameter otherwise
};

/// Reads `.msh` files as MSH 2.2 and anything else as a polymesh dump.
LoadedMesh load_mesh(const MeshSource& src);

/// Global unknown counts before and after static condensation.
struct DofSummary {
    std::size_t cell_dofs = 0;
    std::size_t face_dofs = 0;
    std::size_t total = 0;
    /// Unknowns left in the global problem: the face unknowns for implicit
    /// schemes (cells condensed), none for explicit ones (all solves local).
    std::size_t global = 0;
    /// 1 - face_dofs / total: share of unknowns removed by cell condensation.
    double reduction = 0.0;
};

DofSummary dof_summary(const BlockSystem& sys, bool implicit);

struct RunSummary {
    std::string scheme;
    int degree = 1;
    std::string order;
    std::size_t cells = 0;
    std::size_t faces = 0;
    DofSummary dofs;
    double h = 0.0;
    double dt = 0.0;
    double cfl = 0.0; // c_max dt / h
    std::size_t steps = 0;
    double final_time = 0.0;
    double setup_seconds = 0.0; // assembly and factorization
    double loop_seconds = 0.0;
    double wall_seconds = 0.0;  // setup + loop
    double initial_energy = 0.0;
    double final_energy = 0.0;
    /// L2 error of the dual fields at the final time (manufactured runs).
    double dual_error = std::numeric_limits<double>::quiet_NaN();
    std::size_t schur_nonzeros = 0;
    int last_solver_iterations = 0;
};

struct SensorRecord {
    SensorProbe probe;
    Trace trace;
    // Interface sensors: running maxima of the coupling residuals.
    double max_kinematic = 0.0;
    double max_dynamic = 0.0;
};

struct RunResult {
    RunSummary summary;
    std::vector<SensorRecord> sensors;
    std::vector<double> energy; // per step, index 0 = initial state
    SimState state;
};

/// One configured run: mesh, materials and block system are built on
/// construction; run() integrates from the initial condition.
class Simulation {
public:
    explicit Simulation(RunConfig cfg, Exec exec = Exec::parallel);

    const RunConfig& config() const { return cfg_; }
    const PolyMesh& mesh() const { return mesh_.mesh; }
    const MaterialTable& materials() const { return mats_; }
    const BlockSystem& system() const { return sys_; }
    double dt() const { return dt_; }
    std::size_t steps() const { return steps_; }
    double mesh_size() const { return mesh_.h; }

    /// Called after every step (and once for the initial state).
    using Observer = std::function<void(const SimState&)>;
    RunResult run(const Observer& observer = {}) const;

private:
    RunConfig cfg_;
    Exec exec_;
    LoadedMesh mesh_;
    MaterialTable mats_;
    BlockSystem sys_;
    double assembly_seconds_ = 0.0;
    double dt_ = 0.0;
    std::size_t steps_ = 0;
};

} // namespace hhowave
