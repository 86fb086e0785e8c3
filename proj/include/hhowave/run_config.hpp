// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hhowave/hho_core.hpp"
#include "hhowave/materials.hpp"
#include "hhowave/mesh.hpp"
#include "hhowave/scenarios.hpp"
#include "hhowave/timestep.hpp"

namespace hhowave {

/// Where the mesh comes from.
struct MeshSource {
    enum class Kind { generate, file, merge };
    Kind kind = Kind::generate;
    MeshGenSpec gen = manufactured_geometry(MeshFamily::cartesian, 3);
    std::string path;       // file: one MSH or polymesh dump
    std::string fluid_path; // merge: the two sides, glued along the interface
    std::string solid_path;
};

enum class ScenarioKind { manufactured, ricker, zero };

ScenarioKind scenario_kind_from_string(const std::string& s);
const char* to_string(ScenarioKind k);

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::manufactured;
    double omega = 5.0;
    double theta = 1.4142135623730951;
    RickerConfig ricker; // fluid_speed is filled from the materials
};

struct TimeConfig {
    SchemeKind scheme = SchemeKind::erk4;
    double dt = 0.0;  // used when > 0
    double cfl = 0.0; // otherwise dt = cfl * h / c_max
    double final_time = 1.0;
};

struct OutputSpec {
    std::string traces = "traces.csv";
    std::string summary = "summary.json";
    std::string vtu;         // file stem; empty disables snapshots
    int snapshot_every = 0;  // steps between snapshots; 0 writes the final state only
};

/// A complete, validated description of one run.
struct RunConfig {
    MeshSource mesh;
    int degree = 1;
    /// Stabilization; unset fields follow the scheme (explicit or implicit
    /// defaults) when parsed from JSON.
    StabilizationConfig stab = StabilizationConfig::explicit_default();
    TimeConfig time;
    std::string material_set = "academic";
    std::vector<Material> materials; // overrides material_set when non-empty
    ScenarioConfig scenario;
    SolverConfig solver;
    std::vector<SensorSpec> sensors;
    OutputSpec output;

    HhoConfig hho() const;
    /// Throws ConfigError on any inconsistency: explicit schemes need the
    /// equal-order least-squares setting, implicit ones reject alpha = 0
    /// least squares.
    void validate() const;
    /// The material table indexed like the mesh cell material ids.
    /// `names` are the physical names of a loaded MSH file (empty for
    /// generated meshes, whose ids are 0 = fluid, 1 = solid).
    MaterialTable material_table(const std::vector<std::string>& names) const;
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);
std::string serialize(const RunConfig& cfg);

/// Geometry presets for the bilayer Ricker cases: the unit square with the
/// fluid on top, and the granite-water box in meters.
MeshGenSpec ricker_academic_geometry(MeshFamily family, int level);
MeshGenSpec ricker_granite_geometry(int level);

} // namespace hhowave
