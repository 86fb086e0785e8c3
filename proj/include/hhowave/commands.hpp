// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "hhowave/output.hpp"
#include "hhowave/simulation.hpp"

namespace hhowave {

/// Runs one configuration and writes traces, summary and snapshots under
/// `out_dir` (relative output paths are resolved against it).
RunResult cmd_simulate(const RunConfig& cfg, const std::string& out_dir, Exec exec = Exec::parallel);

// ---------------------------------------------------------------------------
// Convergence in space

struct ConvergenceStudy {
    RunConfig base;          // mesh source must be a generator
    std::vector<int> levels; // at least two
    std::vector<int> degrees; // empty: base.degree only
    std::string report = "convergence.csv";

    void validate() const;
};

struct ConvergenceRow {
    int degree = 1;
    int level = 0;
    double h = 0.0;
    std::size_t cells = 0;
    std::size_t dofs = 0;
    double dt = 0.0;
    double error = 0.0;
    double rate = std::numeric_limits<double>::quiet_NaN(); // against the previous level
};

ConvergenceStudy parse_convergence_study(const std::string& json_text);
std::vector<ConvergenceRow> cmd_converge(const ConvergenceStudy& study, Exec exec = Exec::parallel);
CsvTable convergence_table(const std::vector<ConvergenceRow>& rows);
/// log2(e_coarse / e_fine).
double observed_rate(double e_coarse, double e_fine);

// ---------------------------------------------------------------------------
// CFL sweeps

struct CflSweep {
    std::vector<MeshFamily> families{MeshFamily::cartesian};
    std::vector<int> degrees{1};
    std::vector<SchemeKind> schemes{SchemeKind::erk2};
    std::vector<double> eta_f{0.8};
    std::vector<double> eta_s{1.5};
    CflBracketConfig bracket;
    std::string report = "cfl.csv";
};

struct CflRow {
    CflProblem problem;
    CflEstimate estimate;
    // CFL* relative to the first scheme at the same degree, and relative to
    // the lowest degree with the same scheme (NaN when that entry is absent).
    double scheme_ratio = std::numeric_limits<double>::quiet_NaN();
    double degree_ratio = std::numeric_limits<double>::quiet_NaN();
};

CflSweep parse_cfl_sweep(const std::string& json_text);
std::vector<CflRow> cmd_cfl(const CflSweep& sweep, Exec exec = Exec::parallel);
CsvTable cfl_table(const std::vector<CflRow>& rows);

// ---------------------------------------------------------------------------
// Error versus wall time

struct EfficiencyConfig {
    RunConfig base; // scenario, materials and mesh family
    std::vector<SchemeKind> schemes{SchemeKind::erk2, SchemeKind::sdirk34};
    std::vector<int> degrees; // empty: base.degree only
    std::vector<int> levels{0, 1, 2};
    double dt0 = 0.0;
    double tol0 = 0.0;
    /// Explicit schemes use dt = cfl * h / c_max when an entry is present.
    std::map<SchemeKind, double> explicit_cfl;
    std::string report = "efficiency.csv";

    void validate() const;
};

struct EfficiencyRow {
    std::string scheme;
    int degree = 1;
    int level = 0;
    double h = 0.0;
    double dt = 0.0;
    std::size_t steps = 0;
    double tolerance = 0.0;
    std::size_t global_dofs = 0;
    double error = 0.0;
    double wall_seconds = 0.0;
};

/// 2^(-level (k+1) / (q+1)) dt0 with q the nominal order of the scheme.
double efficiency_time_step(double dt0, int level, int degree, int order);
/// 2^(-level (k+1)) tol0.
double efficiency_tolerance(double tol0, int level, int degree);

EfficiencyConfig parse_efficiency_config(const std::string& json_text);
std::vector<EfficiencyRow> cmd_efficiency(const EfficiencyConfig& cfg, Exec exec = Exec::parallel);
CsvTable efficiency_table(const std::vector<EfficiencyRow>& rows);

std::string read_text_file(const std::string& path);

} // namespace hhowave
