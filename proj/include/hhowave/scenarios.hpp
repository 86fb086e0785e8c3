// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "hhowave/common.hpp"
#include "hhowave/hho_core.hpp"
#include "hhowave/materials.hpp"
#include "hhowave/mesh.hpp"
#include "hhowave/timestep.hpp"

namespace hhowave {

// ---------------------------------------------------------------------------
// Manufactured solution

/// Separable exact solution on the fluid (x > 0) / solid (x < 0) bilayer.
/// Fluid potential u = x^2 sin(w pi x) sin(w pi y) sin(th pi t); solid
/// displacement u_x = u_y = x^2 cos(w pi x / 2) sin(w pi y) cos(th pi t).
/// p = du/dt, m = grad(u) / rho^f, v = du/dt, s = C grad_sym(u).
struct ManufacturedCase {
    double omega = 5.0;
    double theta = 1.4142135623730951;
    FluidMaterial fluid;
    SolidMaterial solid;

    double potential(const Point2& x, double t) const;
    Point2 displacement(const Point2& x, double t) const;

    double pressure(const Point2& x, double t) const;
    Point2 fluid_velocity(const Point2& x, double t) const;
    Point2 solid_velocity(const Point2& x, double t) const;
    Eigen::Vector3d stress(const Point2& x, double t) const;

    double fluid_source(const Point2& x, double t) const;
    Point2 solid_source(const Point2& x, double t) const;

    FieldData exact() const;
    /// Sources plus Dirichlet traces of the exact solution.
    ProblemData data() const;

    static ManufacturedCase spatial_dominant(const MaterialTable& mats);
    static ManufacturedCase time_dominant(const MaterialTable& mats);
};

// ---------------------------------------------------------------------------
// Ricker pulse

/// Initial fluid velocity m_0 = amp exp(-pi^2 r^2 / lambda^2) (x - x_c), with
/// lambda = c_p^f / f_c.
struct RickerConfig {
    double amplitude = 1.0;
    double central_frequency = 10.0;
    Point2 center = Point2(0.0, 0.125);
    double fluid_speed = 1.0;

    double wavelength() const;
    Point2 velocity(const Point2& x) const;
    FieldData initial() const;
};

// ---------------------------------------------------------------------------
// Sensors

enum class SensorKind { fluid, solid, interface };

SensorKind sensor_kind_from_string(const std::string& s);
const char* to_string(SensorKind k);

struct SensorSpec {
    std::string name;
    Point2 position = Point2::Zero();
    SensorKind kind = SensorKind::fluid;
};

/// A sensor bound to mesh entities.
struct SensorProbe {
    SensorSpec spec;
    std::size_t fluid_cell = invalid_index;
    std::size_t solid_cell = invalid_index;
    std::size_t face = invalid_index; // interface sensors only

    /// Channel names, e.g. "p", "mx", "my" for a fluid sensor.
    std::vector<std::string> channels() const;
    Vector sample(const PolyMesh& mesh, const BlockSystem& sys, const SimState& state) const;
};

/// Lowest-id cell of subdomain `sub` containing `p` (boundary inclusive),
/// or invalid_index.
std::size_t locate_cell(const PolyMesh& mesh, const Point2& p, Subdomain sub);

SensorProbe bind_sensor(const PolyMesh& mesh, const SensorSpec& spec);

/// Evaluates a cell polynomial field at a point: columns are components.
Vector eval_cell_field(const PolyMesh& mesh, const BlockSystem& sys, const Vector& ut, std::size_t cell,
                       const Point2& x);
Vector eval_face_field(const PolyMesh& mesh, const BlockSystem& sys, const Vector& uf, std::size_t face,
                       const Point2& x);

// ---------------------------------------------------------------------------
// Diagnostics

/// 1/2 U_T^T M U_T.
double energy(const BlockSystem& sys, const Vector& ut);

struct CouplingErrors {
    double kinematic = 0.0; // |(v_F - m_T).n|
    double dynamic = 0.0;   // |p_F n - s_T n|
};

CouplingErrors coupling_errors(const PolyMesh& mesh, const BlockSystem& sys, const SimState& state,
                               const SensorProbe& probe);

/// Time series of one sensor quantity; values[i] is sampled at time[i].
struct Trace {
    std::vector<double> time;
    std::vector<Vector> values;
};

/// Relative discrete l2-in-time error: |a - ref| / |ref|.
double relative_trace_error(const Trace& a, const Trace& ref);
/// Pressure error at the fluid sensor plus velocity error at the solid one.
double sensor_error(const Trace& p, const Trace& v, const Trace& p_ref, const Trace& v_ref);

/// L2 error of the dual fields (m in the fluid, s in the solid).
double l2_error_dual(const PolyMesh& mesh, const BlockSystem& sys, const Vector& ut, const FieldData& exact, double t);

/// max_n max(|E_n - E_0| / E_0, |E_n - E_{n-1}| / E_{n-1}).
double energy_variation(const std::vector<double>& e);
/// Same but counting only increases: max_n max(E_n - E_0, E_n - E_{n-1}) relative.
double energy_increase(const std::vector<double>& e);

// ---------------------------------------------------------------------------
// CFL bracketing

enum class EnergyCriterion { variation, increase };

struct CflBracketConfig {
    double epsilon = 0.05;
    double delta = 0.01;
    std::size_t initial_steps = 0; // 0: derive from CFL_guess = 0.5 / (k + 1)
    int max_iterations = 2000;
    int level = 3;
    double final_time = 1.0;
    EnergyCriterion criterion = EnergyCriterion::increase;

    void validate() const;
};

struct CflEstimate {
    std::size_t stable_steps = 0;
    std::size_t unstable_steps = 0;
    double cfl_stable = 0.0;
    double cfl_unstable = 0.0;
    double c_sharp = 0.0;
    double h = 0.0;
    int runs = 0;
};

struct CflProblem {
    MeshFamily family = MeshFamily::cartesian;
    int degree = 1;
    SchemeKind scheme = SchemeKind::erk2;
    double eta_f = 0.8;
    double eta_s = 1.5;
};

/// Outcome of one fixed-step run used by the bracketing loop.
struct StabilityRun {
    bool stable = false;
    double measure = 0.0; // energy criterion value reached
    std::size_t steps_done = 0;
};

class CflBracketer {
public:
    CflBracketer(const CflProblem& problem, const CflBracketConfig& cfg, Exec exec = Exec::parallel);

    StabilityRun run(std::size_t steps) const;
    CflEstimate bracket() const;
    double cfl_of(std::size_t steps) const;

private:
    CflProblem problem_;
    CflBracketConfig cfg_;
    Exec exec_;
    PolyMesh mesh_;
    MaterialTable mats_;
    BlockSystem sys_;
    Vector u0_;
    double h_ = 0.0;
    double c_sharp_ = 0.0;
};

CflEstimate cfl_bracket(const CflProblem& problem, const CflBracketConfig& cfg, Exec exec = Exec::parallel);

} // namespace hhowave
