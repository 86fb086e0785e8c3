// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hhowave/common.hpp"
#include "hhowave/materials.hpp"
#include "hhowave/mesh.hpp"
#include "hhowave/polybasis.hpp"

namespace hhowave {

// ---------------------------------------------------------------------------
// Configuration

enum class OrderMode { equal, mixed };
enum class StabOperator { least_squares, lehrenfeld_schoberl };

OrderMode order_mode_from_string(const std::string& s);
const char* to_string(OrderMode m);

struct StabilizationConfig {
    OrderMode mode = OrderMode::equal;
    StabOperator op = StabOperator::least_squares;
    int alpha = 0;
    double eta_f = 0.8;
    double eta_s = 1.5;

    /// Equal order, plain least squares, alpha = 0, eta = (0.8, 1.5).
    static StabilizationConfig explicit_default();
    /// Mixed order, Lehrenfeld-Schoberl, alpha = 1, eta = (1, 1).
    static StabilizationConfig implicit_default();

    /// Throws ConfigError unless the mode, operator and alpha are one of the
    /// two supported pairings. Zero weights are accepted (skew tests).
    void validate() const;
};

struct HhoConfig {
    int degree = 1; // face degree k
    StabilizationConfig stab = StabilizationConfig::explicit_default();

    int cell_degree() const { return stab.mode == OrderMode::mixed ? degree + 1 : degree; }
    /// Exactness of the operator integrals, 2(k'+1).
    int quad_degree() const { return 2 * (cell_degree() + 1); }
    /// Exactness used for data (sources, projections, errors).
    int data_quad_degree() const { return quad_degree() + 4; }
    void validate() const;
};

// ---------------------------------------------------------------------------
// Local operators

/// Dual (weighted) and primal (weighted) mass blocks of one cell.
/// Fluid: dual = rho^f on vector P^k, primal = 1/kappa on P^k'.
/// Solid: dual = C^{-1} on symmetric tensor P^k, primal = rho^s on vector P^k'.
struct LocalMass {
    Matrix dual;
    Matrix primal;
};

LocalMass local_mass(const PolyMesh& mesh, std::size_t cell, const Material& mat, const HhoConfig& cfg);

/// Right-hand sides of the gradient reconstruction (symmetric gradient for
/// solid cells): for dual test function r,
///   (g, r) = cell * u_T + sum_j faces[j] * u_Fj,
/// with cell(r, .) = (grad u_T, r) - (u_T, r.n)_{dT} and faces[j](r, .) = (u_Fj, r.n)_{Fj}.
/// `dual_mass` is the unweighted Gram matrix of the dual space.
struct ReconstructionBlocks {
    Matrix dual_mass;
    Matrix cell;
    std::vector<Matrix> faces;
};

ReconstructionBlocks local_gradient_blocks(const PolyMesh& mesh, std::size_t cell, const HhoConfig& cfg);

/// tau_T for the cell (fluid or solid formula, with h_T/l_Omega scaling).
double stabilization_weight(const PolyMesh& mesh, std::size_t cell, const Material& mat,
                            const StabilizationConfig& stab);

/// tau_T (S(u_T, u_dT), S(w_T, w_dT))_{dT} split into cell/cell, cell/face
/// and face/face parts (vector-valued for solid cells, x then y).
struct StabilizationBlocks {
    Matrix cell;
    std::vector<Matrix> cell_face;
    std::vector<Matrix> face_face;
};

StabilizationBlocks local_stabilization_blocks(const PolyMesh& mesh, std::size_t cell, const Material& mat,
                                               const HhoConfig& cfg);

/// C[l, d(k+1)+m] = (psi_m n_Gamma,d, psi_l)_F for a face on the interface.
Matrix coupling_block(const PolyMesh& mesh, std::size_t face, int k);

// ---------------------------------------------------------------------------
// Global layout and system

/// Global numbering. Cell unknowns are grouped [m | p | s | v] over all
/// cells, face unknowns [p_F | v_F]; interface faces carry both. Within a
/// cell the local order is [dual | primal] (vector components x then y,
/// tensor components xx, yy, xy); within a face it is [p_F | v_Fx | v_Fy].
struct DofLayout {
    int k = 1;
    int kc = 1;
    std::size_t n_m = 0, n_p = 0, n_s = 0, n_v = 0;
    std::size_t n_pf = 0, n_vf = 0;
    std::vector<std::vector<std::size_t>> cell_dofs;
    std::vector<std::vector<std::size_t>> face_dofs; // empty on Dirichlet faces

    std::size_t num_cell_dofs() const { return n_m + n_p + n_s + n_v; }
    std::size_t num_face_dofs() const { return n_pf + n_vf; }
    std::size_t num_dofs() const { return num_cell_dofs() + num_face_dofs(); }

    int dual_size(Subdomain s) const;
    int primal_size(Subdomain s) const;
    int cell_block_size(Subdomain s) const { return dual_size(s) + primal_size(s); }
    /// Width of one subdomain's trace on a face: k+1 (fluid) or 2(k+1) (solid).
    int trace_size(Subdomain s) const;
    /// Offset of a subdomain's trace within the face block.
    int trace_offset(const Face& f, Subdomain s) const;

    static DofLayout build(const PolyMesh& mesh, const HhoConfig& cfg);
};

/// Block form of  M dU_T/dt + K_TT U_T + K_TF U_F = F_T,  K_FT U_T + K_FF U_F = 0.
/// Cell-face blocks are stored per (cell, face slot) with the full face block
/// width; boundary slots hold the lift block used to move Dirichlet data to
/// the right-hand side instead.
struct BlockSystem {
    DofLayout layout;
    HhoConfig config;
    std::vector<Matrix> mass;
    std::vector<Matrix> ktt;
    std::vector<std::vector<Matrix>> ktf;
    std::vector<std::vector<Matrix>> kft;
    std::vector<std::vector<Matrix>> lift;
    std::vector<Matrix> kff;
    std::vector<Matrix> coupling; // interface faces only

    std::size_t num_cells() const { return mass.size(); }
    std::size_t num_faces() const { return kff.size(); }
};

BlockSystem assemble(const PolyMesh& mesh, const MaterialTable& materials, const HhoConfig& cfg,
                     Exec exec = Exec::parallel);

// Block products on global vectors.
Vector gather(const Vector& global, const std::vector<std::size_t>& dofs);
void scatter_add(Vector& global, const std::vector<std::size_t>& dofs, const Vector& local);

/// K_TT U_T + K_TF U_F.
Vector apply_cell_rows(const PolyMesh& mesh, const BlockSystem& sys, const Vector& ut, const Vector& uf,
                       Exec exec = Exec::parallel);
/// K_FT U_T + K_FF U_F.
Vector apply_face_rows(const PolyMesh& mesh, const BlockSystem& sys, const Vector& ut, const Vector& uf,
                       Exec exec = Exec::parallel);
Vector apply_mass(const BlockSystem& sys, const Vector& ut, Exec exec = Exec::parallel);

// ---------------------------------------------------------------------------
// Data

using ScalarData = std::function<double(const Point2&, double)>;
using VectorData = std::function<Point2(const Point2&, double)>;
using TensorData = std::function<Eigen::Vector3d(const Point2&, double)>;

/// Sources and Dirichlet traces; empty functions mean zero.
struct ProblemData {
    ScalarData fluid_source;
    VectorData solid_source;
    ScalarData boundary_pressure;
    VectorData boundary_velocity;
};

/// F_T: L2 moments of the sources against the primal bases minus the lift
/// of the Dirichlet data. Face entries are zero and not represented.
Vector source_vector(const PolyMesh& mesh, const BlockSystem& sys, const ProblemData& data, double t,
                     Exec exec = Exec::parallel);

/// source_vector with quadrature points, basis moments and face projections
/// cached per cell; meant for repeated evaluation inside time loops.
class SourceAssembler {
public:
    SourceAssembler(const PolyMesh& mesh, const BlockSystem& sys, ProblemData data, Exec exec = Exec::parallel);
    Vector operator()(double t) const;
    /// True when the data has no source and no boundary term.
    bool empty() const { return empty_; }

private:
    struct BoundaryCache {
        std::size_t slot = 0;
        std::vector<Point2> points;
        Matrix projection; // face coefficients from point values
    };
    struct CellCache {
        std::vector<Point2> points;
        Matrix moments; // primal basis values times weights, one column per point
        std::vector<BoundaryCache> boundary;
    };
    const PolyMesh* mesh_;
    const BlockSystem* sys_;
    ProblemData data_;
    Exec exec_;
    bool empty_ = true;
    std::vector<CellCache> cache_;
};

/// Field values used for initial conditions and exact solutions.
struct FieldData {
    VectorData m;
    ScalarData p;
    TensorData s;
    VectorData v;
};

/// L2 projection of the fields onto cell spaces (and onto face spaces for
/// the face vector).
void project_fields(const PolyMesh& mesh, const BlockSystem& sys, const FieldData& fields, double t, Vector& ut,
                    Vector* uf = nullptr, Exec exec = Exec::parallel);

// ---------------------------------------------------------------------------
// Dof accounting

enum class PhysicsCase { acoustic, elastic };

/// Asymptotic share of face unknowns among all unknowns, assuming
/// n #cells = 2 #faces (2D: triangles, n = 3; 3D: tetrahedra, n = 4).
double face_dof_fraction(int dim, PhysicsCase c, OrderMode mode, int k);

} // namespace hhowave
