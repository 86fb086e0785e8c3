// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/LU>
#include <Eigen/Sparse>

#include "hhowave/common.hpp"
#include "hhowave/hho_core.hpp"

namespace hhowave {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// ---------------------------------------------------------------------------
// Butcher tableaux

enum class SchemeKind { erk2, erk3, erk4, sdirk23, sdirk34 };

SchemeKind scheme_from_string(const std::string& s);
const char* to_string(SchemeKind k);
bool is_implicit(SchemeKind k);

/// Lower-triangular tableau; for SDIRK all diagonal entries equal a_*.
/// The weights act as row s+1 of the extended tableau.
struct ButcherTableau {
    SchemeKind kind = SchemeKind::erk2;
    int stages = 0;
    Matrix a;
    Vector b;
    Vector c;

    bool implicit() const { return is_implicit(kind); }
    /// Diagonal coefficient a_* (0 for explicit schemes).
    double diagonal() const { return implicit() ? a(0, 0) : 0.0; }
    /// Nominal order: s for ERK(s), s+1 for SDIRK(s, s+1).
    int nominal_order() const { return implicit() ? stages + 1 : stages; }
};

ButcherTableau tableau(SchemeKind kind);

// ---------------------------------------------------------------------------
// Linear solvers

struct SolverConfig {
    enum class Kind { direct, bicgstab_ilu0 };
    Kind kind = Kind::direct;
    double tolerance = 1e-10;
    int max_iterations = 1000;

    void validate() const;
};

SolverConfig::Kind solver_kind_from_string(const std::string& s);
const char* to_string(SolverConfig::Kind k);

/// Zero fill-in incomplete LU on the sparsity pattern of the matrix,
/// usable as an Eigen iterative-solver preconditioner.
class Ilu0 {
public:
    using StorageIndex = int;
    enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic };

    Ilu0() = default;
    template <typename MatrixType>
    explicit Ilu0(const MatrixType& m) { compute(m); }

    template <typename MatrixType>
    Ilu0& analyzePattern(const MatrixType&) { return *this; }
    template <typename MatrixType>
    Ilu0& factorize(const MatrixType& m) { return compute(m); }
    template <typename MatrixType>
    Ilu0& compute(const MatrixType& m)
    {
        factor(SparseMatrix(m));
        return *this;
    }

    Vector solve(const Vector& b) const;
    Eigen::ComputationInfo info() const { return info_; }
    Eigen::Index rows() const { return lu_.rows(); }
    Eigen::Index cols() const { return lu_.cols(); }

private:
    void factor(SparseMatrix m);

    SparseMatrix lu_;
    std::vector<int> diag_;
    Eigen::ComputationInfo info_ = Eigen::Success;
};

/// Factorization (direct) or preconditioner (iterative) built once and
/// applied to many right-hand sides.
class LinearSolver {
public:
    LinearSolver(const SolverConfig& cfg, SparseMatrix a);
    ~LinearSolver();
    LinearSolver(LinearSolver&&) noexcept;
    LinearSolver& operator=(LinearSolver&&) noexcept;

    /// Throws SolverError on breakdown or when the iteration limit is hit.
    Vector solve(const Vector& rhs) const;
    int last_iterations() const { return last_iterations_; }
    const SparseMatrix& matrix() const { return a_; }

private:
    struct Impl;
    SolverConfig cfg_;
    SparseMatrix a_;
    std::unique_ptr<Impl> impl_;
    mutable int last_iterations_ = 0;
};

Vector solve_linear(const SolverConfig& cfg, const SparseMatrix& a, const Vector& rhs);

// ---------------------------------------------------------------------------
// Time stepping

struct SimState {
    double t = 0.0;
    Vector ut;       // cell unknowns
    Vector uf;       // face unknowns consistent with ut (see face_values)
    std::size_t step = 0;
};

/// Cell source F_T(t); an empty function means zero.
using SourceFn = std::function<Vector(double)>;

/// Throws InstabilityError if any entry is not finite.
void check_finite(const Vector& v, std::size_t step);

/// Block-diagonal face solver for K_FF U_F = r, built once per system.
class FaceEliminator {
public:
    FaceEliminator(const PolyMesh& mesh, const BlockSystem& sys, Exec exec = Exec::parallel);
    /// U_F with K_FT U_T + K_FF U_F = 0. Throws SolverError if a face block
    /// is singular (zero stabilization weight).
    Vector eliminate(const Vector& ut) const;

private:
    const PolyMesh* mesh_;
    const BlockSystem* sys_;
    Exec exec_;
    std::vector<Eigen::FullPivLU<Matrix>> lu_;
};

/// Block-diagonal mass solver.
class MassSolver {
public:
    explicit MassSolver(const BlockSystem& sys, Exec exec = Exec::parallel);
    Vector solve(const Vector& rhs) const;

private:
    const BlockSystem* sys_;
    Exec exec_;
    std::vector<Eigen::LLT<Matrix>> llt_;
};

/// Explicit Runge-Kutta with face elimination at every stage.
class ExplicitStepper {
public:
    ExplicitStepper(const PolyMesh& mesh, const BlockSystem& sys, ButcherTableau tab, Exec exec = Exec::parallel);

    void step(SimState& state, double dt, const SourceFn& source = {}) const;
    Vector face_values(const Vector& ut) const { return faces_.eliminate(ut); }
    const ButcherTableau& scheme() const { return tab_; }

private:
    const PolyMesh* mesh_;
    const BlockSystem* sys_;
    ButcherTableau tab_;
    Exec exec_;
    FaceEliminator faces_;
    MassSolver mass_;
};

/// Cell-condensed stage operator for a fixed (a_*, dt):
///   S = a dt (K_FF - a dt K_FT (M + a dt K_TT)^{-1} K_TF).
class CondensedFactorization {
public:
    CondensedFactorization(const PolyMesh& mesh, const BlockSystem& sys, double a_star, double dt,
                           const SolverConfig& solver, Exec exec = Exec::parallel);

    double a_star() const { return a_star_; }
    double dt() const { return dt_; }
    /// Throws SolverError when built for different coefficients.
    void check(double a_star, double dt) const;

    const SparseMatrix& schur() const { return solver_ ? solver_->matrix() : empty_; }
    std::size_t nonzeros() const { return schur().nonZeros(); }
    int last_iterations() const { return solver_ ? solver_->last_iterations() : 0; }

    /// Solves [[M + a dt K_TT, a dt K_TF], [a dt K_FT, a dt K_FF]] (U_T, U_F) = (b_T, b_F).
    void solve(const Vector& bt, const Vector& bf, Vector& ut, Vector& uf) const;

private:
    const PolyMesh* mesh_;
    const BlockSystem* sys_;
    double a_star_;
    double dt_;
    Exec exec_;
    std::vector<Eigen::PartialPivLU<Matrix>> cell_lu_;
    std::unique_ptr<LinearSolver> solver_;
    SparseMatrix empty_;
};

CondensedFactorization build_condensed(const PolyMesh& mesh, const BlockSystem& sys, double a_star, double dt,
                                       const SolverConfig& solver, Exec exec = Exec::parallel);

/// SDIRK stage loop using a prebuilt condensed factorization.
class ImplicitStepper {
public:
    ImplicitStepper(const PolyMesh& mesh, const BlockSystem& sys, ButcherTableau tab, const CondensedFactorization& fact,
                    Exec exec = Exec::parallel);

    void step(SimState& state, double dt, const SourceFn& source = {}) const;
    Vector face_values(const Vector& ut) const { return faces_.eliminate(ut); }
    const ButcherTableau& scheme() const { return tab_; }

private:
    const PolyMesh* mesh_;
    const BlockSystem* sys_;
    ButcherTableau tab_;
    const CondensedFactorization* fact_;
    Exec exec_;
    FaceEliminator faces_;
    MassSolver mass_;
};

} // namespace hhowave
