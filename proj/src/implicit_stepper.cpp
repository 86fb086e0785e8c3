// SPDX-License-Identifier: Apache-2.0
#include <atomic>
#include <cmath>

#include "hhowave/timestep.hpp"

namespace hhowave {

CondensedFactorization::CondensedFactorization(const PolyMesh& mesh, const BlockSystem& sys, double a_star, double dt,
                                               const SolverConfig& solver, Exec exec)
    : mesh_(&mesh), sys_(&sys), a_star_(a_star), dt_(dt), exec_(exec), cell_lu_(sys.num_cells())
{
    if (!(dt > 0))
        throw SolverError("time step must be positive");
    if (!(a_star > 0))
        throw SolverError("diagonal coefficient must be positive");
    const double h = a_star * dt;
    const auto& l = sys.layout;

    // Per-cell factorizations and local Schur contributions.
    std::vector<std::vector<Matrix>> local(sys.num_cells());
    std::atomic<bool> failed{false};
    parallel_for(sys.num_cells(), exec, [&](std::size_t c) {
        const Matrix a = sys.mass[c] + h * sys.ktt[c];
        cell_lu_[c].compute(a);
        if (!(cell_lu_[c].rcond() > 1e-14)) {
            failed = true;
            return;
        }
        const auto& cell = mesh.cell(c);
        const std::size_t n = cell.num_faces();
        std::vector<Matrix> x(n);
        for (std::size_t j = 0; j < n; ++j)
            if (sys.ktf[c][j].size() > 0)
                x[j] = cell_lu_[c].solve(sys.ktf[c][j]);
        local[c].resize(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (sys.kft[c][i].size() > 0 && x[j].size() > 0)
                    local[c][i * n + j] = -(h * h) * (sys.kft[c][i] * x[j]);
    });
    if (failed)
        throw SolverError("cell factorization of M + a dt K_TT failed");

    const std::size_t nf = l.num_face_dofs();
    if (nf == 0)
        return;
    std::vector<Eigen::Triplet<double>> trip;
    for (std::size_t fi = 0; fi < mesh.num_faces(); ++fi) {
        const auto& dofs = l.face_dofs[fi];
        for (std::size_t r = 0; r < dofs.size(); ++r)
            for (std::size_t q = 0; q < dofs.size(); ++q)
                trip.emplace_back(static_cast<int>(dofs[r]), static_cast<int>(dofs[q]), h * sys.kff[fi](r, q));
    }
    for (std::size_t c = 0; c < sys.num_cells(); ++c) {
        const auto& cell = mesh.cell(c);
        const std::size_t n = cell.num_faces();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const Matrix& b = local[c][i * n + j];
                if (b.size() == 0)
                    continue;
                const auto& ri = l.face_dofs[cell.faces[i]];
                const auto& cj = l.face_dofs[cell.faces[j]];
                for (std::size_t r = 0; r < ri.size(); ++r)
                    for (std::size_t q = 0; q < cj.size(); ++q)
                        trip.emplace_back(static_cast<int>(ri[r]), static_cast<int>(cj[q]), b(r, q));
            }
    }
    SparseMatrix s(static_cast<Eigen::Index>(nf), static_cast<Eigen::Index>(nf));
    s.setFromTriplets(trip.begin(), trip.end());
    solver_ = std::make_unique<LinearSolver>(solver, std::move(s));
}

void CondensedFactorization::check(double a_star, double dt) const
{
    const auto same = [](double x, double y) { return std::abs(x - y) <= 1e-14 * std::max(std::abs(x), std::abs(y)); };
    if (!same(a_star, a_star_) || !same(dt, dt_))
        throw SolverError("stale condensed factorization: built for a different (a_*, dt)");
}

void CondensedFactorization::solve(const Vector& bt, const Vector& bf, Vector& ut, Vector& uf) const
{
    const auto& l = sys_->layout;
    const auto& mesh = *mesh_;
    const double h = a_star_ * dt_;

    std::vector<Vector> y(sys_->num_cells());
    parallel_for(sys_->num_cells(), exec_, [&](std::size_t c) { y[c] = cell_lu_[c].solve(gather(bt, l.cell_dofs[c])); });

    Vector rhs = bf;
    parallel_for(mesh.num_faces(), exec_, [&](std::size_t fi) {
        const auto& f = mesh.face(fi);
        if (f.is_boundary())
            return;
        Vector r = sys_->kft[f.owner][f.owner_slot] * y[f.owner];
        r.noalias() += sys_->kft[f.neighbor][f.neighbor_slot] * y[f.neighbor];
        const auto& dofs = l.face_dofs[fi];
        for (std::size_t i = 0; i < dofs.size(); ++i)
            rhs[dofs[i]] -= h * r[i];
    });
    uf = solver_ ? solver_->solve(rhs) : Vector::Zero(0);

    ut.resize(l.num_cell_dofs());
    parallel_for(sys_->num_cells(), exec_, [&](std::size_t c) {
        const auto& cell = mesh.cell(c);
        Vector r = gather(bt, l.cell_dofs[c]);
        for (std::size_t j = 0; j < cell.num_faces(); ++j)
            if (sys_->ktf[c][j].size() > 0)
                r.noalias() -= h * (sys_->ktf[c][j] * gather(uf, l.face_dofs[cell.faces[j]]));
        const Vector x = cell_lu_[c].solve(r);
        for (std::size_t i = 0; i < l.cell_dofs[c].size(); ++i)
            ut[l.cell_dofs[c][i]] = x[i];
    });
}

CondensedFactorization build_condensed(const PolyMesh& mesh, const BlockSystem& sys, double a_star, double dt,
                                       const SolverConfig& solver, Exec exec)
{
    return CondensedFactorization(mesh, sys, a_star, dt, solver, exec);
}

ImplicitStepper::ImplicitStepper(const PolyMesh& mesh, const BlockSystem& sys, ButcherTableau tab,
                                 const CondensedFactorization& fact, Exec exec)
    : mesh_(&mesh), sys_(&sys), tab_(std::move(tab)), fact_(&fact), exec_(exec), faces_(mesh, sys, exec),
      mass_(sys, exec)
{
    if (!tab_.implicit())
        throw ConfigError("implicit stepper needs an SDIRK tableau");
}

void ImplicitStepper::step(SimState& state, double dt, const SourceFn& source) const
{
    const double astar = tab_.diagonal();
    fact_->check(astar, dt);
    const int s = tab_.stages;
    const Vector mu0 = apply_mass(*sys_, state.ut, exec_);
    std::vector<Vector> cell_res(s), face_res(s);
    Vector ut, uf;
    for (int i = 0; i < s; ++i) {
        const double ti = state.t + tab_.c[i] * dt;
        Vector bt = mu0;
        Vector bf = Vector::Zero(sys_->layout.num_face_dofs());
        Vector fi;
        if (source) {
            fi = source(ti);
            bt += astar * dt * fi;
        }
        for (int j = 0; j < i; ++j) {
            bt += dt * tab_.a(i, j) * cell_res[j];
            bf -= dt * tab_.a(i, j) * face_res[j];
        }
        fact_->solve(bt, bf, ut, uf);
        Vector r = -apply_cell_rows(*mesh_, *sys_, ut, uf, exec_);
        if (source)
            r += fi;
        cell_res[i] = std::move(r);
        face_res[i] = apply_face_rows(*mesh_, *sys_, ut, uf, exec_);
    }
    Vector incr = Vector::Zero(state.ut.size());
    for (int j = 0; j < s; ++j)
        incr += tab_.b[j] * cell_res[j];
    state.ut += dt * mass_.solve(incr);
    state.t += dt;
    ++state.step;
    check_finite(state.ut, state.step);
    state.uf = faces_.eliminate(state.ut);
}

} // namespace hhowave
