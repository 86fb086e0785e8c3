// SPDX-License-Identifier: Apache-2.0
#include <atomic>

#include "hhowave/timestep.hpp"

namespace hhowave {

void check_finite(const Vector& v, std::size_t step)
{
    if (!v.allFinite())
        throw InstabilityError("instability detected: non-finite state at step " + std::to_string(step), step);
}

FaceEliminator::FaceEliminator(const PolyMesh& mesh, const BlockSystem& sys, Exec exec)
    : mesh_(&mesh), sys_(&sys), exec_(exec), lu_(sys.num_faces())
{
    parallel_for(sys.num_faces(), exec, [&](std::size_t f) {
        if (sys.kff[f].size() > 0)
            lu_[f].compute(sys.kff[f]);
    });
}

Vector FaceEliminator::eliminate(const Vector& ut) const
{
    const auto& l = sys_->layout;
    Vector uf = Vector::Zero(l.num_face_dofs());
    std::atomic<bool> singular{false};
    parallel_for(mesh_->num_faces(), exec_, [&](std::size_t fi) {
        const auto& f = mesh_->face(fi);
        if (f.is_boundary())
            return;
        if (!lu_[fi].isInvertible()) {
            singular = true;
            return;
        }
        Vector r = sys_->kft[f.owner][f.owner_slot] * gather(ut, l.cell_dofs[f.owner]);
        r.noalias() += sys_->kft[f.neighbor][f.neighbor_slot] * gather(ut, l.cell_dofs[f.neighbor]);
        const Vector x = lu_[fi].solve(-r);
        for (std::size_t i = 0; i < l.face_dofs[fi].size(); ++i)
            uf[l.face_dofs[fi][i]] = x[i];
    });
    if (singular)
        throw SolverError("singular face block: face elimination needs positive stabilization weights");
    return uf;
}

MassSolver::MassSolver(const BlockSystem& sys, Exec exec) : sys_(&sys), exec_(exec), llt_(sys.num_cells())
{
    std::atomic<bool> failed{false};
    parallel_for(sys.num_cells(), exec, [&](std::size_t c) {
        llt_[c].compute(sys.mass[c]);
        if (llt_[c].info() != Eigen::Success)
            failed = true;
    });
    if (failed)
        throw SolverError("cell mass matrix is not positive definite");
}

Vector MassSolver::solve(const Vector& rhs) const
{
    const auto& l = sys_->layout;
    Vector out(rhs.size());
    parallel_for(sys_->num_cells(), exec_, [&](std::size_t c) {
        const Vector x = llt_[c].solve(gather(rhs, l.cell_dofs[c]));
        for (std::size_t i = 0; i < l.cell_dofs[c].size(); ++i)
            out[l.cell_dofs[c][i]] = x[i];
    });
    return out;
}

ExplicitStepper::ExplicitStepper(const PolyMesh& mesh, const BlockSystem& sys, ButcherTableau tab, Exec exec)
    : mesh_(&mesh), sys_(&sys), tab_(std::move(tab)), exec_(exec), faces_(mesh, sys, exec), mass_(sys, exec)
{
    if (tab_.implicit())
        throw ConfigError("explicit stepper needs an explicit tableau");
}

void ExplicitStepper::step(SimState& state, double dt, const SourceFn& source) const
{
    const int s = tab_.stages;
    std::vector<Vector> residual(s);
    for (int i = 0; i < s; ++i) {
        Vector incr = Vector::Zero(state.ut.size());
        for (int j = 0; j < i; ++j)
            if (tab_.a(i, j) != 0.0)
                incr += tab_.a(i, j) * residual[j];
        Vector ui = state.ut;
        if (i > 0)
            ui += dt * mass_.solve(incr);
        const Vector ufi = faces_.eliminate(ui);
        Vector r = -apply_cell_rows(*mesh_, *sys_, ui, ufi, exec_);
        if (source)
            r += source(state.t + tab_.c[i] * dt);
        residual[i] = std::move(r);
    }
    Vector incr = Vector::Zero(state.ut.size());
    for (int j = 0; j < s; ++j)
        if (tab_.b[j] != 0.0)
            incr += tab_.b[j] * residual[j];
    state.ut += dt * mass_.solve(incr);
    state.t += dt;
    ++state.step;
    check_finite(state.ut, state.step);
    state.uf = faces_.eliminate(state.ut);
}

} // namespace hhowave
