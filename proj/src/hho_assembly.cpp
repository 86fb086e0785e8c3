// SPDX-License-Identifier: Apache-2.0
#include "hhowave/hho_core.hpp"

namespace hhowave {

int DofLayout::dual_size(Subdomain s) const
{
    return (s == Subdomain::fluid ? 2 : 3) * cell_scalar_dim(k);
}

int DofLayout::primal_size(Subdomain s) const
{
    return (s == Subdomain::fluid ? 1 : 2) * cell_scalar_dim(kc);
}

int DofLayout::trace_size(Subdomain s) const
{
    return (s == Subdomain::fluid ? 1 : 2) * face_scalar_dim(k);
}

int DofLayout::trace_offset(const Face& f, Subdomain s) const
{
    return (f.is_interface() && s == Subdomain::solid) ? face_scalar_dim(k) : 0;
}

DofLayout DofLayout::build(const PolyMesh& mesh, const HhoConfig& cfg)
{
    DofLayout l;
    l.k = cfg.degree;
    l.kc = cfg.cell_degree();
    const std::size_t nd = cell_scalar_dim(l.k), np = cell_scalar_dim(l.kc), nf = face_scalar_dim(l.k);

    for (const auto& c : mesh.cells()) {
        if (c.subdomain == Subdomain::fluid) {
            l.n_m += 2 * nd;
            l.n_p += np;
        }
        else {
            l.n_s += 3 * nd;
            l.n_v += 2 * np;
        }
    }
    std::size_t om = 0, op = l.n_m, os = l.n_m + l.n_p, ov = l.n_m + l.n_p + l.n_s;
    l.cell_dofs.resize(mesh.num_cells());
    auto take = [](std::vector<std::size_t>& dofs, std::size_t& cursor, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i)
            dofs.push_back(cursor++);
    };
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        auto& dofs = l.cell_dofs[c];
        if (mesh.cell(c).subdomain == Subdomain::fluid) {
            take(dofs, om, 2 * nd);
            take(dofs, op, np);
        }
        else {
            take(dofs, os, 3 * nd);
            take(dofs, ov, 2 * np);
        }
    }

    for (const auto& f : mesh.faces()) {
        if (f.is_boundary())
            continue;
        const auto sub = mesh.cell(f.owner).subdomain;
        if (f.is_interface() || sub == Subdomain::fluid)
            l.n_pf += nf;
        if (f.is_interface() || sub == Subdomain::solid)
            l.n_vf += 2 * nf;
    }
    std::size_t opf = 0, ovf = l.n_pf;
    l.face_dofs.resize(mesh.num_faces());
    for (std::size_t i = 0; i < mesh.num_faces(); ++i) {
        const auto& f = mesh.face(i);
        if (f.is_boundary())
            continue;
        const auto sub = mesh.cell(f.owner).subdomain;
        if (f.is_interface() || sub == Subdomain::fluid)
            take(l.face_dofs[i], opf, nf);
        if (f.is_interface() || sub == Subdomain::solid)
            take(l.face_dofs[i], ovf, 2 * nf);
    }
    return l;
}

BlockSystem assemble(const PolyMesh& mesh, const MaterialTable& materials, const HhoConfig& cfg, Exec exec)
{
    cfg.validate();
    materials.check(mesh);
    BlockSystem sys;
    sys.config = cfg;
    sys.layout = DofLayout::build(mesh, cfg);
    const auto& layout = sys.layout;
    const std::size_t nc = mesh.num_cells();
    sys.mass.resize(nc);
    sys.ktt.resize(nc);
    sys.ktf.resize(nc);
    sys.kft.resize(nc);
    sys.lift.resize(nc);
    std::vector<std::vector<Matrix>> sff(nc);

    parallel_for(nc, exec, [&](std::size_t c) {
        const auto& cell = mesh.cell(c);
        const auto& mat = materials.at(cell.material);
        const auto sub = cell.subdomain;
        const int nd = layout.dual_size(sub), np = layout.primal_size(sub), n = nd + np;
        const int w = layout.trace_size(sub);

        const auto lm = local_mass(mesh, c, mat, cfg);
        const auto rec = local_gradient_blocks(mesh, c, cfg);
        const auto stab = local_stabilization_blocks(mesh, c, mat, cfg);

        Matrix m = Matrix::Zero(n, n);
        m.topLeftCorner(nd, nd) = lm.dual;
        m.bottomRightCorner(np, np) = lm.primal;
        sys.mass[c] = std::move(m);

        Matrix k = Matrix::Zero(n, n);
        k.topRightCorner(nd, np) = -rec.cell;
        k.bottomLeftCorner(np, nd) = rec.cell.transpose();
        k.bottomRightCorner(np, np) = stab.cell;
        sys.ktt[c] = std::move(k);

        const std::size_t nslots = cell.num_faces();
        sys.ktf[c].resize(nslots);
        sys.kft[c].resize(nslots);
        sys.lift[c].resize(nslots);
        sff[c] = stab.face_face;
        for (std::size_t j = 0; j < nslots; ++j) {
            const auto& f = mesh.face(cell.faces[j]);
            Matrix tf(n, w);
            tf.topRows(nd) = -rec.faces[j];
            tf.bottomRows(np) = stab.cell_face[j];
            if (f.is_boundary()) {
                sys.lift[c][j] = std::move(tf);
                continue;
            }
            Matrix ft(w, n);
            ft.leftCols(nd) = rec.faces[j].transpose();
            ft.rightCols(np) = stab.cell_face[j].transpose();
            const int W = static_cast<int>(layout.face_dofs[cell.faces[j]].size());
            const int off = layout.trace_offset(f, sub);
            sys.ktf[c][j] = Matrix::Zero(n, W);
            sys.ktf[c][j].middleCols(off, w) = tf;
            sys.kft[c][j] = Matrix::Zero(W, n);
            sys.kft[c][j].middleRows(off, w) = ft;
        }
    });

    sys.kff.resize(mesh.num_faces());
    sys.coupling.resize(mesh.num_faces());
    parallel_for(mesh.num_faces(), exec, [&](std::size_t fi) {
        const auto& f = mesh.face(fi);
        if (f.is_boundary())
            return;
        const int W = static_cast<int>(layout.face_dofs[fi].size());
        Matrix kff = Matrix::Zero(W, W);
        for (auto [c, slot] : {std::pair{f.owner, f.owner_slot}, std::pair{f.neighbor, f.neighbor_slot}}) {
            const auto sub = mesh.cell(c).subdomain;
            const int off = layout.trace_offset(f, sub), w = layout.trace_size(sub);
            kff.block(off, off, w, w) += sff[c][slot];
        }
        if (f.is_interface()) {
            const Matrix cpl = coupling_block(mesh, fi, cfg.degree);
            const int nf = face_scalar_dim(cfg.degree);
            kff.block(0, nf, nf, 2 * nf) += cpl;
            kff.block(nf, 0, 2 * nf, nf) -= cpl.transpose();
            sys.coupling[fi] = cpl;
        }
        sys.kff[fi] = std::move(kff);
    });
    return sys;
}

Vector gather(const Vector& global, const std::vector<std::size_t>& dofs)
{
    Vector out(dofs.size());
    for (std::size_t i = 0; i < dofs.size(); ++i)
        out[i] = global[dofs[i]];
    return out;
}

void scatter_add(Vector& global, const std::vector<std::size_t>& dofs, const Vector& local)
{
    for (std::size_t i = 0; i < dofs.size(); ++i)
        global[dofs[i]] += local[i];
}

namespace {

void scatter_set(Vector& global, const std::vector<std::size_t>& dofs, const Vector& local)
{
    for (std::size_t i = 0; i < dofs.size(); ++i)
        global[dofs[i]] = local[i];
}

} // namespace

Vector apply_cell_rows(const PolyMesh& mesh, const BlockSystem& sys, const Vector& ut, const Vector& uf, Exec exec)
{
    const auto& l = sys.layout;
    Vector out = Vector::Zero(l.num_cell_dofs());
    parallel_for(mesh.num_cells(), exec, [&](std::size_t c) {
        Vector r = sys.ktt[c] * gather(ut, l.cell_dofs[c]);
        const auto& cell = mesh.cell(c);
        for (std::size_t j = 0; j < cell.num_faces(); ++j)
            if (sys.ktf[c][j].size() > 0)
                r.noalias() += sys.ktf[c][j] * gather(uf, l.face_dofs[cell.faces[j]]);
        scatter_set(out, l.cell_dofs[c], r);
    });
    return out;
}

Vector apply_face_rows(const PolyMesh& mesh, const BlockSystem& sys, const Vector& ut, const Vector& uf, Exec exec)
{
    const auto& l = sys.layout;
    Vector out = Vector::Zero(l.num_face_dofs());
    parallel_for(mesh.num_faces(), exec, [&](std::size_t fi) {
        const auto& f = mesh.face(fi);
        if (f.is_boundary())
            return;
        Vector r = sys.kff[fi] * gather(uf, l.face_dofs[fi]);
        r.noalias() += sys.kft[f.owner][f.owner_slot] * gather(ut, l.cell_dofs[f.owner]);
        r.noalias() += sys.kft[f.neighbor][f.neighbor_slot] * gather(ut, l.cell_dofs[f.neighbor]);
        scatter_set(out, l.face_dofs[fi], r);
    });
    return out;
}

Vector apply_mass(const BlockSystem& sys, const Vector& ut, Exec exec)
{
    const auto& l = sys.layout;
    Vector out = Vector::Zero(l.num_cell_dofs());
    parallel_for(sys.num_cells(), exec, [&](std::size_t c) {
        scatter_set(out, l.cell_dofs[c], sys.mass[c] * gather(ut, l.cell_dofs[c]));
    });
    return out;
}

namespace {

// Projection of several components at once: columns of the result are the
// coefficient vectors.
template <typename Basis, typename Eval>
Matrix project_components(const Basis& basis, const QuadratureRule& q, int ncomp, Eval&& eval)
{
    const Matrix m = mass_matrix(basis, q);
    Matrix rhs = Matrix::Zero(basis.size(), ncomp);
    for (std::size_t i = 0; i < q.size(); ++i) {
        const Vector phi = basis.eval(q.points[i]);
        const Eigen::RowVectorXd val = eval(q.points[i]);
        rhs.noalias() += q.weights[i] * phi * val;
    }
    return m.llt().solve(rhs);
}

Eigen::RowVectorXd row(double a)
{
    Eigen::RowVectorXd r(1);
    r << a;
    return r;
}

Eigen::RowVectorXd row(const Point2& a)
{
    return a.transpose();
}

Eigen::RowVectorXd row(const Eigen::Vector3d& a)
{
    return a.transpose();
}

// Stacks the columns of a coefficient matrix into component-major order.
Vector stack(const Matrix& m)
{
    return Eigen::Map<const Vector>(m.data(), m.size());
}

} // namespace

Vector source_vector(const PolyMesh& mesh, const BlockSystem& sys, const ProblemData& data, double t, Exec exec)
{
    const auto& l = sys.layout;
    const int qdeg = sys.config.data_quad_degree();
    Vector out = Vector::Zero(l.num_cell_dofs());
    parallel_for(mesh.num_cells(), exec, [&](std::size_t c) {
        const auto& cell = mesh.cell(c);
        const bool fluid = cell.subdomain == Subdomain::fluid;
        const int nd = l.dual_size(cell.subdomain), np = l.primal_size(cell.subdomain);
        Vector r = Vector::Zero(nd + np);
        const bool has_source = fluid ? bool(data.fluid_source) : bool(data.solid_source);
        if (has_source) {
            const CellBasis primal(mesh, c, l.kc);
            const auto q = quad_cell(mesh, c, qdeg);
            const int n = primal.size();
            for (std::size_t i = 0; i < q.size(); ++i) {
                const Vector psi = primal.eval(q.points[i]);
                if (fluid) {
                    r.segment(nd, n) += q.weights[i] * data.fluid_source(q.points[i], t) * psi;
                }
                else {
                    const Point2 f = data.solid_source(q.points[i], t);
                    r.segment(nd, n) += q.weights[i] * f.x() * psi;
                    r.segment(nd + n, n) += q.weights[i] * f.y() * psi;
                }
            }
        }
        const bool has_bc = fluid ? bool(data.boundary_pressure) : bool(data.boundary_velocity);
        if (has_bc) {
            for (std::size_t j = 0; j < cell.num_faces(); ++j) {
                const std::size_t fi = cell.faces[j];
                if (!mesh.face(fi).is_boundary())
                    continue;
                const FaceBasis fb(mesh, fi, l.k);
                const auto q = quad_face(mesh, fi, qdeg);
                Vector g;
                if (fluid)
                    g = stack(project_components(fb, q, 1, [&](const Point2& x) { return row(data.boundary_pressure(x, t)); }));
                else
                    g = stack(project_components(fb, q, 2, [&](const Point2& x) { return row(data.boundary_velocity(x, t)); }));
                r.noalias() -= sys.lift[c][j] * g;
            }
        }
        scatter_set(out, l.cell_dofs[c], r);
    });
    return out;
}

SourceAssembler::SourceAssembler(const PolyMesh& mesh, const BlockSystem& sys, ProblemData data, Exec exec)
    : mesh_(&mesh), sys_(&sys), data_(std::move(data)), exec_(exec), cache_(mesh.num_cells())
{
    empty_ = !data_.fluid_source && !data_.solid_source && !data_.boundary_pressure && !data_.boundary_velocity;
    if (empty_)
        return;
    const auto& l = sys.layout;
    const int qdeg = sys.config.data_quad_degree();
    parallel_for(mesh.num_cells(), exec, [&](std::size_t c) {
        const auto& cell = mesh.cell(c);
        auto& cc = cache_[c];
        const CellBasis primal(mesh, c, l.kc);
        const auto q = quad_cell(mesh, c, qdeg);
        cc.points = q.points;
        cc.moments.resize(primal.size(), static_cast<Eigen::Index>(q.size()));
        for (std::size_t i = 0; i < q.size(); ++i)
            cc.moments.col(static_cast<Eigen::Index>(i)) = q.weights[i] * primal.eval(q.points[i]);
        for (std::size_t j = 0; j < cell.num_faces(); ++j) {
            const std::size_t fi = cell.faces[j];
            if (!mesh.face(fi).is_boundary())
                continue;
            const FaceBasis fb(mesh, fi, l.k);
            const auto qf = quad_face(mesh, fi, qdeg);
            Matrix w(fb.size(), static_cast<Eigen::Index>(qf.size()));
            for (std::size_t i = 0; i < qf.size(); ++i)
                w.col(static_cast<Eigen::Index>(i)) = qf.weights[i] * fb.eval(qf.points[i]);
            BoundaryCache bc;
            bc.slot = j;
            bc.points = qf.points;
            bc.projection = mass_matrix(fb, qf).llt().solve(w);
            cc.boundary.push_back(std::move(bc));
        }
    });
}

Vector SourceAssembler::operator()(double t) const
{
    const auto& l = sys_->layout;
    Vector out = Vector::Zero(l.num_cell_dofs());
    if (empty_)
        return out;
    parallel_for(mesh_->num_cells(), exec_, [&](std::size_t c) {
        const auto& cell = mesh_->cell(c);
        const auto& cc = cache_[c];
        const bool fluid = cell.subdomain == Subdomain::fluid;
        const int nd = l.dual_size(cell.subdomain), np = l.primal_size(cell.subdomain);
        Vector r = Vector::Zero(nd + np);
        const auto nq = static_cast<Eigen::Index>(cc.points.size());
        const Eigen::Index n = cc.moments.rows();
        if (fluid && data_.fluid_source) {
            Vector f(nq);
            for (Eigen::Index i = 0; i < nq; ++i)
                f[i] = data_.fluid_source(cc.points[i], t);
            r.segment(nd, n) = cc.moments * f;
        }
        else if (!fluid && data_.solid_source) {
            Matrix f(nq, 2);
            for (Eigen::Index i = 0; i < nq; ++i)
                f.row(i) = data_.solid_source(cc.points[i], t).transpose();
            const Matrix m = cc.moments * f;
            r.segment(nd, n) = m.col(0);
            r.segment(nd + n, n) = m.col(1);
        }
        const bool has_bc = fluid ? bool(data_.boundary_pressure) : bool(data_.boundary_velocity);
        if (has_bc) {
            for (const auto& bc : cc.boundary) {
                const auto nb = static_cast<Eigen::Index>(bc.points.size());
                Vector g;
                if (fluid) {
                    Vector v(nb);
                    for (Eigen::Index i = 0; i < nb; ++i)
                        v[i] = data_.boundary_pressure(bc.points[i], t);
                    g = bc.projection * v;
                }
                else {
                    Matrix v(nb, 2);
                    for (Eigen::Index i = 0; i < nb; ++i)
                        v.row(i) = data_.boundary_velocity(bc.points[i], t).transpose();
                    g = stack(bc.projection * v);
                }
                r.noalias() -= sys_->lift[c][bc.slot] * g;
            }
        }
        scatter_set(out, l.cell_dofs[c], r);
    });
    return out;
}

void project_fields(const PolyMesh& mesh, const BlockSystem& sys, const FieldData& fields, double t, Vector& ut,
                    Vector* uf, Exec exec)
{
    const auto& l = sys.layout;
    const int qdeg = sys.config.data_quad_degree();
    ut = Vector::Zero(l.num_cell_dofs());
    parallel_for(mesh.num_cells(), exec, [&](std::size_t c) {
        const auto& cell = mesh.cell(c);
        const bool fluid = cell.subdomain == Subdomain::fluid;
        const CellBasis dual(mesh, c, l.k);
        const CellBasis primal(mesh, c, l.kc);
        const auto q = quad_cell(mesh, c, qdeg);
        Vector r = Vector::Zero(l.cell_block_size(cell.subdomain));
        const int nd = l.dual_size(cell.subdomain);
        if (fluid) {
            if (fields.m)
                r.head(nd) = stack(project_components(dual, q, 2, [&](const Point2& x) { return row(fields.m(x, t)); }));
            if (fields.p)
                r.tail(r.size() - nd) =
                    stack(project_components(primal, q, 1, [&](const Point2& x) { return row(fields.p(x, t)); }));
        }
        else {
            if (fields.s)
                r.head(nd) = stack(project_components(dual, q, 3, [&](const Point2& x) { return row(fields.s(x, t)); }));
            if (fields.v)
                r.tail(r.size() - nd) =
                    stack(project_components(primal, q, 2, [&](const Point2& x) { return row(fields.v(x, t)); }));
        }
        scatter_set(ut, l.cell_dofs[c], r);
    });
    if (!uf)
        return;
    *uf = Vector::Zero(l.num_face_dofs());
    parallel_for(mesh.num_faces(), exec, [&](std::size_t fi) {
        const auto& f = mesh.face(fi);
        if (f.is_boundary())
            return;
        const FaceBasis fb(mesh, fi, l.k);
        const auto q = quad_face(mesh, fi, qdeg);
        const int nf = fb.size();
        Vector r = Vector::Zero(l.face_dofs[fi].size());
        const auto sub = mesh.cell(f.owner).subdomain;
        if ((f.is_interface() || sub == Subdomain::fluid) && fields.p)
            r.head(nf) = stack(project_components(fb, q, 1, [&](const Point2& x) { return row(fields.p(x, t)); }));
        if ((f.is_interface() || sub == Subdomain::solid) && fields.v)
            r.tail(2 * nf) = stack(project_components(fb, q, 2, [&](const Point2& x) { return row(fields.v(x, t)); }));
        scatter_set(*uf, l.face_dofs[fi], r);
    });
}

} // namespace hhowave
