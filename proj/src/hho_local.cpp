// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "hhowave/hho_core.hpp"

namespace hhowave {

OrderMode order_mode_from_string(const std::string& s)
{
    if (s == "equal")
        return OrderMode::equal;
    if (s == "mixed")
        return OrderMode::mixed;
    throw ConfigError("unknown order mode '" + s + "'");
}

const char* to_string(OrderMode m)
{
    return m == OrderMode::equal ? "equal" : "mixed";
}

StabilizationConfig StabilizationConfig::explicit_default()
{
    return {OrderMode::equal, StabOperator::least_squares, 0, 0.8, 1.5};
}

StabilizationConfig StabilizationConfig::implicit_default()
{
    return {OrderMode::mixed, StabOperator::lehrenfeld_schoberl, 1, 1.0, 1.0};
}

void StabilizationConfig::validate() const
{
    const bool equal_ls = mode == OrderMode::equal && op == StabOperator::least_squares && alpha == 0;
    const bool mixed_lsch = mode == OrderMode::mixed && op == StabOperator::lehrenfeld_schoberl && alpha == 1;
    if (!equal_ls && !mixed_lsch)
        throw ConfigError("stabilization must be equal-order least-squares with alpha=0 or mixed-order "
                          "Lehrenfeld-Schoberl with alpha=1");
    if (!(eta_f >= 0) || !(eta_s >= 0))
        throw ConfigError("stabilization weights must be non-negative");
}

void HhoConfig::validate() const
{
    if (degree < 1 || degree > 4)
        throw ConfigError("face degree k must lie in [1, 4]");
    stab.validate();
}

namespace {

// Symmetric tensor basis E_xx, E_yy, E_xy = [[0,1],[1,0]] applied to n.
inline Point2 tensor_times_normal(int c, const Point2& n)
{
    switch (c) {
    case 0: return {n.x(), 0.0};
    case 1: return {0.0, n.y()};
    default: return {n.y(), n.x()};
    }
}

} // namespace

LocalMass local_mass(const PolyMesh& mesh, std::size_t cell, const Material& mat, const HhoConfig& cfg)
{
    const auto& c = mesh.cell(cell);
    if (mat.kind != c.subdomain)
        throw Error("material kind does not match the cell subdomain");
    const auto q = quad_cell(mesh, cell, cfg.quad_degree());
    const CellBasis dual(mesh, cell, cfg.degree);
    const CellBasis primal(mesh, cell, cfg.cell_degree());
    const Matrix md = mass_matrix(dual, q);
    const Matrix mp = mass_matrix(primal, q);
    const int nd = dual.size(), np = primal.size();

    LocalMass out;
    if (c.subdomain == Subdomain::fluid) {
        out.dual = Matrix::Zero(2 * nd, 2 * nd);
        out.dual.topLeftCorner(nd, nd) = mat.fluid.rho * md;
        out.dual.bottomRightCorner(nd, nd) = mat.fluid.rho * md;
        out.primal = mp / mat.fluid.kappa;
    }
    else {
        const Eigen::Matrix3d w = mat.solid.compliance_weights();
        out.dual = Matrix::Zero(3 * nd, 3 * nd);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                out.dual.block(a * nd, b * nd, nd, nd) = w(a, b) * md;
        out.primal = Matrix::Zero(2 * np, 2 * np);
        out.primal.topLeftCorner(np, np) = mat.solid.rho * mp;
        out.primal.bottomRightCorner(np, np) = mat.solid.rho * mp;
    }
    return out;
}

ReconstructionBlocks local_gradient_blocks(const PolyMesh& mesh, std::size_t cell, const HhoConfig& cfg)
{
    const auto& c = mesh.cell(cell);
    const int k = cfg.degree;
    const int kc = cfg.cell_degree();
    const CellBasis dual(mesh, cell, k);
    const CellBasis primal(mesh, cell, kc);
    const int nd = dual.size(), np = primal.size(), nf = k + 1;
    const bool fluid = c.subdomain == Subdomain::fluid;
    const int ncomp = fluid ? 2 : 3; // dual components
    const int pcomp = fluid ? 1 : 2; // primal components

    ReconstructionBlocks out;
    const auto q = quad_cell(mesh, cell, cfg.quad_degree());
    const Matrix md = mass_matrix(dual, q);
    out.dual_mass = Matrix::Zero(ncomp * nd, ncomp * nd);
    for (int a = 0; a < ncomp; ++a)
        out.dual_mass.block(a * nd, a * nd, nd, nd) = md;

    // Volume term (grad u_T, r) or (grad_sym u_T, b).
    out.cell = Matrix::Zero(ncomp * nd, pcomp * np);
    for (std::size_t i = 0; i < q.size(); ++i) {
        const Vector phi = dual.eval(q.points[i]);
        const Matrix g = primal.grad(q.points[i]);
        const double w = q.weights[i];
        if (fluid) {
            out.cell.topRows(nd).noalias() += w * phi * g.col(0).transpose();
            out.cell.bottomRows(nd).noalias() += w * phi * g.col(1).transpose();
        }
        else {
            // grad_sym(psi e_x) : (E_xx, E_yy, E_xy) = (psi_x, 0, psi_y)
            // grad_sym(psi e_y) : (E_xx, E_yy, E_xy) = (0, psi_y, psi_x)
            out.cell.block(0, 0, nd, np).noalias() += w * phi * g.col(0).transpose();
            out.cell.block(2 * nd, 0, nd, np).noalias() += w * phi * g.col(1).transpose();
            out.cell.block(nd, np, nd, np).noalias() += w * phi * g.col(1).transpose();
            out.cell.block(2 * nd, np, nd, np).noalias() += w * phi * g.col(0).transpose();
        }
    }

    // Boundary terms: -(u_T, r.n) and +(u_F, r.n) per face.
    out.faces.resize(c.num_faces());
    for (std::size_t j = 0; j < c.num_faces(); ++j) {
        const std::size_t fid = c.faces[j];
        const Point2 n = mesh.outward_normal(cell, j);
        const FaceBasis fb(mesh, fid, k);
        const auto qf = quad_face(mesh, fid, cfg.quad_degree());
        Matrix& bf = out.faces[j];
        bf = Matrix::Zero(ncomp * nd, pcomp * nf);
        for (std::size_t i = 0; i < qf.size(); ++i) {
            const Vector phi = dual.eval(qf.points[i]);
            const Vector psi = primal.eval(qf.points[i]);
            const Vector chi = fb.eval(qf.points[i]);
            const double w = qf.weights[i];
            if (fluid) {
                for (int d = 0; d < 2; ++d) {
                    out.cell.middleRows(d * nd, nd).noalias() -= (w * n[d]) * phi * psi.transpose();
                    bf.middleRows(d * nd, nd).noalias() += (w * n[d]) * phi * chi.transpose();
                }
            }
            else {
                for (int a = 0; a < 3; ++a) {
                    const Point2 en = tensor_times_normal(a, n);
                    for (int d = 0; d < 2; ++d) {
                        if (en[d] == 0.0)
                            continue;
                        out.cell.block(a * nd, d * np, nd, np).noalias() -= (w * en[d]) * phi * psi.transpose();
                        bf.block(a * nd, d * nf, nd, nf).noalias() += (w * en[d]) * phi * chi.transpose();
                    }
                }
            }
        }
    }
    return out;
}

double stabilization_weight(const PolyMesh& mesh, std::size_t cell, const Material& mat,
                            const StabilizationConfig& stab)
{
    const double htilde = mesh.cell(cell).diameter / mesh.length_scale();
    const double scale = stab.alpha == 0 ? 1.0 : std::pow(htilde, -stab.alpha);
    if (mat.kind == Subdomain::fluid)
        return stab.eta_f / (mat.fluid.rho * mat.fluid.cp()) * scale;
    return stab.eta_s * mat.solid.rho * mat.solid.cs() * scale;
}

StabilizationBlocks local_stabilization_blocks(const PolyMesh& mesh, std::size_t cell, const Material& mat,
                                               const HhoConfig& cfg)
{
    cfg.stab.validate();
    const auto& c = mesh.cell(cell);
    const int k = cfg.degree;
    const CellBasis primal(mesh, cell, cfg.cell_degree());
    const int np = primal.size(), nf = k + 1;
    const int ncomp = c.subdomain == Subdomain::fluid ? 1 : 2;
    const double tau = stabilization_weight(mesh, cell, mat, cfg.stab);
    const bool projected = cfg.stab.op == StabOperator::lehrenfeld_schoberl;

    Matrix scc = Matrix::Zero(np, np);
    std::vector<Matrix> scf(c.num_faces()), sff(c.num_faces());
    for (std::size_t j = 0; j < c.num_faces(); ++j) {
        const std::size_t fid = c.faces[j];
        const FaceBasis fb(mesh, fid, k);
        const auto qf = quad_face(mesh, fid, cfg.quad_degree());
        Matrix mcc = Matrix::Zero(np, np), mcf = Matrix::Zero(np, nf), mff = Matrix::Zero(nf, nf);
        for (std::size_t i = 0; i < qf.size(); ++i) {
            const Vector psi = primal.eval(qf.points[i]);
            const Vector chi = fb.eval(qf.points[i]);
            const double w = qf.weights[i];
            mcc.noalias() += w * psi * psi.transpose();
            mcf.noalias() += w * psi * chi.transpose();
            mff.noalias() += w * chi * chi.transpose();
        }
        if (projected)
            scc.noalias() += tau * mcf * mff.ldlt().solve(mcf.transpose());
        else
            scc.noalias() += tau * mcc;
        scf[j] = -tau * mcf;
        sff[j] = tau * mff;
    }

    StabilizationBlocks out;
    out.cell = Matrix::Zero(ncomp * np, ncomp * np);
    for (int d = 0; d < ncomp; ++d)
        out.cell.block(d * np, d * np, np, np) = scc;
    out.cell_face.resize(c.num_faces());
    out.face_face.resize(c.num_faces());
    for (std::size_t j = 0; j < c.num_faces(); ++j) {
        out.cell_face[j] = Matrix::Zero(ncomp * np, ncomp * nf);
        out.face_face[j] = Matrix::Zero(ncomp * nf, ncomp * nf);
        for (int d = 0; d < ncomp; ++d) {
            out.cell_face[j].block(d * np, d * nf, np, nf) = scf[j];
            out.face_face[j].block(d * nf, d * nf, nf, nf) = sff[j];
        }
    }
    return out;
}

Matrix coupling_block(const PolyMesh& mesh, std::size_t face, int k)
{
    const auto& f = mesh.face(face);
    if (!f.is_interface())
        throw Error("coupling block requested for a face not on the interface");
    const FaceBasis fb(mesh, face, k);
    const int nf = k + 1;
    const auto q = quad_face(mesh, face, 2 * (k + 1));
    Matrix c = Matrix::Zero(nf, 2 * nf);
    for (std::size_t i = 0; i < q.size(); ++i) {
        const Vector chi = fb.eval(q.points[i]);
        const Matrix mm = q.weights[i] * chi * chi.transpose();
        c.leftCols(nf) += f.normal.x() * mm;
        c.rightCols(nf) += f.normal.y() * mm;
    }
    return c;
}

} // namespace hhowave
