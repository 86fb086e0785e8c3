// Local operator properties measured on randomized polygonal cells. Each
// check returns a residual; the callers pick the tolerance.
#pragma once

#include <algorithm>
#include <random>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"

namespace props {

using namespace hhowave;

/// Test polynomial of total degree `deg` with fixed pseudo-random
/// coefficients; returns value and gradient.
struct Poly {
    int deg = 1;
    std::vector<double> coef; // graded by (a, b), a + b <= deg
    Point2 shift = Point2::Zero();

    Poly(int d, unsigned seed, const Point2& center) : deg(d), shift(center)
    {
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int t = 0; t <= deg; ++t)
            for (int a = t; a >= 0; --a)
                coef.push_back(u(rng));
    }
    double value(const Point2& p) const
    {
        const Point2 x = p - shift;
        double v = 0;
        std::size_t i = 0;
        for (int t = 0; t <= deg; ++t)
            for (int a = t; a >= 0; --a)
                v += coef[i++] * std::pow(x.x(), a) * std::pow(x.y(), t - a);
        return v;
    }
    Point2 grad(const Point2& p) const
    {
        const Point2 x = p - shift;
        Point2 g = Point2::Zero();
        std::size_t i = 0;
        for (int t = 0; t <= deg; ++t)
            for (int a = t; a >= 0; --a) {
                const int b = t - a;
                if (a > 0)
                    g.x() += coef[i] * a * std::pow(x.x(), a - 1) * std::pow(x.y(), b);
                if (b > 0)
                    g.y() += coef[i] * b * std::pow(x.x(), a) * std::pow(x.y(), b - 1);
                ++i;
            }
        return g;
    }
};

inline MaterialTable academic()
{
    return builtin_materials("academic");
}

/// The two supported discretization settings at degree k.
inline std::vector<HhoConfig> settings(int k)
{
    HhoConfig eq;
    eq.degree = k;
    eq.stab = StabilizationConfig::explicit_default();
    HhoConfig mx;
    mx.degree = k;
    mx.stab = StabilizationConfig::implicit_default();
    return {eq, mx};
}

/// Interpolant of a primal field (scalar in the fluid, vector in the solid)
/// given by component polynomials: cell coefficients then one block per face.
inline std::pair<Vector, std::vector<Vector>> interpolate(const PolyMesh& mesh, const HhoConfig& cfg,
                                                          const std::vector<Poly>& comps)
{
    const int kc = cfg.cell_degree(), k = cfg.degree;
    const int np = cell_scalar_dim(kc), nf = face_scalar_dim(k);
    const int nc = static_cast<int>(comps.size());
    Vector ut(nc * np);
    for (int d = 0; d < nc; ++d)
        ut.segment(d * np, np) =
            project_cell([&](const Point2& p) { return comps[d].value(p); }, mesh, 0, kc, 2 * kc + 4);
    std::vector<Vector> uf;
    for (auto fid : mesh.cell(0).faces) {
        Vector v(nc * nf);
        for (int d = 0; d < nc; ++d)
            v.segment(d * nf, nf) =
                project_face([&](const Point2& p) { return comps[d].value(p); }, mesh, fid, k, 2 * kc + 4);
        uf.push_back(v);
    }
    return {ut, uf};
}

/// max |G(I q) - grad q| / max |grad q| over the cell quadrature points, for
/// q of the highest degree the reconstruction must reproduce (k' in
/// mixed order, k in equal order).
inline double gradient_consistency(const PolyMesh& mesh, const HhoConfig& cfg, unsigned seed)
{
    const auto& cell = mesh.cell(0);
    const bool fluid = cell.subdomain == Subdomain::fluid;
    const int qdeg = cfg.stab.mode == OrderMode::mixed ? cfg.degree + 1 : cfg.degree;
    std::vector<Poly> comps;
    for (int d = 0; d < (fluid ? 1 : 2); ++d)
        comps.emplace_back(qdeg, seed + 7 * d, cell.barycenter);
    const auto [ut, uf] = interpolate(mesh, cfg, comps);
    const auto rec = local_gradient_blocks(mesh, 0, cfg);
    Vector rhs = rec.cell * ut;
    for (std::size_t j = 0; j < uf.size(); ++j)
        rhs += rec.faces[j] * uf[j];
    const Vector g = rec.dual_mass.ldlt().solve(rhs);

    const CellBasis dual(mesh, 0, cfg.degree);
    const int nd = dual.size();
    double err = 0, scale = 0;
    for (const auto& p : quad_cell(mesh, 0, 2 * cfg.degree + 2).points) {
        const Vector phi = dual.eval(p);
        if (fluid) {
            const Point2 exact = comps[0].grad(p);
            const Point2 got(g.segment(0, nd).dot(phi), g.segment(nd, nd).dot(phi));
            err = std::max(err, (got - exact).norm());
            scale = std::max(scale, exact.norm());
        }
        else {
            // Stored tensor components (xx, yy, xy); the xy entry pairs with
            // the engineering shear dvx/dy + dvy/dx.
            const Point2 gx = comps[0].grad(p), gy = comps[1].grad(p);
            const Eigen::Vector3d exact(gx.x(), gy.y(), gx.y() + gy.x());
            Eigen::Vector3d got;
            for (int a = 0; a < 3; ++a)
                got[a] = g.segment(a * nd, nd).dot(phi);
            err = std::max(err, (got - exact).norm());
            scale = std::max(scale, exact.norm());
        }
    }
    return err / std::max(scale, 1e-300);
}

/// Local stabilization matrix over [cell | face_0 | face_1 | ...].
inline Matrix local_stabilization(const PolyMesh& mesh, const HhoConfig& cfg)
{
    const auto mats = academic();
    const auto& cell = mesh.cell(0);
    const auto st = local_stabilization_blocks(mesh, 0, mats.at(cell.material), cfg);
    const auto nt = st.cell.rows();
    Eigen::Index n = nt;
    for (const auto& b : st.face_face)
        n += b.rows();
    Matrix s = Matrix::Zero(n, n);
    s.topLeftCorner(nt, nt) = st.cell;
    Eigen::Index off = nt;
    for (std::size_t j = 0; j < st.face_face.size(); ++j) {
        const auto w = st.face_face[j].rows();
        s.block(0, off, nt, w) = st.cell_face[j];
        s.block(off, 0, w, nt) = st.cell_face[j].transpose();
        s.block(off, off, w, w) = st.face_face[j];
        off += w;
    }
    return s;
}

/// |S(I q, I q)| / (|S| |I q|^2) for q of cell degree k'.
inline double stabilization_kernel(const PolyMesh& mesh, const HhoConfig& cfg, unsigned seed)
{
    const auto& cell = mesh.cell(0);
    const bool fluid = cell.subdomain == Subdomain::fluid;
    std::vector<Poly> comps;
    for (int d = 0; d < (fluid ? 1 : 2); ++d)
        comps.emplace_back(cfg.cell_degree(), seed + 11 * d, cell.barycenter);
    const auto [ut, uf] = interpolate(mesh, cfg, comps);
    Eigen::Index n = ut.size();
    for (const auto& v : uf)
        n += v.size();
    Vector u(n);
    u.head(ut.size()) = ut;
    Eigen::Index off = ut.size();
    for (const auto& v : uf) {
        u.segment(off, v.size()) = v;
        off += v.size();
    }
    const Matrix s = local_stabilization(mesh, cfg);
    return std::abs(u.dot(s * u)) / (s.norm() * u.squaredNorm());
}

/// Smallest eigenvalue relative to the largest, plus the asymmetry.
inline std::pair<double, double> stabilization_spectrum(const PolyMesh& mesh, const HhoConfig& cfg)
{
    const Matrix s = local_stabilization(mesh, cfg);
    const double asym = (s - s.transpose()).norm() / s.norm();
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (s + s.transpose()));
    const auto ev = es.eigenvalues();
    return {ev.minCoeff() / ev.maxCoeff(), asym};
}

/// Bilayer mesh with interior vertices moved at random: every cell becomes
/// a generic star-shaped polygon while the interface stays straight. The
/// displacement is halved until no cell folds (short clipped hexagon edges).
inline PolyMesh jittered_bilayer(MeshFamily family, int level, unsigned seed, double amount = 0.2)
{
    const MeshGenSpec spec = manufactured_geometry(family, level);
    const PolygonSoup base = generate(spec).to_soup();
    for (;; amount *= 0.5) {
        PolygonSoup soup = base;
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const double h = spec.nominal_h() * amount;
        const double tol = 1e-12;
        for (auto& v : soup.vertices) {
            const bool on_x = std::abs(v.x() + 1) < tol || std::abs(v.x()) < tol || std::abs(v.x() - 1) < tol;
            const bool on_y = std::abs(v.y()) < tol || std::abs(v.y() - 1) < tol;
            if (!on_x)
                v.x() += h * u(rng);
            if (!on_y)
                v.y() += h * u(rng);
        }
        try {
            return PolyMesh::build(std::move(soup));
        }
        catch (const MeshError&) {
            if (amount < 1e-3)
                throw;
        }
    }
}

/// Relative size of the symmetric part of the full unstabilized operator
/// [K_TT K_TF; K_FT K_FF] (all stabilization weights zero).
inline double unstabilized_symmetric_part(const PolyMesh& mesh, const HhoConfig& base)
{
    HhoConfig cfg = base;
    cfg.stab.eta_f = 0.0;
    cfg.stab.eta_s = 0.0;
    const BlockSystem sys = assemble(mesh, academic(), cfg, Exec::serial);
    const auto d = oracle::densify(mesh, sys);
    const auto nt = d.ktt.rows(), nf = d.kff.rows();
    Matrix k(nt + nf, nt + nf);
    k << d.ktt, d.ktf, d.kft, d.kff;
    return (k + k.transpose()).norm() / k.norm();
}

/// Interface coupling terms: max over random face vectors of
/// |u^T K_Gamma u| / |K_Gamma| |u|^2, where K_Gamma holds only the
/// pressure/velocity coupling blocks; also checks that each block equals
/// the face mass matrix scaled by the normal components.
inline std::pair<double, double> interface_cancellation(const PolyMesh& mesh, const HhoConfig& cfg)
{
    const BlockSystem sys = assemble(mesh, academic(), cfg, Exec::serial);
    const int nf = face_scalar_dim(cfg.degree);
    double energy = 0, shape = 0;
    for (auto fi : mesh.classes().interface) {
        const Matrix& c = sys.coupling[fi];
        Matrix kg = Matrix::Zero(3 * nf, 3 * nf);
        kg.block(0, nf, nf, 2 * nf) = c;
        kg.block(nf, 0, 2 * nf, nf) = -c.transpose();
        for (int t = 0; t < 4; ++t) {
            const Vector u = Vector::Random(3 * nf);
            energy = std::max(energy, std::abs(u.dot(kg * u)) / (kg.norm() * u.squaredNorm()));
        }
        // Oracle: Gauss-Legendre face mass with the 1D rule mapped by hand.
        const auto& f = mesh.face(fi);
        const FaceBasis fb(mesh, fi, cfg.degree);
        const auto [x, w] = gauss_legendre(cfg.degree + 2);
        const Point2 a = mesh.vertices()[f.vertices[0]], b = mesh.vertices()[f.vertices[1]];
        Matrix mff = Matrix::Zero(nf, nf);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const Vector chi = fb.eval(0.5 * (a + b) + 0.5 * x[i] * (b - a));
            mff += 0.5 * f.measure * w[i] * chi * chi.transpose();
        }
        Matrix expect(nf, 2 * nf);
        expect << f.normal.x() * mff, f.normal.y() * mff;
        shape = std::max(shape, (c - expect).norm() / mff.norm());
    }
    return {energy, shape};
}

/// Max relative error of the polygon rule over all monomials of degree
/// <= deg, against the Green's-theorem oracle.
inline double quadrature_error(const std::vector<Point2>& loop, const Point2& center, int deg)
{
    const auto q = quad_polygon(loop, center, deg);
    double err = 0;
    for (int t = 0; t <= deg; ++t)
        for (int a = 0; a <= t; ++a) {
            const int b = t - a;
            double got = 0;
            for (std::size_t i = 0; i < q.size(); ++i)
                got += q.weights[i] * std::pow(q.points[i].x(), a) * std::pow(q.points[i].y(), b);
            const double exact = oracle::monomial_integral(loop, a, b);
            err = std::max(err, std::abs(got - exact) / std::max(1.0, std::abs(exact)));
        }
    return err;
}

} // namespace props
