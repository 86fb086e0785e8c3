// Independent reference computations shared by the unit tests and the
// acceptance driver. Nothing here calls the condensation, elimination or
// polygon quadrature code paths under test.
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "hhowave/hho_core.hpp"
#include "hhowave/materials.hpp"
#include "hhowave/mesh.hpp"
#include "hhowave/polybasis.hpp"
#include "hhowave/timestep.hpp"

namespace oracle {

using hhowave::Matrix;
using hhowave::Point2;
using hhowave::Vector;

/// Star-shaped polygon around `center`: sorted random angles, radii in
/// [0.55, 1] times `radius`.
inline std::vector<Point2> random_star_polygon(std::mt19937& rng, int nverts, const Point2& center, double radius)
{
    std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi), rad(0.55, 1.0);
    std::vector<double> a(nverts);
    for (;;) {
        for (auto& x : a)
            x = ang(rng);
        std::sort(a.begin(), a.end());
        // Keep consecutive angles below pi so the center stays inside.
        bool ok = 2.0 * std::numbers::pi - a.back() + a.front() < 0.9 * std::numbers::pi;
        for (int i = 1; i < nverts; ++i)
            ok = ok && a[i] - a[i - 1] < 0.9 * std::numbers::pi && a[i] - a[i - 1] > 0.05;
        if (ok)
            break;
    }
    for (;;) {
        std::vector<Point2> loop;
        for (double t : a) {
            const double r = radius * rad(rng);
            loop.push_back(center + r * Point2(std::cos(t), std::sin(t)));
        }
        // Cells are split into triangles around their barycenter, so the
        // polygon must also be star-shaped with respect to that point.
        double area = 0;
        Point2 g = Point2::Zero();
        for (int i = 0; i < nverts; ++i) {
            const Point2& p = loop[i];
            const Point2& q = loop[(i + 1) % nverts];
            const double w = p.x() * q.y() - q.x() * p.y();
            area += 0.5 * w;
            g += w * (p + q);
        }
        g /= 6.0 * area;
        bool star = true;
        for (int i = 0; i < nverts; ++i) {
            const Point2 u = loop[i] - g, v = loop[(i + 1) % nverts] - g;
            star = star && u.x() * v.y() - u.y() * v.x() > 1e-3 * area;
        }
        if (star)
            return loop;
    }
}

/// One-cell mesh from a polygon.
inline hhowave::PolyMesh single_cell_mesh(const std::vector<Point2>& loop, hhowave::Subdomain sub)
{
    hhowave::PolygonSoup soup;
    soup.vertices = loop;
    std::vector<std::size_t> ids(loop.size());
    for (std::size_t i = 0; i < ids.size(); ++i)
        ids[i] = i;
    soup.cells.push_back(ids);
    soup.subdomains.push_back(sub);
    soup.materials.push_back(sub == hhowave::Subdomain::fluid ? 0 : 1);
    return hhowave::PolyMesh::build(std::move(soup));
}

inline double binomial(int n, int k)
{
    double r = 1;
    for (int i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

/// Exact integral of x^a y^b over a counterclockwise polygon, from Green's
/// theorem with the edge integrals expanded in closed form.
inline double monomial_integral(const std::vector<Point2>& loop, int a, int b)
{
    double sum = 0;
    const std::size_t n = loop.size();
    for (std::size_t e = 0; e < n; ++e) {
        const Point2& p = loop[e];
        const Point2 d = loop[(e + 1) % n] - p;
        // int_0^1 (x0 + t dx)^(a+1) (y0 + t dy)^b dt
        double edge = 0;
        for (int i = 0; i <= a + 1; ++i)
            for (int j = 0; j <= b; ++j)
                edge += binomial(a + 1, i) * std::pow(p.x(), a + 1 - i) * std::pow(d.x(), i) * binomial(b, j) *
                        std::pow(p.y(), b - j) * std::pow(d.y(), j) / (i + j + 1);
        sum += edge * d.y();
    }
    return sum / (a + 1);
}

// ---------------------------------------------------------------------------
// Dense global operators

struct DenseSystem {
    Matrix mass; // cells x cells
    Matrix ktt, ktf, kft, kff;
};

/// Scatters the block system into dense matrices.
inline DenseSystem densify(const hhowave::PolyMesh& mesh, const hhowave::BlockSystem& sys)
{
    const auto& l = sys.layout;
    const auto nt = static_cast<Eigen::Index>(l.num_cell_dofs());
    const auto nf = static_cast<Eigen::Index>(l.num_face_dofs());
    DenseSystem d;
    d.mass = Matrix::Zero(nt, nt);
    d.ktt = Matrix::Zero(nt, nt);
    d.ktf = Matrix::Zero(nt, nf);
    d.kft = Matrix::Zero(nf, nt);
    d.kff = Matrix::Zero(nf, nf);
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const auto& cd = l.cell_dofs[c];
        for (std::size_t i = 0; i < cd.size(); ++i)
            for (std::size_t j = 0; j < cd.size(); ++j) {
                d.mass(cd[i], cd[j]) += sys.mass[c](i, j);
                d.ktt(cd[i], cd[j]) += sys.ktt[c](i, j);
            }
        const auto& cell = mesh.cell(c);
        for (std::size_t s = 0; s < cell.num_faces(); ++s) {
            const auto& fd = l.face_dofs[cell.faces[s]];
            if (fd.empty())
                continue;
            for (std::size_t i = 0; i < cd.size(); ++i)
                for (std::size_t j = 0; j < fd.size(); ++j) {
                    d.ktf(cd[i], fd[j]) += sys.ktf[c][s](i, j);
                    d.kft(fd[j], cd[i]) += sys.kft[c][s](j, i);
                }
        }
    }
    for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
        const auto& fd = l.face_dofs[f];
        for (std::size_t i = 0; i < fd.size(); ++i)
            for (std::size_t j = 0; j < fd.size(); ++j)
                d.kff(fd[i], fd[j]) += sys.kff[f](i, j);
    }
    return d;
}

/// Monolithic stage solve
///   [M + a dt K_TT, a dt K_TF; a dt K_FT, a dt K_FF] (U_T, U_F) = (B_T, B_F).
inline void dense_stage_solve(const DenseSystem& d, double adt, const Vector& bt, const Vector& bf, Vector& ut,
                              Vector& uf)
{
    const auto nt = d.mass.rows(), nf = d.kff.rows();
    Matrix a(nt + nf, nt + nf);
    a << d.mass + adt * d.ktt, adt * d.ktf, adt * d.kft, adt * d.kff;
    Vector b(nt + nf);
    b << bt, bf;
    const Vector x = a.fullPivLu().solve(b);
    ut = x.head(nt);
    uf = x.tail(nf);
}

/// Dense SDIRK step written directly from the stage equations (no
/// condensation): stage i solves the monolithic system with
///   B_T = M U + a dt F_i + dt sum_j a_ij (F_j - K_TT U_j - K_TF V_j)
///   B_F = -dt sum_j a_ij (K_FT U_j + K_FF V_j),
/// and the update is M U_new = M U + dt sum_j b_j (F_j - K_TT U_j - K_TF V_j).
inline Vector dense_sdirk_step(const DenseSystem& d, const hhowave::ButcherTableau& tab, const Vector& u0, double dt,
                               const std::vector<Vector>& forcing)
{
    const int s = tab.stages;
    const double as = tab.a(0, 0);
    std::vector<Vector> ut(s), uf(s), flux(s);
    for (int i = 0; i < s; ++i) {
        Vector bt = d.mass * u0 + as * dt * forcing[i];
        Vector bf = Vector::Zero(d.kff.rows());
        for (int j = 0; j < i; ++j) {
            bt += dt * tab.a(i, j) * flux[j];
            bf -= dt * tab.a(i, j) * (d.kft * ut[j] + d.kff * uf[j]);
        }
        dense_stage_solve(d, as * dt, bt, bf, ut[i], uf[i]);
        flux[i] = forcing[i] - d.ktt * ut[i] - d.ktf * uf[i];
    }
    Vector rhs = d.mass * u0;
    for (int j = 0; j < s; ++j)
        rhs += dt * tab.b[j] * flux[j];
    return d.mass.llt().solve(rhs);
}

/// Dense ERK step on the cell-only operator K_TT - K_TF K_FF^-1 K_FT.
inline Vector dense_erk_step(const DenseSystem& d, const hhowave::ButcherTableau& tab, const Vector& u0, double dt,
                             const std::vector<Vector>& forcing)
{
    const Matrix reduced = d.ktt - d.ktf * d.kff.fullPivLu().solve(d.kft);
    const Matrix minv = d.mass.inverse();
    const int s = tab.stages;
    std::vector<Vector> k(s);
    for (int i = 0; i < s; ++i) {
        Vector u = u0;
        for (int j = 0; j < i; ++j)
            u += dt * tab.a(i, j) * k[j];
        k[i] = minv * (forcing[i] - reduced * u);
    }
    Vector u = u0;
    for (int j = 0; j < s; ++j)
        u += dt * tab.b[j] * k[j];
    return u;
}

} // namespace oracle
