// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include "hhowave/scenarios.hpp"

namespace hhowave {

SensorKind sensor_kind_from_string(const std::string& s)
{
    if (s == "fluid")
        return SensorKind::fluid;
    if (s == "solid")
        return SensorKind::solid;
    if (s == "interface")
        return SensorKind::interface;
    throw ConfigError("unknown sensor kind '" + s + "'");
}

const char* to_string(SensorKind k)
{
    switch (k) {
    case SensorKind::fluid: return "fluid";
    case SensorKind::solid: return "solid";
    case SensorKind::interface: return "interface";
    }
    return "?";
}

namespace {

double segment_distance(const Point2& a, const Point2& b, const Point2& p)
{
    const Point2 d = b - a;
    const double t = std::clamp((p - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
    return (a + t * d - p).norm();
}

bool inside_cell(const PolyMesh& mesh, std::size_t c, const Point2& p, double tol)
{
    const auto& vs = mesh.cell(c).vertices;
    const std::size_t n = vs.size();
    bool in = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point2& a = mesh.vertices()[vs[i]];
        const Point2& b = mesh.vertices()[vs[j]];
        if (segment_distance(a, b, p) <= tol)
            return true;
        if ((a.y() > p.y()) != (b.y() > p.y()) && p.x() < (b.x() - a.x()) * (p.y() - a.y()) / (b.y() - a.y()) + a.x())
            in = !in;
    }
    return in;
}

} // namespace

std::size_t locate_cell(const PolyMesh& mesh, const Point2& p, Subdomain sub)
{
    const double tol = mesh.tolerance();
    for (std::size_t c = 0; c < mesh.num_cells(); ++c)
        if (mesh.cell(c).subdomain == sub && inside_cell(mesh, c, p, tol))
            return c;
    return invalid_index;
}

SensorProbe bind_sensor(const PolyMesh& mesh, const SensorSpec& spec)
{
    SensorProbe probe;
    probe.spec = spec;
    switch (spec.kind) {
    case SensorKind::fluid:
        probe.fluid_cell = locate_cell(mesh, spec.position, Subdomain::fluid);
        if (probe.fluid_cell == invalid_index)
            throw ConfigError("fluid sensor '" + spec.name + "' is not inside the fluid subdomain");
        break;
    case SensorKind::solid:
        probe.solid_cell = locate_cell(mesh, spec.position, Subdomain::solid);
        if (probe.solid_cell == invalid_index)
            throw ConfigError("solid sensor '" + spec.name + "' is not inside the solid subdomain");
        break;
    case SensorKind::interface: {
        const double snap = 1e-9 * mesh.length_scale();
        double best = std::numeric_limits<double>::infinity();
        for (auto fi : mesh.classes().interface) {
            const auto& f = mesh.face(fi);
            const double d = segment_distance(mesh.vertices()[f.vertices[0]], mesh.vertices()[f.vertices[1]], spec.position);
            if (d < best - mesh.tolerance()) {
                best = d;
                probe.face = fi;
            }
        }
        if (probe.face == invalid_index || best > snap)
            throw ConfigError("interface sensor '" + spec.name + "' is not on the interface");
        probe.solid_cell = mesh.face(probe.face).owner;
        probe.fluid_cell = mesh.face(probe.face).neighbor;
        break;
    }
    }
    return probe;
}

Vector eval_cell_field(const PolyMesh& mesh, const BlockSystem& sys, const Vector& ut, std::size_t cell,
                       const Point2& x)
{
    const auto& l = sys.layout;
    const auto sub = mesh.cell(cell).subdomain;
    const Vector coef = gather(ut, l.cell_dofs[cell]);
    const Vector phi = CellBasis(mesh, cell, l.k).eval(x);
    const Vector psi = CellBasis(mesh, cell, l.kc).eval(x);
    const int nd = static_cast<int>(phi.size()), np = static_cast<int>(psi.size());
    const int dc = sub == Subdomain::fluid ? 2 : 3, pc = sub == Subdomain::fluid ? 1 : 2;
    Vector out(dc + pc);
    for (int a = 0; a < dc; ++a)
        out[a] = coef.segment(a * nd, nd).dot(phi);
    for (int a = 0; a < pc; ++a)
        out[dc + a] = coef.segment(dc * nd + a * np, np).dot(psi);
    return out;
}

Vector eval_face_field(const PolyMesh& mesh, const BlockSystem& sys, const Vector& uf, std::size_t face,
                       const Point2& x)
{
    const auto& l = sys.layout;
    const Vector coef = gather(uf, l.face_dofs[face]);
    const Vector chi = FaceBasis(mesh, face, l.k).eval(x);
    const int nf = static_cast<int>(chi.size());
    Vector out(coef.size() / nf);
    for (int a = 0; a < out.size(); ++a)
        out[a] = coef.segment(a * nf, nf).dot(chi);
    return out;
}

std::vector<std::string> SensorProbe::channels() const
{
    switch (spec.kind) {
    case SensorKind::fluid: return {"p", "mx", "my"};
    case SensorKind::solid: return {"vx", "vy", "sxx", "syy", "sxy"};
    case SensorKind::interface: return {"pF", "mx", "my", "vFx", "vFy", "sxx", "syy", "sxy"};
    }
    return {};
}

Vector SensorProbe::sample(const PolyMesh& mesh, const BlockSystem& sys, const SimState& state) const
{
    const Point2& x = spec.position;
    switch (spec.kind) {
    case SensorKind::fluid: {
        const Vector f = eval_cell_field(mesh, sys, state.ut, fluid_cell, x);
        return (Vector(3) << f[2], f[0], f[1]).finished();
    }
    case SensorKind::solid: {
        const Vector f = eval_cell_field(mesh, sys, state.ut, solid_cell, x);
        return (Vector(5) << f[3], f[4], f[0], f[1], f[2]).finished();
    }
    case SensorKind::interface: {
        const Vector ff = eval_cell_field(mesh, sys, state.ut, fluid_cell, x);
        const Vector fs = eval_cell_field(mesh, sys, state.ut, solid_cell, x);
        const Vector tr = eval_face_field(mesh, sys, state.uf, face, x);
        return (Vector(8) << tr[0], ff[0], ff[1], tr[1], tr[2], fs[0], fs[1], fs[2]).finished();
    }
    }
    return {};
}

double energy(const BlockSystem& sys, const Vector& ut)
{
    double e = 0.0;
    for (std::size_t c = 0; c < sys.num_cells(); ++c) {
        const Vector u = gather(ut, sys.layout.cell_dofs[c]);
        e += u.dot(sys.mass[c] * u);
    }
    return 0.5 * e;
}

CouplingErrors coupling_errors(const PolyMesh& mesh, const BlockSystem& sys, const SimState& state,
                               const SensorProbe& probe)
{
    if (probe.spec.kind != SensorKind::interface || probe.face == invalid_index)
        throw ConfigError("coupling errors need an interface sensor");
    const Vector s = probe.sample(mesh, sys, state);
    const Point2 n = mesh.face(probe.face).normal;
    const Point2 m(s[1], s[2]), v(s[3], s[4]);
    const Point2 sn(s[5] * n.x() + s[7] * n.y(), s[7] * n.x() + s[6] * n.y());
    CouplingErrors e;
    e.kinematic = std::abs((v - m).dot(n));
    e.dynamic = (s[0] * n - sn).norm();
    return e;
}

double relative_trace_error(const Trace& a, const Trace& ref)
{
    if (a.time.size() != ref.time.size() || a.values.size() != ref.values.size() || a.time.size() != a.values.size())
        throw Error("traces are sampled on different time grids");
    for (std::size_t i = 0; i < a.time.size(); ++i)
        if (std::abs(a.time[i] - ref.time[i]) > 1e-12 * std::max(1.0, std::abs(ref.time[i])))
            throw Error("traces are sampled on different time grids");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        num += (a.values[i] - ref.values[i]).squaredNorm();
        den += ref.values[i].squaredNorm();
    }
    if (den == 0.0)
        throw Error("reference trace has zero norm");
    return std::sqrt(num / den);
}

double sensor_error(const Trace& p, const Trace& v, const Trace& p_ref, const Trace& v_ref)
{
    return relative_trace_error(p, p_ref) + relative_trace_error(v, v_ref);
}

double l2_error_dual(const PolyMesh& mesh, const BlockSystem& sys, const Vector& ut, const FieldData& exact, double t)
{
    const int qdeg = sys.config.data_quad_degree();
    double err = 0.0;
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const bool fluid = mesh.cell(c).subdomain == Subdomain::fluid;
        const auto q = quad_cell(mesh, c, qdeg);
        for (std::size_t i = 0; i < q.size(); ++i) {
            const Vector f = eval_cell_field(mesh, sys, ut, c, q.points[i]);
            double e2 = 0.0;
            if (fluid) {
                const Point2 m = exact.m ? exact.m(q.points[i], t) : Point2::Zero();
                e2 = (f.head<2>() - m).squaredNorm();
            }
            else {
                const Eigen::Vector3d s = exact.s ? exact.s(q.points[i], t) : Eigen::Vector3d::Zero();
                const Eigen::Vector3d d = f.head<3>() - s;
                e2 = d[0] * d[0] + d[1] * d[1] + 2 * d[2] * d[2];
            }
            err += q.weights[i] * e2;
        }
    }
    return std::sqrt(err);
}

double energy_variation(const std::vector<double>& e)
{
    double worst = 0.0;
    for (std::size_t n = 1; n < e.size(); ++n) {
        worst = std::max(worst, std::abs(e[n] - e[0]) / e[0]);
        worst = std::max(worst, std::abs(e[n] - e[n - 1]) / e[n - 1]);
        if (!std::isfinite(e[n]))
            return std::numeric_limits<double>::infinity();
    }
    return worst;
}

double energy_increase(const std::vector<double>& e)
{
    double worst = 0.0;
    for (std::size_t n = 1; n < e.size(); ++n) {
        worst = std::max(worst, (e[n] - e[0]) / e[0]);
        worst = std::max(worst, (e[n] - e[n - 1]) / e[n - 1]);
        if (!std::isfinite(e[n]))
            return std::numeric_limits<double>::infinity();
    }
    return worst;
}

} // namespace hhowave
