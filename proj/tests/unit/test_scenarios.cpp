// Manufactured solution, Ricker pulse, sensors and diagnostics.
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../support/oracles.hpp"
#include "hhowave/scenarios.hpp"

using namespace hhowave;

namespace {

ManufacturedCase lopsided_case()
{
    ManufacturedCase mc;
    mc.omega = 1.7;
    mc.theta = 2.3;
    mc.fluid = FluidMaterial::from_speed(1.5, 2.0);
    mc.solid = SolidMaterial::from_speeds(2.0, 3.0, 1.2);
    return mc;
}

// Centered differences, step e.
template <class F>
auto dt_fd(F f, const Point2& x, double t, double e = 1e-5)
{
    return (f(x, t + e) - f(x, t - e)) / (2 * e);
}
template <class F>
auto dx_fd(F f, const Point2& x, double t, double e = 1e-5)
{
    return (f(x + Point2(e, 0), t) - f(x - Point2(e, 0), t)) / (2 * e);
}
template <class F>
auto dy_fd(F f, const Point2& x, double t, double e = 1e-5)
{
    return (f(x + Point2(0, e), t) - f(x - Point2(0, e), t)) / (2 * e);
}

} // namespace

TEST_CASE("manufactured fields satisfy the first-order system")
{
    const ManufacturedCase mc = lopsided_case();
    const auto pot = [&](const Point2& x, double t) { return mc.potential(x, t); };
    const auto disp = [&](const Point2& x, double t) { return mc.displacement(x, t); };
    const auto p = [&](const Point2& x, double t) { return mc.pressure(x, t); };
    const auto m = [&](const Point2& x, double t) { return mc.fluid_velocity(x, t); };
    const auto v = [&](const Point2& x, double t) { return mc.solid_velocity(x, t); };
    const auto s = [&](const Point2& x, double t) { return mc.stress(x, t); };
    for (double t : {0.1, 0.45, 0.8}) {
        for (const Point2 x : {Point2(0.3, 0.2), Point2(0.71, 0.55), Point2(0.12, 0.93)}) {
            CAPTURE(t);
            // p = du/dt, m = grad u / rho
            CHECK(p(x, t) == doctest::Approx(dt_fd(pot, x, t)).epsilon(1e-7));
            CHECK(m(x, t).x() == doctest::Approx(dx_fd(pot, x, t) / mc.fluid.rho).epsilon(1e-7));
            CHECK(m(x, t).y() == doctest::Approx(dy_fd(pot, x, t) / mc.fluid.rho).epsilon(1e-7));
            // rho dm/dt = grad p
            const Point2 lhs = mc.fluid.rho * dt_fd(m, x, t);
            CHECK(lhs.x() == doctest::Approx(dx_fd(p, x, t)).epsilon(1e-6));
            CHECK(lhs.y() == doctest::Approx(dy_fd(p, x, t)).epsilon(1e-6));
            // (1/kappa) dp/dt - div m = f
            const double f = dt_fd(p, x, t) / mc.fluid.kappa - dx_fd(m, x, t).x() - dy_fd(m, x, t).y();
            CHECK(mc.fluid_source(x, t) == doctest::Approx(f).epsilon(1e-6));
        }
        for (const Point2 x : {Point2(-0.3, 0.2), Point2(-0.71, 0.55), Point2(-0.12, 0.93)}) {
            CAPTURE(t);
            CHECK((v(x, t) - dt_fd(disp, x, t)).norm() < 1e-7 * std::max(1.0, v(x, t).norm()));
            // s = lambda tr(eps) I + 2 mu eps, eps from differenced displacement
            const Point2 ux = dx_fd(disp, x, t), uy = dy_fd(disp, x, t);
            const double l = mc.solid.lambda, mu = mc.solid.mu;
            const double exx = ux.x(), eyy = uy.y(), exy = 0.5 * (uy.x() + ux.y());
            const Eigen::Vector3d sig(l * (exx + eyy) + 2 * mu * exx, l * (exx + eyy) + 2 * mu * eyy, 2 * mu * exy);
            CHECK((s(x, t) - sig).norm() < 1e-6 * std::max(1.0, sig.norm()));
            // rho dv/dt - div s = f
            const Eigen::Vector3d sx = dx_fd(s, x, t), sy = dy_fd(s, x, t);
            const Point2 div(sx[0] + sy[2], sx[2] + sy[1]);
            const Point2 f = mc.solid.rho * dt_fd(v, x, t) - div;
            CHECK((mc.solid_source(x, t) - f).norm() < 1e-5 * std::max(1.0, f.norm()));
        }
    }
}

TEST_CASE("manufactured solution vanishes on the interface")
{
    const ManufacturedCase mc = lopsided_case();
    for (double y : {0.1, 0.5, 0.77}) {
        const Point2 x(0.0, y);
        CHECK(mc.pressure(x, 0.3) == 0.0);
        CHECK(mc.solid_velocity(x, 0.3).norm() == 0.0);
        CHECK(mc.fluid_velocity(x, 0.3).norm() == 0.0);
        CHECK(mc.stress(x, 0.3).norm() == 0.0);
    }
}

TEST_CASE("manufactured presets")
{
    const auto mats = builtin_materials("academic");
    const auto a = ManufacturedCase::spatial_dominant(mats);
    CHECK(a.omega == 5.0);
    CHECK(a.theta == doctest::Approx(std::sqrt(2.0)));
    const auto b = ManufacturedCase::time_dominant(mats);
    CHECK(b.omega == 1.0);
    CHECK(b.theta == 10.0);
    CHECK(a.solid.cp() == doctest::Approx(std::sqrt(3.0)));
    CHECK(a.solid.cs() == doctest::Approx(1.0));
}

TEST_CASE("Ricker initial velocity")
{
    RickerConfig r;
    r.fluid_speed = 1500.0;
    r.central_frequency = 15.0;
    r.center = Point2(2.0, 1.0);
    CHECK(r.wavelength() == doctest::Approx(100.0));
    CHECK(r.velocity(r.center).norm() == 0.0);
    const Point2 x = r.center + Point2(30.0, -40.0);
    const double g = std::exp(-std::numbers::pi * std::numbers::pi * 2500.0 / 10000.0);
    CHECK(r.velocity(x).x() == doctest::Approx(30.0 * g));
    CHECK(r.velocity(x).y() == doctest::Approx(-40.0 * g));
    // Radial field: parallel to x - center.
    const Point2 w = r.velocity(x);
    CHECK(std::abs(w.x() * -40.0 - w.y() * 30.0) < 1e-12);
    const FieldData f = r.initial();
    CHECK(f.m);
    CHECK_FALSE(f.p);
    CHECK_FALSE(f.v);
}

TEST_CASE("sensor binding")
{
    const PolyMesh mesh = generate(manufactured_geometry(MeshFamily::hexagonal, 2));
    const auto fl = bind_sensor(mesh, {"a", Point2(0.4, 0.5), SensorKind::fluid});
    REQUIRE(fl.fluid_cell != invalid_index);
    CHECK(mesh.cell(fl.fluid_cell).subdomain == Subdomain::fluid);
    const auto so = bind_sensor(mesh, {"b", Point2(-0.4, 0.5), SensorKind::solid});
    CHECK(mesh.cell(so.solid_cell).subdomain == Subdomain::solid);
    const auto in = bind_sensor(mesh, {"c", Point2(0.0, 0.5), SensorKind::interface});
    REQUIRE(in.face != invalid_index);
    CHECK(mesh.face(in.face).is_interface());
    CHECK(mesh.cell(in.fluid_cell).subdomain == Subdomain::fluid);
    CHECK(mesh.cell(in.solid_cell).subdomain == Subdomain::solid);
    CHECK_THROWS_AS(bind_sensor(mesh, {"d", Point2(-0.4, 0.5), SensorKind::fluid}), ConfigError);
    CHECK_THROWS_AS(bind_sensor(mesh, {"e", Point2(0.1, 0.5), SensorKind::interface}), ConfigError);
    CHECK_THROWS_AS(bind_sensor(mesh, {"f", Point2(3.0, 0.5), SensorKind::solid}), ConfigError);
    CHECK(fl.channels().size() == 3);
    CHECK(so.channels().size() == 5);
    CHECK(in.channels().size() == 8);
    CHECK(sensor_kind_from_string("interface") == SensorKind::interface);
    CHECK_THROWS_AS(sensor_kind_from_string("air"), ConfigError);
    // A point on a shared edge goes to the lowest cell id.
    const std::size_t c = locate_cell(mesh, mesh.cell(fl.fluid_cell).barycenter, Subdomain::fluid);
    CHECK(c == fl.fluid_cell);
}

namespace {

// Interface-compatible affine fields: m.n = v.n and p n = s n on x = 0.
FieldData matched_fields(double slip)
{
    FieldData f;
    f.m = [](const Point2& x, double) { return Point2(1 + x.y(), 2 * x.x()); };
    f.p = [](const Point2& x, double) { return 3 + x.y(); };
    f.v = [slip](const Point2& x, double) { return Point2(1 + x.y() + slip, 5 - x.x()); };
    f.s = [](const Point2& x, double) { return Eigen::Vector3d(3 + x.y(), 7 + x.x(), 0.0); };
    return f;
}

} // namespace

TEST_CASE("sensor sampling and coupling residuals on exact affine fields")
{
    const PolyMesh mesh = generate(manufactured_geometry(MeshFamily::cartesian, 2));
    const auto mats = builtin_materials("academic");
    HhoConfig cfg;
    cfg.stab = StabilizationConfig::implicit_default();
    const BlockSystem sys = assemble(mesh, mats, cfg);
    const Point2 xi(0.0, 0.3);
    const auto probe = bind_sensor(mesh, {"i", xi, SensorKind::interface});

    SimState st;
    project_fields(mesh, sys, matched_fields(0.0), 0.0, st.ut, &st.uf);
    const Vector s = probe.sample(mesh, sys, st);
    REQUIRE(s.size() == 8);
    CHECK(s[0] == doctest::Approx(3.3));
    CHECK(s[1] == doctest::Approx(1.3));
    CHECK(s[3] == doctest::Approx(1.3));
    CHECK(s[4] == doctest::Approx(5.0));
    CHECK(s[5] == doctest::Approx(3.3));
    CHECK(s[6] == doctest::Approx(7.0));
    auto e = coupling_errors(mesh, sys, st, probe);
    CHECK(e.kinematic < 1e-12);
    CHECK(e.dynamic < 1e-12);

    project_fields(mesh, sys, matched_fields(0.25), 0.0, st.ut, &st.uf);
    e = coupling_errors(mesh, sys, st, probe);
    CHECK(e.kinematic == doctest::Approx(0.25));
    CHECK(e.dynamic < 1e-12);

    const auto fl = bind_sensor(mesh, {"a", Point2(0.6, 0.2), SensorKind::fluid});
    const Vector fs = fl.sample(mesh, sys, st);
    CHECK(fs[0] == doctest::Approx(3.2));
    CHECK(fs[1] == doctest::Approx(1.2));
    CHECK(fs[2] == doctest::Approx(1.2));
    CHECK_THROWS_AS(coupling_errors(mesh, sys, st, fl), ConfigError);
}

TEST_CASE("energy of a piecewise constant state")
{
    const PolyMesh mesh = generate(manufactured_geometry(MeshFamily::simplicial, 2));
    MaterialTable mats = builtin_materials("academic");
    mats.entries[0].fluid = FluidMaterial::from_speed(2.0, 3.0);
    HhoConfig cfg;
    const BlockSystem sys = assemble(mesh, mats, cfg);
    FieldData f;
    f.p = [](const Point2&, double) { return 2.0; };
    f.v = [](const Point2&, double) { return Point2(1.0, -1.0); };
    Vector ut;
    project_fields(mesh, sys, f, 0.0, ut);
    // 1/2 (p^2 / kappa |fluid| + rho_s |v|^2 |solid|)
    const double kappa = 2.0 * 9.0;
    CHECK(energy(sys, ut) == doctest::Approx(0.5 * (4.0 / kappa + mats.at(1).solid.rho * 2.0)));
}

TEST_CASE("relative trace errors")
{
    Trace ref, a;
    for (int i = 0; i < 5; ++i) {
        ref.time.push_back(0.1 * i);
        a.time.push_back(0.1 * i);
        ref.values.push_back((Vector(2) << 1.0, 2.0).finished());
        a.values.push_back((Vector(2) << 1.0, 2.2).finished());
    }
    const double expect = std::sqrt(5 * 0.04 / (5 * 5.0));
    CHECK(relative_trace_error(a, ref) == doctest::Approx(expect));
    CHECK(relative_trace_error(ref, ref) == 0.0);
    CHECK(sensor_error(a, ref, ref, ref) == doctest::Approx(expect));
    a.time[2] += 0.01;
    CHECK_THROWS_AS(relative_trace_error(a, ref), Error);
    a.time.pop_back();
    CHECK_THROWS_AS(relative_trace_error(a, ref), Error);
}

TEST_CASE("energy criteria")
{
    CHECK(energy_variation({1.0, 1.0, 1.0}) == 0.0);
    CHECK(energy_variation({1.0, 0.9, 0.8}) == doctest::Approx(0.2));
    CHECK(energy_increase({1.0, 0.9, 0.8}) == 0.0);
    CHECK(energy_increase({1.0, 0.5, 0.6}) == doctest::Approx(0.2));
    CHECK(std::isinf(energy_increase({1.0, 2.0, NAN})));
    CHECK(std::isinf(energy_variation({1.0, INFINITY})));
}

TEST_CASE("dual field error vanishes on the projected exact solution for polynomial data")
{
    const PolyMesh mesh = generate(manufactured_geometry(MeshFamily::hexagonal, 1));
    HhoConfig cfg;
    const BlockSystem sys = assemble(mesh, builtin_materials("academic"), cfg);
    const FieldData f = matched_fields(0.0);
    Vector ut;
    project_fields(mesh, sys, f, 0.0, ut);
    CHECK(l2_error_dual(mesh, sys, ut, f, 0.0) < 1e-12);
    CHECK(l2_error_dual(mesh, sys, Vector::Zero(ut.size()), f, 0.0) > 1.0);
}
