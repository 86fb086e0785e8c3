// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>

#include "hhowave/scenarios.hpp"

namespace hhowave {

namespace {

constexpr double pi = std::numbers::pi;

// f, f', f'' of a one-dimensional factor.
struct D2 {
    double f, d1, d2;
};

// x^2 sin(a x)
D2 fluid_x(double x, double a)
{
    const double s = std::sin(a * x), c = std::cos(a * x);
    return {x * x * s, 2 * x * s + a * x * x * c, 2 * s + 4 * a * x * c - a * a * x * x * s};
}

// x^2 cos(a x)
D2 solid_x(double x, double a)
{
    const double s = std::sin(a * x), c = std::cos(a * x);
    return {x * x * c, 2 * x * c - a * x * x * s, 2 * c - 4 * a * x * s - a * a * x * x * c};
}

// sin(a y)
D2 sine(double y, double a)
{
    const double s = std::sin(a * y), c = std::cos(a * y);
    return {s, a * c, -a * a * s};
}

// cos(a t)
D2 cosine(double t, double a)
{
    const double s = std::sin(a * t), c = std::cos(a * t);
    return {c, -a * s, -a * a * c};
}

} // namespace

double ManufacturedCase::potential(const Point2& x, double t) const
{
    return fluid_x(x.x(), omega * pi).f * sine(x.y(), omega * pi).f * sine(t, theta * pi).f;
}

Point2 ManufacturedCase::displacement(const Point2& x, double t) const
{
    const double u = solid_x(x.x(), 0.5 * omega * pi).f * sine(x.y(), omega * pi).f * cosine(t, theta * pi).f;
    return {u, u};
}

double ManufacturedCase::pressure(const Point2& x, double t) const
{
    return fluid_x(x.x(), omega * pi).f * sine(x.y(), omega * pi).f * sine(t, theta * pi).d1;
}

Point2 ManufacturedCase::fluid_velocity(const Point2& x, double t) const
{
    const auto X = fluid_x(x.x(), omega * pi);
    const auto Y = sine(x.y(), omega * pi);
    const double T = sine(t, theta * pi).f;
    return Point2(X.d1 * Y.f * T, X.f * Y.d1 * T) / fluid.rho;
}

Point2 ManufacturedCase::solid_velocity(const Point2& x, double t) const
{
    const double v = solid_x(x.x(), 0.5 * omega * pi).f * sine(x.y(), omega * pi).f * cosine(t, theta * pi).d1;
    return {v, v};
}

Eigen::Vector3d ManufacturedCase::stress(const Point2& x, double t) const
{
    const auto A = solid_x(x.x(), 0.5 * omega * pi);
    const auto B = sine(x.y(), omega * pi);
    const double C = cosine(t, theta * pi).f;
    // grad_sym u with u_x = u_y = A B C.
    const Eigen::Vector3d strain(A.d1 * B.f * C, A.f * B.d1 * C, 0.5 * (A.f * B.d1 + A.d1 * B.f) * C);
    return solid.apply_hooke(strain);
}

double ManufacturedCase::fluid_source(const Point2& x, double t) const
{
    const auto X = fluid_x(x.x(), omega * pi);
    const auto Y = sine(x.y(), omega * pi);
    const auto T = sine(t, theta * pi);
    // (1/kappa) d_t p - div m
    return X.f * Y.f * T.d2 / fluid.kappa - (X.d2 * Y.f + X.f * Y.d2) * T.f / fluid.rho;
}

Point2 ManufacturedCase::solid_source(const Point2& x, double t) const
{
    const auto A = solid_x(x.x(), 0.5 * omega * pi);
    const auto B = sine(x.y(), omega * pi);
    const auto C = cosine(t, theta * pi);
    const double l = solid.lambda, m = solid.mu;
    const double div_x = ((l + 2 * m) * A.d2 * B.f + (l + m) * A.d1 * B.d1 + m * A.f * B.d2) * C.f;
    const double div_y = (m * A.d2 * B.f + (l + m) * A.d1 * B.d1 + (l + 2 * m) * A.f * B.d2) * C.f;
    const double acc = solid.rho * A.f * B.f * C.d2;
    return {acc - div_x, acc - div_y};
}

FieldData ManufacturedCase::exact() const
{
    const ManufacturedCase self = *this;
    FieldData f;
    f.m = [self](const Point2& x, double t) { return self.fluid_velocity(x, t); };
    f.p = [self](const Point2& x, double t) { return self.pressure(x, t); };
    f.s = [self](const Point2& x, double t) { return self.stress(x, t); };
    f.v = [self](const Point2& x, double t) { return self.solid_velocity(x, t); };
    return f;
}

ProblemData ManufacturedCase::data() const
{
    const ManufacturedCase self = *this;
    ProblemData d;
    d.fluid_source = [self](const Point2& x, double t) { return self.fluid_source(x, t); };
    d.solid_source = [self](const Point2& x, double t) { return self.solid_source(x, t); };
    d.boundary_pressure = [self](const Point2& x, double t) { return self.pressure(x, t); };
    d.boundary_velocity = [self](const Point2& x, double t) { return self.solid_velocity(x, t); };
    return d;
}

namespace {

ManufacturedCase with_materials(const MaterialTable& mats, double omega, double theta)
{
    ManufacturedCase mc;
    mc.omega = omega;
    mc.theta = theta;
    bool have_f = false, have_s = false;
    for (const auto& m : mats.entries) {
        if (m.kind == Subdomain::fluid && !have_f) {
            mc.fluid = m.fluid;
            have_f = true;
        }
        if (m.kind == Subdomain::solid && !have_s) {
            mc.solid = m.solid;
            have_s = true;
        }
    }
    return mc;
}

} // namespace

ManufacturedCase ManufacturedCase::spatial_dominant(const MaterialTable& mats)
{
    return with_materials(mats, 5.0, std::sqrt(2.0));
}

ManufacturedCase ManufacturedCase::time_dominant(const MaterialTable& mats)
{
    return with_materials(mats, 1.0, 10.0);
}

double RickerConfig::wavelength() const
{
    return fluid_speed / central_frequency;
}

Point2 RickerConfig::velocity(const Point2& x) const
{
    const Point2 d = x - center;
    const double lam = wavelength();
    return amplitude * std::exp(-pi * pi * d.squaredNorm() / (lam * lam)) * d;
}

FieldData RickerConfig::initial() const
{
    const RickerConfig self = *this;
    FieldData f;
    f.m = [self](const Point2& x, double) { return self.velocity(x); };
    return f;
}

} // namespace hhowave
