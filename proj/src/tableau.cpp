// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>

#include "hhowave/timestep.hpp"

namespace hhowave {

SchemeKind scheme_from_string(const std::string& s)
{
    if (s == "ERK2" || s == "erk2")
        return SchemeKind::erk2;
    if (s == "ERK3" || s == "erk3")
        return SchemeKind::erk3;
    if (s == "ERK4" || s == "erk4")
        return SchemeKind::erk4;
    if (s == "SDIRK23" || s == "sdirk23")
        return SchemeKind::sdirk23;
    if (s == "SDIRK34" || s == "sdirk34")
        return SchemeKind::sdirk34;
    throw ConfigError("unknown time scheme '" + s + "'");
}

const char* to_string(SchemeKind k)
{
    switch (k) {
    case SchemeKind::erk2: return "ERK2";
    case SchemeKind::erk3: return "ERK3";
    case SchemeKind::erk4: return "ERK4";
    case SchemeKind::sdirk23: return "SDIRK23";
    case SchemeKind::sdirk34: return "SDIRK34";
    }
    return "?";
}

bool is_implicit(SchemeKind k)
{
    return k == SchemeKind::sdirk23 || k == SchemeKind::sdirk34;
}

ButcherTableau tableau(SchemeKind kind)
{
    ButcherTableau t;
    t.kind = kind;
    switch (kind) {
    case SchemeKind::erk2:
        t.stages = 2;
        t.a = Matrix::Zero(2, 2);
        t.a(1, 0) = 0.5;
        t.b = Vector::Zero(2);
        t.b << 0.0, 1.0;
        break;
    case SchemeKind::erk3:
        t.stages = 3;
        t.a = Matrix::Zero(3, 3);
        t.a(1, 0) = 0.5;
        t.a(2, 0) = -1.0;
        t.a(2, 1) = 2.0;
        t.b = Vector::Zero(3);
        t.b << 1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0;
        break;
    case SchemeKind::erk4:
        t.stages = 4;
        t.a = Matrix::Zero(4, 4);
        t.a(1, 0) = 0.5;
        t.a(2, 1) = 0.5;
        t.a(3, 2) = 1.0;
        t.b = Vector::Zero(4);
        t.b << 1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0;
        break;
    case SchemeKind::sdirk23:
        t.stages = 2;
        t.a = Matrix::Zero(2, 2);
        t.a(0, 0) = 0.25;
        t.a(1, 0) = 0.5;
        t.a(1, 1) = 0.25;
        t.b = Vector::Zero(2);
        t.b << 0.5, 0.5;
        break;
    case SchemeKind::sdirk34: {
        const double nu = std::cos(std::numbers::pi / 18.0) / std::sqrt(3.0) + 0.5;
        const double xi = 1.0 / (6.0 * (2.0 * nu - 1.0) * (2.0 * nu - 1.0));
        t.stages = 3;
        t.a = Matrix::Zero(3, 3);
        t.a(0, 0) = nu;
        t.a(1, 0) = 0.5 - nu;
        t.a(1, 1) = nu;
        t.a(2, 0) = 2.0 * nu;
        t.a(2, 1) = 1.0 - 4.0 * nu;
        t.a(2, 2) = nu;
        t.b = Vector::Zero(3);
        t.b << xi, 1.0 - 2.0 * xi, xi;
        break;
    }
    }
    t.c = t.a.rowwise().sum();
    return t;
}

} // namespace hhowave
