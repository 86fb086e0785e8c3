// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include "hhowave/materials.hpp"

namespace hhowave {

double FluidMaterial::cp() const
{
    return std::sqrt(kappa / rho);
}

FluidMaterial FluidMaterial::from_speed(double rho, double cp)
{
    return {rho, rho * cp * cp};
}

void FluidMaterial::validate() const
{
    if (!(rho > 0) || !(kappa > 0))
        throw ConfigError("fluid material needs rho > 0 and kappa > 0");
}

double SolidMaterial::cp() const
{
    return std::sqrt((lambda + 2 * mu) / rho);
}

double SolidMaterial::cs() const
{
    return std::sqrt(mu / rho);
}

SolidMaterial SolidMaterial::from_speeds(double rho, double cp, double cs)
{
    const double mu = rho * cs * cs;
    return {rho, rho * cp * cp - 2 * mu, mu};
}

void SolidMaterial::validate() const
{
    if (!(rho > 0) || !(mu > 0) || !(lambda + 2 * mu > 0))
        throw ConfigError("solid material needs rho > 0, mu > 0 and lambda + 2 mu > 0");
    if (!(lambda + mu > 0))
        throw ConfigError("solid material needs lambda + mu > 0 for an invertible 2D Hooke law");
}

Eigen::Matrix3d SolidMaterial::compliance_weights() const
{
    const double beta = lambda / (2 * (lambda + mu));
    Eigen::Matrix3d q = Eigen::Vector3d(1, 1, 2).asDiagonal();
    q.topLeftCorner<2, 2>().array() -= beta;
    return q / (2 * mu);
}

Eigen::Vector3d SolidMaterial::apply_hooke(const Eigen::Vector3d& e) const
{
    const double tr = e[0] + e[1];
    return {2 * mu * e[0] + lambda * tr, 2 * mu * e[1] + lambda * tr, 2 * mu * e[2]};
}

Eigen::Vector3d SolidMaterial::apply_compliance(const Eigen::Vector3d& s) const
{
    const double tr = s[0] + s[1];
    const double beta = lambda / (2 * (lambda + mu));
    return Eigen::Vector3d(s[0] - beta * tr, s[1] - beta * tr, s[2]) / (2 * mu);
}

double Material::max_speed() const
{
    return kind == Subdomain::fluid ? fluid.cp() : solid.cp();
}

const Material& MaterialTable::at(int id) const
{
    if (id < 0 || static_cast<std::size_t>(id) >= entries.size())
        throw ConfigError("no material with id " + std::to_string(id));
    return entries[id];
}

double MaterialTable::max_speed() const
{
    double c = 0;
    for (const auto& m : entries)
        c = std::max(c, m.max_speed());
    return c;
}

MaterialTable MaterialTable::select(const std::vector<std::string>& names) const
{
    MaterialTable out;
    for (const auto& n : names) {
        auto it = std::find_if(entries.begin(), entries.end(), [&](const Material& m) { return m.name == n; });
        if (it == entries.end()) {
            // "fluid:<name>" / "solid:<name>" physical names refer to <name>.
            const auto colon = n.find(':');
            if (colon != std::string::npos) {
                const auto bare = n.substr(colon + 1);
                it = std::find_if(entries.begin(), entries.end(), [&](const Material& m) { return m.name == bare; });
            }
        }
        if (it == entries.end())
            throw ConfigError("no material named '" + n + "'");
        out.entries.push_back(*it);
    }
    return out;
}

void MaterialTable::check(const PolyMesh& mesh) const
{
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const auto& cell = mesh.cell(c);
        const auto& m = at(cell.material);
        if (m.kind != cell.subdomain)
            throw ConfigError("material '" + m.name + "' assigned to a " + to_string(cell.subdomain) + " cell");
        if (m.kind == Subdomain::fluid)
            m.fluid.validate();
        else
            m.solid.validate();
    }
}

namespace {

Material fluid(const std::string& name, double rho, double cp)
{
    Material m;
    m.name = name;
    m.kind = Subdomain::fluid;
    m.fluid = FluidMaterial::from_speed(rho, cp);
    return m;
}

Material solid(const std::string& name, double rho, double cp, double cs)
{
    Material m;
    m.name = name;
    m.kind = Subdomain::solid;
    m.solid = SolidMaterial::from_speeds(rho, cp, cs);
    return m;
}

} // namespace

MaterialTable builtin_materials(const std::string& name)
{
    if (name == "academic")
        return {{fluid("fluid", 1.0, 1.0), solid("solid", 1.0, std::sqrt(3.0), 1.0)}};
    if (name == "granite-water")
        return {{fluid("water", 1025.0, 1500.0), solid("granite", 2690.0, 6000.0, 3000.0)}};
    if (name == "basin")
        return {{fluid("atmosphere", 1.225, 343.0), solid("sediments", 1300.0, 1600.0, 900.0),
                 solid("bedrock", 2570.0, 5350.0, 3009.0)}};
    throw ConfigError("unknown material set '" + name + "'");
}

} // namespace hhowave
