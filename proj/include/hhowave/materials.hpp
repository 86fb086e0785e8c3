// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "hhowave/common.hpp"
#include "hhowave/mesh.hpp"

namespace hhowave {

struct FluidMaterial {
    double rho = 1.0;   // density
    double kappa = 1.0; // bulk modulus

    double cp() const;
    static FluidMaterial from_speed(double rho, double cp);
    void validate() const;
};

/// Isotropic linear elastic solid.
struct SolidMaterial {
    double rho = 1.0;
    double lambda = 1.0;
    double mu = 1.0;

    double cp() const;
    double cs() const;
    static SolidMaterial from_speeds(double rho, double cp, double cs);
    void validate() const;

    /// Weights Q with C^{-1}s : b = s^T Q b for symmetric tensors stored as
    /// (xx, yy, xy); the off-diagonal multiplicity 2 is part of Q.
    Eigen::Matrix3d compliance_weights() const;
    /// Hooke action on stored components: returns (C s) as (xx, yy, xy).
    Eigen::Vector3d apply_hooke(const Eigen::Vector3d& strain) const;
    /// Inverse Hooke action on stored components.
    Eigen::Vector3d apply_compliance(const Eigen::Vector3d& stress) const;
};

struct Material {
    std::string name;
    Subdomain kind = Subdomain::fluid;
    FluidMaterial fluid;
    SolidMaterial solid;

    /// Largest wave speed carried by this material.
    double max_speed() const;
};

/// Materials indexed by the mesh material id.
struct MaterialTable {
    std::vector<Material> entries;

    const Material& at(int id) const;
    double max_speed() const;
    /// Keeps only the named entries, in the given order (used to map MSH
    /// physical names onto material ids).
    MaterialTable select(const std::vector<std::string>& names) const;
    /// Checks that every cell's tag and subdomain match an entry.
    void check(const PolyMesh& mesh) const;
};

/// "academic", "granite-water" or "basin". The first two list the fluid
/// (id 0) and the solid (id 1), matching generated meshes; "basin" holds
/// atmosphere, sediments and bedrock.
MaterialTable builtin_materials(const std::string& name);

} // namespace hhowave
