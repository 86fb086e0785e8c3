// SPDX-License-Identifier: Apache-2.0
#include "hhowave/hho_core.hpp"

namespace hhowave {

namespace {

long dim_poly(int d, int k)
{
    if (k < 0)
        return 0;
    switch (d) {
    case 1: return k + 1;
    case 2: return (k + 1) * (k + 2) / 2;
    default: return (k + 1) * (k + 2) * (k + 3) / 6;
    }
}

} // namespace

double face_dof_fraction(int dim, PhysicsCase c, OrderMode mode, int k)
{
    if (dim != 2 && dim != 3)
        throw ConfigError("dimension must be 2 or 3");
    if (k < 0)
        throw ConfigError("degree must be non-negative");
    const int kc = mode == OrderMode::mixed ? k + 1 : k;
    // Components of the dual and primal fields.
    const int dual = c == PhysicsCase::acoustic ? dim : dim * (dim + 1) / 2;
    const int primal = c == PhysicsCase::acoustic ? 1 : dim;
    const double cell = dual * dim_poly(dim, k) + primal * dim_poly(dim, kc);
    // n #cells = 2 #faces with n = dim + 1 faces per simplex.
    const double faces_per_cell = (dim + 1) / 2.0;
    const double face = faces_per_cell * primal * dim_poly(dim - 1, k);
    return face / (face + cell);
}

} // namespace hhowave
