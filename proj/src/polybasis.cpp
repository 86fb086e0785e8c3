// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "hhowave/polybasis.hpp"

namespace hhowave {

int cell_scalar_dim(int k)
{
    return k < 0 ? 0 : (k + 1) * (k + 2) / 2;
}

int face_scalar_dim(int k)
{
    return k < 0 ? 0 : k + 1;
}

int basis_dim(BasisKind kind, int k, bool face)
{
    const int s = face ? face_scalar_dim(k) : cell_scalar_dim(k);
    switch (kind) {
    case BasisKind::scalar: return s;
    case BasisKind::vector2: return 2 * s;
    case BasisKind::symtensor2: return 3 * s;
    }
    return 0;
}

CellBasis::CellBasis(const Point2& center, double diameter, int degree)
    : center_(center), scale_(2.0 / diameter), degree_(degree)
{
    if (degree < 0 || degree > 15)
        throw Error("cell basis degree outside [0, 15]");
    for (int d = 0; d <= degree; ++d)
        for (int b = 0; b <= d; ++b)
            exps_.emplace_back(d - b, b);
}

CellBasis::CellBasis(const PolyMesh& mesh, std::size_t cell, int degree)
    : CellBasis(mesh.cell(cell).barycenter, mesh.cell(cell).diameter, degree)
{
}

namespace {

// Powers 0..k of t.
inline void powers(double t, int k, double* out)
{
    out[0] = 1.0;
    for (int i = 1; i <= k; ++i)
        out[i] = out[i - 1] * t;
}

} // namespace

Vector CellBasis::eval(const Point2& p) const
{
    double px[16], py[16];
    powers((p.x() - center_.x()) * scale_, degree_, px);
    powers((p.y() - center_.y()) * scale_, degree_, py);
    Vector v(size());
    for (int i = 0; i < size(); ++i)
        v[i] = px[exps_[i].first] * py[exps_[i].second];
    return v;
}

Matrix CellBasis::grad(const Point2& p) const
{
    double px[16], py[16];
    powers((p.x() - center_.x()) * scale_, degree_, px);
    powers((p.y() - center_.y()) * scale_, degree_, py);
    Matrix g(size(), 2);
    for (int i = 0; i < size(); ++i) {
        const auto [a, b] = exps_[i];
        g(i, 0) = a > 0 ? a * scale_ * px[a - 1] * py[b] : 0.0;
        g(i, 1) = b > 0 ? b * scale_ * px[a] * py[b - 1] : 0.0;
    }
    return g;
}

FaceBasis::FaceBasis(const Point2& center, const Point2& tangent, double length, int degree)
    : center_(center), tangent_(tangent), scale_(2.0 / length), degree_(degree)
{
    if (degree < 0)
        throw Error("face basis degree must be non-negative");
}

FaceBasis::FaceBasis(const PolyMesh& mesh, std::size_t face, int degree)
    : FaceBasis(mesh.face(face).barycenter, mesh.face(face).tangent, mesh.face(face).measure, degree)
{
}

Vector FaceBasis::eval(const Point2& p) const
{
    Vector v(size());
    const double s = (p - center_).dot(tangent_) * scale_;
    v[0] = 1.0;
    for (int i = 1; i <= degree_; ++i)
        v[i] = v[i - 1] * s;
    return v;
}

namespace {

template <typename Basis>
Vector project(const ScalarField& f, const Basis& basis, const QuadratureRule& q)
{
    const Matrix m = mass_matrix(basis, q);
    Vector rhs = Vector::Zero(basis.size());
    for (std::size_t i = 0; i < q.size(); ++i)
        rhs += q.weights[i] * f(q.points[i]) * basis.eval(q.points[i]);
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success)
        throw Error("singular mass matrix in L2 projection");
    return llt.solve(rhs);
}

} // namespace

Vector project_face(const ScalarField& f, const PolyMesh& mesh, std::size_t face, int k, int degree)
{
    const FaceBasis basis(mesh, face, k);
    return project(f, basis, quad_face(mesh, face, degree < 0 ? 2 * (k + 1) : degree));
}

Vector project_cell(const ScalarField& f, const PolyMesh& mesh, std::size_t cell, int k, int degree)
{
    const CellBasis basis(mesh, cell, k);
    return project(f, basis, quad_cell(mesh, cell, degree < 0 ? 2 * (k + 1) : degree));
}

} // namespace hhowave
