// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "hhowave/common.hpp"
#include "hhowave/mesh.hpp"

namespace hhowave {

// ---------------------------------------------------------------------------
// Quadrature

struct QuadratureRule {
    std::vector<Point2> points;
    std::vector<double> weights;

    std::size_t size() const { return points.size(); }
    double measure() const;
};

/// Highest exactness degree accepted by the rule builders.
inline constexpr int max_quadrature_degree = 40;

/// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int npoints);

QuadratureRule quad_segment(const Point2& a, const Point2& b, int degree);
QuadratureRule quad_triangle(const Point2& a, const Point2& b, const Point2& c, int degree);
/// Fan triangulation of a star-shaped polygon from `center`.
QuadratureRule quad_polygon(const std::vector<Point2>& loop, const Point2& center, int degree);

QuadratureRule quad_cell(const PolyMesh& mesh, std::size_t cell, int degree);
QuadratureRule quad_face(const PolyMesh& mesh, std::size_t face, int degree);

// ---------------------------------------------------------------------------
// Bases

enum class BasisKind { scalar, vector2, symtensor2 };

int cell_scalar_dim(int k);
int face_scalar_dim(int k);
/// Dimension of a cell space (face = false) or face space (face = true).
int basis_dim(BasisKind kind, int k, bool face = false);

/// Scaled monomials ((x-x_T)/(h_T/2))^a ((y-y_T)/(h_T/2))^b in graded
/// lexicographic order: degree 0, then for each degree d the pairs
/// (a, b) = (d, 0), (d-1, 1), ..., (0, d).
class CellBasis {
public:
    CellBasis(const Point2& center, double diameter, int degree);
    CellBasis(const PolyMesh& mesh, std::size_t cell, int degree);

    int degree() const { return degree_; }
    int size() const { return static_cast<int>(exps_.size()); }
    const std::vector<std::pair<int, int>>& exponents() const { return exps_; }

    Vector eval(const Point2& p) const;
    /// size() x 2 matrix of gradients.
    Matrix grad(const Point2& p) const;

private:
    Point2 center_;
    double scale_;
    int degree_;
    std::vector<std::pair<int, int>> exps_;
};

/// Scaled monomials ((s-s_F)/(|F|/2))^i along the face tangent.
class FaceBasis {
public:
    FaceBasis(const Point2& center, const Point2& tangent, double length, int degree);
    FaceBasis(const PolyMesh& mesh, std::size_t face, int degree);

    int degree() const { return degree_; }
    int size() const { return degree_ + 1; }
    Vector eval(const Point2& p) const;

private:
    Point2 center_;
    Point2 tangent_;
    double scale_;
    int degree_;
};

using ScalarField = std::function<double(const Point2&)>;

/// Gram matrix of a basis over a rule.
template <typename Basis>
Matrix mass_matrix(const Basis& basis, const QuadratureRule& q, double weight = 1.0)
{
    Matrix m = Matrix::Zero(basis.size(), basis.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        const Vector phi = basis.eval(q.points[i]);
        m.noalias() += (weight * q.weights[i]) * phi * phi.transpose();
    }
    return m;
}

/// L2(F) projection of `f` onto P^k(F); returns FaceBasis coefficients.
Vector project_face(const ScalarField& f, const PolyMesh& mesh, std::size_t face, int k, int degree = -1);
/// L2(T) projection of `f` onto P^k(T); returns CellBasis coefficients.
Vector project_cell(const ScalarField& f, const PolyMesh& mesh, std::size_t cell, int k, int degree = -1);

} // namespace hhowave
