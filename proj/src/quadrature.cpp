// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "hhowave/polybasis.hpp"

namespace hhowave {

double QuadratureRule::measure() const
{
    double s = 0.0;
    for (double w : weights)
        s += w;
    return s;
}

namespace {

void check_degree(int degree)
{
    if (degree < 0 || degree > max_quadrature_degree)
        throw Error("quadrature exactness degree " + std::to_string(degree) + " outside [0, "
                    + std::to_string(max_quadrature_degree) + "]");
}

std::pair<std::vector<double>, std::vector<double>> compute_gauss_legendre(int n)
{
    std::vector<double> x(n), w(n);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16)
                break;
        }
        // Recompute the derivative at the converged node.
        double p0 = 1.0, p1 = z;
        for (int j = 2; j <= n; ++j) {
            const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        x[i] = -z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return {x, w};
}

} // namespace

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int npoints)
{
    if (npoints < 1)
        throw Error("Gauss-Legendre rule needs at least one point");
    static std::mutex mutex;
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(npoints);
    if (it == cache.end())
        it = cache.emplace(npoints, compute_gauss_legendre(npoints)).first;
    return it->second;
}

QuadratureRule quad_segment(const Point2& a, const Point2& b, int degree)
{
    check_degree(degree);
    const int n = (degree + 2) / 2;
    const auto [x, w] = gauss_legendre(n);
    const double half = 0.5 * (b - a).norm();
    QuadratureRule q;
    for (int i = 0; i < n; ++i) {
        q.points.push_back(0.5 * (a + b) + 0.5 * x[i] * (b - a));
        q.weights.push_back(half * w[i]);
    }
    return q;
}

QuadratureRule quad_triangle(const Point2& a, const Point2& b, const Point2& c, int degree)
{
    check_degree(degree);
    // Collapsed square: x = a + u (b - a) + u v (c - b), |J| = 2|T| u.
    const int nu = (degree + 3) / 2;
    const int nv = (degree + 2) / 2;
    const auto [xu, wu] = gauss_legendre(nu);
    const auto [xv, wv] = gauss_legendre(nv);
    const double area2 = std::abs((b - a).x() * (c - a).y() - (c - a).x() * (b - a).y());
    QuadratureRule q;
    for (int i = 0; i < nu; ++i) {
        const double u = 0.5 * (xu[i] + 1.0);
        for (int j = 0; j < nv; ++j) {
            const double v = 0.5 * (xv[j] + 1.0);
            q.points.push_back(a + u * (b - a) + u * v * (c - b));
            q.weights.push_back(0.25 * wu[i] * wv[j] * area2 * u);
        }
    }
    return q;
}

QuadratureRule quad_polygon(const std::vector<Point2>& loop, const Point2& center, int degree)
{
    QuadratureRule q;
    const std::size_t n = loop.size();
    for (std::size_t i = 0; i < n; ++i) {
        auto t = quad_triangle(center, loop[i], loop[(i + 1) % n], degree);
        q.points.insert(q.points.end(), t.points.begin(), t.points.end());
        q.weights.insert(q.weights.end(), t.weights.begin(), t.weights.end());
    }
    return q;
}

QuadratureRule quad_cell(const PolyMesh& mesh, std::size_t cell, int degree)
{
    const auto& c = mesh.cell(cell);
    std::vector<Point2> loop;
    loop.reserve(c.vertices.size());
    for (auto v : c.vertices)
        loop.push_back(mesh.vertices()[v]);
    return quad_polygon(loop, c.barycenter, degree);
}

QuadratureRule quad_face(const PolyMesh& mesh, std::size_t face, int degree)
{
    const auto& f = mesh.face(face);
    return quad_segment(mesh.vertices()[f.vertices[0]], mesh.vertices()[f.vertices[1]], degree);
}

} // namespace hhowave
