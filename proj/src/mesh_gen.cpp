// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include "hhowave/mesh.hpp"

namespace hhowave {

MeshFamily mesh_family_from_string(const std::string& s)
{
    if (s == "cartesian")
        return MeshFamily::cartesian;
    if (s == "simplicial")
        return MeshFamily::simplicial;
    if (s == "hexagonal" || s == "polygonal" || s == "polygonal-hexagonal")
        return MeshFamily::hexagonal;
    throw ConfigError("unsupported mesh family '" + s + "'");
}

const char* to_string(MeshFamily f)
{
    switch (f) {
    case MeshFamily::cartesian: return "cartesian";
    case MeshFamily::simplicial: return "simplicial";
    case MeshFamily::hexagonal: return "hexagonal";
    }
    return "?";
}

double MeshGenSpec::nominal_h() const
{
    return base_size * std::ldexp(1.0, -level);
}

MeshGenSpec manufactured_geometry(MeshFamily family, int level)
{
    MeshGenSpec spec;
    spec.family = family;
    spec.level = level;
    spec.fluid = Rect{0.0, 1.0, 0.0, 1.0};
    spec.solid = Rect{-1.0, 0.0, 0.0, 1.0};
    return spec;
}

namespace {

struct Part {
    Rect rect;
    Subdomain sub;
    int material;
};

std::vector<Part> parts_of(const MeshGenSpec& spec)
{
    std::vector<Part> parts;
    if (spec.fluid)
        parts.push_back({*spec.fluid, Subdomain::fluid, 0});
    if (spec.solid)
        parts.push_back({*spec.solid, Subdomain::solid, 1});
    if (parts.empty())
        throw MeshError("mesh spec has no subdomain");
    for (const auto& p : parts)
        if (!(p.rect.width() > 0) || !(p.rect.height() > 0))
            throw MeshError("empty subdomain rectangle");
    return parts;
}

int divisions(double len, double h)
{
    return std::max(1, static_cast<int>(std::lround(len / h)));
}

void add_structured(PolygonSoup& soup, const Part& part, double h, bool split)
{
    const int nx = divisions(part.rect.width(), h);
    const int ny = divisions(part.rect.height(), h);
    const std::size_t base = soup.vertices.size();
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            soup.vertices.emplace_back(part.rect.x0 + part.rect.width() * i / nx,
                                       part.rect.y0 + part.rect.height() * j / ny);
    auto id = [&](int i, int j) { return base + static_cast<std::size_t>(j) * (nx + 1) + i; };
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const auto a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
            if (split) {
                soup.cells.push_back({a, b, c});
                soup.cells.push_back({a, c, d});
                soup.subdomains.insert(soup.subdomains.end(), 2, part.sub);
                soup.materials.insert(soup.materials.end(), 2, part.material);
            }
            else {
                soup.cells.push_back({a, b, c, d});
                soup.subdomains.push_back(part.sub);
                soup.materials.push_back(part.material);
            }
        }
}

std::vector<Point2> clip(std::vector<Point2> poly, const Point2& n, double offset)
{
    // Keeps the half-plane n.x <= offset.
    std::vector<Point2> out;
    const std::size_t m = poly.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Point2& p = poly[i];
        const Point2& q = poly[(i + 1) % m];
        const double dp = n.dot(p) - offset;
        const double dq = n.dot(q) - offset;
        if (dp <= 0)
            out.push_back(p);
        if ((dp < 0 && dq > 0) || (dp > 0 && dq < 0))
            out.push_back(p + (q - p) * (dp / (dp - dq)));
    }
    return out;
}

// Picks n divisions of `total` near total/target such that every offset in
// `marks` lands on the grid.
int aligned_divisions(double total, double target, const std::vector<double>& marks)
{
    const int n0 = divisions(total, target);
    for (int delta = 0; delta <= n0 + 4; ++delta)
        for (int sign : {1, -1}) {
            const int n = n0 + sign * delta;
            if (n < 1)
                continue;
            bool ok = true;
            for (double m : marks) {
                const double r = m / total * n;
                if (std::abs(r - std::round(r)) > 1e-9)
                    ok = false;
            }
            if (ok)
                return n;
        }
    throw MeshError("subdomain rectangles are not commensurable with the hexagonal tiling");
}

// Glues every clipped cell smaller than `min_area` (the corner quarters) to
// the neighbor with which it shares its longest edge.
void merge_small_cells(std::vector<std::vector<Point2>>& polys, double min_area, double tol)
{
    auto same = [tol](const Point2& p, const Point2& q) { return (p - q).norm() <= tol; };
    for (std::size_t s = 0; s < polys.size(); ++s) {
        if (polys[s].empty() || polygon_signed_area(polys[s]) >= min_area)
            continue;
        const auto& small = polys[s];
        std::size_t best = polys.size(), bi = 0, bj = 0;
        double best_len = 0;
        for (std::size_t o = 0; o < polys.size(); ++o) {
            if (o == s || polys[o].empty())
                continue;
            const auto& other = polys[o];
            for (std::size_t i = 0; i < small.size(); ++i)
                for (std::size_t j = 0; j < other.size(); ++j) {
                    const auto& p0 = small[i];
                    const auto& p1 = small[(i + 1) % small.size()];
                    if (same(p1, other[j]) && same(p0, other[(j + 1) % other.size()]) && (p1 - p0).norm() > best_len) {
                        best_len = (p1 - p0).norm();
                        best = o;
                        bi = i;
                        bj = j;
                    }
                }
        }
        if (best == polys.size())
            continue;
        const auto& other = polys[best];
        std::vector<Point2> merged;
        const std::size_t ns = small.size(), no = other.size();
        for (std::size_t k = 0; k < ns; ++k)
            merged.push_back(small[(bi + 1 + k) % ns]);
        for (std::size_t k = 2; k < no; ++k)
            merged.push_back(other[(bj + k) % no]);
        // A piece sharing two consecutive edges with the receiver leaves a
        // zero-width spike; drop repeated points and back-and-forth vertices.
        for (bool changed = true; changed && merged.size() > 3;) {
            changed = false;
            for (std::size_t k = 0; k < merged.size() && merged.size() > 3; ++k) {
                const std::size_t n = merged.size();
                const Point2& prev = merged[(k + n - 1) % n];
                const Point2& next = merged[(k + 1) % n];
                if (same(merged[k], next)) {
                    merged.erase(merged.begin() + static_cast<std::ptrdiff_t>(k));
                    changed = true;
                }
                else if (same(prev, next)) {
                    const std::size_t drop = (k + 1) % n;
                    merged.erase(merged.begin() + static_cast<std::ptrdiff_t>(std::max(k, drop)));
                    merged.erase(merged.begin() + static_cast<std::ptrdiff_t>(std::min(k, drop)));
                    changed = true;
                }
            }
        }
        polys[best] = std::move(merged);
        polys[s].clear();
    }
    std::erase_if(polys, [](const auto& p) { return p.empty(); });
}

void add_hexagonal(PolygonSoup& soup, const std::vector<Part>& parts, double h)
{
    Rect box = parts.front().rect;
    for (const auto& p : parts) {
        box.x0 = std::min(box.x0, p.rect.x0);
        box.x1 = std::max(box.x1, p.rect.x1);
        box.y0 = std::min(box.y0, p.rect.y0);
        box.y1 = std::max(box.y1, p.rect.y1);
    }
    std::vector<double> xm, ym;
    for (const auto& p : parts) {
        xm.insert(xm.end(), {p.rect.x0 - box.x0, p.rect.x1 - box.x0});
        ym.insert(ym.end(), {p.rect.y0 - box.y0, p.rect.y1 - box.y0});
    }

    // Regular hexagon with edge length h (like the square and triangle
    // families), flat top: half-width a, height sqrt(3) a.
    const double a_target = h;
    const int ncol = aligned_divisions(box.width(), 1.5 * a_target, xm);
    const int nhalf = aligned_divisions(box.height(), 0.5 * std::sqrt(3.0) * a_target, ym);
    const double dx = box.width() / ncol;
    const double half = box.height() / nhalf;
    const double a = dx / 1.5;
    const double tol = 1e-10 * std::hypot(box.width(), box.height());

    const double full_area = 3.0 * a * half;
    for (const auto& part : parts) {
        std::vector<std::vector<Point2>> polys;
        for (int i = 0; i <= ncol; ++i) {
            const double cx = box.x0 + i * dx;
            if (cx + a < part.rect.x0 + tol || cx - a > part.rect.x1 - tol)
                continue;
            const double shift = (i % 2 == 0) ? 0.0 : half;
            for (int j = -1; 2 * j <= nhalf + 2; ++j) {
                const double cy = box.y0 + shift + 2 * j * half;
                if (cy + half < part.rect.y0 + tol || cy - half > part.rect.y1 - tol)
                    continue;
                std::vector<Point2> hex = {
                    {cx + a, cy}, {cx + 0.5 * a, cy + half}, {cx - 0.5 * a, cy + half},
                    {cx - a, cy}, {cx - 0.5 * a, cy - half}, {cx + 0.5 * a, cy - half},
                };
                hex = clip(hex, Point2(-1, 0), -part.rect.x0);
                hex = clip(hex, Point2(1, 0), part.rect.x1);
                hex = clip(hex, Point2(0, -1), -part.rect.y0);
                hex = clip(hex, Point2(0, 1), part.rect.y1);
                if (hex.size() < 3 || polygon_signed_area(hex) < 1e-8 * h * h)
                    continue;
                polys.push_back(std::move(hex));
            }
        }
        merge_small_cells(polys, 0.3 * full_area, tol);
        for (auto& poly : polys) {
            std::vector<std::size_t> loop;
            for (const auto& p : poly) {
                loop.push_back(soup.vertices.size());
                soup.vertices.push_back(p);
            }
            soup.cells.push_back(std::move(loop));
            soup.subdomains.push_back(part.sub);
            soup.materials.push_back(part.material);
        }
    }
}

} // namespace

PolyMesh generate(const MeshGenSpec& spec)
{
    if (spec.level < 0)
        throw MeshError("refinement level must be non-negative");
    if (!(spec.base_size > 0))
        throw MeshError("base size must be positive");
    const auto parts = parts_of(spec);
    const double h = spec.nominal_h();
    double extent = 0;
    for (const auto& p : parts)
        extent = std::max({extent, p.rect.width(), p.rect.height()});
    if (h < 1e-9 * extent)
        throw MeshError("refinement level too large for the vertex coincidence tolerance");

    PolygonSoup soup;
    switch (spec.family) {
    case MeshFamily::cartesian:
        for (const auto& p : parts)
            add_structured(soup, p, h, false);
        break;
    case MeshFamily::simplicial:
        for (const auto& p : parts)
            add_structured(soup, p, h, true);
        break;
    case MeshFamily::hexagonal:
        add_hexagonal(soup, parts, h);
        break;
    }
    return PolyMesh::build(std::move(soup));
}

} // namespace hhowave
