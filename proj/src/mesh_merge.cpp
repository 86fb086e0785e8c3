// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include "hhowave/mesh.hpp"

namespace hhowave {

namespace {

struct Seg {
    Point2 a, b;
};

std::vector<std::size_t> boundary_vertices(const PolyMesh& m)
{
    std::vector<std::size_t> out;
    for (const auto& f : m.faces())
        if (f.is_boundary())
            out.insert(out.end(), {f.vertices[0], f.vertices[1]});
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Parameter of p along [a,b] when p is within `tol` of the open segment.
std::optional<double> inside_param(const Point2& a, const Point2& b, const Point2& p, double tol)
{
    const Point2 d = b - a;
    const double len2 = d.squaredNorm();
    const double t = (p - a).dot(d) / len2;
    const double len = std::sqrt(len2);
    if (t * len <= tol || (1 - t) * len <= tol)
        return std::nullopt;
    if ((a + t * d - p).norm() > tol)
        return std::nullopt;
    return t;
}

double distance_to_segment(const Seg& s, const Point2& p)
{
    const Point2 d = s.b - s.a;
    const double t = std::clamp((p - s.a).dot(d) / d.squaredNorm(), 0.0, 1.0);
    return (s.a + t * d - p).norm();
}

// Inserts into each cell loop of `target` the points of `others` lying
// strictly inside one of its boundary edges.
void split_edges(PolygonSoup& soup, std::size_t cell_begin, std::size_t cell_end, const PolyMesh& target,
                 std::size_t vertex_offset, const std::vector<Point2>& others, const std::vector<std::size_t>& other_ids,
                 double tol)
{
    for (std::size_t c = cell_begin; c < cell_end; ++c) {
        const auto& cell = target.cell(c - cell_begin);
        std::vector<std::size_t> loop;
        const std::size_t n = cell.vertices.size();
        for (std::size_t j = 0; j < n; ++j) {
            const auto va = cell.vertices[j];
            const auto vb = cell.vertices[(j + 1) % n];
            loop.push_back(va + vertex_offset);
            if (!target.face(cell.faces[j]).is_boundary())
                continue;
            const Point2& a = target.vertices()[va];
            const Point2& b = target.vertices()[vb];
            std::vector<std::pair<double, std::size_t>> hanging;
            for (std::size_t i = 0; i < others.size(); ++i)
                if (auto t = inside_param(a, b, others[i], tol))
                    hanging.emplace_back(*t, other_ids[i]);
            std::sort(hanging.begin(), hanging.end());
            for (const auto& h : hanging)
                loop.push_back(h.second);
        }
        soup.cells[c] = std::move(loop);
    }
}

} // namespace

PolyMesh merge_nonconforming(const PolyMesh& fluid, const PolyMesh& solid)
{
    for (const auto& c : fluid.cells())
        if (c.subdomain != Subdomain::fluid)
            throw MeshError("merge: fluid part contains solid cells");
    for (const auto& c : solid.cells())
        if (c.subdomain != Subdomain::solid)
            throw MeshError("merge: solid part contains fluid cells");

    const double scale = std::max(fluid.length_scale(), solid.length_scale());
    const double tol = 1e-12 * scale;

    PolygonSoup soup;
    soup.vertices = fluid.vertices();
    soup.vertices.insert(soup.vertices.end(), solid.vertices().begin(), solid.vertices().end());
    const std::size_t off = fluid.vertices().size();
    const std::size_t nf = fluid.num_cells();
    soup.cells.resize(nf + solid.num_cells());
    for (const auto& c : fluid.cells()) {
        soup.subdomains.push_back(c.subdomain);
        soup.materials.push_back(c.material);
    }
    for (const auto& c : solid.cells()) {
        soup.subdomains.push_back(c.subdomain);
        soup.materials.push_back(c.material);
    }

    auto gather = [](const PolyMesh& m, std::size_t offset, std::vector<Point2>& pts, std::vector<std::size_t>& ids) {
        for (auto v : boundary_vertices(m)) {
            pts.push_back(m.vertices()[v]);
            ids.push_back(v + offset);
        }
    };
    std::vector<Point2> solid_pts, fluid_pts;
    std::vector<std::size_t> solid_ids, fluid_ids;
    gather(solid, off, solid_pts, solid_ids);
    gather(fluid, 0, fluid_pts, fluid_ids);
    split_edges(soup, 0, nf, fluid, 0, solid_pts, solid_ids, tol);
    split_edges(soup, nf, nf + solid.num_cells(), solid, off, fluid_pts, fluid_ids, tol);

    PolyMesh merged = PolyMesh::build(std::move(soup));

    // Boundary pieces of opposite subdomains that nearly touch but were not
    // paired indicate traces that disagree beyond the tolerance.
    std::vector<Seg> fb, sb;
    for (const auto& f : merged.faces()) {
        if (!f.is_boundary())
            continue;
        Seg s{merged.vertices()[f.vertices[0]], merged.vertices()[f.vertices[1]]};
        (merged.cell(f.owner).subdomain == Subdomain::fluid ? fb : sb).push_back(s);
    }
    const double near = 1e-6 * scale;
    for (const auto& f : fb)
        for (const auto& s : sb) {
            const Point2 mid = 0.5 * (f.a + f.b);
            const Point2 smid = 0.5 * (s.a + s.b);
            if (distance_to_segment(s, mid) < near || distance_to_segment(f, smid) < near) {
                const double fl = (f.b - f.a).norm(), sl = (s.b - s.a).norm();
                if (std::min(fl, sl) > 0)
                    throw MeshError("merge: interface traces are geometrically inconsistent");
            }
        }
    return merged;
}

} // namespace hhowave
