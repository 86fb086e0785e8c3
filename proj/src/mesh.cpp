// SPDX-License-Identifier: Apache-2.0
#include "hhowave/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

namespace hhowave {

const char* to_string(Subdomain s)
{
    return s == Subdomain::fluid ? "fluid" : "solid";
}

const char* to_string(FaceClass c)
{
    switch (c) {
    case FaceClass::interior_fluid: return "interior_fluid";
    case FaceClass::interior_solid: return "interior_solid";
    case FaceClass::interface: return "interface";
    case FaceClass::boundary_fluid: return "boundary_fluid";
    case FaceClass::boundary_solid: return "boundary_solid";
    }
    return "?";
}

double polygon_signed_area(const std::vector<Point2>& loop)
{
    double a = 0.0;
    const std::size_t n = loop.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = loop[i];
        const auto& q = loop[(i + 1) % n];
        a += p.x() * q.y() - q.x() * p.y();
    }
    return 0.5 * a;
}

namespace {

/// Merges points closer than `tol` using a bucketed hash on a tol-sized grid.
class VertexPool {
public:
    explicit VertexPool(double tol) : tol_(tol), cell_(std::max(tol, 1e-300) * 4.0) {}

    std::size_t insert(const Point2& p)
    {
        const auto kx = key(p.x());
        const auto ky = key(p.y());
        for (long long dx = -1; dx <= 1; ++dx)
            for (long long dy = -1; dy <= 1; ++dy) {
                auto it = buckets_.find(pack(kx + dx, ky + dy));
                if (it == buckets_.end())
                    continue;
                for (auto id : it->second)
                    if ((points_[id] - p).norm() <= tol_)
                        return id;
            }
        const std::size_t id = points_.size();
        points_.push_back(p);
        buckets_[pack(kx, ky)].push_back(id);
        return id;
    }

    std::vector<Point2> take() { return std::move(points_); }

private:
    long long key(double v) const { return static_cast<long long>(std::floor(v / cell_)); }
    static long long pack(long long a, long long b) { return a * 1000003LL + b * 7919LL + (a ^ (b << 21)); }

    double tol_;
    double cell_;
    std::vector<Point2> points_;
    std::unordered_map<long long, std::vector<std::size_t>> buckets_;
};

double tri_area(const Point2& a, const Point2& b, const Point2& c)
{
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

} // namespace

PolyMesh PolyMesh::build(PolygonSoup soup)
{
    const std::size_t ncells = soup.cells.size();
    if (ncells == 0)
        throw MeshError("mesh has no cells");
    if (soup.subdomains.size() != ncells)
        throw MeshError("subdomain tags do not match cell count");
    if (soup.materials.empty())
        soup.materials.assign(ncells, 0);
    if (soup.materials.size() != ncells)
        throw MeshError("material tags do not match cell count");

    Eigen::AlignedBox2d box;
    for (const auto& loop : soup.cells)
        for (auto v : loop) {
            if (v >= soup.vertices.size())
                throw MeshError("cell references a missing vertex");
            const auto& p = soup.vertices[v];
            if (!std::isfinite(p.x()) || !std::isfinite(p.y()))
                throw MeshError("non-finite vertex coordinate");
            box.extend(p);
        }
    const double bbox_diag = box.diagonal().norm();
    if (!(bbox_diag > 0.0))
        throw MeshError("degenerate mesh extent");

    PolyMesh mesh;
    VertexPool pool(1e-12 * bbox_diag);
    std::vector<std::size_t> remap(soup.vertices.size(), invalid_index);
    auto vid = [&](std::size_t v) {
        if (remap[v] == invalid_index)
            remap[v] = pool.insert(soup.vertices[v]);
        return remap[v];
    };

    mesh.cells_.resize(ncells);
    for (std::size_t c = 0; c < ncells; ++c) {
        std::vector<std::size_t> loop;
        for (auto v : soup.cells[c]) {
            auto id = vid(v);
            if (loop.empty() || loop.back() != id)
                loop.push_back(id);
        }
        while (loop.size() > 1 && loop.front() == loop.back())
            loop.pop_back();
        if (loop.size() < 3)
            throw MeshError("cell " + std::to_string(c) + " has fewer than 3 distinct vertices");
        mesh.cells_[c].vertices = std::move(loop);
        mesh.cells_[c].subdomain = soup.subdomains[c];
        mesh.cells_[c].material = soup.materials[c];
    }
    mesh.vertices_ = pool.take();

    for (std::size_t c = 0; c < ncells; ++c) {
        auto& cell = mesh.cells_[c];
        std::vector<Point2> pts;
        for (auto v : cell.vertices)
            pts.push_back(mesh.vertices_[v]);
        double a = polygon_signed_area(pts);
        if (a < 0) {
            std::reverse(cell.vertices.begin(), cell.vertices.end());
            std::reverse(pts.begin(), pts.end());
            a = -a;
        }
        if (!(a > 0.0))
            throw MeshError("cell " + std::to_string(c) + " has zero area");
        cell.area = a;

        Point2 g = Point2::Zero();
        const std::size_t n = pts.size();
        for (std::size_t i = 0; i < n; ++i) {
            const auto& p = pts[i];
            const auto& q = pts[(i + 1) % n];
            const double w = p.x() * q.y() - q.x() * p.y();
            g += w * (p + q);
        }
        cell.barycenter = g / (6.0 * a);

        double d = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                d = std::max(d, (pts[i] - pts[j]).norm());
        cell.diameter = d;

        for (std::size_t i = 0; i < n; ++i)
            if (!(tri_area(cell.barycenter, pts[i], pts[(i + 1) % n]) > 1e-12 * a))
                throw MeshError("cell " + std::to_string(c) + " is not star-shaped with respect to its barycenter");
    }

    std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_map;
    for (std::size_t c = 0; c < ncells; ++c) {
        auto& cell = mesh.cells_[c];
        const std::size_t n = cell.vertices.size();
        cell.faces.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            const auto a = cell.vertices[j];
            const auto b = cell.vertices[(j + 1) % n];
            const auto key = std::minmax(a, b);
            auto it = edge_map.find(key);
            if (it == edge_map.end()) {
                Face f;
                f.vertices = {a, b};
                f.owner = c;
                f.owner_slot = j;
                edge_map.emplace(key, mesh.faces_.size());
                cell.faces[j] = mesh.faces_.size();
                mesh.faces_.push_back(f);
                continue;
            }
            auto& f = mesh.faces_[it->second];
            if (f.neighbor != invalid_index)
                throw MeshError("edge shared by more than two cells");
            if (f.vertices[0] != b || f.vertices[1] != a)
                throw MeshError("inconsistent orientation between cells " + std::to_string(f.owner) + " and " + std::to_string(c));
            f.neighbor = c;
            f.neighbor_slot = j;
            cell.faces[j] = it->second;
        }
    }

    for (auto& f : mesh.faces_) {
        if (f.neighbor != invalid_index && mesh.cells_[f.owner].subdomain != mesh.cells_[f.neighbor].subdomain
            && mesh.cells_[f.owner].subdomain == Subdomain::fluid) {
            std::swap(f.owner, f.neighbor);
            std::swap(f.owner_slot, f.neighbor_slot);
            std::swap(f.vertices[0], f.vertices[1]);
        }
        const Point2 p0 = mesh.vertices_[f.vertices[0]];
        const Point2 p1 = mesh.vertices_[f.vertices[1]];
        f.measure = (p1 - p0).norm();
        if (!(f.measure > 0.0))
            throw MeshError("zero-length face");
        f.tangent = (p1 - p0) / f.measure;
        f.normal = Point2(f.tangent.y(), -f.tangent.x());
        f.barycenter = 0.5 * (p0 + p1);
    }

    // Diameter of the domain from its boundary vertices.
    std::vector<std::size_t> bverts;
    for (const auto& f : mesh.faces_)
        if (f.neighbor == invalid_index) {
            bverts.push_back(f.vertices[0]);
            bverts.push_back(f.vertices[1]);
        }
    std::sort(bverts.begin(), bverts.end());
    bverts.erase(std::unique(bverts.begin(), bverts.end()), bverts.end());
    double diam = 0.0;
    for (std::size_t i = 0; i < bverts.size(); ++i)
        for (std::size_t j = i + 1; j < bverts.size(); ++j)
            diam = std::max(diam, (mesh.vertices_[bverts[i]] - mesh.vertices_[bverts[j]]).norm());
    mesh.length_scale_ = diam > 0 ? diam : bbox_diag;

    for (auto& f : mesh.faces_) {
        const auto so = mesh.cells_[f.owner].subdomain;
        if (f.neighbor == invalid_index)
            f.cls = so == Subdomain::fluid ? FaceClass::boundary_fluid : FaceClass::boundary_solid;
        else if (mesh.cells_[f.neighbor].subdomain != so)
            f.cls = FaceClass::interface;
        else
            f.cls = so == Subdomain::fluid ? FaceClass::interior_fluid : FaceClass::interior_solid;
    }
    mesh.classes_ = classify_faces(mesh);
    return mesh;
}

Point2 PolyMesh::outward_normal(std::size_t c, std::size_t j) const
{
    const auto& f = faces_[cells_[c].faces[j]];
    return f.owner == c ? f.normal : Point2(-f.normal);
}

std::size_t PolyMesh::across(std::size_t c, std::size_t j) const
{
    const auto& f = faces_[cells_[c].faces[j]];
    return f.owner == c ? f.neighbor : f.owner;
}

double PolyMesh::max_diameter() const
{
    double h = 0.0;
    for (const auto& c : cells_)
        h = std::max(h, c.diameter);
    return h;
}

PolygonSoup PolyMesh::to_soup() const
{
    PolygonSoup soup;
    soup.vertices = vertices_;
    for (const auto& c : cells_) {
        soup.cells.push_back(c.vertices);
        soup.subdomains.push_back(c.subdomain);
        soup.materials.push_back(c.material);
    }
    return soup;
}

FaceClassSets classify_faces(const PolyMesh& mesh)
{
    FaceClassSets sets;
    for (std::size_t i = 0; i < mesh.num_faces(); ++i) {
        const auto& f = mesh.face(i);
        const auto so = mesh.cell(f.owner).subdomain;
        if (f.is_boundary()) {
            (so == Subdomain::fluid ? sets.boundary_fluid : sets.boundary_solid).push_back(i);
            continue;
        }
        const auto sn = mesh.cell(f.neighbor).subdomain;
        if (so != sn) {
            if (f.cls != FaceClass::interface || so != Subdomain::solid)
                throw MeshError("face " + std::to_string(i) + " joins both subdomains but is not an oriented interface face");
            sets.interface.push_back(i);
        }
        else {
            (so == Subdomain::fluid ? sets.interior_fluid : sets.interior_solid).push_back(i);
        }
    }
    return sets;
}

} // namespace hhowave
