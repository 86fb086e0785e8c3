// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hhowave/common.hpp"

namespace hhowave {

enum class Subdomain : std::uint8_t { fluid, solid };

enum class FaceClass : std::uint8_t {
    interior_fluid,
    interior_solid,
    interface,
    boundary_fluid,
    boundary_solid,
};

const char* to_string(Subdomain s);
const char* to_string(FaceClass c);

/// Straight mesh edge. Vertices are stored in the owner's counterclockwise
/// order, so `normal` is the owner's outward unit normal. On the fluid/solid
/// interface the owner is always the solid cell and `normal` is n_Gamma.
struct Face {
    std::array<std::size_t, 2> vertices{};
    std::size_t owner = invalid_index;
    std::size_t neighbor = invalid_index;
    std::size_t owner_slot = invalid_index;    // position in owner's face list
    std::size_t neighbor_slot = invalid_index; // position in neighbor's face list
    Point2 normal = Point2::Zero();
    Point2 tangent = Point2::Zero();
    Point2 barycenter = Point2::Zero();
    double measure = 0.0;
    FaceClass cls = FaceClass::interior_fluid;

    bool is_boundary() const { return neighbor == invalid_index; }
    bool is_interface() const { return cls == FaceClass::interface; }
};

/// Polygonal cell; face j joins vertices[j] and vertices[j+1].
struct Cell {
    std::vector<std::size_t> vertices;
    std::vector<std::size_t> faces;
    Point2 barycenter = Point2::Zero();
    double area = 0.0;
    double diameter = 0.0;
    Subdomain subdomain = Subdomain::fluid;
    int material = 0;

    std::size_t num_faces() const { return faces.size(); }
};

struct FaceClassSets {
    std::vector<std::size_t> interior_fluid;
    std::vector<std::size_t> interior_solid;
    std::vector<std::size_t> interface;
    std::vector<std::size_t> boundary_fluid;
    std::vector<std::size_t> boundary_solid;
};

/// Raw polygon soup used to build a PolyMesh: vertex coordinates plus
/// per-cell vertex loops (any orientation) and tags.
struct PolygonSoup {
    std::vector<Point2> vertices;
    std::vector<std::vector<std::size_t>> cells;
    std::vector<Subdomain> subdomains;
    std::vector<int> materials;
};

/// Immutable polygonal mesh aligned with the fluid/solid partition.
class PolyMesh {
public:
    PolyMesh() = default;

    /// Builds adjacency, orientation, geometry and classification from a
    /// polygon soup. Vertices closer than 1e-12 * diam are merged. Throws
    /// MeshError on degenerate, non-star-shaped or non-manifold input.
    static PolyMesh build(PolygonSoup soup);

    const std::vector<Point2>& vertices() const { return vertices_; }
    const std::vector<Face>& faces() const { return faces_; }
    const std::vector<Cell>& cells() const { return cells_; }
    const Face& face(std::size_t i) const { return faces_[i]; }
    const Cell& cell(std::size_t i) const { return cells_[i]; }
    std::size_t num_cells() const { return cells_.size(); }
    std::size_t num_faces() const { return faces_.size(); }

    const FaceClassSets& classes() const { return classes_; }
    /// diam(Omega), the global length scale.
    double length_scale() const { return length_scale_; }
    /// Geometric coincidence tolerance 1e-12 * diam(Omega).
    double tolerance() const { return 1e-12 * length_scale_; }

    /// Outward unit normal of face slot j of cell c.
    Point2 outward_normal(std::size_t c, std::size_t j) const;
    /// Cell id across face slot j of cell c, or invalid_index.
    std::size_t across(std::size_t c, std::size_t j) const;

    /// Largest cell diameter.
    double max_diameter() const;

    /// Back to a soup (used by merging and the text dump).
    PolygonSoup to_soup() const;

private:
    std::vector<Point2> vertices_;
    std::vector<Face> faces_;
    std::vector<Cell> cells_;
    FaceClassSets classes_;
    double length_scale_ = 0.0;
};

/// Recomputes the face class partition; throws if an interior face joins
/// cells of different subdomains without being flagged as interface.
FaceClassSets classify_faces(const PolyMesh& mesh);

/// Signed area of a closed vertex loop.
double polygon_signed_area(const std::vector<Point2>& loop);

// ---------------------------------------------------------------------------
// Generators

enum class MeshFamily { cartesian, simplicial, hexagonal };

MeshFamily mesh_family_from_string(const std::string& s);
const char* to_string(MeshFamily f);

struct Rect {
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
};

/// Bilayer generator input. The nominal mesh size is base_size * 2^-level.
/// Either subdomain may be absent (single-subdomain meshes).
struct MeshGenSpec {
    MeshFamily family = MeshFamily::cartesian;
    int level = 0;
    double base_size = 1.0;
    std::optional<Rect> fluid;
    std::optional<Rect> solid;

    double nominal_h() const;
};

/// Fluid (0,1)^2 right of solid (-1,0)x(0,1): the sinusoidal test geometry.
MeshGenSpec manufactured_geometry(MeshFamily family, int level);

PolyMesh generate(const MeshGenSpec& spec);

// ---------------------------------------------------------------------------
// I/O

/// Reads an ASCII MSH 2.2 file (triangles and quadrangles). Physical names
/// select the subdomain: "fluid"/"atmosphere"/"water" map to fluid,
/// "solid"/"sediments"/"bedrock"/"granite" to solid; a "fluid:<name>" or
/// "solid:<name>" prefix is also accepted. The material id is the index of
/// the physical name in `material_names` (filled by the reader).
PolyMesh read_msh(const std::string& path, std::vector<std::string>* material_names = nullptr);
PolyMesh read_msh_stream(std::istream& in, std::vector<std::string>* material_names = nullptr);

/// Line-oriented polygon dump (vertices, cells as vertex lists, tags).
void write_polymesh(const PolyMesh& mesh, std::ostream& out);
PolyMesh read_polymesh(std::istream& in);

/// Joins independently meshed fluid and solid parts whose interface traces
/// may be partitioned differently. Hanging nodes split the opposite side's
/// edges, so the affected cells gain faces.
PolyMesh merge_nonconforming(const PolyMesh& fluid, const PolyMesh& solid);

} // namespace hhowave
