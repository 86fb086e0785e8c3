// Mesh generators, MSH reader, polymesh dump and nonconforming merge.
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "hhowave/mesh.hpp"

using namespace hhowave;

namespace {

double total_area(const PolyMesh& m)
{
    double a = 0;
    for (const auto& c : m.cells())
        a += c.area;
    return a;
}

std::string data_file(const char* name)
{
    return std::string(HHOWAVE_TEST_DATA) + "/" + name;
}

// Every face normal points out of its owner and has unit length.
void check_orientation(const PolyMesh& m)
{
    for (const auto& f : m.faces()) {
        CHECK(f.normal.norm() == doctest::Approx(1.0));
        CHECK((f.barycenter - m.cell(f.owner).barycenter).dot(f.normal) > 0);
        if (f.is_interface())
            CHECK(m.cell(f.owner).subdomain == Subdomain::solid);
    }
}

} // namespace

TEST_CASE("cartesian bilayer has the expected counts")
{
    const PolyMesh m = generate(manufactured_geometry(MeshFamily::cartesian, 2));
    CHECK(m.num_cells() == 32);
    CHECK(m.num_faces() == 76);
    CHECK(m.classes().interface.size() == 4);
    CHECK(m.classes().boundary_fluid.size() + m.classes().boundary_solid.size() == 24);
    CHECK(total_area(m) == doctest::Approx(2.0));
    CHECK(m.max_diameter() == doctest::Approx(std::sqrt(2.0) / 4));
    check_orientation(m);
}

TEST_CASE("simplicial bilayer splits every square")
{
    const PolyMesh m = generate(manufactured_geometry(MeshFamily::simplicial, 2));
    CHECK(m.num_cells() == 64);
    CHECK(total_area(m) == doctest::Approx(2.0));
    for (const auto& c : m.cells())
        CHECK(c.num_faces() == 3);
    check_orientation(m);
}

TEST_CASE("hexagonal bilayer tiles both subdomains")
{
    for (int level : {1, 2, 3}) {
        const PolyMesh m = generate(manufactured_geometry(MeshFamily::hexagonal, level));
        CHECK(total_area(m) == doctest::Approx(2.0));
        double fluid = 0;
        for (const auto& c : m.cells()) {
            CHECK(c.area > 0);
            if (c.subdomain == Subdomain::fluid)
                fluid += c.area;
        }
        CHECK(fluid == doctest::Approx(1.0));
        CHECK_FALSE(m.classes().interface.empty());
        check_orientation(m);
    }
}

TEST_CASE("interface faces lie on the subdomain boundary")
{
    const PolyMesh m = generate(manufactured_geometry(MeshFamily::hexagonal, 3));
    double len = 0;
    for (auto fi : m.classes().interface) {
        CHECK(std::abs(m.face(fi).barycenter.x()) < 1e-12);
        len += m.face(fi).measure;
    }
    CHECK(len == doctest::Approx(1.0));
}

TEST_CASE("classify_faces agrees with the stored partition")
{
    const PolyMesh m = generate(manufactured_geometry(MeshFamily::simplicial, 1));
    const auto c = classify_faces(m);
    CHECK(c.interface == m.classes().interface);
    CHECK(c.interior_fluid == m.classes().interior_fluid);
    CHECK(c.boundary_solid == m.classes().boundary_solid);
}

TEST_CASE("generator rejects bad input")
{
    MeshGenSpec s = manufactured_geometry(MeshFamily::cartesian, 1);
    s.level = -1;
    CHECK_THROWS_AS(generate(s), MeshError);
    s.level = 1;
    s.fluid.reset();
    s.solid.reset();
    CHECK_THROWS_AS(generate(s), MeshError);
    CHECK_THROWS_AS(mesh_family_from_string("voronoi"), ConfigError);
}

TEST_CASE("MSH: two triangles")
{
    std::vector<std::string> names;
    const PolyMesh m = read_msh(data_file("two_triangles.msh"), &names);
    CHECK(m.num_cells() == 2);
    CHECK(m.num_faces() == 5);
    REQUIRE(names.size() == 1);
    CHECK(names[0] == "fluid");
    CHECK(total_area(m) == doctest::Approx(1.0));
}

TEST_CASE("MSH: quadrangles and triangles on two subdomains")
{
    std::vector<std::string> names;
    const PolyMesh m = read_msh(data_file("mixed_bilayer.msh"), &names);
    CHECK(m.num_cells() == 5);
    REQUIRE(names.size() == 2);
    CHECK(names[0] == "solid");
    CHECK(names[1] == "fluid");
    CHECK(m.classes().interface.size() == 1);
    CHECK(total_area(m) == doctest::Approx(4.0));
    for (const auto& c : m.cells())
        CHECK((c.subdomain == Subdomain::solid) == (c.material == 0));
    check_orientation(m);
}

TEST_CASE("MSH: volume elements are rejected")
{
    CHECK_THROWS_AS(read_msh(data_file("tetrahedron.msh")), MeshError);
}

TEST_CASE("MSH: malformed input")
{
    std::istringstream no_elements("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n1\n1 0 0 0\n$EndNodes\n");
    CHECK_THROWS_AS(read_msh_stream(no_elements), MeshError);
    std::istringstream v4("$MeshFormat\n4.1 0 8\n$EndMeshFormat\n");
    CHECK_THROWS_AS(read_msh_stream(v4), MeshError);
    std::istringstream unknown_tag(
        "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n3\n1 0 0 0\n2 1 0 0\n3 0 1 0\n$EndNodes\n"
        "$Elements\n1\n1 2 2 7 7 1 2 3\n$EndElements\n");
    CHECK_THROWS_AS(read_msh_stream(unknown_tag), MeshError);
}

TEST_CASE("polymesh dump round-trips")
{
    const PolyMesh m = generate(manufactured_geometry(MeshFamily::hexagonal, 2));
    std::stringstream ss;
    write_polymesh(m, ss);
    const PolyMesh r = read_polymesh(ss);
    REQUIRE(r.num_cells() == m.num_cells());
    CHECK(r.num_faces() == m.num_faces());
    for (std::size_t c = 0; c < m.num_cells(); ++c) {
        CHECK(r.cell(c).area == doctest::Approx(m.cell(c).area));
        CHECK(r.cell(c).subdomain == m.cell(c).subdomain);
        CHECK(r.cell(c).material == m.cell(c).material);
    }
}

TEST_CASE("nonconforming merge inserts hanging nodes")
{
    MeshGenSpec fs = manufactured_geometry(MeshFamily::cartesian, 1);
    fs.solid.reset();
    MeshGenSpec ss = manufactured_geometry(MeshFamily::simplicial, 0);
    ss.fluid.reset();
    ss.base_size = 1.0 / 3.0;
    const PolyMesh fluid = generate(fs); // interface nodes at y = 0, 1/2, 1
    const PolyMesh solid = generate(ss); // interface nodes at y = 0, 1/3, 2/3, 1
    const PolyMesh m = merge_nonconforming(fluid, solid);
    CHECK(m.num_cells() == fluid.num_cells() + solid.num_cells());
    CHECK(total_area(m) == doctest::Approx(2.0));
    CHECK(m.classes().interface.size() == 4);
    double len = 0;
    for (auto fi : m.classes().interface)
        len += m.face(fi).measure;
    CHECK(len == doctest::Approx(1.0));
    check_orientation(m);
}
