// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "hhowave/mesh.hpp"

namespace hhowave {

namespace {

std::optional<Subdomain> subdomain_of_name(const std::string& name)
{
    static const std::map<std::string, Subdomain> known = {
        {"fluid", Subdomain::fluid},     {"atmosphere", Subdomain::fluid}, {"water", Subdomain::fluid},
        {"solid", Subdomain::solid},     {"sediments", Subdomain::solid},  {"bedrock", Subdomain::solid},
        {"granite", Subdomain::solid},
    };
    if (auto it = known.find(name); it != known.end())
        return it->second;
    if (name.rfind("fluid:", 0) == 0)
        return Subdomain::fluid;
    if (name.rfind("solid:", 0) == 0)
        return Subdomain::solid;
    return std::nullopt;
}

int element_dimension(int type)
{
    switch (type) {
    case 15: return 0;
    case 1: case 8: case 26: case 27: case 28: return 1;
    case 2: case 3: case 9: case 10: case 16: case 20: case 21: return 2;
    case 4: case 5: case 6: case 7: case 11: case 12: case 13: case 14: case 17: case 18: case 19: return 3;
    default: return -1;
    }
}

[[noreturn]] void malformed(const std::string& what)
{
    throw MeshError("malformed MSH file: " + what);
}

void expect_line(std::istream& in, const std::string& tag)
{
    std::string line;
    while (std::getline(in, line)) {
        line.erase(line.find_last_not_of(" \r\t") + 1);
        if (line.empty())
            continue;
        if (line != tag)
            malformed("expected " + tag + ", got '" + line + "'");
        return;
    }
    malformed("missing " + tag);
}

} // namespace

PolyMesh read_msh(const std::string& path, std::vector<std::string>* material_names)
{
    std::ifstream in(path);
    if (!in)
        throw MeshError("cannot open mesh file '" + path + "'");
    return read_msh_stream(in, material_names);
}

PolyMesh read_msh_stream(std::istream& in, std::vector<std::string>* material_names)
{
    std::map<int, std::string> phys_names;
    std::map<long, std::size_t> node_index;
    PolygonSoup soup;
    bool have_nodes = false, have_elements = false;

    struct RawElement {
        std::vector<std::size_t> nodes;
        int phys;
    };
    std::vector<RawElement> elements;

    std::string line;
    while (std::getline(in, line)) {
        line.erase(line.find_last_not_of(" \r\t") + 1);
        if (line.empty())
            continue;
        if (line == "$MeshFormat") {
            std::getline(in, line);
            std::istringstream ss(line);
            double version = 0;
            int file_type = -1;
            if (!(ss >> version >> file_type))
                malformed("bad format header");
            if (version < 2.0 || version >= 3.0)
                malformed("only version 2.x is supported");
            if (file_type != 0)
                malformed("binary files are not supported");
            expect_line(in, "$EndMeshFormat");
        }
        else if (line == "$PhysicalNames") {
            std::size_t n = 0;
            if (!(in >> n))
                malformed("bad physical name count");
            std::getline(in, line);
            for (std::size_t i = 0; i < n; ++i) {
                if (!std::getline(in, line))
                    malformed("truncated physical names");
                std::istringstream ss(line);
                int dim = 0, tag = 0;
                std::string name;
                if (!(ss >> dim >> tag >> std::quoted(name)))
                    malformed("bad physical name entry");
                if (dim == 2)
                    phys_names[tag] = name;
            }
            expect_line(in, "$EndPhysicalNames");
        }
        else if (line == "$Nodes") {
            std::size_t n = 0;
            if (!(in >> n))
                malformed("bad node count");
            for (std::size_t i = 0; i < n; ++i) {
                long id = 0;
                double x = 0, y = 0, z = 0;
                if (!(in >> id >> x >> y >> z))
                    malformed("truncated node list");
                if (!node_index.emplace(id, soup.vertices.size()).second)
                    malformed("duplicate node id " + std::to_string(id));
                soup.vertices.emplace_back(x, y);
            }
            std::getline(in, line);
            expect_line(in, "$EndNodes");
            have_nodes = true;
        }
        else if (line == "$Elements") {
            std::size_t n = 0;
            if (!(in >> n))
                malformed("bad element count");
            std::getline(in, line);
            for (std::size_t i = 0; i < n; ++i) {
                if (!std::getline(in, line))
                    malformed("truncated element list");
                std::istringstream ss(line);
                long id = 0;
                int type = 0, ntags = 0;
                if (!(ss >> id >> type >> ntags) || ntags < 0)
                    malformed("bad element header");
                std::vector<int> tags(ntags);
                for (auto& t : tags)
                    if (!(ss >> t))
                        malformed("bad element tags");
                const int dim = element_dimension(type);
                if (dim == 3)
                    throw MeshError("unsupported element dimension (element " + std::to_string(id) + ")");
                if (dim < 0)
                    throw MeshError("unsupported element type " + std::to_string(type));
                if (dim < 2)
                    continue;
                if (type != 2 && type != 3)
                    throw MeshError("unsupported element type " + std::to_string(type) + " (only linear triangles and quadrangles)");
                const int nv = type == 2 ? 3 : 4;
                RawElement e;
                e.phys = ntags > 0 ? tags[0] : 0;
                for (int k = 0; k < nv; ++k) {
                    long nid = 0;
                    if (!(ss >> nid))
                        malformed("bad element node list");
                    auto it = node_index.find(nid);
                    if (it == node_index.end())
                        malformed("element references unknown node " + std::to_string(nid));
                    e.nodes.push_back(it->second);
                }
                elements.push_back(std::move(e));
            }
            expect_line(in, "$EndElements");
            have_elements = true;
        }
        else if (line.front() == '$') {
            const std::string end = "$End" + line.substr(1);
            while (std::getline(in, line)) {
                line.erase(line.find_last_not_of(" \r\t") + 1);
                if (line == end)
                    break;
            }
        }
        else {
            malformed("unexpected line '" + line + "'");
        }
    }
    if (!have_nodes || !have_elements)
        malformed("missing $Nodes or $Elements section");
    if (elements.empty())
        malformed("no surface elements");

    std::vector<std::string> names;
    std::map<int, int> material_of_tag;
    std::map<std::vector<std::size_t>, Subdomain> seen;
    for (const auto& e : elements) {
        auto it = phys_names.find(e.phys);
        if (it == phys_names.end())
            throw MeshError("unknown physical tag " + std::to_string(e.phys));
        const auto sub = subdomain_of_name(it->second);
        if (!sub)
            throw MeshError("unknown physical tag " + std::to_string(e.phys) + " ('" + it->second + "')");
        auto mt = material_of_tag.find(e.phys);
        if (mt == material_of_tag.end()) {
            mt = material_of_tag.emplace(e.phys, static_cast<int>(names.size())).first;
            names.push_back(it->second);
        }
        auto key = e.nodes;
        std::sort(key.begin(), key.end());
        auto [pos, inserted] = seen.emplace(key, *sub);
        if (!inserted) {
            if (pos->second != *sub)
                throw MeshError("element belongs to both subdomains");
            throw MeshError("duplicate element");
        }
        soup.cells.push_back(e.nodes);
        soup.subdomains.push_back(*sub);
        soup.materials.push_back(mt->second);
    }
    if (material_names)
        *material_names = names;
    return PolyMesh::build(std::move(soup));
}

void write_polymesh(const PolyMesh& mesh, std::ostream& out)
{
    out << "polymesh 1\n";
    out << "vertices " << mesh.vertices().size() << '\n';
    out << std::setprecision(17);
    for (const auto& p : mesh.vertices())
        out << p.x() << ' ' << p.y() << '\n';
    out << "cells " << mesh.num_cells() << '\n';
    for (const auto& c : mesh.cells()) {
        out << to_string(c.subdomain) << ' ' << c.material << ' ' << c.vertices.size();
        for (auto v : c.vertices)
            out << ' ' << v;
        out << '\n';
    }
}

PolyMesh read_polymesh(std::istream& in)
{
    std::string word;
    int version = 0;
    if (!(in >> word >> version) || word != "polymesh" || version != 1)
        throw MeshError("not a polymesh dump");
    std::size_t nv = 0, nc = 0;
    if (!(in >> word >> nv) || word != "vertices")
        throw MeshError("polymesh: missing vertices");
    PolygonSoup soup;
    soup.vertices.resize(nv);
    for (auto& p : soup.vertices)
        if (!(in >> p.x() >> p.y()))
            throw MeshError("polymesh: truncated vertices");
    if (!(in >> word >> nc) || word != "cells")
        throw MeshError("polymesh: missing cells");
    for (std::size_t c = 0; c < nc; ++c) {
        std::string sub;
        int mat = 0;
        std::size_t n = 0;
        if (!(in >> sub >> mat >> n))
            throw MeshError("polymesh: truncated cells");
        if (sub != "fluid" && sub != "solid")
            throw MeshError("polymesh: bad subdomain '" + sub + "'");
        std::vector<std::size_t> loop(n);
        for (auto& v : loop)
            if (!(in >> v))
                throw MeshError("polymesh: truncated cell");
        soup.cells.push_back(std::move(loop));
        soup.subdomains.push_back(sub == "fluid" ? Subdomain::fluid : Subdomain::solid);
        soup.materials.push_back(mat);
    }
    return PolyMesh::build(std::move(soup));
}

} // namespace hhowave
