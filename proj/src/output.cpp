// SPDX-License-Identifier: Apache-2.0
#include "hhowave/output.hpp"

#include <charconv>
#include <limits>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "hhowave/polybasis.hpp"

namespace hhowave {

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

void write_traces_csv(const std::vector<SensorRecord>& sensors, std::ostream& out)
{
    out << "time";
    for (const auto& s : sensors)
        for (const auto& ch : s.probe.channels())
            out << ',' << s.probe.spec.name << '.' << ch;
    out << '\n';
    if (sensors.empty())
        return;
    const std::size_t n = sensors.front().trace.time.size();
    for (std::size_t i = 0; i < n; ++i) {
        out << format_number(sensors.front().trace.time[i]);
        for (const auto& s : sensors)
            for (Eigen::Index c = 0; c < s.trace.values[i].size(); ++c)
                out << ',' << format_number(s.trace.values[i][c]);
        out << '\n';
    }
}

CellAverages cell_averages(const PolyMesh& mesh, const BlockSystem& sys, const Vector& ut)
{
    const std::size_t nc = mesh.num_cells();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CellAverages out;
    out.pressure.assign(nc, nan);
    out.speed.assign(nc, nan);
    out.field.assign(nc, 0.0);
    const int deg = sys.layout.kc;
    for (std::size_t c = 0; c < nc; ++c) {
        const auto& cell = mesh.cell(c);
        const QuadratureRule q = quad_cell(mesh, c, deg);
        Vector mean;
        for (std::size_t i = 0; i < q.size(); ++i) {
            const Vector f = eval_cell_field(mesh, sys, ut, c, q.points[i]) * q.weights[i];
            mean = i == 0 ? f : Vector(mean + f);
        }
        mean /= cell.area;
        if (cell.subdomain == Subdomain::fluid) {
            out.pressure[c] = mean[2];
            out.field[c] = mean[2];
        }
        else {
            out.speed[c] = std::hypot(mean[3], mean[4]);
            out.field[c] = out.speed[c];
        }
    }
    return out;
}

namespace {

void data_array(std::ostream& out, const char* name, const std::vector<double>& v)
{
    out << "        <DataArray type=\"Float64\" Name=\"" << name << "\" format=\"ascii\">\n          ";
    for (double x : v)
        out << format_number(x) << ' ';
    out << "\n        </DataArray>\n";
}

} // namespace

void write_vtu(const PolyMesh& mesh, const CellAverages& fields, double time, std::ostream& out)
{
    const auto& verts = mesh.vertices();
    out << "<?xml version=\"1.0\"?>\n"
        << "<VTKFile type=\"UnstructuredGrid\" version=\"1.0\" byte_order=\"LittleEndian\">\n"
        << "  <UnstructuredGrid>\n"
        << "    <FieldData>\n"
        << "      <DataArray type=\"Float64\" Name=\"TIME\" NumberOfTuples=\"1\" format=\"ascii\">"
        << format_number(time) << "</DataArray>\n"
        << "    </FieldData>\n"
        << "    <Piece NumberOfPoints=\"" << verts.size() << "\" NumberOfCells=\"" << mesh.num_cells() << "\">\n"
        << "      <Points>\n"
        << "        <DataArray type=\"Float64\" NumberOfComponents=\"3\" format=\"ascii\">\n";
    for (const auto& p : verts)
        out << "          " << format_number(p.x()) << ' ' << format_number(p.y()) << " 0\n";
    out << "        </DataArray>\n      </Points>\n      <Cells>\n"
        << "        <DataArray type=\"Int64\" Name=\"connectivity\" format=\"ascii\">\n          ";
    for (std::size_t c = 0; c < mesh.num_cells(); ++c)
        for (auto v : mesh.cell(c).vertices)
            out << v << ' ';
    out << "\n        </DataArray>\n"
        << "        <DataArray type=\"Int64\" Name=\"offsets\" format=\"ascii\">\n          ";
    std::size_t off = 0;
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        off += mesh.cell(c).vertices.size();
        out << off << ' ';
    }
    out << "\n        </DataArray>\n"
        << "        <DataArray type=\"UInt8\" Name=\"types\" format=\"ascii\">\n          ";
    for (std::size_t c = 0; c < mesh.num_cells(); ++c)
        out << "7 ";
    out << "\n        </DataArray>\n      </Cells>\n      <CellData Scalars=\"field\">\n";
    data_array(out, "field", fields.field);
    data_array(out, "pressure", fields.pressure);
    data_array(out, "velocity_magnitude", fields.speed);
    std::vector<double> sub(mesh.num_cells());
    for (std::size_t c = 0; c < mesh.num_cells(); ++c)
        sub[c] = mesh.cell(c).subdomain == Subdomain::fluid ? 0.0 : 1.0;
    data_array(out, "subdomain", sub);
    out << "      </CellData>\n    </Piece>\n  </UnstructuredGrid>\n</VTKFile>\n";
}

std::string summary_json(const RunSummary& s, const std::vector<SensorRecord>& sensors)
{
    nlohmann::ordered_json j;
    j["scheme"] = s.scheme;
    j["degree"] = s.degree;
    j["order"] = s.order;
    j["cells"] = s.cells;
    j["faces"] = s.faces;
    j["dofs"] = {{"cell", s.dofs.cell_dofs},
                 {"face", s.dofs.face_dofs},
                 {"total", s.dofs.total},
                 {"global_after_condensation", s.dofs.global},
                 {"condensation_reduction", s.dofs.reduction}};
    j["h"] = s.h;
    j["dt"] = s.dt;
    j["cfl"] = s.cfl;
    j["steps"] = s.steps;
    j["final_time"] = s.final_time;
    j["setup_seconds"] = s.setup_seconds;
    j["loop_seconds"] = s.loop_seconds;
    j["wall_seconds"] = s.wall_seconds;
    j["initial_energy"] = s.initial_energy;
    j["final_energy"] = s.final_energy;
    j["dual_l2_error"] = std::isnan(s.dual_error) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(s.dual_error);
    j["schur_nonzeros"] = s.schur_nonzeros;
    j["last_solver_iterations"] = s.last_solver_iterations;
    auto& js = j["sensors"] = nlohmann::ordered_json::array();
    for (const auto& rec : sensors) {
        nlohmann::ordered_json e{{"name", rec.probe.spec.name}, {"kind", to_string(rec.probe.spec.kind)}};
        if (rec.probe.spec.kind == SensorKind::interface) {
            e["max_kinematic_residual"] = rec.max_kinematic;
            e["max_dynamic_residual"] = rec.max_dynamic;
        }
        js.push_back(std::move(e));
    }
    return j.dump(2) + "\n";
}

void CsvTable::add(std::vector<std::string> row)
{
    if (row.size() != header_.size())
        throw Error("CSV row width does not match the header");
    rows_.push_back(std::move(row));
}

void CsvTable::write(std::ostream& out) const
{
    auto line = [&out](const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size(); ++i)
            out << (i ? "," : "") << r[i];
        out << '\n';
    };
    line(header_);
    for (const auto& r : rows_)
        line(r);
}

void write_file(const std::string& path, const std::string& content)
{
    const std::filesystem::path p(path);
    if (p.has_parent_path())
        std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out)
        throw ConfigError("cannot write '" + path + "'");
    out << content;
    if (!out)
        throw Error("write failed for '" + path + "'");
}

} // namespace hhowave
