// Run configuration, command drivers and output writers.
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "hhowave/commands.hpp"

using namespace hhowave;

namespace {

const char* small_run = R"({
  "mesh": {"preset": "manufactured", "family": "hexagonal", "level": 1},
  "degree": 1,
  "scheme": "SDIRK34",
  "dt": 0.05,
  "final_time": 0.2,
  "materials": "academic",
  "scenario": {"kind": "zero"},
  "sensors": [
    {"name": "f", "position": [0.5, 0.5], "kind": "fluid"},
    {"name": "s", "position": [-0.5, 0.5], "kind": "solid"}
  ]
})";

std::filesystem::path scratch_dir(const std::string& name)
{
    const auto p = std::filesystem::temp_directory_path() / ("hhowave_test_" + name);
    std::filesystem::remove_all(p);
    return p;
}

} // namespace

TEST_CASE("run config survives a serialize round trip")
{
    RunConfig a = parse_run_config(small_run);
    a.materials = builtin_materials("granite-water").entries;
    a.output.vtu = "snap";
    a.output.snapshot_every = 3;
    a.solver.kind = SolverConfig::Kind::bicgstab_ilu0;
    const std::string once = serialize(a);
    const RunConfig b = parse_run_config(once);
    CHECK(serialize(b) == once);
    CHECK(b.degree == 1);
    CHECK(b.time.scheme == SchemeKind::sdirk34);
    CHECK(b.stab.mode == OrderMode::mixed);
    CHECK(b.sensors.size() == 2);
    CHECK(b.sensors[1].kind == SensorKind::solid);
    CHECK(b.materials.size() == 2);
    CHECK(b.materials[1].solid.cs() == doctest::Approx(3000.0));
    CHECK(b.output.snapshot_every == 3);
}

TEST_CASE("stabilization follows the scheme unless given")
{
    const RunConfig imp = parse_run_config(small_run);
    CHECK(imp.stab.op == StabOperator::lehrenfeld_schoberl);
    CHECK(imp.stab.eta_f == 1.0);
    const RunConfig exp = parse_run_config(R"({"scheme": "ERK3", "dt": 0.01, "scenario": {"kind": "zero"}})");
    CHECK(exp.stab.mode == OrderMode::equal);
    CHECK(exp.stab.eta_f == doctest::Approx(0.8));
    CHECK(exp.stab.eta_s == doctest::Approx(1.5));
}

TEST_CASE("invalid configurations are rejected")
{
    const char* bad[] = {
        R"({"scheme": "ERK5"})",
        R"({"degree": 0})",
        R"({"unknown_key": 1})",
        R"({"scheme": "ERK2", "order": "mixed"})",
        R"({"scheme": "SDIRK23", "stabilization": {"operator": "least-squares", "alpha": 0}})",
        R"({"final_time": -1})",
        R"({"materials": "lead"})",
        R"({"mesh": {"source": "file"}})",
        R"({"sensors": [{"position": [0, 0]}]})",
        R"({"sensors": [{"name": "x", "position": [0, 0], "kind": "air"}]})",
        R"({"solver": {"kind": "magic"}})",
        R"({"degree": "two"})",
        R"(not json)",
    };
    CHECK_NOTHROW(parse_run_config(R"({"dt": 0.01})"));
    CHECK_THROWS_AS(parse_run_config("{}"), ConfigError); // no step size
    for (const char* text : bad) {
        // Every case carries a valid step so it fails for its own reason.
        std::string t = text;
        if (t.front() == '{')
            t = R"({"dt": 0.01, )" + t.substr(1);
        CAPTURE(t);
        CHECK_THROWS_AS(parse_run_config(t), ConfigError);
    }
}

TEST_CASE("zero initial data gives identically zero traces")
{
    const auto dir = scratch_dir("zero");
    const RunResult r = cmd_simulate(parse_run_config(small_run), dir.string(), Exec::serial);
    CHECK(r.summary.steps == 4);
    CHECK(r.summary.final_time == doctest::Approx(0.2));
    REQUIRE(r.sensors.size() == 2);
    for (const auto& s : r.sensors) {
        CHECK(s.trace.time.size() == 5);
        for (const auto& v : s.trace.values)
            CHECK(v.norm() == 0.0);
    }
    CHECK(std::filesystem::exists(dir / "traces.csv"));
    CHECK(std::filesystem::exists(dir / "summary.json"));
    std::stringstream csv;
    write_traces_csv(r.sensors, csv);
    std::string header;
    std::getline(csv, header);
    CHECK(header == "time,f.p,f.mx,f.my,s.vx,s.vy,s.sxx,s.syy,s.sxy");
}

TEST_CASE("summary json reports the unknown counts")
{
    const Simulation sim(parse_run_config(small_run), Exec::serial);
    const RunResult r = sim.run();
    const auto j = nlohmann::json::parse(summary_json(r.summary, r.sensors));
    CHECK(j.at("scheme") == "SDIRK34");
    const auto& d = j.at("dofs");
    CHECK(d.at("total").get<std::size_t>() == sim.system().layout.num_dofs());
    CHECK(d.at("global_after_condensation").get<std::size_t>() == sim.system().layout.num_face_dofs());
    CHECK(d.at("condensation_reduction").get<double>() > 0.5);
}

TEST_CASE("snapshots are written on the requested cadence")
{
    const auto dir = scratch_dir("vtu");
    RunConfig cfg = parse_run_config(small_run);
    cfg.output.vtu = "snap";
    cfg.output.snapshot_every = 2;
    cmd_simulate(cfg, dir.string(), Exec::serial);
    CHECK(std::filesystem::exists(dir / "snap_000000.vtu"));
    CHECK(std::filesystem::exists(dir / "snap_000002.vtu"));
    CHECK(std::filesystem::exists(dir / "snap_000004.vtu"));
    CHECK_FALSE(std::filesystem::exists(dir / "snap_000001.vtu"));
}

TEST_CASE("vtu writer emits one polygon per cell")
{
    const PolyMesh mesh = generate(manufactured_geometry(MeshFamily::hexagonal, 1));
    CellAverages f;
    f.field.assign(mesh.num_cells(), 1.0);
    f.pressure.assign(mesh.num_cells(), 1.0);
    f.speed.assign(mesh.num_cells(), 0.0);
    std::stringstream out;
    write_vtu(mesh, f, 0.5, out);
    const std::string s = out.str();
    CHECK(s.find("NumberOfCells=\"" + std::to_string(mesh.num_cells()) + "\"") != std::string::npos);
    CHECK(s.find("Name=\"pressure\"") != std::string::npos);
    CHECK(s.find("Name=\"subdomain\"") != std::string::npos);
}

TEST_CASE("observed rate and table formatting")
{
    CHECK(observed_rate(1.0, 0.25) == doctest::Approx(2.0));
    CHECK(observed_rate(0.1, 0.1 / 8) == doctest::Approx(3.0));
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(2.0) == "2");
    CsvTable t({"a", "b"});
    t.add({"1", "x"});
    std::stringstream out;
    t.write(out);
    CHECK(out.str() == "a,b\n1,x\n");
}

TEST_CASE("convergence study validation")
{
    CHECK_THROWS_AS(parse_convergence_study(R"({"base": {"dt": 0.01}, "levels": [2]})"), ConfigError);
    CHECK_THROWS_AS(parse_convergence_study(R"({"base": {"dt": 0.01, "scenario": {"kind": "zero"}}, "levels": [1, 2]})"),
                    ConfigError);
    const auto s = parse_convergence_study(R"({"base": {"dt": 0.01}, "levels": {"from": 1, "to": 3}, "degrees": [1, 2]})");
    CHECK(s.levels == std::vector<int>{1, 2, 3});
    CHECK(s.degrees == std::vector<int>{1, 2});
    ConvergenceStudy one = s;
    one.levels = {1};
    CHECK_THROWS_AS(cmd_converge(one), ConfigError);
}

TEST_CASE("cfl sweeps reject implicit schemes")
{
    CHECK_THROWS_AS(parse_cfl_sweep(R"({"schemes": ["SDIRK34"]})"), ConfigError);
    const auto s = parse_cfl_sweep(R"({"families": ["simplicial", "hexagonal"], "degrees": [1, 2],
                                      "schemes": ["ERK2", "ERK4"]})");
    CHECK(s.families.size() == 2);
    CHECK(s.schemes.back() == SchemeKind::erk4);
}

TEST_CASE("efficiency refinement scalings")
{
    // Halving h and matching the spatial rate h^(k+1) with a scheme of order q
    // divides dt by 2^((k+1)/(q+1)).
    CHECK(efficiency_time_step(0.1, 0, 1, 3) == doctest::Approx(0.1));
    CHECK(efficiency_time_step(0.1, 2, 1, 3) == doctest::Approx(0.05));
    CHECK(efficiency_time_step(0.1, 1, 3, 1) == doctest::Approx(0.025));
    CHECK(efficiency_tolerance(1e-3, 1, 1) == doctest::Approx(2.5e-4));
    CHECK(efficiency_tolerance(1e-3, 2, 2) == doctest::Approx(1e-3 / 64));
    CHECK_THROWS_AS(parse_efficiency_config(R"({"base": {}, "dt0": 0.1})"), ConfigError);
    CHECK_THROWS_AS(parse_efficiency_config(R"({"base": {}, "dt0": 0.1, "tol0": 1e-6,
                                              "explicit_cfl": {"SDIRK34": 0.1}})"),
                    ConfigError);
}

TEST_CASE("single-level efficiency run gives one row per scheme")
{
    EfficiencyConfig ec = parse_efficiency_config(R"({
      "base": {"mesh": {"family": "cartesian", "level": 1}, "final_time": 0.05},
      "schemes": ["ERK2", "SDIRK34"], "levels": [1], "dt0": 0.01, "tol0": 1e-8})");
    const auto rows = cmd_efficiency(ec, Exec::serial);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].scheme == "ERK2");
    CHECK(rows[1].scheme == "SDIRK34");
    for (const auto& r : rows) {
        CHECK(std::isfinite(r.error));
        CHECK(r.error > 0);
    }
    CHECK(rows[0].dt == doctest::Approx(efficiency_time_step(0.01, 1, 1, 2)).epsilon(0.2));
    CHECK(rows[1].global_dofs < rows[0].global_dofs);
    CHECK(efficiency_table(rows).rows().size() == 2);
}
