// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "hhowave/run_config.hpp"

namespace hhowave {

using nlohmann::json;

ScenarioKind scenario_kind_from_string(const std::string& s)
{
    if (s == "manufactured")
        return ScenarioKind::manufactured;
    if (s == "ricker")
        return ScenarioKind::ricker;
    if (s == "zero")
        return ScenarioKind::zero;
    throw ConfigError("unknown scenario '" + s + "'");
}

const char* to_string(ScenarioKind k)
{
    switch (k) {
    case ScenarioKind::manufactured: return "manufactured";
    case ScenarioKind::ricker: return "ricker";
    case ScenarioKind::zero: return "zero";
    }
    return "?";
}

MeshGenSpec ricker_academic_geometry(MeshFamily family, int level)
{
    MeshGenSpec spec;
    spec.family = family;
    spec.level = level;
    spec.fluid = Rect{-0.5, 0.5, 0.0, 0.5};
    spec.solid = Rect{-0.5, 0.5, -0.5, 0.0};
    return spec;
}

MeshGenSpec ricker_granite_geometry(int level)
{
    MeshGenSpec spec;
    spec.family = MeshFamily::cartesian;
    spec.level = level;
    spec.base_size = 750.0;
    spec.fluid = Rect{-3750.0, 3750.0, 0.0, 1500.0};
    spec.solid = Rect{-3750.0, 3750.0, -3750.0, 0.0};
    return spec;
}

HhoConfig RunConfig::hho() const
{
    HhoConfig c;
    c.degree = degree;
    c.stab = stab;
    return c;
}

void RunConfig::validate() const
{
    hho().validate();
    if (is_implicit(time.scheme)) {
        if (stab.op == StabOperator::least_squares && stab.alpha == 0)
            throw ConfigError("implicit schemes need an O(1/h) stabilization (alpha = 1)");
    }
    else if (stab.mode == OrderMode::mixed || stab.op != StabOperator::least_squares) {
        throw ConfigError("explicit schemes need the equal-order least-squares stabilization");
    }
    if (!(time.final_time > 0))
        throw ConfigError("final_time must be positive");
    if (!(time.dt > 0) && !(time.cfl > 0))
        throw ConfigError("set a positive time step or target CFL");
    solver.validate();
    if (mesh.kind == MeshSource::Kind::file && mesh.path.empty())
        throw ConfigError("mesh file path is empty");
    if (mesh.kind == MeshSource::Kind::merge && (mesh.fluid_path.empty() || mesh.solid_path.empty()))
        throw ConfigError("merge needs both fluid and solid mesh files");
    if (mesh.kind == MeshSource::Kind::generate && mesh.gen.level < 0)
        throw ConfigError("refinement level must be non-negative");
    if (scenario.kind == ScenarioKind::ricker && !(scenario.ricker.central_frequency > 0))
        throw ConfigError("Ricker central frequency must be positive");
    if (output.snapshot_every < 0)
        throw ConfigError("snapshot_every must be non-negative");
    if (materials.empty())
        builtin_materials(material_set); // throws on an unknown set name
    for (const auto& m : materials) {
        if (m.kind == Subdomain::fluid)
            m.fluid.validate();
        else
            m.solid.validate();
    }
}

MaterialTable RunConfig::material_table(const std::vector<std::string>& names) const
{
    const MaterialTable all = materials.empty() ? builtin_materials(material_set) : MaterialTable{materials};
    if (!names.empty())
        return all.select(names);
    // Generated meshes: id 0 is the first fluid entry, id 1 the first solid one.
    MaterialTable out;
    for (auto kind : {Subdomain::fluid, Subdomain::solid}) {
        bool found = false;
        for (const auto& m : all.entries)
            if (m.kind == kind) {
                out.entries.push_back(m);
                found = true;
                break;
            }
        if (!found)
            throw ConfigError(std::string("material set has no ") + to_string(kind) + " entry");
    }
    return out;
}

namespace {

void check_keys(const json& j, const char* where, std::initializer_list<const char*> allowed)
{
    if (!j.is_object())
        throw ConfigError(std::string(where) + " must be an object");
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            ok = ok || item.key() == a;
        if (!ok)
            throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback)
{
    if (!j.contains(key))
        return fallback;
    try {
        return j.at(key).get<T>();
    }
    catch (const json::exception&) {
        throw ConfigError(std::string("bad value for '") + key + "'");
    }
}

Rect rect_of(const json& j, const char* what)
{
    if (!j.is_array() || j.size() != 4)
        throw ConfigError(std::string(what) + " rectangle must be [x0, x1, y0, y1]");
    const Rect r{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
    if (!(r.x1 > r.x0) || !(r.y1 > r.y0))
        throw ConfigError(std::string(what) + " rectangle is empty");
    return r;
}

json rect_json(const Rect& r)
{
    return json::array({r.x0, r.x1, r.y0, r.y1});
}

Point2 point_of(const json& j, const char* what)
{
    if (!j.is_array() || j.size() != 2)
        throw ConfigError(std::string(what) + " must be [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

StabOperator stab_operator_from_string(const std::string& s)
{
    if (s == "least-squares")
        return StabOperator::least_squares;
    if (s == "lehrenfeld-schoberl")
        return StabOperator::lehrenfeld_schoberl;
    throw ConfigError("unknown stabilization operator '" + s + "'");
}

const char* stab_operator_name(StabOperator op)
{
    return op == StabOperator::least_squares ? "least-squares" : "lehrenfeld-schoberl";
}

MeshSource parse_mesh(const json& j)
{
    check_keys(j, "mesh", {"source", "preset", "family", "level", "base_size", "fluid", "solid", "path",
                           "fluid_path", "solid_path"});
    MeshSource m;
    const auto source = get_or<std::string>(j, "source", "generate");
    if (source == "generate") {
        m.kind = MeshSource::Kind::generate;
        const auto family = mesh_family_from_string(get_or<std::string>(j, "family", "cartesian"));
        const int level = get_or(j, "level", 3);
        const auto preset = get_or<std::string>(j, "preset", "manufactured");
        if (preset == "manufactured")
            m.gen = manufactured_geometry(family, level);
        else if (preset == "ricker-academic")
            m.gen = ricker_academic_geometry(family, level);
        else if (preset == "ricker-granite") {
            m.gen = ricker_granite_geometry(level);
            m.gen.family = family;
        }
        else if (preset == "custom") {
            m.gen = MeshGenSpec{};
            m.gen.family = family;
            m.gen.level = level;
        }
        else
            throw ConfigError("unknown mesh preset '" + preset + "'");
        m.gen.base_size = get_or(j, "base_size", m.gen.base_size);
        if (j.contains("fluid"))
            m.gen.fluid = j.at("fluid").is_null() ? std::nullopt : std::optional<Rect>(rect_of(j.at("fluid"), "fluid"));
        if (j.contains("solid"))
            m.gen.solid = j.at("solid").is_null() ? std::nullopt : std::optional<Rect>(rect_of(j.at("solid"), "solid"));
        if (!m.gen.fluid && !m.gen.solid)
            throw ConfigError("generated mesh needs at least one subdomain rectangle");
    }
    else if (source == "file") {
        m.kind = MeshSource::Kind::file;
        m.path = get_or<std::string>(j, "path", "");
    }
    else if (source == "merge") {
        m.kind = MeshSource::Kind::merge;
        m.fluid_path = get_or<std::string>(j, "fluid_path", "");
        m.solid_path = get_or<std::string>(j, "solid_path", "");
    }
    else {
        throw ConfigError("unknown mesh source '" + source + "'");
    }
    return m;
}

json mesh_json(const MeshSource& m)
{
    json j;
    switch (m.kind) {
    case MeshSource::Kind::generate:
        j["source"] = "generate";
        j["preset"] = "custom";
        j["family"] = to_string(m.gen.family);
        j["level"] = m.gen.level;
        j["base_size"] = m.gen.base_size;
        j["fluid"] = m.gen.fluid ? rect_json(*m.gen.fluid) : json(nullptr);
        j["solid"] = m.gen.solid ? rect_json(*m.gen.solid) : json(nullptr);
        break;
    case MeshSource::Kind::file:
        j["source"] = "file";
        j["path"] = m.path;
        break;
    case MeshSource::Kind::merge:
        j["source"] = "merge";
        j["fluid_path"] = m.fluid_path;
        j["solid_path"] = m.solid_path;
        break;
    }
    return j;
}

Material parse_material(const json& j)
{
    check_keys(j, "material", {"name", "kind", "rho", "cp", "cs", "kappa", "lambda", "mu"});
    Material m;
    m.name = get_or<std::string>(j, "name", "");
    if (m.name.empty())
        throw ConfigError("material needs a name");
    const auto kind = get_or<std::string>(j, "kind", "");
    const double rho = get_or(j, "rho", 0.0);
    if (kind == "fluid") {
        m.kind = Subdomain::fluid;
        m.fluid = j.contains("kappa") ? FluidMaterial{rho, get_or(j, "kappa", 0.0)}
                                      : FluidMaterial::from_speed(rho, get_or(j, "cp", 0.0));
    }
    else if (kind == "solid") {
        m.kind = Subdomain::solid;
        m.solid = j.contains("mu") ? SolidMaterial{rho, get_or(j, "lambda", 0.0), get_or(j, "mu", 0.0)}
                                   : SolidMaterial::from_speeds(rho, get_or(j, "cp", 0.0), get_or(j, "cs", 0.0));
    }
    else {
        throw ConfigError("material kind must be 'fluid' or 'solid'");
    }
    return m;
}

json material_json(const Material& m)
{
    json j;
    j["name"] = m.name;
    if (m.kind == Subdomain::fluid) {
        j["kind"] = "fluid";
        j["rho"] = m.fluid.rho;
        j["kappa"] = m.fluid.kappa;
    }
    else {
        j["kind"] = "solid";
        j["rho"] = m.solid.rho;
        j["lambda"] = m.solid.lambda;
        j["mu"] = m.solid.mu;
    }
    return j;
}

} // namespace

RunConfig parse_run_config(const std::string& json_text)
{
    json j;
    try {
        j = json::parse(json_text);
    }
    catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    check_keys(j, "config", {"mesh", "degree", "order", "stabilization", "scheme", "dt", "cfl", "final_time",
                             "materials", "scenario", "solver", "sensors", "output"});
    RunConfig c;
    try {
        if (j.contains("mesh"))
            c.mesh = parse_mesh(j.at("mesh"));
        c.degree = get_or(j, "degree", 1);
        c.time.scheme = scheme_from_string(get_or<std::string>(j, "scheme", "ERK4"));
        c.time.dt = get_or(j, "dt", 0.0);
        c.time.cfl = get_or(j, "cfl", 0.0);
        c.time.final_time = get_or(j, "final_time", 1.0);

        c.stab = is_implicit(c.time.scheme) ? StabilizationConfig::implicit_default()
                                            : StabilizationConfig::explicit_default();
        if (j.contains("order")) {
            const auto mode = order_mode_from_string(j.at("order").get<std::string>());
            const auto pairing = mode == OrderMode::mixed ? StabilizationConfig::implicit_default()
                                                          : StabilizationConfig::explicit_default();
            c.stab.mode = mode;
            c.stab.op = pairing.op;
            c.stab.alpha = pairing.alpha;
        }
        if (j.contains("stabilization")) {
            const auto& s = j.at("stabilization");
            check_keys(s, "stabilization", {"operator", "alpha", "eta_f", "eta_s"});
            if (s.contains("operator"))
                c.stab.op = stab_operator_from_string(s.at("operator").get<std::string>());
            c.stab.alpha = get_or(s, "alpha", c.stab.alpha);
            c.stab.eta_f = get_or(s, "eta_f", c.stab.eta_f);
            c.stab.eta_s = get_or(s, "eta_s", c.stab.eta_s);
        }

        if (j.contains("materials")) {
            const auto& m = j.at("materials");
            if (m.is_string())
                c.material_set = m.get<std::string>();
            else if (m.is_array())
                for (const auto& e : m)
                    c.materials.push_back(parse_material(e));
            else
                throw ConfigError("materials must be a set name or a list");
        }

        if (j.contains("scenario")) {
            const auto& s = j.at("scenario");
            check_keys(s, "scenario", {"kind", "omega", "theta", "amplitude", "central_frequency", "center"});
            c.scenario.kind = scenario_kind_from_string(get_or<std::string>(s, "kind", "manufactured"));
            c.scenario.omega = get_or(s, "omega", c.scenario.omega);
            c.scenario.theta = get_or(s, "theta", c.scenario.theta);
            c.scenario.ricker.amplitude = get_or(s, "amplitude", c.scenario.ricker.amplitude);
            c.scenario.ricker.central_frequency = get_or(s, "central_frequency", c.scenario.ricker.central_frequency);
            if (s.contains("center"))
                c.scenario.ricker.center = point_of(s.at("center"), "scenario center");
        }

        if (j.contains("solver")) {
            const auto& s = j.at("solver");
            check_keys(s, "solver", {"kind", "tolerance", "max_iterations"});
            if (s.contains("kind"))
                c.solver.kind = solver_kind_from_string(s.at("kind").get<std::string>());
            c.solver.tolerance = get_or(s, "tolerance", c.solver.tolerance);
            c.solver.max_iterations = get_or(s, "max_iterations", c.solver.max_iterations);
        }

        if (j.contains("sensors")) {
            if (!j.at("sensors").is_array())
                throw ConfigError("sensors must be a list");
            for (const auto& s : j.at("sensors")) {
                check_keys(s, "sensor", {"name", "position", "kind"});
                SensorSpec spec;
                spec.name = get_or<std::string>(s, "name", "");
                if (spec.name.empty())
                    throw ConfigError("sensor needs a name");
                spec.position = point_of(s.value("position", json()), "sensor position");
                spec.kind = sensor_kind_from_string(get_or<std::string>(s, "kind", "fluid"));
                c.sensors.push_back(spec);
            }
        }

        if (j.contains("output")) {
            const auto& o = j.at("output");
            check_keys(o, "output", {"traces", "summary", "vtu", "snapshot_every"});
            c.output.traces = get_or(o, "traces", c.output.traces);
            c.output.summary = get_or(o, "summary", c.output.summary);
            c.output.vtu = get_or(o, "vtu", c.output.vtu);
            c.output.snapshot_every = get_or(o, "snapshot_every", c.output.snapshot_every);
        }
    }
    catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    catch (const MeshError& e) {
        throw ConfigError(e.what());
    }
    c.validate();
    return c;
}

RunConfig load_run_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

std::string serialize(const RunConfig& c)
{
    json j;
    j["mesh"] = mesh_json(c.mesh);
    j["degree"] = c.degree;
    j["order"] = to_string(c.stab.mode);
    j["stabilization"] = {{"operator", stab_operator_name(c.stab.op)},
                          {"alpha", c.stab.alpha},
                          {"eta_f", c.stab.eta_f},
                          {"eta_s", c.stab.eta_s}};
    j["scheme"] = to_string(c.time.scheme);
    j["dt"] = c.time.dt;
    j["cfl"] = c.time.cfl;
    j["final_time"] = c.time.final_time;
    if (c.materials.empty()) {
        j["materials"] = c.material_set;
    }
    else {
        j["materials"] = json::array();
        for (const auto& m : c.materials)
            j["materials"].push_back(material_json(m));
    }
    j["scenario"] = {{"kind", to_string(c.scenario.kind)},
                     {"omega", c.scenario.omega},
                     {"theta", c.scenario.theta},
                     {"amplitude", c.scenario.ricker.amplitude},
                     {"central_frequency", c.scenario.ricker.central_frequency},
                     {"center", {c.scenario.ricker.center.x(), c.scenario.ricker.center.y()}}};
    j["solver"] = {{"kind", to_string(c.solver.kind)},
                   {"tolerance", c.solver.tolerance},
                   {"max_iterations", c.solver.max_iterations}};
    j["sensors"] = json::array();
    for (const auto& s : c.sensors)
        j["sensors"].push_back(
            {{"name", s.name}, {"position", {s.position.x(), s.position.y()}}, {"kind", to_string(s.kind)}});
    j["output"] = {{"traces", c.output.traces},
                   {"summary", c.output.summary},
                   {"vtu", c.output.vtu},
                   {"snapshot_every", c.output.snapshot_every}};
    return j.dump(2);
}

} // namespace hhowave
