// SPDX-License-Identifier: Apache-2.0
#include "hhowave/commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

namespace hhowave {

using nlohmann::json;

namespace {

std::string resolve(const std::string& out_dir, const std::string& path)
{
    if (path.empty() || out_dir.empty() || std::filesystem::path(path).is_absolute())
        return path;
    return (std::filesystem::path(out_dir) / path).string();
}

json parse_json(const std::string& text)
{
    try {
        return json::parse(text);
    }
    catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
}

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

/// Accepts [a, b, c] or {"from": a, "to": b}.
std::vector<int> int_list(const json& j, const char* key)
{
    if (!j.contains(key))
        return {};
    const json& v = j.at(key);
    std::vector<int> out;
    if (v.is_object()) {
        check_keys(v, key, {"from", "to"});
        const int a = v.at("from").get<int>(), b = v.at("to").get<int>();
        for (int i = a; i <= b; ++i)
            out.push_back(i);
        return out;
    }
    if (!v.is_array())
        throw ConfigError(std::string("'") + key + "' must be a list or {from, to}");
    for (const auto& x : v)
        out.push_back(x.get<int>());
    return out;
}

std::vector<SchemeKind> scheme_list(const json& j, const char* key, std::vector<SchemeKind> fallback)
{
    if (!j.contains(key))
        return fallback;
    std::vector<SchemeKind> out;
    for (const auto& x : j.at(key))
        out.push_back(scheme_from_string(x.get<std::string>()));
    return out;
}

// `step_key` names a study-level entry that supplies the step when the base
// run sets neither dt nor cfl.
RunConfig base_of(const json& j, const char* step_key = nullptr)
{
    if (!j.contains("base"))
        throw ConfigError("study config needs a 'base' run configuration");
    json b = j.at("base");
    if (step_key && b.is_object() && !b.contains("dt") && !b.contains("cfl") && j.contains(step_key))
        b["dt"] = j.at(step_key);
    return parse_run_config(b.dump());
}

std::string num(double v)
{
    return format_number(v);
}

} // namespace

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------

RunResult cmd_simulate(const RunConfig& cfg, const std::string& out_dir, Exec exec)
{
    const Simulation sim(cfg, exec);
    const OutputSpec& out = cfg.output;
    double io_seconds = 0.0;
    auto snapshot = [&](const SimState& s) {
        const auto t0 = std::chrono::steady_clock::now();
        std::ostringstream os;
        write_vtu(sim.mesh(), cell_averages(sim.mesh(), sim.system(), s.ut), s.t, os);
        write_file(resolve(out_dir, fmt::format("{}_{:06d}.vtu", out.vtu, s.step)), os.str());
        io_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };
    Simulation::Observer observer;
    if (!out.vtu.empty() && out.snapshot_every > 0)
        observer = [&](const SimState& s) {
            if (s.step % static_cast<std::size_t>(out.snapshot_every) == 0)
                snapshot(s);
        };

    RunResult res = sim.run(observer);
    res.summary.loop_seconds -= io_seconds;
    res.summary.wall_seconds -= io_seconds;
    if (!out.vtu.empty() && (out.snapshot_every <= 0 || res.state.step % out.snapshot_every != 0))
        snapshot(res.state);

    if (!out.traces.empty()) {
        std::ostringstream os;
        write_traces_csv(res.sensors, os);
        write_file(resolve(out_dir, out.traces), os.str());
    }
    if (!out.summary.empty())
        write_file(resolve(out_dir, out.summary), summary_json(res.summary, res.sensors));
    spdlog::info("{} steps in {:.3g} s; energy {:.6g} -> {:.6g}", res.summary.steps, res.summary.wall_seconds,
                 res.summary.initial_energy, res.summary.final_energy);
    return res;
}

// ---------------------------------------------------------------------------

double observed_rate(double e_coarse, double e_fine)
{
    return std::log2(e_coarse / e_fine);
}

ConvergenceStudy parse_convergence_study(const std::string& text)
{
    const json j = parse_json(text);
    check_keys(j, "convergence study", {"base", "levels", "degrees", "report"});
    ConvergenceStudy s;
    s.base = base_of(j);
    s.levels = int_list(j, "levels");
    s.degrees = int_list(j, "degrees");
    s.report = get_or<std::string>(j, "report", s.report);
    s.validate();
    return s;
}

void ConvergenceStudy::validate() const
{
    if (levels.size() < 2)
        throw ConfigError("a convergence study needs at least two levels");
    if (base.mesh.kind != MeshSource::Kind::generate)
        throw ConfigError("a convergence study needs a generated mesh");
    if (base.scenario.kind != ScenarioKind::manufactured)
        throw ConfigError("a convergence study needs the manufactured scenario");
}

std::vector<ConvergenceRow> cmd_converge(const ConvergenceStudy& study, Exec exec)
{
    study.validate();
    const std::vector<int> degrees = study.degrees.empty() ? std::vector<int>{study.base.degree} : study.degrees;
    std::vector<ConvergenceRow> rows;
    for (int k : degrees) {
        for (std::size_t i = 0; i < study.levels.size(); ++i) {
            RunConfig cfg = study.base;
            cfg.degree = k;
            cfg.mesh.gen.level = study.levels[i];
            cfg.sensors.clear();
            const Simulation sim(cfg, exec);
            const RunResult res = sim.run();
            ConvergenceRow r;
            r.degree = k;
            r.level = study.levels[i];
            r.h = res.summary.h;
            r.cells = res.summary.cells;
            r.dofs = res.summary.dofs.total;
            r.dt = res.summary.dt;
            r.error = res.summary.dual_error;
            if (i > 0)
                r.rate = observed_rate(rows.back().error, r.error);
            spdlog::info("k={} level={} error={:.4e} rate={:.3f}", k, r.level, r.error, r.rate);
            rows.push_back(r);
        }
    }
    return rows;
}

CsvTable convergence_table(const std::vector<ConvergenceRow>& rows)
{
    CsvTable t({"degree", "level", "h", "cells", "dofs", "dt", "error", "rate"});
    for (const auto& r : rows)
        t.add({std::to_string(r.degree), std::to_string(r.level), num(r.h), std::to_string(r.cells),
               std::to_string(r.dofs), num(r.dt), num(r.error), std::isnan(r.rate) ? "" : num(r.rate)});
    return t;
}

// ---------------------------------------------------------------------------

CflSweep parse_cfl_sweep(const std::string& text)
{
    const json j = parse_json(text);
    check_keys(j, "CFL sweep", {"families", "degrees", "schemes", "eta_f", "eta_s", "epsilon", "delta",
                                "initial_steps", "max_iterations", "level", "final_time", "criterion", "report"});
    CflSweep s;
    if (j.contains("families")) {
        s.families.clear();
        for (const auto& f : j.at("families"))
            s.families.push_back(mesh_family_from_string(f.get<std::string>()));
    }
    if (j.contains("degrees"))
        s.degrees = int_list(j, "degrees");
    s.schemes = scheme_list(j, "schemes", s.schemes);
    s.eta_f = get_or(j, "eta_f", s.eta_f);
    s.eta_s = get_or(j, "eta_s", s.eta_s);
    auto& b = s.bracket;
    b.epsilon = get_or(j, "epsilon", b.epsilon);
    b.delta = get_or(j, "delta", b.delta);
    b.initial_steps = get_or(j, "initial_steps", b.initial_steps);
    b.max_iterations = get_or(j, "max_iterations", b.max_iterations);
    b.level = get_or(j, "level", b.level);
    b.final_time = get_or(j, "final_time", b.final_time);
    const auto crit = get_or<std::string>(j, "criterion", "increase");
    if (crit == "increase")
        b.criterion = EnergyCriterion::increase;
    else if (crit == "variation")
        b.criterion = EnergyCriterion::variation;
    else
        throw ConfigError("unknown energy criterion '" + crit + "'");
    s.report = get_or<std::string>(j, "report", s.report);
    b.validate();
    for (auto sk : s.schemes)
        if (is_implicit(sk))
            throw ConfigError("CFL sweeps apply to explicit schemes only");
    if (s.families.empty() || s.degrees.empty() || s.schemes.empty() || s.eta_f.empty() || s.eta_s.empty())
        throw ConfigError("CFL sweep has an empty axis");
    return s;
}

std::vector<CflRow> cmd_cfl(const CflSweep& sweep, Exec exec)
{
    std::vector<CflRow> rows;
    for (auto family : sweep.families)
        for (double ef : sweep.eta_f)
            for (double es : sweep.eta_s)
                for (int k : sweep.degrees)
                    for (auto sk : sweep.schemes) {
                        CflRow r;
                        r.problem = CflProblem{family, k, sk, ef, es};
                        r.estimate = cfl_bracket(r.problem, sweep.bracket, exec);
                        spdlog::info("{} k={} {} eta=({}, {}): CFL* = {:.4f}", to_string(family), k, to_string(sk),
                                     ef, es, r.estimate.cfl_stable);
                        rows.push_back(r);
                    }
    auto same_setup = [](const CflProblem& a, const CflProblem& b) {
        return a.family == b.family && a.eta_f == b.eta_f && a.eta_s == b.eta_s;
    };
    for (auto& r : rows) {
        for (const auto& o : rows)
            if (same_setup(r.problem, o.problem) && o.problem.degree == r.problem.degree &&
                o.problem.scheme == sweep.schemes.front()) {
                r.scheme_ratio = r.estimate.cfl_stable / o.estimate.cfl_stable;
                break;
            }
        for (const auto& o : rows)
            if (same_setup(r.problem, o.problem) && o.problem.scheme == r.problem.scheme &&
                o.problem.degree == sweep.degrees.front()) {
                r.degree_ratio = r.estimate.cfl_stable / o.estimate.cfl_stable;
                break;
            }
    }
    return rows;
}

CsvTable cfl_table(const std::vector<CflRow>& rows)
{
    CsvTable t({"family", "degree", "scheme", "eta_f", "eta_s", "h", "stable_steps", "unstable_steps",
                "cfl_stable", "cfl_unstable", "scheme_ratio", "degree_ratio"});
    auto opt = [](double v) { return std::isnan(v) ? std::string() : format_number(v); };
    for (const auto& r : rows)
        t.add({to_string(r.problem.family), std::to_string(r.problem.degree), to_string(r.problem.scheme),
               num(r.problem.eta_f), num(r.problem.eta_s), num(r.estimate.h), std::to_string(r.estimate.stable_steps),
               std::to_string(r.estimate.unstable_steps), num(r.estimate.cfl_stable), num(r.estimate.cfl_unstable),
               opt(r.scheme_ratio), opt(r.degree_ratio)});
    return t;
}

// ---------------------------------------------------------------------------

double efficiency_time_step(double dt0, int level, int degree, int order)
{
    return std::exp2(-static_cast<double>(level) * (degree + 1) / (order + 1)) * dt0;
}

double efficiency_tolerance(double tol0, int level, int degree)
{
    return std::exp2(-static_cast<double>(level) * (degree + 1)) * tol0;
}

void EfficiencyConfig::validate() const
{
    if (!(dt0 > 0) || !(tol0 > 0))
        throw ConfigError("efficiency study needs dt0 > 0 and tol0 > 0");
    if (levels.empty() || schemes.empty())
        throw ConfigError("efficiency study needs at least one level and one scheme");
    if (base.mesh.kind != MeshSource::Kind::generate)
        throw ConfigError("efficiency study needs a generated mesh");
    if (base.scenario.kind != ScenarioKind::manufactured)
        throw ConfigError("efficiency study needs the manufactured scenario");
    for (const auto& [s, c] : explicit_cfl)
        if (is_implicit(s) || !(c > 0))
            throw ConfigError("explicit_cfl entries need an explicit scheme and a positive value");
}

EfficiencyConfig parse_efficiency_config(const std::string& text)
{
    const json j = parse_json(text);
    check_keys(j, "efficiency study", {"base", "schemes", "degrees", "levels", "dt0", "tol0", "explicit_cfl", "report"});
    EfficiencyConfig c;
    c.base = base_of(j, "dt0");
    c.schemes = scheme_list(j, "schemes", c.schemes);
    c.degrees = int_list(j, "degrees");
    if (j.contains("levels"))
        c.levels = int_list(j, "levels");
    c.dt0 = get_or(j, "dt0", 0.0);
    c.tol0 = get_or(j, "tol0", 0.0);
    if (j.contains("explicit_cfl")) {
        if (!j.at("explicit_cfl").is_object())
            throw ConfigError("explicit_cfl must map scheme names to CFL values");
        for (const auto& item : j.at("explicit_cfl").items())
            c.explicit_cfl[scheme_from_string(item.key())] = item.value().get<double>();
    }
    c.report = get_or<std::string>(j, "report", c.report);
    c.validate();
    return c;
}

std::vector<EfficiencyRow> cmd_efficiency(const EfficiencyConfig& ec, Exec exec)
{
    ec.validate();
    const std::vector<int> degrees = ec.degrees.empty() ? std::vector<int>{ec.base.degree} : ec.degrees;
    std::vector<EfficiencyRow> rows;
    for (auto sk : ec.schemes)
        for (int k : degrees)
            for (int level : ec.levels) {
                const ButcherTableau tab = tableau(sk);
                RunConfig cfg = ec.base;
                cfg.degree = k;
                cfg.mesh.gen.level = level;
                cfg.sensors.clear();
                cfg.time.scheme = sk;
                cfg.stab = tab.implicit() ? StabilizationConfig::implicit_default()
                                          : StabilizationConfig::explicit_default();
                const auto cap = ec.explicit_cfl.find(sk);
                if (cap != ec.explicit_cfl.end()) {
                    cfg.time.dt = 0.0;
                    cfg.time.cfl = cap->second;
                }
                else {
                    cfg.time.dt = efficiency_time_step(ec.dt0, level, k, tab.nominal_order());
                }
                const double tol = efficiency_tolerance(ec.tol0, level, k);
                if (tab.implicit() && cfg.solver.kind != SolverConfig::Kind::direct)
                    cfg.solver.tolerance = tol;
                const Simulation sim(cfg, exec);
                const RunResult res = sim.run();
                EfficiencyRow r;
                r.scheme = to_string(sk);
                r.degree = k;
                r.level = level;
                r.h = res.summary.h;
                r.dt = res.summary.dt;
                r.steps = res.summary.steps;
                r.tolerance = tab.implicit() && cfg.solver.kind != SolverConfig::Kind::direct ? tol : 0.0;
                r.global_dofs = tab.implicit() ? res.summary.dofs.global : res.summary.dofs.cell_dofs;
                r.error = res.summary.dual_error;
                r.wall_seconds = res.summary.wall_seconds;
                spdlog::info("{} k={} level={}: error {:.3e} in {:.3g} s", r.scheme, k, level, r.error,
                             r.wall_seconds);
                rows.push_back(r);
            }
    return rows;
}

CsvTable efficiency_table(const std::vector<EfficiencyRow>& rows)
{
    CsvTable t({"scheme", "degree", "level", "h", "dt", "steps", "tolerance", "global_dofs", "error", "wall_seconds"});
    for (const auto& r : rows)
        t.add({r.scheme, std::to_string(r.degree), std::to_string(r.level), num(r.h), num(r.dt),
               std::to_string(r.steps), num(r.tolerance), std::to_string(r.global_dofs), num(r.error),
               num(r.wall_seconds)});
    return t;
}

} // namespace hhowave
