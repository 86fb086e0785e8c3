// SPDX-License-Identifier: Apache-2.0
#include "hhowave/simulation.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <memory>

#include <spdlog/spdlog.h>

namespace hhowave {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool ends_with(const std::string& s, const std::string& suffix)
{
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

PolyMesh read_any(const std::string& path, std::vector<std::string>* names)
{
    if (ends_with(path, ".msh"))
        return read_msh(path, names);
    std::ifstream in(path);
    if (!in)
        throw MeshError("cannot open mesh file '" + path + "'");
    return read_polymesh(in);
}

ManufacturedCase manufactured_case(const MaterialTable& mats, const ScenarioConfig& sc)
{
    ManufacturedCase mc = ManufacturedCase::spatial_dominant(mats);
    mc.omega = sc.omega;
    mc.theta = sc.theta;
    return mc;
}

double first_fluid_speed(const MaterialTable& mats)
{
    for (const auto& m : mats.entries)
        if (m.kind == Subdomain::fluid)
            return m.fluid.cp();
    throw ConfigError("the Ricker scenario needs a fluid material");
}

} // namespace

LoadedMesh load_mesh(const MeshSource& src)
{
    LoadedMesh out;
    switch (src.kind) {
    case MeshSource::Kind::generate:
        out.mesh = generate(src.gen);
        out.h = src.gen.nominal_h();
        return out;
    case MeshSource::Kind::file:
        out.mesh = read_any(src.path, &out.material_names);
        break;
    case MeshSource::Kind::merge: {
        std::vector<std::string> fn, sn;
        const PolyMesh fluid = read_any(src.fluid_path, &fn);
        PolyMesh solid = read_any(src.solid_path, &sn);
        if (fn.empty() != sn.empty())
            throw MeshError("both merged meshes must carry physical names, or neither");
        if (!fn.empty()) {
            // Solid material ids index the concatenated name list.
            PolygonSoup soup = solid.to_soup();
            for (int& m : soup.materials)
                m += static_cast<int>(fn.size());
            solid = PolyMesh::build(std::move(soup));
        }
        out.mesh = merge_nonconforming(fluid, solid);
        out.material_names = fn;
        out.material_names.insert(out.material_names.end(), sn.begin(), sn.end());
        break;
    }
    }
    out.h = out.mesh.max_diameter();
    return out;
}

DofSummary dof_summary(const BlockSystem& sys, bool implicit)
{
    DofSummary d;
    d.cell_dofs = sys.layout.num_cell_dofs();
    d.face_dofs = sys.layout.num_face_dofs();
    d.total = d.cell_dofs + d.face_dofs;
    d.global = implicit ? d.face_dofs : 0;
    d.reduction = d.total ? 1.0 - static_cast<double>(d.face_dofs) / static_cast<double>(d.total) : 0.0;
    return d;
}

Simulation::Simulation(RunConfig cfg, Exec exec)
    : cfg_(std::move(cfg)), exec_(exec)
{
    cfg_.validate();
    mesh_ = load_mesh(cfg_.mesh);
    mats_ = cfg_.material_table(mesh_.material_names);
    mats_.check(mesh_.mesh);

    const auto t0 = Clock::now();
    sys_ = assemble(mesh_.mesh, mats_, cfg_.hho(), exec_);
    assembly_seconds_ = seconds_since(t0);

    double dt = cfg_.time.dt;
    if (!(dt > 0))
        dt = cfg_.time.cfl * mesh_.h / mats_.max_speed();
    steps_ = static_cast<std::size_t>(std::ceil(cfg_.time.final_time / dt - 1e-9));
    steps_ = std::max<std::size_t>(steps_, 1);
    dt_ = cfg_.time.final_time / static_cast<double>(steps_);
    spdlog::info("{} cells, {} faces, {} unknowns; {} steps of {:.4g}", mesh_.mesh.num_cells(),
                 mesh_.mesh.num_faces(), sys_.layout.num_dofs(), steps_, dt_);
}

RunResult Simulation::run(const Observer& observer) const
{
    const PolyMesh& mesh = mesh_.mesh;
    const ButcherTableau tab = tableau(cfg_.time.scheme);
    RunResult res;
    RunSummary& sum = res.summary;
    sum.scheme = to_string(cfg_.time.scheme);
    sum.degree = cfg_.degree;
    sum.order = to_string(cfg_.stab.mode);
    sum.cells = mesh.num_cells();
    sum.faces = mesh.num_faces();
    sum.dofs = dof_summary(sys_, tab.implicit());
    sum.h = mesh_.h;
    sum.dt = dt_;
    sum.cfl = mats_.max_speed() * dt_ / mesh_.h;
    sum.final_time = cfg_.time.final_time;

    // Initial state and data.
    SimState st;
    st.ut = Vector::Zero(static_cast<Eigen::Index>(sys_.layout.num_cell_dofs()));
    std::unique_ptr<ManufacturedCase> mc;
    std::unique_ptr<SourceAssembler> source;
    switch (cfg_.scenario.kind) {
    case ScenarioKind::manufactured:
        mc = std::make_unique<ManufacturedCase>(manufactured_case(mats_, cfg_.scenario));
        project_fields(mesh, sys_, mc->exact(), 0.0, st.ut, nullptr, exec_);
        source = std::make_unique<SourceAssembler>(mesh, sys_, mc->data(), exec_);
        break;
    case ScenarioKind::ricker: {
        RickerConfig rc = cfg_.scenario.ricker;
        rc.fluid_speed = first_fluid_speed(mats_);
        project_fields(mesh, sys_, rc.initial(), 0.0, st.ut, nullptr, exec_);
        break;
    }
    case ScenarioKind::zero:
        break;
    }
    SourceFn src;
    if (source && !source->empty())
        src = [&source](double t) { return (*source)(t); };

    for (const auto& spec : cfg_.sensors) {
        SensorRecord rec;
        rec.probe = bind_sensor(mesh, spec);
        res.sensors.push_back(std::move(rec));
    }

    const auto t_setup = Clock::now();
    std::unique_ptr<CondensedFactorization> fact;
    std::unique_ptr<ExplicitStepper> erk;
    std::unique_ptr<ImplicitStepper> dirk;
    if (tab.implicit()) {
        fact = std::make_unique<CondensedFactorization>(
            build_condensed(mesh, sys_, tab.diagonal(), dt_, cfg_.solver, exec_));
        dirk = std::make_unique<ImplicitStepper>(mesh, sys_, tab, *fact, exec_);
        st.uf = dirk->face_values(st.ut);
        sum.schur_nonzeros = fact->nonzeros();
    }
    else {
        erk = std::make_unique<ExplicitStepper>(mesh, sys_, tab, exec_);
        st.uf = erk->face_values(st.ut);
    }
    sum.setup_seconds = assembly_seconds_ + seconds_since(t_setup);

    auto record = [&](const SimState& s) {
        res.energy.push_back(energy(sys_, s.ut));
        for (auto& rec : res.sensors) {
            rec.trace.time.push_back(s.t);
            rec.trace.values.push_back(rec.probe.sample(mesh, sys_, s));
            if (rec.probe.spec.kind == SensorKind::interface) {
                const CouplingErrors ce = coupling_errors(mesh, sys_, s, rec.probe);
                rec.max_kinematic = std::max(rec.max_kinematic, ce.kinematic);
                rec.max_dynamic = std::max(rec.max_dynamic, ce.dynamic);
            }
        }
        if (observer)
            observer(s);
    };
    record(st);

    const auto t_loop = Clock::now();
    for (std::size_t n = 0; n < steps_; ++n) {
        if (dirk)
            dirk->step(st, dt_, src);
        else
            erk->step(st, dt_, src);
        st.t = static_cast<double>(n + 1) * dt_;
        record(st);
    }
    sum.loop_seconds = seconds_since(t_loop);
    sum.wall_seconds = sum.setup_seconds + sum.loop_seconds;
    sum.steps = steps_;
    sum.initial_energy = res.energy.front();
    sum.final_energy = res.energy.back();
    if (fact)
        sum.last_solver_iterations = fact->last_iterations();
    if (mc)
        sum.dual_error = l2_error_dual(mesh, sys_, st.ut, mc->exact(), st.t);
    res.state = std::move(st);
    return res;
}

} // namespace hhowave
