// Serial reference vs OpenMP kernels on the manufactured cartesian mesh.
// The range argument is the refinement level.
#include <benchmark/benchmark.h>

#include <map>
#include <memory>

#include "hhowave/hho_core.hpp"
#include "hhowave/materials.hpp"
#include "hhowave/mesh.hpp"
#include "hhowave/timestep.hpp"

using namespace hhowave;

namespace {

struct Fixture {
    PolyMesh mesh;
    MaterialTable materials;
    HhoConfig cfg;
    BlockSystem sys;

    explicit Fixture(int level)
        : mesh(generate(manufactured_geometry(MeshFamily::cartesian, level))),
          materials(builtin_materials("academic")),
          sys(assemble(mesh, materials, cfg, Exec::serial))
    {
    }
};

const Fixture& fixture(int level)
{
    static std::map<int, std::unique_ptr<Fixture>> cache;
    auto& f = cache[level];
    if (!f)
        f = std::make_unique<Fixture>(level);
    return *f;
}

Exec exec_of(const benchmark::State& st) { return st.range(1) ? Exec::parallel : Exec::serial; }

void BM_assemble(benchmark::State& st)
{
    const Fixture& f = fixture(static_cast<int>(st.range(0)));
    for (auto _ : st)
        benchmark::DoNotOptimize(assemble(f.mesh, f.materials, f.cfg, exec_of(st)));
}

void BM_apply_cell_rows(benchmark::State& st)
{
    const Fixture& f = fixture(static_cast<int>(st.range(0)));
    const Vector ut = Vector::Random(static_cast<Eigen::Index>(f.sys.layout.num_cell_dofs()));
    const Vector uf = Vector::Random(static_cast<Eigen::Index>(f.sys.layout.num_face_dofs()));
    for (auto _ : st)
        benchmark::DoNotOptimize(apply_cell_rows(f.mesh, f.sys, ut, uf, exec_of(st)));
}

void BM_explicit_step(benchmark::State& st)
{
    const Fixture& f = fixture(static_cast<int>(st.range(0)));
    const ExplicitStepper stepper(f.mesh, f.sys, tableau(SchemeKind::erk4), exec_of(st));
    SimState s;
    s.ut = Vector::Random(static_cast<Eigen::Index>(f.sys.layout.num_cell_dofs()));
    s.uf = stepper.face_values(s.ut);
    for (auto _ : st) {
        stepper.step(s, 1e-4);
        benchmark::ClobberMemory();
    }
}

// Second argument: 0 serial, 1 OpenMP.
#define HHOWAVE_BENCH(fn) BENCHMARK(fn)->ArgsProduct({{3, 5}, {0, 1}})->Unit(benchmark::kMillisecond)
HHOWAVE_BENCH(BM_assemble);
HHOWAVE_BENCH(BM_apply_cell_rows);
HHOWAVE_BENCH(BM_explicit_step);

} // namespace

BENCHMARK_MAIN();
