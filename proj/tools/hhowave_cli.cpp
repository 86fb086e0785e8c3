// SPDX-License-Identifier: Apache-2.0
// Command-line driver: simulate, converge, cfl, efficiency.
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <omp.h>

#include <CLI11.hpp>
#include <spdlog/cfg/env.h>
#include <spdlog/spdlog.h>

#include "hhowave/commands.hpp"

using namespace hhowave;

namespace {

enum ExitCode { ok = 0, other = 1, config_error = 2, instability = 3, solver_failure = 4 };

struct Common {
    std::string config;
    std::string mesh;
    std::string out = ".";
    int threads = 0;
};

void apply_mesh_override(RunConfig& cfg, const std::string& mesh)
{
    if (mesh.empty())
        return;
    cfg.mesh.kind = MeshSource::Kind::file;
    cfg.mesh.path = mesh;
}

void write_report(const CsvTable& table, const std::string& out_dir, const std::string& name)
{
    std::ostringstream os;
    table.write(os);
    const auto path = std::filesystem::path(name).is_absolute() ? std::filesystem::path(name)
                                                                 : std::filesystem::path(out_dir) / name;
    write_file(path.string(), os.str());
    std::cout << os.str();
}

} // namespace

int main(int argc, char** argv)
{
    spdlog::cfg::load_env_levels(); // SPDLOG_LEVEL=debug, warn, ...

    CLI::App app{"Hybrid high-order elasto-acoustic wave solver"};
    app.require_subcommand(1);
    Common opt;
    auto add_common = [&opt](CLI::App* sub) {
        sub->add_option("--config", opt.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out, "output directory");
        sub->add_option("--threads", opt.threads, "OpenMP threads (0: runtime default)")->check(CLI::NonNegativeNumber);
    };
    auto* simulate = app.add_subcommand("simulate", "run one configuration");
    add_common(simulate);
    simulate->add_option("--mesh", opt.mesh, "mesh file overriding the configured source")->check(CLI::ExistingFile);
    auto* converge = app.add_subcommand("converge", "spatial convergence table");
    add_common(converge);
    auto* cfl = app.add_subcommand("cfl", "CFL bracketing sweep");
    add_common(cfl);
    auto* efficiency = app.add_subcommand("efficiency", "error versus wall time");
    add_common(efficiency);

    CLI11_PARSE(app, argc, argv);
    if (opt.threads > 0)
        omp_set_num_threads(opt.threads);

    try {
        const std::string text = read_text_file(opt.config);
        if (*simulate) {
            RunConfig cfg = parse_run_config(text);
            apply_mesh_override(cfg, opt.mesh);
            cfg.validate();
            cmd_simulate(cfg, opt.out);
        }
        else if (*converge) {
            const auto study = parse_convergence_study(text);
            write_report(convergence_table(cmd_converge(study)), opt.out, study.report);
        }
        else if (*cfl) {
            const auto sweep = parse_cfl_sweep(text);
            write_report(cfl_table(cmd_cfl(sweep)), opt.out, sweep.report);
        }
        else if (*efficiency) {
            const auto ec = parse_efficiency_config(text);
            write_report(efficiency_table(cmd_efficiency(ec)), opt.out, ec.report);
        }
    }
    catch (const ConfigError& e) {
        spdlog::error("configuration: {}", e.what());
        return config_error;
    }
    catch (const MeshError& e) {
        spdlog::error("mesh: {}", e.what());
        return config_error;
    }
    catch (const InstabilityError& e) {
        spdlog::error("unstable at step {}: {}", e.step(), e.what());
        return instability;
    }
    catch (const SolverError& e) {
        spdlog::error("solver: {}", e.what());
        return solver_failure;
    }
    catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return other;
    }
    return ok;
}
