// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

#include "hhowave/scenarios.hpp"

namespace hhowave {

namespace {
constexpr int max_doublings = 12;
}

void CflBracketConfig::validate() const
{
    if (!(epsilon > 0))
        throw ConfigError("CFL bracketing needs epsilon > 0");
    if (!(delta > 0 && delta < 1))
        throw ConfigError("CFL bracketing needs 0 < delta < 1");
    if (level < 0 || !(final_time > 0) || max_iterations < 1)
        throw ConfigError("invalid CFL bracketing level, final time or iteration limit");
}

CflBracketer::CflBracketer(const CflProblem& problem, const CflBracketConfig& cfg, Exec exec)
    : problem_(problem), cfg_(cfg), exec_(exec)
{
    cfg_.validate();
    if (is_implicit(problem.scheme))
        throw ConfigError("CFL bracketing applies to explicit schemes");
    const auto spec = manufactured_geometry(problem.family, cfg.level);
    mesh_ = generate(spec);
    mats_ = builtin_materials("academic");
    HhoConfig hc;
    hc.degree = problem.degree;
    hc.stab = StabilizationConfig::explicit_default();
    hc.stab.eta_f = problem.eta_f;
    hc.stab.eta_s = problem.eta_s;
    sys_ = assemble(mesh_, mats_, hc, exec);
    // Initial condition only: homogeneous boundary data and no source.
    const auto mc = ManufacturedCase::spatial_dominant(mats_);
    project_fields(mesh_, sys_, mc.exact(), 0.0, u0_, nullptr, exec);
    h_ = spec.nominal_h();
    c_sharp_ = mats_.max_speed();
}

double CflBracketer::cfl_of(std::size_t steps) const
{
    return c_sharp_ * (cfg_.final_time / static_cast<double>(steps)) / h_;
}

StabilityRun CflBracketer::run(std::size_t steps) const
{
    const ExplicitStepper stepper(mesh_, sys_, tableau(problem_.scheme), exec_);
    const double dt = cfg_.final_time / static_cast<double>(steps);
    SimState state;
    state.ut = u0_;
    std::vector<double> e{energy(sys_, state.ut)};
    StabilityRun out;
    out.stable = true;
    const auto measure = cfg_.criterion == EnergyCriterion::variation ? energy_variation : energy_increase;
    try {
        for (std::size_t n = 0; n < steps; ++n) {
            stepper.step(state, dt);
            e.push_back(energy(sys_, state.ut));
            out.steps_done = n + 1;
            // Only the newest entry can change the running maximum.
            const double inc = std::max(measure({e.front(), e.back()}), measure({e[e.size() - 2], e.back()}));
            out.measure = std::max(out.measure, inc);
            if (!(out.measure <= cfg_.epsilon)) {
                out.stable = false;
                break;
            }
        }
    }
    catch (const InstabilityError&) {
        out.stable = false;
        out.measure = std::numeric_limits<double>::infinity();
    }
    return out;
}

CflEstimate CflBracketer::bracket() const
{
    CflEstimate est;
    est.c_sharp = c_sharp_;
    est.h = h_;
    std::size_t n = cfg_.initial_steps;
    const bool derived = n == 0;
    if (derived) {
        const double guess = 0.5 / (problem_.degree + 1);
        n = static_cast<std::size_t>(std::ceil(c_sharp_ * cfg_.final_time / (guess * h_)));
    }
    int iter = 0;
    while (true) {
        const auto r = run(n);
        ++est.runs;
        if (r.stable)
            break;
        if (!derived)
            throw Error("initial CFL run with " + std::to_string(n) + " steps is unstable; increase the step count");
        if (++iter > std::min(cfg_.max_iterations, max_doublings))
            throw Error("CFL bracketing: no stable step count found");
        n *= 2;
    }
    spdlog::debug("cfl: first stable run with N={} (CFL {:.4f})", n, cfl_of(n));
    while (true) {
        if (++iter > cfg_.max_iterations)
            throw Error("CFL bracketing: iteration limit reached");
        const std::size_t dec = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(cfg_.delta * n)));
        if (dec >= n)
            throw Error("CFL bracketing: step count reached zero while still stable");
        const std::size_t trial = n - dec;
        const auto r = run(trial);
        ++est.runs;
        if (!r.stable) {
            est.stable_steps = n;
            est.unstable_steps = trial;
            break;
        }
        n = trial;
    }
    est.cfl_stable = cfl_of(est.stable_steps);
    est.cfl_unstable = cfl_of(est.unstable_steps);
    return est;
}

CflEstimate cfl_bracket(const CflProblem& problem, const CflBracketConfig& cfg, Exec exec)
{
    return CflBracketer(problem, cfg, exec).bracket();
}

} // namespace hhowave
