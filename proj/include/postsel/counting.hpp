#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "postsel/rng.hpp"
#include "postsel/scenario.hpp"

namespace postsel {

struct RunConfig {
    long long trials = 100000;  // photon pairs per setting
    std::uint64_t seed = 0;
    std::optional<double> visibility;  // overrides the scenario's, if set

    void validate() const {
        if (trials < 1)
            fail(Errc::InvalidProbability, "trials must be at least 1");
        if (visibility && !(*visibility >= 0.0 && *visibility <= 1.0))
            fail(Errc::InvalidVisibility, "visibility " + fmt_g12(*visibility) + " outside [0, 1]");
    }
};

/// Coincidence-count record over a swept transmission, with enough
/// provenance (trials, seed, analytic probabilities) to reproduce it.
struct CountSeries {
    std::string setting;                // e.g. "loss on paths 1,2"
    std::vector<double> parameter;      // swept T values
    std::vector<double> analytic_p;     // postselection probability per value
    std::vector<long long> counts;
    long long trials = 0;
    std::uint64_t seed = 0;
};

/// Binomial draw as a sum of Bernoulli trials, a pure function of
/// (p, trials, seed, stream).
inline long long simulate_counts(double p, const RunConfig& cfg, std::uint64_t stream = 0) {
    cfg.validate();
    if (!(p >= 0.0 && p <= 1.0))
        fail(Errc::InvalidProbability, "probability " + fmt_g12(p) + " outside [0, 1]");
    CounterRng rng(cfg.seed, stream);
    long long count = 0;
    for (long long i = 0; i < cfg.trials; ++i)
        if (rng.uniform01() < p) ++count;
    return count;
}

/// Returns the scenario with cross-path interference damped by V.
inline ScenarioSpec apply_visibility(const ScenarioSpec& scenario, double v) {
    if (!(v >= 0.0 && v <= 1.0))
        fail(Errc::InvalidVisibility, "visibility " + fmt_g12(v) + " outside [0, 1]");
    ScenarioSpec out = scenario;
    out.visibility = v;
    return out;
}

/// Analytic postselection probability of a scenario with extra attenuators
/// of transmission t on the given paths, honoring the scenario visibility.
inline double scenario_loss_probability(const ScenarioSpec& scenario,
                                        const std::vector<int>& lossy_paths, double t,
                                        std::optional<double> visibility = std::nullopt) {
    Circuit circuit = scenario.circuit;
    for (int p : lossy_paths) circuit.elements.push_back(Attenuator{p, t});
    const double v = visibility ? *visibility : scenario.visibility.value_or(1.0);
    return success_probability_damped(circuit, scenario.prepost, scenario.internal_init(), v);
}

/// Monte Carlo sweep: for each grid transmission, attenuate the requested
/// paths, compute the analytic probability, and sample counts from a
/// substream derived from (seed, grid index).
inline CountSeries sweep_loss(const ScenarioSpec& scenario,
                              const std::vector<std::string>& lossy_paths,
                              std::span<const double> T_grid, const RunConfig& cfg) {
    cfg.validate();
    std::vector<int> paths;
    for (const auto& label : lossy_paths) {
        try {
            paths.push_back(scenario.circuit.selection.index_of_label(label));
        } catch (const Error&) {
            fail(Errc::SpaceMismatch, "unknown path '" + label + "' in scenario " + scenario.name);
        }
    }
    for (double t : T_grid)
        if (!(t >= 0.0 && t <= 1.0))
            fail(Errc::InvalidTransmission, "transmission " + fmt_g12(t) + " outside [0, 1]");

    CountSeries series;
    series.setting = "loss on paths ";
    for (size_t i = 0; i < lossy_paths.size(); ++i)
        series.setting += (i ? "," : "") + lossy_paths[i];
    series.trials = cfg.trials;
    series.seed = cfg.seed;
    const std::optional<double> v = cfg.visibility ? cfg.visibility : scenario.visibility;
    for (size_t j = 0; j < T_grid.size(); ++j) {
        const double p = scenario_loss_probability(scenario, paths, T_grid[j], v);
        series.parameter.push_back(T_grid[j]);
        series.analytic_p.push_back(p);
        series.counts.push_back(simulate_counts(p, cfg, static_cast<std::uint64_t>(j)));
    }
    return series;
}

}  // namespace postsel
