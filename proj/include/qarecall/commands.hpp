#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qarecall/config.hpp"
#include "qarecall/oracle.hpp"

namespace qarecall {

// Every command writes its artifacts into config.output.dir (created if needed) and returns
// what it wrote plus a short human-readable summary. CSV files start with one "# generated"
// timestamp line; everything after it is deterministic for a given config.
struct CommandResult {
    std::vector<std::string> files;
    std::string summary;
};

// "# generated <UTC time>\n"
std::string timestamp_line();

// weights.csv: N rows of N comma-separated Hebbian weights.
CommandResult cmd_learn(const ExperimentConfig& config);

// energy_report.csv: h, E_probe, E_mem_<mu>..., E_flip_<mu>... over the sweep grid.
CommandResult cmd_energy_report(const ExperimentConfig& config);

struct RecallReport {
    CommandResult result;
    std::string engine;
    double h = 0.0;
    std::optional<std::size_t> nearest;
    // oracle: 1 or 0; qa: exact probability of the nearest memory; sa: fraction of restarts.
    double success = 0.0;
    // oracle only
    std::optional<RecallOutcome> outcome;
};

// recall.json, plus outcomes.csv (state, count) for the sampling engines.
RecallReport cmd_recall(const ExperimentConfig& config);

struct SweepRow {
    double h = 0.0;
    double success = 0.0;
    double probability = 0.0;
    std::string classification;
    double h_max = 0.0;
};

struct SweepReport {
    CommandResult result;
    std::vector<SweepRow> rows;
};

// sweep_h.csv: h, success, probability, classification, h_max.
SweepReport cmd_sweep_h(const ExperimentConfig& config);

// radius.csv: n, d_s, d_b, d_of_n, condition, chain, radius_bound.
CommandResult cmd_radius(const ExperimentConfig& config);

// basin_failures.csv: probe, d_s, d_b, h, condition, classification.
CommandResult cmd_basin_verify(const ExperimentConfig& config);

// capacity_pstar.csv (N, x, exact, bound, exact_ge_bound), capacity_tradeoff.csv (f, c1_plus_c2),
// capacity_report.csv (both readings of the bound) and capacity_montecarlo.csv.
CommandResult cmd_capacity(const ExperimentConfig& config);

// montecarlo.csv: N, p, t_frac, trials, successes, rate, predicted, engine.
CommandResult cmd_montecarlo(const ExperimentConfig& config);

// embedding.txt, physical_problem.txt and embed.json (footprint, optional SA solve and decode).
CommandResult cmd_embed(const ExperimentConfig& config);

// qa_gap.csv: s, E0, E1, gap.
CommandResult cmd_qa_gap(const ExperimentConfig& config);

} // namespace qarecall
