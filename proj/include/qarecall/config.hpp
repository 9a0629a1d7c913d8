#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qarecall/annealer_sa.hpp"

namespace qarecall {

// Flat INI-style experiment description. Unset paths are empty strings.
struct ExperimentConfig {
    struct Memories {
        std::string path;
        bool operator==(const Memories&) const = default;
    } memories;

    struct Probe {
        std::string pattern;
        // Empty means every site.
        std::vector<std::size_t> mask;
        double h = 0.5;
        bool operator==(const Probe&) const = default;
    } probe;

    // oracle, qa or sa
    std::string engine = "oracle";

    struct Sweep {
        double start = 0.03125;
        double stop = 1.2;
        double step = 0.03125;
        bool operator==(const Sweep&) const = default;
    } sweep;

    struct Qa {
        double t_anneal = 100.0;
        std::size_t steps = 2000;
        std::string schedule_a;
        std::string schedule_b;
        std::size_t gap_grid = 101;
        bool operator==(const Qa&) const = default;
    } qa;

    struct Sa {
        double t_initial = 5.0;
        double t_final = 0.02;
        std::size_t sweeps = 1000;
        std::string cooling = "geometric";
        std::size_t restarts = 100;
        bool operator==(const Sa&) const = default;
    } sa;

    struct Run {
        std::uint64_t seed = 1;
        std::size_t shots = 100;
        // Score a sampled h as 1 when more than half the shots recall, else 0.
        bool majority = false;
        bool operator==(const Run&) const = default;
    } run;

    struct Basin {
        // Negative means radius_bound(N).
        long max_d = -1;
        // Zero means 0.5 * h_max_generic per probe.
        double h = 0.0;
        bool operator==(const Basin&) const = default;
    } basin;

    struct Capacity {
        std::size_t n_max = 64;
        double f_step = 0.01;
        std::size_t n = 12;
        std::vector<std::size_t> p = {2, 3, 4};
        double t_frac = 0.25;
        double c2 = 0.0;
        std::size_t trials = 2000;
        std::string engine = "oracle";
        bool operator==(const Capacity&) const = default;
    } capacity;

    struct Embed {
        std::size_t m = 8;
        // Synthetic dead qubits when no graph file is given.
        std::size_t defects = 36;
        std::string graph;
        double chain_strength = 0.0;
        bool solve = true;
        bool operator==(const Embed&) const = default;
    } embed;

    struct Output {
        std::string dir = "out";
        bool operator==(const Output&) const = default;
    } output;

    bool operator==(const ExperimentConfig&) const = default;

    SASchedule sa_schedule() const;
};

// `source` names the text in error messages ("<source>:<line>: ...").
// Throws ConfigError for syntax errors, unknown sections or keys, and invalid values.
ExperimentConfig parse_config(std::string_view text, const std::string& source = "config");
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& config);

// Applies one "section.key=value" override.
void apply_override(ExperimentConfig& config, const std::string& assignment);

// Checks cross-field rules (sweep step > 0, known engine, ...). Throws ConfigError.
void validate_config(const ExperimentConfig& config);

} // namespace qarecall
