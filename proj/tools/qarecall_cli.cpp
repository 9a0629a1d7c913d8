#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qarecall/commands.hpp"
#include "qarecall/config.hpp"
#include "qarecall/errors.hpp"

using namespace qarecall;

namespace {

enum Exit { ok = 0, failure = 1, config_error = 2, cap_error = 3, embedding_error = 4 };

struct Command {
    std::string name;
    std::string description;
    std::function<CommandResult(const ExperimentConfig&)> run;
};

std::vector<Command> commands() {
    return {
        {"learn", "Hebbian weights. weights.csv: N rows of N comma-separated W_ij.", cmd_learn},
        {"energy-report",
         "Memory, flipped-memory and probe energies over the sweep grid. "
         "energy_report.csv: h, E_probe, E_mem_<mu>..., E_flip_<mu>...",
         cmd_energy_report},
        {"recall",
         "One recall at probe.h with engine.name. recall.json; sampling engines also write "
         "outcomes.csv: state, count.",
         [](const ExperimentConfig& c) { return cmd_recall(c).result; }},
        {"sweep-h",
         "Success against h over the sweep grid. sweep_h.csv: h, success, probability, classification, h_max.",
         [](const ExperimentConfig& c) { return cmd_sweep_h(c).result; }},
        {"radius", "Basin condition for the probe. radius.csv: n, d_s, d_b, d_of_n, condition, chain, radius_bound.",
         cmd_radius},
        {"basin-verify",
         "Exhaustive probes around every memory. basin_failures.csv: probe, d_s, d_b, h, condition, classification.",
         cmd_basin_verify},
        {"capacity",
         "Capacity grids and Monte Carlo. capacity_pstar.csv: N, x, exact, bound, exact_ge_bound; "
         "capacity_tradeoff.csv: f, c1_plus_c2; capacity_report.csv: N, t_frac, c2, x, gamma, p_star_exact, "
         "p_star_bound, log_ratio_exact, log_ratio_bound, exponential, f_finite, f_limit; "
         "capacity_montecarlo.csv: as montecarlo.",
         cmd_capacity},
        {"montecarlo",
         "Recall success over random memory sets. montecarlo.csv: N, p, t_frac, trials, successes, rate, "
         "predicted, engine.",
         cmd_montecarlo},
        {"embed",
         "Clique embedding on a Chimera graph. Writes embedding.txt, physical_problem.txt and embed.json.",
         cmd_embed},
        {"qa-gap", "Instantaneous spectrum along the schedule. qa_gap.csv: s, E0, E1, gap.", cmd_qa_gap},
    };
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Associative memory recall with quantum annealing and its classical baselines"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    bool print_config = false;
    app.add_option("-c,--config", config_path, "Experiment config (INI sections)");
    app.add_option("-s,--set", overrides, "Override one key, section.key=value (repeatable)");
    app.add_option("-o,--out", out_dir, "Output directory (output.dir)");
    app.add_flag("--print-config", print_config, "Print the effective config before running");

    const auto all = commands();
    std::vector<CLI::App*> subs;
    for (const auto& cmd : all)
        subs.push_back(app.add_subcommand(cmd.name, cmd.description)->fallthrough());

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return config_error;
    }

    try {
        ExperimentConfig config = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
        for (const auto& o : overrides)
            apply_override(config, o);
        if (!out_dir.empty())
            config.output.dir = out_dir;
        validate_config(config);
        if (print_config)
            std::cout << serialize_config(config) << "\n";

        for (std::size_t i = 0; i < all.size(); ++i) {
            if (!subs[i]->parsed())
                continue;
            const auto result = all[i].run(config);
            std::cout << result.summary << "\n";
            for (const auto& f : result.files)
                std::cout << "wrote " << f << "\n";
        }
        return ok;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const CapError& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return cap_error;
    } catch (const EmbeddingError& e) {
        std::cerr << "embedding failed: " << e.what() << "\n";
        return embedding_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return failure;
    }
}
