#include "qarecall/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "qarecall/annealer_q.hpp"
#include "qarecall/annealer_sa.hpp"
#include "qarecall/attraction.hpp"
#include "qarecall/capacity.hpp"
#include "qarecall/chimera.hpp"
#include "qarecall/errors.hpp"
#include "qarecall/format.hpp"

namespace qarecall {

namespace fs = std::filesystem;
using nlohmann::json;

std::string timestamp_line() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return std::string("# generated ") + buf + "\n";
}

namespace {

std::string write_file(const ExperimentConfig& c, const std::string& name, const std::string& body, bool csv) {
    fs::create_directories(c.output.dir);
    const auto path = (fs::path(c.output.dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    if (csv)
        out << timestamp_line();
    out << body;
    return path;
}

MemorySet memories_of(const ExperimentConfig& c) {
    if (c.memories.path.empty())
        throw ConfigError("memories.path: required by this command");
    try {
        return load_memory_set(c.memories.path);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("memories.path: ") + e.what());
    }
}

ProbeSpec probe_of(const ExperimentConfig& c, const MemorySet& memories, double h) {
    if (c.probe.pattern.empty())
        throw ConfigError("probe.pattern: required by this command");
    SpinVector pattern;
    try {
        pattern = SpinVector::parse(c.probe.pattern);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("probe.pattern: ") + e.what());
    }
    if (pattern.size() != memories.length())
        throw ConfigError("probe.pattern: length " + std::to_string(pattern.size()) + " differs from memory length " +
                          std::to_string(memories.length()));
    try {
        if (c.probe.mask.empty())
            return ProbeSpec(pattern, h);
        return ProbeSpec(pattern, c.probe.mask, h);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("probe: ") + e.what());
    }
}

std::vector<double> sweep_grid(const ExperimentConfig& c) {
    std::vector<double> grid;
    for (std::size_t k = 0;; ++k) {
        const double h = c.sweep.start + static_cast<double>(k) * c.sweep.step;
        if (h > c.sweep.stop + 1e-12)
            break;
        grid.push_back(h);
    }
    return grid;
}

AnnealSchedule schedule_of(const ExperimentConfig& c) {
    if (!c.qa.schedule_a.empty())
        return load_schedule(c.qa.schedule_a, c.qa.schedule_b, c.qa.t_anneal);
    return AnnealSchedule::linear(c.qa.t_anneal);
}

void check_engine_cap(const std::string& engine, std::size_t n) {
    if (engine == "qa" && n > kEvolveMaxSpins)
        throw CapError("qa", n, kEvolveMaxSpins);
    if (engine == "oracle" && n > kOracleMaxSpins)
        throw CapError("oracle", n, kOracleMaxSpins);
}

double field_bound(const WeightMatrix& w, const ProbeSpec& probe, const MemorySet& memories,
                   std::optional<std::size_t> nearest) {
    if (!nearest || hamming(probe.pattern, memories[*nearest], probe.mask) == 0)
        return std::numeric_limits<double>::quiet_NaN();
    return h_max_generic(w, probe, memories[*nearest]);
}

std::string fmt_or_nan(double v) { return std::isnan(v) ? "nan" : fmt_double(v); }

json states_json(const std::vector<SpinVector>& states) {
    json out = json::array();
    for (const auto& s : states)
        out.push_back(s.str());
    return out;
}

// One recall at field h; shared by recall and sweep-h.
struct SingleRecall {
    double probability = 0.0;  // see RecallReport::success
    std::optional<RecallOutcome> outcome;
    OutcomeCounts counts;
    json detail;
};

SingleRecall recall_once(const ExperimentConfig& c, const MemorySet& memories, const WeightMatrix& w,
                         const ProbeSpec& probe, std::optional<std::size_t> nearest, std::uint64_t seed) {
    SingleRecall r;
    const auto problem = build_problem(w, probe);
    const SpinVector* target = nearest ? &memories[*nearest] : nullptr;
    if (c.engine == "oracle") {
        auto outcome = classify_recall(ground_set(problem), memories, probe);
        r.probability = outcome.success() ? 1.0 : 0.0;
        r.detail["classification"] = to_string(outcome.classification);
        r.detail["ground_energy"] = outcome.recalled.energy;
        r.detail["ground_states"] = states_json(outcome.recalled.states);
        r.detail["recalled_index"] = outcome.recalled_index ? json(*outcome.recalled_index) : json(nullptr);
        r.outcome = std::move(outcome);
    } else if (c.engine == "qa") {
        const auto result = evolve(problem, schedule_of(c), c.qa.steps);
        r.counts = sample(result, c.run.shots, seed);
        r.probability = target ? result.probability(*target) : 0.0;
        std::size_t hits = 0;
        for (const auto& oc : r.counts)
            if (target && oc.state == *target)
                hits = oc.count;
        r.detail["exact_probability"] = r.probability;
        r.detail["sampled_fraction"] = static_cast<double>(hits) / static_cast<double>(c.run.shots);
        r.detail["modal_state"] = result.modal_state().str();
        r.detail["norm_drift"] = result.norm_drift;
        r.detail["problem_energy"] = result.problem_energy;
    } else {
        const auto sa = sa_sample(problem, c.sa_schedule(), c.sa.restarts, seed);
        r.counts = sa.counts;
        std::size_t hits = 0;
        for (const auto& oc : r.counts)
            if (target && oc.state == *target)
                hits = oc.count;
        r.probability = static_cast<double>(hits) / static_cast<double>(c.sa.restarts);
        r.detail["best_state"] = sa.best.str();
        r.detail["best_energy"] = sa.best_energy;
        r.detail["acceptance_rate"] = sa.acceptance_rate();
    }
    return r;
}

} // namespace

CommandResult cmd_learn(const ExperimentConfig& c) {
    const auto memories = memories_of(c);
    const auto w = hebbian_learn(memories);
    std::string body;
    for (std::size_t i = 0; i < w.size(); ++i) {
        for (std::size_t j = 0; j < w.size(); ++j)
            body += (j ? "," : "") + fmt_double(w(i, j));
        body += "\n";
    }
    CommandResult r;
    r.files.push_back(write_file(c, "weights.csv", body, true));
    r.summary = std::to_string(memories.size()) + " memories of length " + std::to_string(memories.length()) +
                (memories.mutually_orthogonal() ? ", mutually orthogonal" : ", not orthogonal");
    return r;
}

CommandResult cmd_energy_report(const ExperimentConfig& c) {
    const auto memories = memories_of(c);
    const auto probe = probe_of(c, memories, c.probe.h);
    const auto grid = sweep_grid(c);
    const auto report = energy_report(memories, probe, grid);
    CommandResult r;
    r.files.push_back(write_file(c, "energy_report.csv", report.to_csv(), true));
    r.summary = "energy report over " + std::to_string(grid.size()) + " field values";
    return r;
}

RecallReport cmd_recall(const ExperimentConfig& c) {
    const auto memories = memories_of(c);
    check_engine_cap(c.engine, memories.length());
    const auto probe = probe_of(c, memories, c.probe.h);
    const auto w = hebbian_learn(memories);
    const auto nearest = nearest_memory(memories, probe);

    RecallReport rep;
    rep.engine = c.engine;
    rep.h = c.probe.h;
    rep.nearest = nearest;
    auto once = recall_once(c, memories, w, probe, nearest, c.run.seed);
    rep.success = once.probability;
    rep.outcome = once.outcome;

    json doc = once.detail;
    doc["engine"] = c.engine;
    doc["h"] = c.probe.h;
    doc["probe"] = probe.pattern.str();
    doc["nearest_memory"] = nearest ? json(*nearest) : json(nullptr);
    doc["h_max"] = fmt_or_nan(field_bound(w, probe, memories, nearest));
    doc["success"] = rep.success;
    rep.result.files.push_back(write_file(c, "recall.json", doc.dump(2) + "\n", false));
    if (c.engine != "oracle")
        rep.result.files.push_back(write_file(c, "outcomes.csv", outcomes_csv(once.counts), true));

    std::ostringstream s;
    s << c.engine << " recall at h=" << fmt_double(c.probe.h) << ": ";
    if (rep.outcome)
        s << to_string(rep.outcome->classification);
    else
        s << "P(nearest)=" << fmt_double(rep.success);
    if (nearest)
        s << " (nearest memory " << *nearest << ")";
    rep.result.summary = s.str();
    return rep;
}

SweepReport cmd_sweep_h(const ExperimentConfig& c) {
    const auto memories = memories_of(c);
    check_engine_cap(c.engine, memories.length());
    const auto base = probe_of(c, memories, 0.0);
    const auto w = hebbian_learn(memories);
    const auto nearest = nearest_memory(memories, base);
    const double h_max = field_bound(w, base, memories, nearest);
    const auto grid = sweep_grid(c);

    SweepReport rep;
    rep.rows.resize(grid.size());
    const auto count = static_cast<long long>(grid.size());
    // Each point is independent; exceptions are collected and rethrown serially.
    std::vector<std::string> errors(grid.size());
#pragma omp parallel for schedule(dynamic)
    for (long long k = 0; k < count; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        try {
            auto once = recall_once(c, memories, w, base.with_field(grid[idx]), nearest, c.run.seed + idx);
            SweepRow& row = rep.rows[idx];
            row.h = grid[idx];
            row.probability = once.probability;
            row.success = c.run.majority ? (once.probability > 0.5 ? 1.0 : 0.0) : once.probability;
            row.classification = once.outcome ? to_string(once.outcome->classification) : "n/a";
            row.h_max = h_max;
        } catch (const std::exception& e) {
            errors[idx] = e.what();
        }
    }
    for (const auto& e : errors)
        if (!e.empty())
            throw std::runtime_error(e);

    std::string body = "h,success,probability,classification,h_max\n";
    for (const auto& row : rep.rows)
        body += fmt_double(row.h) + "," + fmt_double(row.success) + "," + fmt_double(row.probability) + "," +
                row.classification + "," + fmt_or_nan(row.h_max) + "\n";
    rep.result.files.push_back(write_file(c, "sweep_h.csv", body, true));
    rep.result.summary = c.engine + " sweep over " + std::to_string(grid.size()) + " field values, h_max=" +
                         fmt_or_nan(h_max);
    return rep;
}

CommandResult cmd_radius(const ExperimentConfig& c) {
    const auto memories = memories_of(c);
    const auto probe = probe_of(c, memories, c.probe.h);
    const auto b = basin_check(memories, probe);
    const std::string body = "n,d_s,d_b,d_of_n,condition,chain,radius_bound\n" + std::to_string(b.n) + "," +
                             std::to_string(b.d_s) + "," + std::to_string(b.d_b) + "," + std::to_string(b.d_of_n) +
                             "," + (b.condition_holds ? "1" : "0") + "," + (b.chain_holds ? "1" : "0") + "," +
                             std::to_string(b.radius_bound) + "\n";
    CommandResult r;
    r.files.push_back(write_file(c, "radius.csv", body, true));
    r.summary = "d_s=" + std::to_string(b.d_s) + " d_b=" + std::to_string(b.d_b) + " n=" + std::to_string(b.n) +
                ": d_s + d_b <= n - 1 " + (b.condition_holds ? "holds" : "fails") +
                ", radius bound " + std::to_string(b.radius_bound);
    return r;
}

CommandResult cmd_basin_verify(const ExperimentConfig& c) {
    const auto memories = memories_of(c);
    check_engine_cap("oracle", memories.length());
    const std::size_t max_d =
        c.basin.max_d < 0 ? radius_bound(memories.length()) : static_cast<std::size_t>(c.basin.max_d);
    const auto v = verify_basin_exhaustive(memories, max_d, c.basin.h > 0.0 ? std::optional(c.basin.h) : std::nullopt);
    CommandResult r;
    r.files.push_back(write_file(c, "basin_failures.csv", failures_csv(v.failures), true));
    r.summary = std::to_string(v.probes_checked) + " probes checked within distance " + std::to_string(max_d) + ", " +
                std::to_string(v.failures.size()) + " failures (" + std::to_string(v.failures_within_condition()) +
                " satisfying the basin condition), " + std::to_string(v.ties.size()) + " ties, " +
                std::to_string(v.skipped_field) + " without a field window";
    return r;
}

namespace {

std::string montecarlo_rows(const ExperimentConfig& c, std::size_t& inconsistent) {
    std::string body = "N,p,t_frac,trials,successes,rate,predicted,engine\n";
    for (std::size_t p : c.capacity.p) {
        MonteCarloParams prm;
        prm.n = c.capacity.n;
        prm.p = p;
        prm.t_frac = c.capacity.t_frac;
        prm.trials = c.capacity.trials;
        prm.seed = c.run.seed;
        prm.engine = parse_engine(c.capacity.engine);
        prm.sa_schedule = c.sa_schedule();
        prm.sa_restarts = c.sa.restarts;
        const auto res = monte_carlo_success(prm);
        const auto csv = monte_carlo_csv(res);
        body += csv.substr(csv.find('\n') + 1);
        inconsistent += !res.consistent();
    }
    return body;
}

} // namespace

CommandResult cmd_capacity(const ExperimentConfig& c) {
    CommandResult r;
    std::string pstar = "N,x,exact,bound,exact_ge_bound\n";
    std::size_t violations = 0;
    for (std::size_t n = 2; n <= c.capacity.n_max; n += 2)
        for (std::size_t x = 0; x <= n / 2; ++x) {
            const auto ps = p_star(n, x);
            const bool ok = p_star_exact_dominates(n, x);
            violations += !ok;
            pstar += std::to_string(n) + "," + std::to_string(x) + "," + fmt_double(ps.exact) + "," +
                     fmt_double(ps.bound) + "," + (ok ? "1" : "0") + "\n";
        }
    r.files.push_back(write_file(c, "capacity_pstar.csv", pstar, true));

    std::string trade = "f,c1_plus_c2\n";
    for (std::size_t k = 0;; ++k) {
        const double f = static_cast<double>(k) * c.capacity.f_step;
        if (f >= 0.5)
            break;
        trade += fmt_double(f) + "," + fmt_double(tradeoff(f)) + "\n";
    }
    r.files.push_back(write_file(c, "capacity_tradeoff.csv", trade, true));

    const auto rep = capacity_report(c.capacity.n, c.capacity.t_frac, c.capacity.c2);
    const std::string report =
        "N,t_frac,c2,x,gamma,p_star_exact,p_star_bound,log_ratio_exact,log_ratio_bound,exponential,f_finite,f_limit\n" +
        std::to_string(rep.n) + "," + fmt_double(rep.t_frac) + "," + fmt_double(rep.c2) + "," + std::to_string(rep.x) +
        "," + fmt_double(rep.gamma) + "," + fmt_double(rep.p_star.exact) + "," + fmt_double(rep.p_star.bound) + "," +
        fmt_double(rep.log_ratio_exact) + "," + fmt_double(rep.log_ratio_bound) + "," + fmt_double(rep.exponential) +
        "," + fmt_double(rep.f_finite) + "," + fmt_double(rep.f_limit) + "\n";
    r.files.push_back(write_file(c, "capacity_report.csv", report, true));

    std::size_t inconsistent = 0;
    r.files.push_back(write_file(c, "capacity_montecarlo.csv", montecarlo_rows(c, inconsistent), true));
    r.summary = "P* grid to N=" + std::to_string(c.capacity.n_max) + ": " + std::to_string(violations) +
                " rows with exact < bound; Monte Carlo: " + std::to_string(inconsistent) + " of " +
                std::to_string(c.capacity.p.size()) + " blocks below the predicted bound at 3 sigma";
    return r;
}

CommandResult cmd_montecarlo(const ExperimentConfig& c) {
    std::size_t inconsistent = 0;
    CommandResult r;
    r.files.push_back(write_file(c, "montecarlo.csv", montecarlo_rows(c, inconsistent), true));
    r.summary = std::to_string(c.capacity.p.size()) + " Monte Carlo blocks, " + std::to_string(inconsistent) +
                " below the predicted bound at 3 sigma";
    return r;
}

CommandResult cmd_embed(const ExperimentConfig& c) {
    const auto memories = memories_of(c);
    const auto probe = probe_of(c, memories, c.probe.h);
    const auto logical = build_problem(hebbian_learn(memories), probe);
    const ChimeraGraph graph = c.embed.graph.empty()
                                   ? ChimeraGraph(c.embed.m, synthetic_defects(c.embed.m, c.embed.defects))
                                   : ChimeraGraph::load(c.embed.graph);
    auto embedding = embed_clique(logical.size(), graph);
    embedding.chain_strength = c.embed.chain_strength;
    const auto embedded = embed_problem(logical, embedding, graph.graph());
    embedding.chain_strength = embedded.chain_strength;

    CommandResult r;
    r.files.push_back(write_file(c, "embedding.txt", embedding.to_text(), false));
    r.files.push_back(write_file(c, "physical_problem.txt", embedded.to_text(), false));

    json doc;
    doc["logical_qubits"] = logical.size();
    doc["usable_qubits"] = graph.graph().node_count();
    doc["physical_qubits"] = embedding.physical_qubits();
    doc["chain_length_min"] = embedding.min_chain_length();
    doc["chain_length_max"] = embedding.max_chain_length();
    doc["chain_strength"] = embedded.chain_strength;
    std::string extra;
    if (c.embed.solve) {
        // Chain couplers set the physical energy scale; the hot end of the schedule follows them
        // so whole chains can still flip early on.
        auto schedule = c.sa_schedule();
        schedule.t_initial *= std::max(1.0, embedded.chain_strength);
        const auto sa = sa_sample(embedded.physical, schedule, c.sa.restarts, c.run.seed);
        const auto decoded = decode(sa.best, embedded);
        doc["decoded"] = decoded.logical.str();
        doc["broken_chains"] = decoded.broken_chains;
        extra = ", decoded " + decoded.logical.str() + " with " + std::to_string(decoded.broken_chains) +
                " broken chains";
        if (logical.size() <= kOracleMaxSpins) {
            const bool match = ground_set(logical).contains(decoded.logical);
            doc["oracle_match"] = match;
            extra += match ? " (oracle ground state)" : " (not an oracle ground state)";
        }
    }
    r.files.push_back(write_file(c, "embed.json", doc.dump(2) + "\n", false));
    r.summary = std::to_string(logical.size()) + " logical qubits on " + std::to_string(embedding.physical_qubits()) +
                " physical qubits, chains " + std::to_string(embedding.min_chain_length()) + "-" +
                std::to_string(embedding.max_chain_length()) + extra;
    return r;
}

CommandResult cmd_qa_gap(const ExperimentConfig& c) {
    const auto memories = memories_of(c);
    if (memories.length() > kGapMaxSpins)
        throw CapError("qa-gap", memories.length(), kGapMaxSpins);
    const auto probe = probe_of(c, memories, c.probe.h);
    const auto problem = build_problem(hebbian_learn(memories), probe);
    const auto schedule = schedule_of(c);
    std::string body = "s,E0,E1,gap\n";
    const std::size_t grid = c.qa.gap_grid;
    for (std::size_t k = 0; k < grid; ++k) {
        const double s = static_cast<double>(k) / static_cast<double>(grid - 1);
        const auto spec = instantaneous_spectrum(problem, schedule, s);
        body += fmt_double(s) + "," + fmt_double(spec[0]) + "," + fmt_double(spec[1]) + "," +
                fmt_double(spec[1] - spec[0]) + "\n";
    }
    const auto gap = min_gap(problem, schedule, grid);
    CommandResult r;
    r.files.push_back(write_file(c, "qa_gap.csv", body, true));
    r.summary = "minimum gap " + fmt_double(gap.gap) + " at s=" + fmt_double(gap.s_at_min);
    return r;
}

} // namespace qarecall
