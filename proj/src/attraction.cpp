#include "qarecall/attraction.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "qarecall/format.hpp"

namespace qarecall {

std::size_t radius_bound(std::size_t n) {
    if (n < 2)
        throw std::invalid_argument("radius_bound: N must be at least 2");
    return n % 2 == 0 ? (n - 2) / 2 : (n - 1) / 2;
}

BasinReport basin_check(const MemorySet& memories, const ProbeSpec& probe) {
    if (memories.size() == 0)
        throw std::invalid_argument("basin_check: empty memory set");
    BasinReport r;
    r.n = probe.mask.size();
    r.d_s = r.n;
    for (std::size_t mu = 0; mu < memories.size(); ++mu) {
        const std::size_t d = hamming(probe.pattern, memories[mu], probe.mask);
        r.d_s = std::min(r.d_s, d);
        r.d_b = std::max(r.d_b, d);
        for (std::size_t nu = mu + 1; nu < memories.size(); ++nu)
            r.d_of_n = std::max(r.d_of_n, hamming(memories[mu], memories[nu], probe.mask));
    }
    r.radius_bound = r.n >= 2 ? radius_bound(r.n) : 0;
    r.condition_holds = r.n >= 1 && r.d_s + r.d_b <= r.n - 1;
    r.chain_holds = r.condition_holds && r.d_of_n <= r.d_s + r.d_b;
    return r;
}

std::size_t BasinVerification::failures_within_condition() const {
    return static_cast<std::size_t>(
        std::count_if(failures.begin(), failures.end(), [](const auto& f) { return f.condition_holds; }));
}

namespace {

// All patterns within distance max_d of any memory, deduplicated and sorted.
std::vector<SpinVector> ball_union(const MemorySet& memories, std::size_t max_d) {
    const std::size_t n = memories.length();
    std::set<SpinVector> out;
    // Flip sites in increasing order so each subset of at most max_d sites is visited once.
    auto grow = [&](auto&& self, const SpinVector& s, std::size_t start, std::size_t depth) -> void {
        out.insert(s);
        if (depth == max_d)
            return;
        for (std::size_t i = start; i < n; ++i)
            self(self, s.with_flip(i), i + 1, depth + 1);
    };
    for (const auto& xi : memories)
        grow(grow, xi, 0, 0);
    return {out.begin(), out.end()};
}

struct ProbeResult {
    enum Kind { ok, failed, tie, no_field } kind = ok;
    BasinFailure failure;
};

ProbeResult check_probe(const MemorySet& memories, const WeightMatrix& w, const SpinVector& chi,
                        std::optional<double> h_given) {
    ProbeResult out;
    ProbeSpec probe(chi, 0.0);
    const auto nearest = nearest_memory(memories, probe);
    if (!nearest) {
        out.kind = ProbeResult::tie;
        return out;
    }
    const auto report = basin_check(memories, probe);
    double h = 0.0;
    if (report.d_s == 0) {
        h = h_given.value_or(kExactProbeField);
        if (!(h > 0.0)) {
            out.kind = ProbeResult::no_field;
            return out;
        }
    } else {
        const double hmax = h_max_generic(w, probe, memories[*nearest]);
        h = h_given.value_or(0.5 * hmax);
        if (!(hmax > 0.0) || !(h > 0.0) || !(h < hmax)) {
            out.kind = ProbeResult::no_field;
            return out;
        }
    }
    const auto with_h = probe.with_field(h);
    const auto outcome = classify_recall(ground_set(build_problem(w, with_h)), memories, with_h);
    if (outcome.classification == RecallClass::unique_memory && outcome.recalled_index == nearest)
        return out;
    out.kind = ProbeResult::failed;
    out.failure = {chi, *nearest, report.d_s, report.d_b, h, report.condition_holds, outcome.classification};
    return out;
}

} // namespace

BasinVerification verify_basin_exhaustive(const MemorySet& memories, std::size_t max_d, std::optional<double> h) {
    if (memories.size() == 0)
        throw std::invalid_argument("verify_basin_exhaustive: empty memory set");
    const auto probes = ball_union(memories, max_d);
    const auto w = hebbian_learn(memories);
    std::vector<ProbeResult> results(probes.size());
    const auto count = static_cast<long long>(probes.size());
#pragma omp parallel for schedule(dynamic)
    for (long long k = 0; k < count; ++k)
        results[static_cast<std::size_t>(k)] = check_probe(memories, w, probes[static_cast<std::size_t>(k)], h);

    BasinVerification v;
    for (std::size_t k = 0; k < probes.size(); ++k) {
        switch (results[k].kind) {
        case ProbeResult::ok: ++v.probes_checked; break;
        case ProbeResult::failed:
            ++v.probes_checked;
            v.failures.push_back(std::move(results[k].failure));
            break;
        case ProbeResult::tie: v.ties.push_back(probes[k]); break;
        case ProbeResult::no_field: ++v.skipped_field; break;
        }
    }
    return v;
}

std::string failures_csv(const std::vector<BasinFailure>& failures) {
    std::string out = "probe,d_s,d_b,h,condition,classification\n";
    for (const auto& f : failures)
        out += f.probe.str() + ',' + std::to_string(f.d_s) + ',' + std::to_string(f.d_b) + ',' + fmt_double(f.h) +
               ',' + (f.condition_holds ? "1" : "0") + ',' + to_string(f.classification) + '\n';
    return out;
}

} // namespace qarecall
