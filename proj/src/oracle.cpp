#include "qarecall/oracle.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <stdexcept>

#include "qarecall/errors.hpp"
#include "qarecall/parallel.hpp"

namespace qarecall {

bool GroundSet::contains(const SpinVector& s) const {
    return std::binary_search(states.begin(), states.end(), s);
}

GrayCodeWalker::GrayCodeWalker(const IsingProblem& problem, std::uint64_t start, std::size_t free_bits)
    : problem_(&problem), bits_(start), limit_(std::uint64_t{1} << free_bits), energy_(problem.energy_bits(start)) {
    const std::size_t n = problem.size();
    if (free_bits > n)
        throw std::invalid_argument("GrayCodeWalker: more free bits than spins");
    spin_.resize(n);
    local_.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        spin_[i] = ((start >> i) & 1u) ? 1.0 : -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        double f = problem.field(i);
        auto row = problem.coupling_row(i);
        for (std::size_t j = 0; j < n; ++j)
            f += row[j] * spin_[j];
        local_[i] = f;
    }
}

bool GrayCodeWalker::next() {
    if (++counter_ >= limit_)
        return false;
    const auto k = static_cast<std::size_t>(std::countr_zero(counter_));
    const double old = spin_[k];
    energy_ += 2.0 * old * local_[k];
    auto col = problem_->coupling_row(k);
    const double delta = -2.0 * old;
    for (std::size_t j = 0; j < local_.size(); ++j)
        local_[j] += col[j] * delta;
    spin_[k] = -old;
    bits_ ^= std::uint64_t{1} << k;
    return true;
}

namespace {

// Candidates within tol of the running minimum; exact energies only.
struct BestList {
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::uint64_t> bits;
    std::vector<double> energies;

    void offer(std::uint64_t b, double e, double tol) {
        if (e > best + tol)
            return;
        if (e < best) {
            best = e;
            prune(tol);
        }
        bits.push_back(b);
        energies.push_back(e);
    }

    void prune(double tol) {
        std::size_t out = 0;
        for (std::size_t i = 0; i < bits.size(); ++i) {
            if (energies[i] <= best + tol) {
                bits[out] = bits[i];
                energies[out] = energies[i];
                ++out;
            }
        }
        bits.resize(out);
        energies.resize(out);
    }
};

void check_cap(const IsingProblem& problem) {
    if (problem.size() > kOracleMaxSpins)
        throw CapError("oracle", problem.size(), kOracleMaxSpins);
}

GroundSet finish(std::vector<BestList>& lists, std::size_t n, double tol) {
    BestList merged;
    for (const auto& l : lists)
        merged.best = std::min(merged.best, l.best);
    for (const auto& l : lists)
        for (std::size_t i = 0; i < l.bits.size(); ++i)
            if (l.energies[i] <= merged.best + tol)
                merged.bits.push_back(l.bits[i]);

    GroundSet g;
    g.energy = merged.best;
    g.total_enumerated = std::uint64_t{1} << n;
    g.states.reserve(merged.bits.size());
    for (std::uint64_t b : merged.bits)
        g.states.push_back(SpinVector::from_bits(b, n));
    std::sort(g.states.begin(), g.states.end());
    return g;
}

} // namespace

GroundSet ground_set(const IsingProblem& problem, double tie_tol) {
    check_cap(problem);
    const std::size_t n = problem.size();
    const std::size_t low = std::min<std::size_t>(n, 12);
    const auto blocks = static_cast<long long>(std::uint64_t{1} << (n - low));
    // Incremental energies carry rounding; anything this close to the running
    // minimum is re-evaluated directly before it is kept.
    constexpr double slack = 1e-7;

    std::vector<BestList> lists(static_cast<std::size_t>(max_threads()));
#pragma omp parallel for schedule(dynamic)
    for (long long block = 0; block < blocks; ++block) {
        BestList& best = lists[static_cast<std::size_t>(thread_index())];
        GrayCodeWalker walk(problem, static_cast<std::uint64_t>(block) << low, low);
        do {
            if (walk.energy() <= best.best + tie_tol + slack)
                best.offer(walk.bits(), problem.energy_bits(walk.bits()), tie_tol);
        } while (walk.next());
    }
    return finish(lists, n, tie_tol);
}

GroundSet ground_set_reference(const IsingProblem& problem, double tie_tol) {
    check_cap(problem);
    const std::size_t n = problem.size();
    std::vector<BestList> lists(1);
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t b = 0; b < total; ++b)
        lists[0].offer(b, problem.energy_bits(b), tie_tol);
    return finish(lists, n, tie_tol);
}

std::string to_string(RecallClass c) {
    switch (c) {
    case RecallClass::unique_memory: return "unique-memory";
    case RecallClass::degenerate_mixed: return "degenerate-mixed";
    case RecallClass::spurious: return "spurious";
    case RecallClass::probe_overbias: return "probe-overbias";
    }
    return "unknown";
}

std::optional<std::size_t> nearest_memory(const MemorySet& memories, const ProbeSpec& probe) {
    std::optional<std::size_t> best;
    std::size_t best_d = std::numeric_limits<std::size_t>::max();
    bool tie = false;
    for (std::size_t mu = 0; mu < memories.size(); ++mu) {
        const std::size_t d = hamming(probe.pattern, memories[mu], probe.mask);
        if (d < best_d) {
            best_d = d;
            best = mu;
            tie = false;
        } else if (d == best_d) {
            tie = true;
        }
    }
    if (tie)
        return std::nullopt;
    return best;
}

RecallOutcome classify_recall(const GroundSet& ground, const MemorySet& memories, const ProbeSpec& probe) {
    RecallOutcome out;
    out.recalled = ground;
    out.nearest_memory_index = nearest_memory(memories, probe);

    bool any_memory = false;
    for (const auto& s : ground.states)
        any_memory = any_memory || memories.find(s).has_value();

    if (ground.states.size() == 1 && any_memory) {
        out.classification = RecallClass::unique_memory;
        out.recalled_index = memories.find(ground.states.front());
    } else if (!memories.find(probe.pattern) && ground.contains(probe.pattern)) {
        out.classification = RecallClass::probe_overbias;
    } else if (any_memory) {
        out.classification = RecallClass::degenerate_mixed;
    } else {
        out.classification = RecallClass::spurious;
    }
    return out;
}

} // namespace qarecall
