#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qarecall/ising.hpp"
#include "qarecall/outcomes.hpp"

namespace qarecall {

enum class Cooling { geometric, linear };

struct SASchedule {
    double t_initial = 5.0;
    double t_final = 0.02;
    std::size_t sweeps = 1000;
    Cooling cooling = Cooling::geometric;

    // Throws std::invalid_argument unless 0 < t_final <= t_initial and sweeps >= 1.
    // An infinite t_initial is allowed for a single sweep.
    void validate() const;
    // Temperature used during sweep k (0-based); runs t_initial -> t_final.
    double temperature(std::size_t k) const;
};

struct SAResult {
    // Lowest-energy state seen in each restart, in restart order.
    std::vector<SpinVector> best_per_restart;
    std::vector<double> energy_per_restart;
    // Tally of best_per_restart.
    OutcomeCounts counts;
    SpinVector best;
    double best_energy = 0.0;
    std::uint64_t proposals = 0;
    std::uint64_t accepted = 0;

    double acceptance_rate() const { return proposals ? double(accepted) / double(proposals) : 0.0; }
};

// Single-flip Metropolis from a random start per restart. Restart r draws from seed + r,
// so results do not depend on the number of threads.
SAResult sa_sample(const IsingProblem& problem, const SASchedule& schedule, std::size_t restarts, std::uint64_t seed);
SAResult sa_sample_serial(const IsingProblem& problem, const SASchedule& schedule, std::size_t restarts,
                          std::uint64_t seed);

// Fixed-temperature chain; returns the empirical distribution over basis states
// (index bit i set <=> spin i is +1) sampled after every sweep. N <= 20.
std::vector<double> metropolis_histogram(const IsingProblem& problem, double temperature, std::size_t sweeps,
                                         std::uint64_t seed);

} // namespace qarecall
