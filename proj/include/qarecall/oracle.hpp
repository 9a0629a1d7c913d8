#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qarecall/ising.hpp"
#include "qarecall/spin.hpp"

namespace qarecall {

inline constexpr std::size_t kOracleMaxSpins = 24;
inline constexpr double kDefaultTieTolerance = 1e-9;

// Minimum energy and every configuration within the tie tolerance of it,
// in lexicographic order (-1 < +1, site 0 most significant).
struct GroundSet {
    double energy = 0.0;
    std::vector<SpinVector> states;
    std::uint64_t total_enumerated = 0;

    bool contains(const SpinVector& s) const;
};

// Walks all 2^k assignments of the lowest k spins in reflected Gray-code order,
// starting from `start`, updating the energy with O(N) work per step.
class GrayCodeWalker {
public:
    GrayCodeWalker(const IsingProblem& problem, std::uint64_t start, std::size_t free_bits);

    std::uint64_t bits() const { return bits_; }
    double energy() const { return energy_; }
    // False once all 2^k configurations have been visited.
    bool next();

private:
    const IsingProblem* problem_;
    std::uint64_t bits_;
    std::uint64_t counter_ = 0;
    std::uint64_t limit_;
    double energy_;
    std::vector<double> local_;
    std::vector<double> spin_;
};

// Exhaustive search, parallel over high-bit prefixes (OpenMP).
GroundSet ground_set(const IsingProblem& problem, double tie_tol = kDefaultTieTolerance);

// Serial reference: direct energy evaluation of every configuration.
GroundSet ground_set_reference(const IsingProblem& problem, double tie_tol = kDefaultTieTolerance);

enum class RecallClass { unique_memory, degenerate_mixed, spurious, probe_overbias };

std::string to_string(RecallClass c);

struct RecallOutcome {
    RecallClass classification = RecallClass::spurious;
    GroundSet recalled;
    // Memory recalled when the classification is unique_memory.
    std::optional<std::size_t> recalled_index;
    // Memory closest to the probe on its mask; empty when two or more tie.
    std::optional<std::size_t> nearest_memory_index;

    bool success() const {
        return classification == RecallClass::unique_memory && recalled_index && recalled_index == nearest_memory_index;
    }
};

std::optional<std::size_t> nearest_memory(const MemorySet& memories, const ProbeSpec& probe);

// unique_memory: the ground set is a single stored memory.
// probe_overbias: the probe pattern is a ground state and not a memory.
// degenerate_mixed: several ground states, at least one a memory.
// spurious: no stored memory among the ground states.
RecallOutcome classify_recall(const GroundSet& ground, const MemorySet& memories, const ProbeSpec& probe);

} // namespace qarecall
