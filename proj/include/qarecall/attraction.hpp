#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qarecall/ising.hpp"
#include "qarecall/oracle.hpp"

namespace qarecall {

struct BasinReport {
    std::size_t d_s = 0;  // closest memory on the mask
    std::size_t d_b = 0;  // farthest memory on the mask
    std::size_t n = 0;    // mask size
    std::size_t d_of_n = 0;  // largest pairwise memory distance on the mask
    std::size_t radius_bound = 0;
    // d_s + d_b <= n - 1
    bool condition_holds = false;
    // d_of_n <= d_s + d_b <= n - 1
    bool chain_holds = false;
};

BasinReport basin_check(const MemorySet& memories, const ProbeSpec& probe);

// Largest d_s guaranteed to recall: (N-2)/2 for even N, (N-1)/2 for odd N. Requires N >= 2.
std::size_t radius_bound(std::size_t n);

struct BasinFailure {
    SpinVector probe;
    std::size_t nearest = 0;
    std::size_t d_s = 0;
    std::size_t d_b = 0;
    double h = 0.0;
    bool condition_holds = false;
    RecallClass classification = RecallClass::spurious;
};

struct BasinVerification {
    std::vector<BasinFailure> failures;
    // Probes equidistant from two or more memories; not scored.
    std::vector<SpinVector> ties;
    std::size_t probes_checked = 0;
    // Probes whose field window 0 < h < h_max is empty (or excludes a caller-given h).
    std::size_t skipped_field = 0;

    std::size_t failures_within_condition() const;
};

// Field used when the probe already equals its nearest memory (no upper bound applies).
inline constexpr double kExactProbeField = 0.5;

// Every full-length probe within Hamming distance max_d of some memory is recalled with the
// oracle. With no h given, each probe uses 0.5 * h_max_generic of its nearest memory.
// Failures are recorded whether or not the probe satisfies the basin condition; the flag on
// each failure says which.
BasinVerification verify_basin_exhaustive(const MemorySet& memories, std::size_t max_d,
                                          std::optional<double> h = std::nullopt);

// Columns: probe, d_s, d_b, h, condition, classification.
std::string failures_csv(const std::vector<BasinFailure>& failures);

} // namespace qarecall
