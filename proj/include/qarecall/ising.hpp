#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qarecall/spin.hpp"

namespace qarecall {

// Probe pattern chi, the active sites it biases, and the field scale h >= 0.
struct ProbeSpec {
    SpinVector pattern;
    SiteMask mask;
    double h = 0.0;

    ProbeSpec(SpinVector pattern, SiteMask mask, double h);
    // Full-length probe.
    ProbeSpec(SpinVector pattern, double h);

    std::size_t active_sites() const { return mask.size(); }
    bool full() const { return mask.size() == pattern.size(); }
    ProbeSpec with_field(double field) const { return ProbeSpec(pattern, mask, field); }
};

// Classical Ising problem E(s) = -sum_{i<j} J_ij s_i s_j - sum_i h_i s_i.
// Every solver in the library evaluates energies through this functional.
class IsingProblem {
public:
    IsingProblem() = default;
    explicit IsingProblem(std::size_t n);
    IsingProblem(std::size_t n, std::vector<double> couplings, std::vector<double> fields);

    std::size_t size() const { return n_; }
    double coupling(std::size_t i, std::size_t j) const { return j_[i * n_ + j]; }
    double field(std::size_t i) const { return h_[i]; }
    std::span<const double> couplings() const { return j_; }
    std::span<const double> fields() const { return h_; }
    std::span<const double> coupling_row(std::size_t i) const { return {j_.data() + i * n_, n_}; }

    void set_coupling(std::size_t i, std::size_t j, double value);
    void set_field(std::size_t i, double value) { h_.at(i) = value; }

    double energy(std::span<const Spin> s) const;
    double energy(const SpinVector& s) const { return energy(s.spins()); }
    // Bit i set <=> s_i = +1.
    double energy_bits(std::uint64_t bits) const;

    double max_abs_coupling() const;
    double max_abs_field() const;

    friend bool operator==(const IsingProblem&, const IsingProblem&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> j_;
    std::vector<double> h_;
};

IsingProblem build_problem(const WeightMatrix& weights, const ProbeSpec& probe);

// Diagonal shift -h(n - 2d) that the probe field gives a stored memory.
double probe_energy_shift(const ProbeSpec& probe, const SpinVector& memory);
// Shift of the globally flipped memory: +h(n - 2d).
double spurious_flip_shift(const ProbeSpec& probe, const SpinVector& memory);

// Closed-form field bound for mutually orthogonal memories and a full-length probe.
// Throws std::domain_error for non-orthogonal sets, partial masks, or d = 0.
double h_max(const MemorySet& memories, const ProbeSpec& probe, std::size_t target);

struct FieldBounds {
    double max = 0.0;  // max over memories with d > 0
    double min = 0.0;
    std::size_t argmax = 0;
    std::size_t argmin = 0;
};
FieldBounds h_max_bounds(const MemorySet& memories, const ProbeSpec& probe);

// (<xi|W/2|xi> - <chi|W/2|chi>) / (2d), valid for any memory set.
double h_max_generic(const WeightMatrix& weights, const ProbeSpec& probe, const SpinVector& target);

// Energies of every memory, every flipped memory and the probe state across a grid of h.
struct EnergyReport {
    std::vector<double> h_grid;
    // H_mem contributions, independent of h.
    std::vector<double> memory_mem;
    std::vector<double> flip_mem;
    double probe_mem = 0.0;
    // H_probe contributions per unit h.
    std::vector<double> memory_probe_slope;
    std::vector<double> flip_probe_slope;
    double probe_probe_slope = 0.0;
    // Field bound per memory; NaN where undefined (d = 0).
    std::vector<double> h_max;

    double memory_total(std::size_t mu, double h) const { return memory_mem[mu] + h * memory_probe_slope[mu]; }
    double flip_total(std::size_t mu, double h) const { return flip_mem[mu] + h * flip_probe_slope[mu]; }
    double probe_total(double h) const { return probe_mem + h * probe_probe_slope; }

    // Columns: h, E_probe, E_mem_1..p, E_flip_1..p.
    std::string to_csv() const;
};

EnergyReport energy_report(const MemorySet& memories, const ProbeSpec& probe, std::span<const double> h_grid);

// Largest factor s <= 1 with |s J| <= 1 and |s h| <= 2.
double hardware_scale(const IsingProblem& problem);
IsingProblem scaled(const IsingProblem& problem, double factor);

// Rounds J to multiples of 2^-8 and h to multiples of 2^-7. Out-of-range values throw
// unless `rescale` is set, in which case the problem is first scaled into range.
IsingProblem quantize_hardware(const IsingProblem& problem, bool rescale = false);

} // namespace qarecall
