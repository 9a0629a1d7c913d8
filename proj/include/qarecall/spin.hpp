#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qarecall {

using Spin = std::int8_t;

// Length-N configuration of Ising spins, every entry exactly -1 or +1.
class SpinVector {
public:
    SpinVector() = default;
    explicit SpinVector(std::vector<Spin> spins);

    // All-(+1) or all-(-1) vector of length n.
    static SpinVector filled(std::size_t n, Spin value);

    // Accepts '+'/'-' or '1'/'0' characters; 0 maps to -1.
    static SpinVector parse(std::string_view text);

    // Bit i of `bits` set <=> spin i is +1.
    static SpinVector from_bits(std::uint64_t bits, std::size_t n);
    std::uint64_t to_bits() const;

    std::size_t size() const { return spins_.size(); }
    Spin operator[](std::size_t i) const { return spins_[i]; }
    std::span<const Spin> spins() const { return spins_; }

    SpinVector flipped() const;
    SpinVector with_flip(std::size_t i) const;

    // '+'/'-' rendering, inverse of parse.
    std::string str() const;

    friend bool operator==(const SpinVector&, const SpinVector&) = default;
    friend auto operator<=>(const SpinVector&, const SpinVector&) = default;

private:
    std::vector<Spin> spins_;
};

int dot(const SpinVector& a, const SpinVector& b);

// Sorted, duplicate-free subset of site indices.
using SiteMask = std::vector<std::size_t>;

SiteMask full_mask(std::size_t n);

std::size_t hamming(const SpinVector& a, const SpinVector& b);
std::size_t hamming(const SpinVector& a, const SpinVector& b, const SiteMask& mask);

// p >= 1 distinct memories of equal length.
class MemorySet {
public:
    explicit MemorySet(std::vector<SpinVector> memories);

    std::size_t size() const { return memories_.size(); }
    std::size_t length() const { return memories_.front().size(); }
    const SpinVector& operator[](std::size_t mu) const { return memories_[mu]; }
    const std::vector<SpinVector>& memories() const { return memories_; }

    auto begin() const { return memories_.begin(); }
    auto end() const { return memories_.end(); }

    // Pairwise Hamming distance exactly N/2 (integer dot products, no tolerance).
    bool mutually_orthogonal() const;

    // Index of `state` in the set, if it is one of the memories.
    std::optional<std::size_t> find(const SpinVector& state) const;

private:
    std::vector<SpinVector> memories_;
};

// One memory per line; '#' starts a comment; blank lines ignored.
MemorySet parse_memory_set(std::string_view text);
MemorySet load_memory_set(const std::string& path);
std::string format_memory_set(const MemorySet& memories);

// Dense symmetric N x N matrix with zero diagonal.
class WeightMatrix {
public:
    WeightMatrix() = default;
    explicit WeightMatrix(std::size_t n);
    WeightMatrix(std::size_t n, std::vector<double> row_major);

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return w_[i * n_ + j]; }
    // Sets both (i,j) and (j,i).
    void set(std::size_t i, std::size_t j, double value);
    std::span<const double> row(std::size_t i) const { return {w_.data() + i * n_, n_}; }
    std::span<const double> data() const { return w_; }

    // <s|W/2|s> = (1/2) sum_{i,j} s_i W_ij s_j.
    double half_quadratic_form(const SpinVector& s) const;

    friend bool operator==(const WeightMatrix&, const WeightMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> w_;
};

using BiasVector = std::vector<double>;

WeightMatrix hebbian_learn(const MemorySet& memories);

// E(S) = -sum_{i<j} W_ij S_i S_j - sum_i theta_i S_i
double energy(const WeightMatrix& weights, std::span<const double> biases, const SpinVector& state);

struct UpdateResult {
    SpinVector state;
    std::size_t sweeps_used = 0;
    bool converged = false;
};

// Called after every accepted flip with the flipped site and the new configuration.
using FlipObserver = std::function<void(std::size_t site, std::span<const Spin> state)>;

// Asynchronous S_i <- Sign(sum_j W_ij S_j - theta_i), fresh seeded permutation per sweep.
// Sign(0) keeps the current spin. Each accepted flip strictly lowers energy(W, -theta, S),
// which coincides with energy(W, theta, S) for zero biases.
UpdateResult classical_update(const WeightMatrix& weights, std::span<const double> biases,
                              SpinVector state, std::uint64_t seed, std::size_t max_sweeps,
                              const FlipObserver& on_flip = {});

} // namespace qarecall
