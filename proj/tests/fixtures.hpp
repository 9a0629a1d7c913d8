#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "qarecall/ising.hpp"
#include "qarecall/spin.hpp"

namespace fixtures {

using namespace qarecall;

// Three mutually orthogonal 16-spin memories and the probe used throughout the tests.
inline MemorySet three_memories() {
    return MemorySet({SpinVector::parse("++++++++++++++++"),
                      SpinVector::parse("++++++++--------"),
                      SpinVector::parse("++++--------++++")});
}

inline SpinVector probe16() { return SpinVector::parse("-+++--------+++-"); }

inline SpinVector random_spins(std::size_t n, std::mt19937_64& rng) {
    std::vector<Spin> s(n);
    std::bernoulli_distribution coin(0.5);
    for (auto& v : s)
        v = coin(rng) ? 1 : -1;
    return SpinVector(std::move(s));
}

inline MemorySet random_memories(std::size_t n, std::size_t p, std::mt19937_64& rng) {
    if (n < 63 && p > (std::size_t{1} << n))
        throw std::invalid_argument("random_memories: more memories than distinct patterns");
    for (;;) {
        std::vector<SpinVector> ms;
        for (std::size_t mu = 0; mu < p; ++mu)
            ms.push_back(random_spins(n, rng));
        try {
            return MemorySet(std::move(ms));
        } catch (const std::invalid_argument&) {
        }
    }
}

// Rows of a Sylvester-Hadamard matrix of order n (power of two), skipping row 0.
inline MemorySet hadamard_memories(std::size_t n, std::size_t p, std::size_t first_row = 1) {
    std::vector<SpinVector> ms;
    for (std::size_t r = first_row; r < first_row + p; ++r) {
        std::vector<Spin> s(n);
        for (std::size_t c = 0; c < n; ++c)
            s[c] = (__builtin_popcountll(r & c) % 2) ? -1 : 1;
        ms.emplace_back(std::move(s));
    }
    return MemorySet(std::move(ms));
}

inline SpinVector flip_sites(const SpinVector& s, std::size_t count, std::mt19937_64& rng) {
    std::vector<std::size_t> idx(s.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    SpinVector out = s;
    for (std::size_t k = 0; k < count; ++k)
        out = out.with_flip(idx[k]);
    return out;
}

// Random symmetric zero-diagonal problem with couplings and fields in [-1, 1].
inline IsingProblem random_problem(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    IsingProblem p(n);
    for (std::size_t i = 0; i < n; ++i) {
        p.set_field(i, u(rng));
        for (std::size_t j = i + 1; j < n; ++j)
            p.set_coupling(i, j, u(rng));
    }
    return p;
}

} // namespace fixtures
