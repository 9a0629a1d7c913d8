#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "qarecall/spin.hpp"

using namespace qarecall;

namespace {

// Hebbian weights straight from the definition, diagonal term included.
double hebbian_entry(const MemorySet& m, std::size_t i, std::size_t j) {
    long sum = 0;
    for (const auto& xi : m)
        sum += xi[i] * xi[j];
    if (i == j)
        sum -= static_cast<long>(m.size());
    return static_cast<double>(sum) / static_cast<double>(m.length());
}

double energy_full_sum(const WeightMatrix& w, const std::vector<double>& theta, const SpinVector& s) {
    double e = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j)
            if (i != j)
                e -= 0.5 * w(i, j) * s[i] * s[j];
    for (std::size_t i = 0; i < s.size(); ++i)
        e -= theta[i] * s[i];
    return e;
}

} // namespace

TEST_CASE("spin vector parsing and rendering") {
    auto s = SpinVector::parse("+-10");
    CHECK(s.str() == "+-+-");
    CHECK(SpinVector::from_bits(s.to_bits(), 4) == s);
    CHECK_THROWS_AS(SpinVector::parse("+x"), std::invalid_argument);
    CHECK_THROWS_AS(SpinVector::parse(""), std::invalid_argument);
    CHECK_THROWS_AS(SpinVector(std::vector<Spin>{1, 0}), std::invalid_argument);
}

TEST_CASE("memory file format") {
    auto m = parse_memory_set("# header\n\n+-+-\n1100  # trailing comment\n");
    REQUIRE(m.size() == 2);
    CHECK(m[1].str() == "++--");
    CHECK(parse_memory_set(format_memory_set(m)).memories() == m.memories());

    CHECK_THROWS_WITH_AS(parse_memory_set("++++\n+-?+\n"), doctest::Contains("line 2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_memory_set("+++\n++++\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_memory_set("# nothing\n"), std::invalid_argument);
}

TEST_CASE("duplicate memories are rejected") {
    CHECK_THROWS_AS(MemorySet({SpinVector::parse("+-"), SpinVector::parse("+-")}), std::invalid_argument);
}

TEST_CASE("hebbian_learn matches the defining sum") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 3 + rng() % 13;
        const std::size_t p = 1 + rng() % 5;
        auto m = fixtures::random_memories(n, p, rng);
        auto w = hebbian_learn(m);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                CHECK(w(i, j) == hebbian_entry(m, i, j));
                CHECK(w(i, j) == w(j, i));
                // multiples of 1/N
                const double scaled = w(i, j) * static_cast<double>(n);
                CHECK(std::abs(scaled - std::round(scaled)) < 1e-12);
            }
    }
}

TEST_CASE("hebbian_learn examples") {
    auto w = hebbian_learn(fixtures::three_memories());
    double lo = 1.0, hi = 0.0;
    for (std::size_t i = 0; i < 16; ++i)
        for (std::size_t j = 0; j < 16; ++j)
            if (i != j) {
                lo = std::min(lo, std::abs(w(i, j)));
                hi = std::max(hi, std::abs(w(i, j)));
            }
    CHECK(hi == 3.0 / 16.0);
    CHECK(lo == 1.0 / 16.0);

    auto xi = SpinVector::parse("+--+-+");
    auto w1 = hebbian_learn(MemorySet({xi}));
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j)
            CHECK(w1(i, j) == (i == j ? 0.0 : xi[i] * xi[j] / 6.0));

    auto w2 = hebbian_learn(MemorySet({SpinVector::parse("++++"), SpinVector::parse("++--")}));
    CHECK(w2(0, 1) == 0.5);
    CHECK(w2(0, 2) == 0.0);
}

TEST_CASE("energy") {
    const std::vector<double> zero16(16, 0.0);
    CHECK(energy(WeightMatrix(5), std::vector<double>(5, 0.0), SpinVector::parse("+-+-+")) == 0.0);

    auto m = fixtures::three_memories();
    auto w = hebbian_learn(m);
    CHECK(energy(w, zero16, m[0]) == doctest::Approx(-6.5).epsilon(1e-15));
    CHECK(energy(w, zero16, fixtures::probe16()) == doctest::Approx(-3.5).epsilon(1e-15));
    CHECK_THROWS_AS(energy(w, std::vector<double>(3, 0.0), m[0]), std::invalid_argument);

    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + rng() % 12;
        auto mem = fixtures::random_memories(n, 1 + rng() % 3, rng);
        auto wr = hebbian_learn(mem);
        std::vector<double> theta(n);
        for (auto& t : theta)
            t = g(rng);
        auto s = fixtures::random_spins(n, rng);
        CHECK(energy(wr, theta, s) == doctest::Approx(energy_full_sum(wr, theta, s)).epsilon(1e-12));
        // global flip symmetry at zero bias
        const std::vector<double> zero(n, 0.0);
        CHECK(energy(wr, zero, s) == doctest::Approx(energy(wr, zero, s.flipped())).epsilon(1e-14));
    }
}

TEST_CASE("classical_update fixed points of orthogonal sets") {
    for (std::size_t p : {1u, 3u, 7u}) {
        auto m = fixtures::hadamard_memories(8, p);
        auto w = hebbian_learn(m);
        const std::vector<double> zero(8, 0.0);
        for (const auto& xi : m) {
            // (W xi)_i = ((N - p)/N) xi_i
            for (std::size_t i = 0; i < 8; ++i) {
                double v = 0.0;
                for (std::size_t j = 0; j < 8; ++j)
                    v += w(i, j) * xi[j];
                CHECK(v == doctest::Approx((8.0 - p) / 8.0 * xi[i]));
            }
            auto r = classical_update(w, zero, xi, 3, 10);
            CHECK(r.converged);
            CHECK(r.sweeps_used == 1);
            CHECK(r.state == xi);
        }
    }
}

TEST_CASE("classical_update with negative thresholds drives all spins up") {
    WeightMatrix w(6);
    const std::vector<double> theta(6, -1.0);
    auto r = classical_update(w, theta, SpinVector::parse("+-+--+"), 1, 5);
    CHECK(r.state == SpinVector::filled(6, 1));
    CHECK(r.converged);
}

TEST_CASE("classical_update never raises its Lyapunov energy") {
    auto m = fixtures::three_memories();
    auto w = hebbian_learn(m);
    const std::vector<double> zero(16, 0.0);
    auto chi = fixtures::probe16();
    auto r = classical_update(w, zero, chi, 42, 100);
    CHECK(r.converged);
    CHECK(energy(w, zero, r.state) <= energy(w, zero, chi));
    MESSAGE("fixed point from probe: " << r.state.str());

    std::mt19937_64 rng(5);
    std::normal_distribution<double> g(0.0, 0.3);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng() % 20;
        auto mem = fixtures::random_memories(n, 1 + rng() % 4, rng);
        auto wr = hebbian_learn(mem);
        std::vector<double> theta(n), neg(n);
        for (std::size_t i = 0; i < n; ++i) {
            theta[i] = g(rng);
            neg[i] = -theta[i];
        }
        auto start = fixtures::random_spins(n, rng);
        double last = energy(wr, neg, start);
        bool ok = true;
        auto res = classical_update(wr, theta, start, rng(), 200, [&](std::size_t, std::span<const Spin> s) {
            const double e = energy(wr, neg, SpinVector(std::vector<Spin>(s.begin(), s.end())));
            ok = ok && e < last;
            last = e;
        });
        CHECK(ok);
        CHECK(res.converged);
    }
}

TEST_CASE("classical_update is reproducible under a seed") {
    std::mt19937_64 rng(9);
    auto mem = fixtures::random_memories(20, 5, rng);
    auto w = hebbian_learn(mem);
    const std::vector<double> zero(20, 0.0);
    auto s = fixtures::random_spins(20, rng);
    auto a = classical_update(w, zero, s, 77, 50);
    auto b = classical_update(w, zero, s, 77, 50);
    CHECK(a.state == b.state);
    CHECK(a.sweeps_used == b.sweeps_used);
    CHECK_THROWS_AS(classical_update(w, zero, s, 1, 0), std::invalid_argument);
}

TEST_CASE("hamming distances") {
    auto m = fixtures::three_memories();
    auto chi = fixtures::probe16();
    CHECK(hamming(chi, chi) == 0);
    CHECK(hamming(chi, m[0]) == 10);
    CHECK(hamming(chi, m[1]) == 8);
    CHECK(hamming(chi, m[2]) == 2);
    CHECK(hamming(chi, chi.flipped(), full_mask(16)) == 16);
    CHECK(hamming(chi, m[2], SiteMask{1, 2, 3}) == 0);
    CHECK_THROWS_AS(hamming(chi, SpinVector::parse("++")), std::invalid_argument);
    CHECK(m.mutually_orthogonal());
}
