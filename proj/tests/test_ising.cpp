#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "qarecall/ising.hpp"

using namespace qarecall;

namespace {

// -h sum_i chi_i s_i over the mask, evaluated directly.
double probe_term(const ProbeSpec& probe, const SpinVector& s) {
    double e = 0.0;
    for (std::size_t i : probe.mask)
        e -= probe.h * probe.pattern[i] * s[i];
    return e;
}

ProbeSpec random_full_probe(std::size_t n, std::mt19937_64& rng, double h) {
    return ProbeSpec(fixtures::random_spins(n, rng), h);
}

} // namespace

TEST_CASE("ProbeSpec validation") {
    auto chi = fixtures::probe16();
    CHECK_THROWS_AS(ProbeSpec(chi, SiteMask{}, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(ProbeSpec(chi, SiteMask{16}, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(ProbeSpec(chi, SiteMask{1, 1}, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(ProbeSpec(chi, -0.1), std::invalid_argument);
    CHECK(ProbeSpec(chi, SiteMask{3, 1}, 0.5).mask == SiteMask{1, 3});
}

TEST_CASE("build_problem") {
    auto m = fixtures::three_memories();
    auto w = hebbian_learn(m);
    auto chi = fixtures::probe16();

    auto p0 = build_problem(w, ProbeSpec(chi, 0.0));
    for (double f : p0.fields())
        CHECK(f == 0.0);
    const std::vector<double> zero(16, 0.0);
    CHECK(p0.energy(m[0]) == energy(w, zero, m[0]));

    auto p = build_problem(w, ProbeSpec(chi, 0.5));
    for (std::size_t i = 0; i < 16; ++i)
        CHECK(p.field(i) == 0.5 * chi[i]);
    for (std::size_t i = 0; i < 16; ++i)
        for (std::size_t j = 0; j < 16; ++j)
            CHECK(p.coupling(i, j) == w(i, j));

    auto single = build_problem(WeightMatrix(4), ProbeSpec(SpinVector::parse("+---"), SiteMask{0}, 1.0));
    CHECK(std::vector<double>(single.fields().begin(), single.fields().end()) == std::vector<double>{1, 0, 0, 0});

    CHECK_THROWS_AS(build_problem(WeightMatrix(3), ProbeSpec(chi, 0.5)), std::invalid_argument);
}

TEST_CASE("IsingProblem energy agrees with the Hopfield energy and bit form") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + rng() % 14;
        auto m = fixtures::random_memories(n, 1 + rng() % 3, rng);
        auto w = hebbian_learn(m);
        auto probe = random_full_probe(n, rng, 0.3);
        auto prob = build_problem(w, probe);
        auto s = fixtures::random_spins(n, rng);
        const std::vector<double> theta(prob.fields().begin(), prob.fields().end());
        CHECK(prob.energy(s) == doctest::Approx(energy(w, theta, s)).epsilon(1e-13));
        CHECK(prob.energy_bits(s.to_bits()) == doctest::Approx(prob.energy(s)).epsilon(1e-13));
    }
}

TEST_CASE("probe and spurious shifts") {
    auto m = fixtures::three_memories();
    auto chi = fixtures::probe16();
    const ProbeSpec unit(chi, 1.0);
    CHECK(probe_energy_shift(ProbeSpec(chi, 0.3), chi) == doctest::Approx(-0.3 * 16));
    CHECK(probe_energy_shift(unit, m[2]) == -12.0);
    CHECK(probe_energy_shift(ProbeSpec(chi, 0.37), m[1]) == 0.0);
    CHECK(spurious_flip_shift(unit, chi) == 16.0);
    CHECK(spurious_flip_shift(unit, m[2]) == 12.0);
    CHECK(spurious_flip_shift(unit, m[2]) == probe_term(unit, m[2].flipped()));

    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng() % 20;
        SiteMask mask;
        for (std::size_t i = 0; i < n; ++i)
            if (rng() % 3)
                mask.push_back(i);
        if (mask.empty())
            mask.push_back(0);
        ProbeSpec probe(fixtures::random_spins(n, rng), mask, 0.1 * (rng() % 20));
        auto xi = fixtures::random_spins(n, rng);
        CHECK(probe_energy_shift(probe, xi) == doctest::Approx(probe_term(probe, xi)));
        CHECK(spurious_flip_shift(probe, xi) + probe_energy_shift(probe, xi) == 0.0);
    }
}

TEST_CASE("closed-form field bound") {
    auto m = fixtures::three_memories();
    auto w = hebbian_learn(m);
    auto chi = fixtures::probe16();
    const ProbeSpec probe(chi, 0.0);

    CHECK(h_max(m, probe, 2) == 0.75);
    auto bounds = h_max_bounds(m, probe);
    CHECK(bounds.max == 0.75);
    CHECK(bounds.argmax == 2);

    // mu = 1 by brute-force energy comparison around the bound
    const double b0 = h_max(m, probe, 0);
    CHECK(b0 == doctest::Approx(0.15));
    CHECK(bounds.min == b0);
    for (double dh : {-1e-6, 1e-6}) {
        auto prob = build_problem(w, probe.with_field(b0 + dh));
        CHECK((prob.energy(m[0]) < prob.energy(chi)) == (dh < 0));
    }

    // single memory at distance N/2
    auto xi = SpinVector::parse("++++++++");
    auto half = SpinVector::parse("++++----");
    CHECK(h_max(MemorySet({xi}), ProbeSpec(half, 0.0), 0) == 0.5);

    CHECK_THROWS_AS(h_max(MemorySet({SpinVector::parse("++++"), SpinVector::parse("+++-")}),
                          ProbeSpec(SpinVector::parse("----"), 0.0), 0),
                    std::domain_error);
    CHECK_THROWS_AS(h_max(m, ProbeSpec(m[1], 0.0), 1), std::domain_error);
    CHECK_THROWS_AS(h_max(m, ProbeSpec(chi, SiteMask{0, 1}, 0.0), 2), std::domain_error);
}

TEST_CASE("generic field bound") {
    auto m = fixtures::three_memories();
    auto w = hebbian_learn(m);
    auto chi = fixtures::probe16();
    CHECK(h_max_generic(w, ProbeSpec(chi, 0.0), m[2]) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(h_max_generic(WeightMatrix(5), ProbeSpec(SpinVector::parse("+++++"), 0.0), SpinVector::parse("+-+++")) == 0.0);
    CHECK_THROWS_AS(h_max_generic(w, ProbeSpec(chi, 0.0), chi), std::domain_error);

    // agrees with the closed form on random orthogonal instances
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = std::size_t{1} << (2 + rng() % 4);
        const std::size_t p = 1 + rng() % (n - 2);
        auto mem = fixtures::hadamard_memories(n, p, 1 + rng() % (n - p));
        auto wr = hebbian_learn(mem);
        ProbeSpec probe(fixtures::random_spins(n, rng), 0.0);
        for (std::size_t mu = 0; mu < p; ++mu) {
            if (hamming(probe.pattern, mem[mu]) == 0)
                continue;
            CHECK(std::abs(h_max(mem, probe, mu) - h_max_generic(wr, probe, mem[mu])) < 1e-12);
        }
    }
}

TEST_CASE("energy report") {
    auto m = fixtures::three_memories();
    auto chi = fixtures::probe16();
    const std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0, 1.2};
    auto r = energy_report(m, ProbeSpec(chi, 0.0), grid);

    CHECK(r.memory_total(2, 0.75) == r.probe_total(0.75));
    CHECK(r.memory_total(2, 0.7) < r.probe_total(0.7));
    CHECK(r.memory_total(2, 0.8) > r.probe_total(0.8));
    for (std::size_t mu = 0; mu < 3; ++mu) {
        CHECK(r.memory_total(mu, 0.0) == -6.5);
        CHECK(r.flip_total(mu, 0.0) == -6.5);
        const auto d = static_cast<double>(hamming(chi, m[mu]));
        CHECK(r.memory_probe_slope[mu] == -(16.0 - 2.0 * d));
    }
    CHECK(r.h_max[2] == 0.75);

    auto w = hebbian_learn(m);
    for (double h : grid) {
        auto prob = build_problem(w, ProbeSpec(chi, h));
        CHECK(std::abs(r.probe_total(h) - prob.energy(chi)) < 1e-12);
        for (std::size_t mu = 0; mu < 3; ++mu) {
            CHECK(std::abs(r.memory_total(mu, h) - prob.energy(m[mu])) < 1e-12);
            CHECK(std::abs(r.flip_total(mu, h) - prob.energy(m[mu].flipped())) < 1e-12);
        }
    }

    const std::string csv = r.to_csv();
    CHECK(csv.substr(0, csv.find('\n')) == "h,E_probe,E_mem_1,E_mem_2,E_mem_3,E_flip_1,E_flip_2,E_flip_3");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
    CHECK(csv.find("\n0.75,-15.5,") != std::string::npos);
}

TEST_CASE("orthogonal memories: closed-form energies and ordering around the bound") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = std::size_t{1} << (2 + rng() % 3);
        const std::size_t p = 1 + rng() % (n - 2);
        auto mem = fixtures::hadamard_memories(n, p, 1 + rng() % (n - p));
        auto w = hebbian_learn(mem);
        ProbeSpec probe(fixtures::random_spins(n, rng), 0.0);
        if (mem.find(probe.pattern))
            continue;
        const double h = 0.05 * static_cast<double>(rng() % 30);
        auto prob = build_problem(w, probe.with_field(h));
        for (std::size_t mu = 0; mu < p; ++mu) {
            const auto d = static_cast<double>(hamming(probe.pattern, mem[mu]));
            const double expected = -(static_cast<double>(n) - p) / 2.0 - h * (n - 2.0 * d);
            CHECK(std::abs(prob.energy(mem[mu]) - expected) < 1e-12);
        }
        // degeneracy of memories and their flips at h = 0
        auto p0 = build_problem(w, probe.with_field(0.0));
        for (std::size_t mu = 0; mu < p; ++mu) {
            CHECK(p0.energy(mem[mu]) == doctest::Approx(p0.energy(mem[0])));
            CHECK(p0.energy(mem[mu].flipped()) == doctest::Approx(p0.energy(mem[0])));
        }
        // ordering flips at the largest bound
        auto bounds = h_max_bounds(mem, probe);
        if (bounds.max <= 1e-9)
            continue;
        const auto& target = mem[bounds.argmax];
        auto below = build_problem(w, probe.with_field(0.5 * bounds.max));
        auto above = build_problem(w, probe.with_field(1.5 * bounds.max));
        CHECK(below.energy(target) < below.energy(probe.pattern));
        CHECK(above.energy(target) > above.energy(probe.pattern));
    }
}

TEST_CASE("hardware quantization") {
    IsingProblem p(3);
    p.set_coupling(0, 1, 3.0 / 16.0);
    p.set_coupling(1, 2, 0.3);
    p.set_field(0, 0.01);
    p.set_field(2, -1.5);
    auto q = quantize_hardware(p);
    CHECK(q.coupling(0, 1) == 3.0 / 16.0);
    CHECK(q.field(0) == 0.0078125);
    CHECK(q.coupling(1, 2) == std::round(0.3 * 256) / 256);
    CHECK(quantize_hardware(q) == q);

    IsingProblem big(2);
    big.set_coupling(0, 1, 2.0);
    big.set_field(1, 1.0);
    CHECK_THROWS_AS(quantize_hardware(big), std::out_of_range);
    auto r = quantize_hardware(big, true);
    CHECK(r.coupling(0, 1) == 1.0);
    CHECK(r.field(1) == 0.5);
    CHECK(hardware_scale(big) == 0.5);
}
