// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "qarecall/annealer_q.hpp"
#include "qarecall/annealer_sa.hpp"
#include "qarecall/attraction.hpp"
#include "qarecall/capacity.hpp"
#include "qarecall/chimera.hpp"
#include "qarecall/oracle.hpp"

using namespace qarecall;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    std::string name;
    double time_limit_s;
    std::function<Verdict()> run;
};

ProbeSpec probe16(double h) { return ProbeSpec(fixtures::probe16(), h); }

Verdict field_bound() {
    const auto m = fixtures::three_memories();
    const auto w = hebbian_learn(m);
    const double closed = h_max(m, probe16(0.0), 2);
    const double generic = h_max_generic(w, probe16(0.0), m[2]);
    std::ostringstream d;
    d << "closed form " << closed << ", generic " << generic;
    return {std::abs(closed - 0.75) <= 1e-12 && std::abs(generic - 0.75) <= 1e-12, d.str()};
}

Verdict recall_window() {
    const auto m = fixtures::three_memories();
    const auto w = hebbian_learn(m);
    bool ok = true;
    std::ostringstream d;
    for (double h : {0.125, 0.25, 0.5, 0.7, 0.8, 1.0, 1.2}) {
        const auto probe = probe16(h);
        const auto g = ground_set(build_problem(w, probe));
        const auto out = classify_recall(g, m, probe);
        const bool want_recall = h < 0.75;
        const bool good = want_recall ? (g.states.size() == 1 && g.states[0] == m[2] && out.success())
                                      : out.classification == RecallClass::probe_overbias;
        ok = ok && good;
        d << "h=" << h << ":" << to_string(out.classification) << " ";
    }
    return {ok, d.str()};
}

Verdict quadratic_forms() {
    const auto m = fixtures::three_memories();
    const auto w = hebbian_learn(m);
    bool ok = std::abs(w.half_quadratic_form(fixtures::probe16()) - 3.5) <= 1e-12;
    std::ostringstream d;
    d << "chi " << w.half_quadratic_form(fixtures::probe16()) << ", memories";
    for (const auto& xi : m) {
        ok = ok && std::abs(w.half_quadratic_form(xi) - 6.5) <= 1e-12;
        d << " " << w.half_quadratic_form(xi);
    }
    return {ok, d.str()};
}

Verdict tail_grid() {
    std::size_t rows = 0;
    std::size_t bad = 0;
    for (std::size_t n = 2; n <= 64; n += 2)
        for (std::size_t x = 0; x <= n / 2; ++x) {
            ++rows;
            bad += !p_star_exact_dominates(n, x);
        }
    return {bad == 0, std::to_string(rows) + " (N, x) rows, " + std::to_string(bad) + " violations"};
}

Verdict basin_exhaustive() {
    const MemorySet m({SpinVector::parse("++++++++++++"), SpinVector::parse("++++++------")});
    const auto v = verify_basin_exhaustive(m, radius_bound(12));
    const std::size_t bad = v.failures_within_condition();
    std::ostringstream d;
    d << v.probes_checked << " probes within distance " << radius_bound(12) << ", " << bad
      << " failures under the basin condition (" << v.failures.size() << " outside it), " << v.ties.size()
      << " ties, " << v.skipped_field << " without a field window";
    return {bad == 0 && v.probes_checked > 0, d.str()};
}

Verdict flip_symmetry() {
    const auto m = fixtures::three_memories();
    const auto g = ground_set(build_problem(hebbian_learn(m), probe16(0.0)));
    bool ok = g.states.size() == 6;
    for (const auto& xi : m)
        ok = ok && g.contains(xi) && g.contains(xi.flipped());
    return {ok, std::to_string(g.states.size()) + " degenerate ground states at E=" + std::to_string(g.energy)};
}

Verdict adiabatic_ladder() {
    bool ok = true;
    std::size_t instances = 0;
    std::ostringstream d;
    for (std::uint64_t seed = 100; instances < 6; ++seed) {
        std::mt19937_64 rng(seed);
        const std::size_t n = 3 + seed % 4;
        const auto problem = fixtures::random_problem(n, rng);
        const auto ground = ground_set(problem);
        const auto gap = min_gap(problem, AnnealSchedule::linear(1.0), 201);
        if (ground.states.size() != 1 || !(gap.gap > 0.0))
            continue;
        ++instances;
        double last = 0.0;
        double drift = 0.0;
        bool monotone = true;
        // Doubling from T = 8 until T reaches 100 / gap^2, and at least to T = 256.
        const double top = std::max(256.0, 100.0 / (gap.gap * gap.gap));
        double t = 8.0;
        for (;; t *= 2.0) {
            const auto r = evolve(problem, AnnealSchedule::linear(t), static_cast<std::size_t>(40 * t));
            const double p = r.probability(ground.states[0]);
            monotone = monotone && p >= last - 1e-3;
            drift = std::max(drift, r.norm_drift);
            last = p;
            if (t >= top)
                break;
        }
        const bool good = monotone && last >= 0.95 && drift < 1e-8;
        ok = ok && good;
        d << "N=" << n << " gap=" << gap.gap << " T_top=" << t << " P=" << last << (good ? "" : " (fail)") << "; ";
    }
    return {ok, d.str()};
}

Verdict sa_agreement() {
    std::mt19937_64 rng(2024);
    const SASchedule schedule;
    const std::size_t restarts = 100;
    std::size_t agree = 0;
    std::ostringstream hard;
    for (std::size_t k = 0; k < 50;) {
        const std::size_t p = 1 + k % 4;
        const auto m = fixtures::random_memories(16, p, rng);
        const auto target = m[rng() % p];
        const auto chi = fixtures::flip_sites(target, 1 + rng() % 3, rng);
        const ProbeSpec base(chi, 0.0);
        const auto nearest = nearest_memory(m, base);
        const auto w = hebbian_learn(m);
        if (!nearest)
            continue;
        const double hmax = h_max_generic(w, base, m[*nearest]);
        if (!(hmax > 0.0))
            continue;
        const auto problem = build_problem(w, base.with_field(0.5 * hmax));
        const double exact = ground_set(problem).energy;
        const auto sa = sa_sample(problem, schedule, restarts, 1000 + k);
        if (std::abs(sa.best_energy - exact) <= 1e-9)
            ++agree;
        else
            hard << " instance " << k << " (p=" << p << ", SA " << sa.best_energy << " vs " << exact << ")";
        ++k;
    }
    return {agree >= 48, std::to_string(agree) + "/50 agree" + (hard.str().empty() ? "" : "; hard:" + hard.str())};
}

Verdict monte_carlo() {
    bool ok = true;
    std::ostringstream d;
    for (std::size_t p : {2, 3, 4}) {
        MonteCarloParams prm;
        prm.n = 12;
        prm.p = p;
        prm.t_frac = 0.25;
        prm.trials = 2000;
        prm.seed = 7;
        const auto r = monte_carlo_success(prm);
        ok = ok && r.consistent();
        d << "p=" << p << ": rate " << r.rate << " vs predicted " << r.predicted << " (3 sigma floor "
          << r.predicted - 3.0 * r.sigma << "); ";
    }
    return {ok, d.str()};
}

Verdict embedding_round_trip() {
    std::mt19937_64 rng(12);
    const ChimeraGraph g(3);
    std::size_t checked = 0;
    std::size_t bad = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + trial % 4;
        const std::size_t size = 1 + trial % 3;
        const auto logical = fixtures::random_problem(n, rng);
        const auto lg = ground_set(logical);
        if (lg.states.size() != 1)
            continue;
        const auto e = embed_clique(n, g, std::max<std::size_t>(size, (n + 3) / 4));
        if (e.max_chain_length() > 4)
            continue;
        const auto ep = embed_problem(logical, e, g.graph());
        for (const auto& s : ground_set(ep.physical).states) {
            const auto dec = decode(s, ep);
            ++checked;
            bad += dec.broken_chains != 0 || dec.logical != lg.states[0];
        }
    }
    return {bad == 0 && checked > 0, std::to_string(checked) + " physical ground states decoded, " +
                                         std::to_string(bad) + " mismatched or broken"};
}

Verdict tradeoff_identity() {
    double worst = 0.0;
    const std::size_t n = 64;
    for (double t = 0.05; t < 0.5; t += 0.05) {
        const double c_max = t * t / (0.5 + t);
        for (double frac : {0.0, 0.25, 0.5, 0.75}) {
            const double c2 = frac * c_max;
            const double c1 = std::log((exponential_capacity(n, t, c2) - 1.0) / 2.0) / static_cast<double>(n);
            const double f = 0.5 - t;
            worst = std::max(worst, std::abs((c1 + c2) - (0.5 - f) * (0.5 - f) / (1.0 - f)));
            worst = std::max(worst, std::abs(tradeoff(f) - (0.5 - f) * (0.5 - f) / (1.0 - f)));
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "max deviation %.3g", worst);
    return {worst <= 1e-12, buf};
}

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"field bound h_max = 0.75", 1e-3, field_bound},
        {"oracle recall window", 5.0 * 7, recall_window},
        {"quadratic forms 6.5 and 3.5", 1.0, quadratic_forms},
        {"binomial tail dominates its bound", 10.0, tail_grid},
        {"exhaustive attraction basin", 600.0, basin_exhaustive},
        {"spin-flip degeneracy at h = 0", 5.0, flip_symmetry},
        {"adiabatic convergence ladder", 120.0 * 6, adiabatic_ladder},
        {"SA matches the oracle", 600.0, sa_agreement},
        {"Monte Carlo capacity bound", 900.0, monte_carlo},
        {"embedding round trip", 60.0, embedding_round_trip},
        {"capacity tradeoff identity", 1.0, tradeoff_identity},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs <= c.time_limit_s;
        const bool pass = v.pass && in_time;
        failed += !pass;
        std::printf("%s %2zu %s [%.3fs%s] %s\n", pass ? "PASS" : "FAIL", i + 1, c.name.c_str(), secs,
                    in_time ? "" : ", over time limit", v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed ? 1 : 0;
}
