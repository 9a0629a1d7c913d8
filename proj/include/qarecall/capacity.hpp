#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "qarecall/annealer_sa.hpp"

namespace qarecall {

struct PStar {
    double exact = 0.0;  // sum_{l <= N/2 + x} C(N, l) / 2^N
    double bound = 0.0;  // 1 - exp(-x^2 / (N/2 + x)) / 2
};

// N even and positive, 0 <= x <= N/2. The tail is summed with big integers.
PStar p_star(std::size_t n, std::size_t x);

// exact >= bound, decided at 100 significant digits rather than in double precision.
bool p_star_exact_dominates(std::size_t n, std::size_t x);

// 1 + log(gamma) / log(p_star). Throws std::domain_error when p_star rounds to 1 (unbounded).
double capacity_bound(double gamma, double p_star_value);

// 1 + 2 exp(C1 N) with C1 = t^2/(0.5 + t) - C2; requires 0 <= C2 <= t^2/(0.5 + t).
double exponential_capacity(std::size_t n, double t_frac, double c2);

// (0.5 - f)^2 / (1 - f) for 0 <= f < 0.5.
double tradeoff(double f);

// N / (2 ln N), N >= 3.
double hebbian_classical_capacity(std::size_t n);

// x = round(t N).
std::size_t basin_shrink(std::size_t n, double t_frac);

// Both readings of the capacity bound for gamma = 1 - exp(-C2 N).
struct CapacityReport {
    std::size_t n = 0;
    double t_frac = 0.0;
    double c2 = 0.0;
    std::size_t x = 0;
    double gamma = 0.0;
    PStar p_star;
    // Un-approximated log-ratio bound, with the exact tail and with the closed-form tail.
    double log_ratio_exact = 0.0;
    double log_ratio_bound = 0.0;
    // Small-z approximation 1 + 2 exp(C1 N).
    double exponential = 0.0;
    // f = (N/2 - 1 - x) / N and its large-N limit 0.5 - t.
    double f_finite = 0.0;
    double f_limit = 0.0;
};

CapacityReport capacity_report(std::size_t n, double t_frac, double c2);

enum class Engine { oracle, sa };
std::string to_string(Engine e);
Engine parse_engine(const std::string& name);

struct MonteCarloParams {
    std::size_t n = 12;
    std::size_t p = 2;
    double t_frac = 0.25;
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    Engine engine = Engine::oracle;
    SASchedule sa_schedule{};
    std::size_t sa_restarts = 20;
};

struct MonteCarloResult {
    MonteCarloParams params;
    std::size_t successes = 0;
    // Trials scored as failures because the nearest memory was tied or the field window was empty.
    std::size_t unresolved = 0;
    double rate = 0.0;
    // (exact P*)^(p-1)
    double predicted = 0.0;
    // Binomial standard deviation of the rate under the predicted probability.
    double sigma = 0.0;

    // rate >= predicted - 3 sigma
    bool consistent() const { return rate >= predicted - 3.0 * sigma; }
};

// Trial k draws from seed + k: p fresh memories, a probe at distance N/2 - 1 - x from the first,
// recall at 0.5 * h_max_generic(nearest). Success means unique recall of the nearest memory.
MonteCarloResult monte_carlo_success(const MonteCarloParams& params);
MonteCarloResult monte_carlo_success_serial(const MonteCarloParams& params);

// Columns: N, p, t_frac, trials, successes, rate, predicted, engine.
std::string monte_carlo_csv(const MonteCarloResult& result);

} // namespace qarecall
