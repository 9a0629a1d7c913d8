#include "qarecall/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "qarecall/format.hpp"
#include "qarecall/oracle.hpp"

namespace qarecall {

namespace mp = boost::multiprecision;

namespace {

void check_tail_args(std::size_t n, std::size_t x) {
    if (n == 0 || n % 2 != 0)
        throw std::domain_error("p_star: N must be even and positive");
    if (x > n / 2)
        throw std::domain_error("p_star: x must lie in [0, N/2]");
}

mp::cpp_bin_float_100 exact_tail(std::size_t n, std::size_t x) {
    mp::cpp_int term = 1;  // C(n, 0)
    mp::cpp_int sum = 0;
    const std::size_t top = std::min(n, n / 2 + x);
    for (std::size_t l = 0; l <= top; ++l) {
        sum += term;
        term = term * (n - l) / (l + 1);
    }
    const mp::cpp_int total = mp::cpp_int(1) << n;
    return mp::cpp_bin_float_100(sum) / mp::cpp_bin_float_100(total);
}

template <class Real>
Real tail_bound(std::size_t n, std::size_t x) {
    const Real xr = static_cast<double>(x);
    const Real denom = Real(static_cast<double>(n)) / 2 + xr;
    return Real(1) - exp(-(xr * xr) / denom) / 2;
}

} // namespace

PStar p_star(std::size_t n, std::size_t x) {
    check_tail_args(n, x);
    using std::exp;
    return {static_cast<double>(exact_tail(n, x)), tail_bound<double>(n, x)};
}

bool p_star_exact_dominates(std::size_t n, std::size_t x) {
    check_tail_args(n, x);
    return exact_tail(n, x) >= tail_bound<mp::cpp_bin_float_100>(n, x);
}

double capacity_bound(double gamma, double p_star_value) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::domain_error("capacity_bound: gamma must lie in (0, 1)");
    if (!(p_star_value > 0.0 && p_star_value <= 1.0))
        throw std::domain_error("capacity_bound: P* must lie in (0, 1)");
    const double log_p = std::log(p_star_value);
    if (log_p == 0.0)
        throw std::domain_error("capacity_bound: P* = 1 at double precision, bound is unbounded");
    return 1.0 + std::log(gamma) / log_p;
}

double exponential_capacity(std::size_t n, double t_frac, double c2) {
    if (!(t_frac >= 0.0 && t_frac < 0.5))
        throw std::domain_error("exponential_capacity: t must lie in [0, 0.5)");
    const double window = t_frac * t_frac / (0.5 + t_frac);
    if (!(c2 >= 0.0 && c2 <= window))
        throw std::domain_error("exponential_capacity: C2 must lie in [0, t^2/(0.5 + t)]");
    const double c1 = window - c2;
    return 1.0 + 2.0 * std::exp(c1 * static_cast<double>(n));
}

double tradeoff(double f) {
    if (!(f >= 0.0 && f < 0.5))
        throw std::domain_error("tradeoff: f must lie in [0, 0.5)");
    return (0.5 - f) * (0.5 - f) / (1.0 - f);
}

double hebbian_classical_capacity(std::size_t n) {
    if (n < 3)
        throw std::domain_error("hebbian_classical_capacity: N must be at least 3");
    const auto nd = static_cast<double>(n);
    return nd / (2.0 * std::log(nd));
}

std::size_t basin_shrink(std::size_t n, double t_frac) {
    if (!(t_frac >= 0.0 && t_frac < 0.5))
        throw std::domain_error("t_frac must lie in [0, 0.5)");
    return static_cast<std::size_t>(std::llround(t_frac * static_cast<double>(n)));
}

CapacityReport capacity_report(std::size_t n, double t_frac, double c2) {
    CapacityReport r;
    r.n = n;
    r.t_frac = t_frac;
    r.c2 = c2;
    r.x = basin_shrink(n, t_frac);
    r.gamma = -std::expm1(-c2 * static_cast<double>(n));
    r.p_star = p_star(n, std::min(r.x, n / 2));
    auto guarded = [&](double ps) {
        try {
            return capacity_bound(r.gamma, ps);
        } catch (const std::domain_error&) {
            return std::numeric_limits<double>::infinity();
        }
    };
    r.log_ratio_exact = guarded(r.p_star.exact);
    r.log_ratio_bound = guarded(r.p_star.bound);
    r.exponential = exponential_capacity(n, t_frac, c2);
    r.f_finite = (static_cast<double>(n) / 2.0 - 1.0 - static_cast<double>(r.x)) / static_cast<double>(n);
    r.f_limit = 0.5 - t_frac;
    return r;
}

std::string to_string(Engine e) { return e == Engine::oracle ? "oracle" : "sa"; }

Engine parse_engine(const std::string& name) {
    if (name == "oracle")
        return Engine::oracle;
    if (name == "sa")
        return Engine::sa;
    throw std::invalid_argument("unknown engine '" + name + "' (expected oracle or sa)");
}

namespace {

enum class Trial { success, failure, unresolved };

void check_params(const MonteCarloParams& prm) {
    if (prm.n < 2 || prm.n % 2 != 0)
        throw std::domain_error("monte_carlo_success: N must be even and at least 2");
    if (prm.p < 1)
        throw std::domain_error("monte_carlo_success: p must be at least 1");
    if (prm.n < 63 && prm.p > (std::uint64_t{1} << prm.n))
        throw std::domain_error("monte_carlo_success: more memories than distinct patterns");
    if (prm.engine == Engine::oracle && prm.n > 20)
        throw std::domain_error("monte_carlo_success: oracle engine needs N <= 20");
    if (prm.trials < 1)
        throw std::domain_error("monte_carlo_success: trials must be at least 1");
    if (basin_shrink(prm.n, prm.t_frac) > prm.n / 2 - 1)
        throw std::domain_error("monte_carlo_success: t too large for a non-negative probe distance");
    if (prm.engine == Engine::sa)
        prm.sa_schedule.validate();
}

SpinVector random_pattern(std::size_t n, std::mt19937_64& rng) {
    std::vector<Spin> s(n);
    std::bernoulli_distribution coin(0.5);
    for (auto& v : s)
        v = coin(rng) ? 1 : -1;
    return SpinVector(std::move(s));
}

Trial run_trial(const MonteCarloParams& prm, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<SpinVector> drawn;
    while (drawn.size() < prm.p) {
        auto s = random_pattern(prm.n, rng);
        if (std::find(drawn.begin(), drawn.end(), s) == drawn.end())
            drawn.push_back(std::move(s));
    }
    const MemorySet memories(drawn);

    const std::size_t d_s = prm.n / 2 - 1 - basin_shrink(prm.n, prm.t_frac);
    std::vector<std::size_t> sites(prm.n);
    for (std::size_t i = 0; i < prm.n; ++i)
        sites[i] = i;
    std::shuffle(sites.begin(), sites.end(), rng);
    SpinVector chi = memories[0];
    for (std::size_t k = 0; k < d_s; ++k)
        chi = chi.with_flip(sites[k]);

    const ProbeSpec probe0(chi, 0.0);
    const auto nearest = nearest_memory(memories, probe0);
    if (!nearest)
        return Trial::unresolved;
    const auto w = hebbian_learn(memories);
    double h = 0.5;
    if (hamming(chi, memories[*nearest]) > 0) {
        h = 0.5 * h_max_generic(w, probe0, memories[*nearest]);
        if (!(h > 0.0))
            return Trial::unresolved;
    }
    const ProbeSpec probe = probe0.with_field(h);
    const auto problem = build_problem(w, probe);

    if (prm.engine == Engine::oracle) {
        const auto outcome = classify_recall(ground_set(problem), memories, probe);
        const bool ok = outcome.classification == RecallClass::unique_memory && outcome.recalled_index == nearest;
        return ok ? Trial::success : Trial::failure;
    }
    const auto sa = sa_sample_serial(problem, prm.sa_schedule, prm.sa_restarts, rng());
    return sa.best == memories[*nearest] ? Trial::success : Trial::failure;
}

MonteCarloResult summarise(const MonteCarloParams& prm, const std::vector<Trial>& trials) {
    MonteCarloResult r;
    r.params = prm;
    for (Trial t : trials) {
        r.successes += t == Trial::success;
        r.unresolved += t == Trial::unresolved;
    }
    const auto count = static_cast<double>(trials.size());
    r.rate = static_cast<double>(r.successes) / count;
    const double ps = p_star(prm.n, basin_shrink(prm.n, prm.t_frac)).exact;
    r.predicted = std::pow(ps, static_cast<double>(prm.p - 1));
    r.sigma = std::sqrt(r.predicted * (1.0 - r.predicted) / count);
    return r;
}

} // namespace

MonteCarloResult monte_carlo_success(const MonteCarloParams& params) {
    check_params(params);
    std::vector<Trial> trials(params.trials);
    const auto count = static_cast<long long>(params.trials);
#pragma omp parallel for schedule(dynamic)
    for (long long k = 0; k < count; ++k)
        trials[static_cast<std::size_t>(k)] = run_trial(params, params.seed + static_cast<std::uint64_t>(k));
    return summarise(params, trials);
}

MonteCarloResult monte_carlo_success_serial(const MonteCarloParams& params) {
    check_params(params);
    std::vector<Trial> trials;
    for (std::size_t k = 0; k < params.trials; ++k)
        trials.push_back(run_trial(params, params.seed + k));
    return summarise(params, trials);
}

std::string monte_carlo_csv(const MonteCarloResult& r) {
    const auto& p = r.params;
    return "N,p,t_frac,trials,successes,rate,predicted,engine\n" + std::to_string(p.n) + ',' + std::to_string(p.p) +
           ',' + fmt_double(p.t_frac) + ',' + std::to_string(p.trials) + ',' + std::to_string(r.successes) + ',' +
           fmt_double(r.rate) + ',' + fmt_double(r.predicted) + ',' + to_string(p.engine) + '\n';
}

} // namespace qarecall
