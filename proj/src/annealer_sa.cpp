#include "qarecall/annealer_sa.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

namespace qarecall {

void SASchedule::validate() const {
    if (sweeps < 1)
        throw std::invalid_argument("SASchedule: sweeps must be >= 1");
    if (!(t_final > 0.0) || !std::isfinite(t_final))
        throw std::invalid_argument("SASchedule: final temperature must be positive");
    if (!(t_initial >= t_final))
        throw std::invalid_argument("SASchedule: final temperature must not exceed the initial one");
    if (std::isinf(t_initial) && sweeps != 1)
        throw std::invalid_argument("SASchedule: infinite temperature needs a single sweep");
}

double SASchedule::temperature(std::size_t k) const {
    if (sweeps == 1 || k == 0)
        return t_initial;
    const double f = std::min(1.0, double(k) / double(sweeps - 1));
    if (cooling == Cooling::geometric)
        return t_initial * std::pow(t_final / t_initial, f);
    return t_initial + f * (t_final - t_initial);
}

namespace {

// Metropolis state with cached local fields f_i = h_i + sum_j J_ij s_j; flipping i costs 2 s_i f_i.
class Chain {
public:
    Chain(const IsingProblem& p, std::mt19937_64& rng) : p_(p), rng_(rng), s_(p.size()), f_(p.size()), order_(p.size()) {
        std::bernoulli_distribution coin(0.5);
        for (auto& v : s_)
            v = coin(rng_) ? 1 : -1;
        for (std::size_t i = 0; i < s_.size(); ++i) {
            double f = p.field(i);
            auto row = p.coupling_row(i);
            for (std::size_t j = 0; j < s_.size(); ++j)
                f += row[j] * s_[j];
            f_[i] = f;
        }
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        energy_ = p.energy(std::span<const Spin>(s_));
    }

    // One sweep at temperature t; returns accepted flips. Calls on_flip after each acceptance.
    template <class F>
    std::size_t sweep(double t, F&& on_flip) {
        std::shuffle(order_.begin(), order_.end(), rng_);
        std::size_t acc = 0;
        for (std::size_t i : order_) {
            const double delta = 2.0 * s_[i] * f_[i];
            const bool take = delta <= 0.0 || std::isinf(t) || unit_(rng_) < std::exp(-delta / t);
            if (!take)
                continue;
            flip(i, delta);
            ++acc;
            on_flip();
        }
        return acc;
    }

    const std::vector<Spin>& spins() const { return s_; }
    double energy() const { return energy_; }

private:
    void flip(std::size_t i, double delta) {
        const double change = -2.0 * s_[i];
        auto row = p_.coupling_row(i);
        for (std::size_t j = 0; j < f_.size(); ++j)
            f_[j] += row[j] * change;
        s_[i] = static_cast<Spin>(-s_[i]);
        energy_ += delta;
    }

    const IsingProblem& p_;
    std::mt19937_64& rng_;
    std::vector<Spin> s_;
    std::vector<double> f_;
    std::vector<std::size_t> order_;
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
    double energy_ = 0.0;
};

struct RestartOutcome {
    SpinVector best;
    double energy = 0.0;
    std::uint64_t proposals = 0;
    std::uint64_t accepted = 0;
};

RestartOutcome run_restart(const IsingProblem& problem, const SASchedule& schedule, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Chain chain(problem, rng);
    std::vector<Spin> best = chain.spins();
    double best_e = chain.energy();
    RestartOutcome out;
    // Incremental energies drift slightly; only a clear improvement replaces the incumbent.
    auto track = [&] {
        if (chain.energy() < best_e - 1e-9) {
            best_e = chain.energy();
            best = chain.spins();
        }
    };
    for (std::size_t k = 0; k < schedule.sweeps; ++k)
        out.accepted += chain.sweep(schedule.temperature(k), track);
    out.proposals = std::uint64_t(schedule.sweeps) * problem.size();
    out.best = SpinVector(std::move(best));
    out.energy = problem.energy(out.best);
    return out;
}

SAResult collect(std::vector<RestartOutcome>& runs, std::size_t n) {
    SAResult r;
    std::map<SpinVector, std::size_t> tally;
    r.best_energy = std::numeric_limits<double>::infinity();
    r.best = SpinVector::filled(n, 1);
    for (auto& run : runs) {
        if (run.energy < r.best_energy) {
            r.best_energy = run.energy;
            r.best = run.best;
        }
        ++tally[run.best];
        r.proposals += run.proposals;
        r.accepted += run.accepted;
        r.energy_per_restart.push_back(run.energy);
        r.best_per_restart.push_back(std::move(run.best));
    }
    for (auto& [state, count] : tally)
        r.counts.push_back({state, count});
    return r;
}

void check_restarts(std::size_t restarts) {
    if (restarts < 1)
        throw std::invalid_argument("sa_sample: restarts must be >= 1");
}

} // namespace

SAResult sa_sample(const IsingProblem& problem, const SASchedule& schedule, std::size_t restarts, std::uint64_t seed) {
    schedule.validate();
    check_restarts(restarts);
    std::vector<RestartOutcome> runs(restarts);
    const auto count = static_cast<long long>(restarts);
#pragma omp parallel for schedule(dynamic)
    for (long long r = 0; r < count; ++r)
        runs[static_cast<std::size_t>(r)] = run_restart(problem, schedule, seed + static_cast<std::uint64_t>(r));
    return collect(runs, problem.size());
}

SAResult sa_sample_serial(const IsingProblem& problem, const SASchedule& schedule, std::size_t restarts,
                          std::uint64_t seed) {
    schedule.validate();
    check_restarts(restarts);
    std::vector<RestartOutcome> runs;
    for (std::size_t r = 0; r < restarts; ++r)
        runs.push_back(run_restart(problem, schedule, seed + r));
    return collect(runs, problem.size());
}

std::vector<double> metropolis_histogram(const IsingProblem& problem, double temperature, std::size_t sweeps,
                                         std::uint64_t seed) {
    if (problem.size() > 20)
        throw std::invalid_argument("metropolis_histogram: at most 20 spins");
    if (!(temperature > 0.0))
        throw std::invalid_argument("metropolis_histogram: temperature must be positive");
    std::mt19937_64 rng(seed);
    Chain chain(problem, rng);
    std::vector<double> hist(std::size_t{1} << problem.size(), 0.0);
    for (std::size_t k = 0; k < sweeps; ++k) {
        chain.sweep(temperature, [] {});
        std::size_t x = 0;
        for (std::size_t i = 0; i < problem.size(); ++i)
            if (chain.spins()[i] > 0)
                x |= std::size_t{1} << i;
        hist[x] += 1.0;
    }
    for (double& v : hist)
        v /= double(sweeps);
    return hist;
}

} // namespace qarecall
