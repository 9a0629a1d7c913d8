// Parallel kernels against their serial references: wall time of each and whether results agree.
// Usage: bench_parallel [threads]

#include <algorithm>
#include <chrono>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "qarecall/annealer_q.hpp"
#include "qarecall/annealer_sa.hpp"
#include "qarecall/capacity.hpp"
#include "qarecall/oracle.hpp"
#include "qarecall/parallel.hpp"

using namespace qarecall;
using namespace qarecall::kernels;

namespace {

// Median of five runs, in milliseconds.
double time_ms(const std::function<void()>& f) {
    std::vector<double> runs;
    for (int r = 0; r < 5; ++r) {
        const auto start = std::chrono::steady_clock::now();
        f();
        runs.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
    }
    std::sort(runs.begin(), runs.end());
    return runs[2];
}

void row(const char* name, const std::function<void()>& parallel, const std::function<void()>& serial, bool agree) {
    const double p = time_ms(parallel);
    const double s = time_ms(serial);
    std::printf("%-28s %12.3f %12.3f %8.2fx  %s\n", name, s, p, s / p, agree ? "agree" : "DIFFER");
}

} // namespace

int main(int argc, char** argv) {
#ifdef _OPENMP
    if (argc > 1)
        omp_set_num_threads(std::atoi(argv[1]));
#else
    (void)argc;
    (void)argv;
#endif
    std::printf("threads: %d\n", max_threads());
    std::printf("%-28s %12s %12s %9s\n", "kernel", "serial ms", "parallel ms", "speedup");

    std::mt19937_64 rng(1);
    {
        const auto problem = fixtures::random_problem(20, rng);
        const bool agree = ground_set(problem).states == ground_set_reference(problem).states;
        row("oracle N=20", [&] { ground_set(problem); }, [&] { ground_set_reference(problem); }, agree);
    }
    {
        const auto problem = fixtures::random_problem(12, rng);
        const bool agree = diagonal_energies(problem) == diagonal_energies_serial(problem);
        row("diagonal energies N=12", [&] { diagonal_energies(problem); }, [&] { diagonal_energies_serial(problem); },
            agree);
        const auto energies = diagonal_energies(problem);
        std::vector<Amplitude> a(energies.size(), Amplitude(1.0 / 64.0, 0.0));
        std::vector<Amplitude> b = a;
        auto step_parallel = [&] {
            for (int k = 0; k < 200; ++k) {
                apply_phase(a, energies, 0.01);
                apply_transverse(a, 12, 0.02);
            }
        };
        auto step_serial = [&] {
            for (int k = 0; k < 200; ++k) {
                apply_phase_serial(b, energies, 0.01);
                apply_transverse_serial(b, 12, 0.02);
            }
        };
        step_parallel();
        step_serial();
        double diff = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            diff = std::max(diff, std::abs(a[i] - b[i]));
        row("QA steps x200 N=12", step_parallel, step_serial, diff < 1e-12);
    }
    {
        const auto problem = fixtures::random_problem(16, rng);
        const SASchedule schedule;
        const bool agree = sa_sample(problem, schedule, 32, 5).best_per_restart ==
                           sa_sample_serial(problem, schedule, 32, 5).best_per_restart;
        row("SA 32 restarts N=16", [&] { sa_sample(problem, schedule, 32, 5); },
            [&] { sa_sample_serial(problem, schedule, 32, 5); }, agree);
    }
    {
        MonteCarloParams prm;
        prm.trials = 200;
        const bool agree = monte_carlo_success(prm).successes == monte_carlo_success_serial(prm).successes;
        row("Monte Carlo 200 trials N=12", [&] { monte_carlo_success(prm); },
            [&] { monte_carlo_success_serial(prm); }, agree);
    }
    return 0;
}
