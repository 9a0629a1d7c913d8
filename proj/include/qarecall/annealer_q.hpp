#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qarecall/ising.hpp"
#include "qarecall/outcomes.hpp"

namespace qarecall {

inline constexpr std::size_t kEvolveMaxSpins = 12;
inline constexpr std::size_t kGapMaxSpins = 8;

// Piecewise-linear control function over s in [0, 1].
class ControlTable {
public:
    ControlTable(std::vector<double> s, std::vector<double> values);
    static ControlTable constant(double value);
    static ControlTable linear(double from, double to);

    // Two whitespace-separated columns (s, value); '#' comments.
    static ControlTable parse(std::string_view text);
    static ControlTable load(const std::string& path);

    double operator()(double s) const;
    bool non_increasing() const;
    bool non_decreasing() const;
    ControlTable scaled(double factor) const;

    const std::vector<double>& knots() const { return s_; }
    const std::vector<double>& values() const { return v_; }

private:
    std::vector<double> s_;
    std::vector<double> v_;
};

// H(s) = A(s) H_I + B(s) H_P with H_I = -sum_i sigma^x_i, run for total time t_anneal.
struct AnnealSchedule {
    ControlTable a;
    ControlTable b;
    double t_anneal;

    // A non-increasing with A(0) > 0, B non-decreasing, t_anneal > 0.
    AnnealSchedule(ControlTable a, ControlTable b, double t_anneal);

    // A(s) = 1 - s, B(s) = s.
    static AnnealSchedule linear(double t_anneal);
};

// Reads one control table per file, rescales both by 1/B(1) and requires A(1) = 0.
AnnealSchedule load_schedule(const std::string& a_path, const std::string& b_path, double t_anneal);

using Amplitude = std::complex<double>;

// Amplitude index bit i set <=> spin i is +1.
struct QuantumState {
    std::size_t n = 0;
    std::vector<Amplitude> amplitudes;

    // Ground state of H_I: uniform superposition.
    static QuantumState uniform(std::size_t n);
    double norm() const;
};

struct AnnealResult {
    std::size_t n = 0;
    std::vector<double> probabilities;
    double norm_drift = 0.0;
    std::size_t steps = 0;
    // <H_P> in the final state.
    double problem_energy = 0.0;

    double probability(const SpinVector& s) const { return probabilities.at(s.to_bits()); }
    SpinVector modal_state() const;
};

// Matrix-free kernels. The plain versions use OpenMP; *_serial are the reference loops.
namespace kernels {

// psi_x <- exp(-i tau E_x) psi_x
void apply_phase(std::span<Amplitude> psi, std::span<const double> energies, double tau);
void apply_phase_serial(std::span<Amplitude> psi, std::span<const double> energies, double tau);

// psi <- prod_j exp(i theta sigma^x_j) psi
void apply_transverse(std::span<Amplitude> psi, std::size_t n, double theta);
void apply_transverse_serial(std::span<Amplitude> psi, std::size_t n, double theta);

// E(x) for every basis state.
std::vector<double> diagonal_energies(const IsingProblem& problem);
std::vector<double> diagonal_energies_serial(const IsingProblem& problem);

} // namespace kernels

// Symmetric split-operator propagation with `steps` equal steps, each using the
// Hamiltonian at the step midpoint. Second order in the step size; every factor is unitary.
AnnealResult evolve(const IsingProblem& problem, const AnnealSchedule& schedule, std::size_t steps);

// Dense reference: exact exponential of the midpoint Hamiltonian per step (Eigen). N <= 8.
AnnealResult evolve_dense_reference(const IsingProblem& problem, const AnnealSchedule& schedule, std::size_t steps);

struct GapResult {
    double gap = 0.0;
    double s_at_min = 0.0;
};

// min over s_grid equally spaced points in [0, 1] of E_1(s) - E_0(s).
GapResult min_gap(const IsingProblem& problem, const AnnealSchedule& schedule, std::size_t s_grid);

// Spectrum of H(s), ascending.
std::vector<double> instantaneous_spectrum(const IsingProblem& problem, const AnnealSchedule& schedule, double s);

OutcomeCounts sample(const AnnealResult& result, std::size_t shots, std::uint64_t seed);

} // namespace qarecall
