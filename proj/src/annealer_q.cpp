#include "qarecall/annealer_q.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "qarecall/errors.hpp"

namespace qarecall {

ControlTable::ControlTable(std::vector<double> s, std::vector<double> values) : s_(std::move(s)), v_(std::move(values)) {
    if (s_.size() < 2 || s_.size() != v_.size())
        throw std::invalid_argument("ControlTable: need at least two (s, value) knots");
    if (s_.front() != 0.0 || s_.back() != 1.0)
        throw std::invalid_argument("ControlTable: knots must span s = 0 to s = 1");
    for (std::size_t k = 1; k < s_.size(); ++k)
        if (!(s_[k] > s_[k - 1]))
            throw std::invalid_argument("ControlTable: knots must be strictly increasing");
    for (double v : v_)
        if (!std::isfinite(v) || v < 0.0)
            throw std::invalid_argument("ControlTable: values must be finite and non-negative");
}

ControlTable ControlTable::constant(double value) { return ControlTable({0.0, 1.0}, {value, value}); }

ControlTable ControlTable::linear(double from, double to) { return ControlTable({0.0, 1.0}, {from, to}); }

ControlTable ControlTable::parse(std::string_view text) {
    std::vector<double> s, v;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream fields(line);
        double a = 0.0, b = 0.0;
        if (!(fields >> a)) {
            if (line.find_first_not_of(" \t\r,") != std::string::npos)
                throw std::invalid_argument("schedule line " + std::to_string(line_no) + ": expected two numbers");
            continue;
        }
        if (fields.peek() == ',')
            fields.get();
        if (!(fields >> b))
            throw std::invalid_argument("schedule line " + std::to_string(line_no) + ": expected two numbers");
        s.push_back(a);
        v.push_back(b);
    }
    return ControlTable(std::move(s), std::move(v));
}

ControlTable ControlTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open schedule file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse(buf.str());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

double ControlTable::operator()(double s) const {
    if (s <= 0.0)
        return v_.front();
    if (s >= 1.0)
        return v_.back();
    auto it = std::upper_bound(s_.begin(), s_.end(), s);
    const auto k = static_cast<std::size_t>(it - s_.begin());
    const double t = (s - s_[k - 1]) / (s_[k] - s_[k - 1]);
    return v_[k - 1] + t * (v_[k] - v_[k - 1]);
}

bool ControlTable::non_increasing() const { return std::is_sorted(v_.rbegin(), v_.rend()); }

bool ControlTable::non_decreasing() const { return std::is_sorted(v_.begin(), v_.end()); }

ControlTable ControlTable::scaled(double factor) const {
    std::vector<double> v = v_;
    for (double& x : v)
        x *= factor;
    return ControlTable(s_, std::move(v));
}

AnnealSchedule::AnnealSchedule(ControlTable a_, ControlTable b_, double t)
    : a(std::move(a_)), b(std::move(b_)), t_anneal(t) {
    if (!a.non_increasing())
        throw std::invalid_argument("AnnealSchedule: A(s) must be non-increasing");
    if (!b.non_decreasing())
        throw std::invalid_argument("AnnealSchedule: B(s) must be non-decreasing");
    if (!(a(0.0) > 0.0))
        throw std::invalid_argument("AnnealSchedule: A(0) must be positive");
    if (!(t_anneal > 0.0) || !std::isfinite(t_anneal))
        throw std::invalid_argument("AnnealSchedule: anneal time must be positive");
}

AnnealSchedule AnnealSchedule::linear(double t_anneal) {
    return AnnealSchedule(ControlTable::linear(1.0, 0.0), ControlTable::linear(0.0, 1.0), t_anneal);
}

AnnealSchedule load_schedule(const std::string& a_path, const std::string& b_path, double t_anneal) {
    auto a = ControlTable::load(a_path);
    auto b = ControlTable::load(b_path);
    const double b_end = b(1.0);
    if (!(b_end > 0.0))
        throw std::invalid_argument("load_schedule: B(1) must be positive");
    a = a.scaled(1.0 / b_end);
    b = b.scaled(1.0 / b_end);
    if (a(1.0) > 1e-12 * a(0.0))
        throw std::invalid_argument("load_schedule: A(1) must be zero");
    return AnnealSchedule(std::move(a), std::move(b), t_anneal);
}

QuantumState QuantumState::uniform(std::size_t n) {
    QuantumState q;
    q.n = n;
    const std::size_t dim = std::size_t{1} << n;
    q.amplitudes.assign(dim, Amplitude(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
    return q;
}

double QuantumState::norm() const {
    double sum = 0.0;
    for (const auto& a : amplitudes)
        sum += std::norm(a);
    return std::sqrt(sum);
}

SpinVector AnnealResult::modal_state() const {
    auto it = std::max_element(probabilities.begin(), probabilities.end());
    return SpinVector::from_bits(static_cast<std::uint64_t>(it - probabilities.begin()), n);
}

namespace kernels {

void apply_phase(std::span<Amplitude> psi, std::span<const double> energies, double tau) {
    const auto dim = static_cast<long long>(psi.size());
#pragma omp parallel for schedule(static) if (dim >= 2048)
    for (long long x = 0; x < dim; ++x)
        psi[x] *= std::polar(1.0, -tau * energies[x]);
}

void apply_phase_serial(std::span<Amplitude> psi, std::span<const double> energies, double tau) {
    for (std::size_t x = 0; x < psi.size(); ++x)
        psi[x] *= std::polar(1.0, -tau * energies[x]);
}

void apply_transverse(std::span<Amplitude> psi, std::size_t n, double theta) {
    const double c = std::cos(theta);
    const double sn = std::sin(theta);
    const auto half = static_cast<long long>(psi.size() / 2);
    Amplitude* data = psi.data();
    // One team for all sites; the implicit barrier after each loop orders the sites.
#pragma omp parallel if (half >= 1024)
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t stride = std::size_t{1} << j;
#pragma omp for schedule(static)
        for (long long k = 0; k < half; ++k) {
            const auto idx = static_cast<std::size_t>(k);
            const std::size_t x = ((idx >> j) << (j + 1)) | (idx & (stride - 1));
            const std::size_t y = x | stride;
            const Amplitude a = data[x];
            const Amplitude b = data[y];
            data[x] = Amplitude(c * a.real() - sn * b.imag(), c * a.imag() + sn * b.real());
            data[y] = Amplitude(c * b.real() - sn * a.imag(), c * b.imag() + sn * a.real());
        }
    }
}

void apply_transverse_serial(std::span<Amplitude> psi, std::size_t n, double theta) {
    const Amplitude c(std::cos(theta), 0.0);
    const Amplitude is(0.0, std::sin(theta));
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t stride = std::size_t{1} << j;
        for (std::size_t x = 0; x < psi.size(); ++x) {
            if (x & stride)
                continue;
            const std::size_t y = x | stride;
            const Amplitude a = psi[x];
            const Amplitude b = psi[y];
            psi[x] = c * a + is * b;
            psi[y] = c * b + is * a;
        }
    }
}

std::vector<double> diagonal_energies(const IsingProblem& problem) {
    const auto dim = static_cast<long long>(std::uint64_t{1} << problem.size());
    std::vector<double> e(static_cast<std::size_t>(dim));
#pragma omp parallel for schedule(static) if (dim >= 1024)
    for (long long x = 0; x < dim; ++x)
        e[static_cast<std::size_t>(x)] = problem.energy_bits(static_cast<std::uint64_t>(x));
    return e;
}

std::vector<double> diagonal_energies_serial(const IsingProblem& problem) {
    const std::size_t dim = std::size_t{1} << problem.size();
    std::vector<double> e(dim);
    for (std::size_t x = 0; x < dim; ++x)
        e[x] = problem.energy_bits(x);
    return e;
}

} // namespace kernels

namespace {

AnnealResult finish(const std::vector<Amplitude>& psi, const std::vector<double>& energies, std::size_t n,
                    std::size_t steps, double drift) {
    AnnealResult r;
    r.n = n;
    r.steps = steps;
    r.norm_drift = drift;
    r.probabilities.resize(psi.size());
    for (std::size_t x = 0; x < psi.size(); ++x) {
        r.probabilities[x] = std::norm(psi[x]);
        r.problem_energy += r.probabilities[x] * energies[x];
    }
    return r;
}

void check_drift(double drift) {
    if (drift > 1e-6)
        throw std::runtime_error("evolve: norm drift " + std::to_string(drift) + " exceeds 1e-6");
}

Eigen::MatrixXd dense_hamiltonian(const std::vector<double>& energies, std::size_t n, double a, double b) {
    const auto dim = static_cast<Eigen::Index>(energies.size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index x = 0; x < dim; ++x) {
        h(x, x) = b * energies[static_cast<std::size_t>(x)];
        for (std::size_t j = 0; j < n; ++j)
            h(x, x ^ (Eigen::Index{1} << j)) = -a;
    }
    return h;
}

} // namespace

AnnealResult evolve(const IsingProblem& problem, const AnnealSchedule& schedule, std::size_t steps) {
    const std::size_t n = problem.size();
    if (n > kEvolveMaxSpins)
        throw CapError("qa", n, kEvolveMaxSpins);
    if (steps < 1)
        throw std::invalid_argument("evolve: steps must be >= 1");

    const auto energies = kernels::diagonal_energies(problem);
    auto psi = QuantumState::uniform(n).amplitudes;
    const double dt = schedule.t_anneal / static_cast<double>(steps);
    const std::size_t check_every = std::max<std::size_t>(1, steps / 64);
    double drift = 0.0;

    for (std::size_t k = 0; k < steps; ++k) {
        const double s = (static_cast<double>(k) + 0.5) / static_cast<double>(steps);
        const double a = schedule.a(s);
        const double b = schedule.b(s);
        kernels::apply_phase(psi, energies, 0.5 * b * dt);
        kernels::apply_transverse(psi, n, a * dt);
        kernels::apply_phase(psi, energies, 0.5 * b * dt);
        if ((k + 1) % check_every == 0 || k + 1 == steps) {
            double sum = 0.0;
            for (const auto& amp : psi)
                sum += std::norm(amp);
            drift = std::max(drift, std::abs(std::sqrt(sum) - 1.0));
            check_drift(drift);
        }
    }
    return finish(psi, energies, n, steps, drift);
}

AnnealResult evolve_dense_reference(const IsingProblem& problem, const AnnealSchedule& schedule, std::size_t steps) {
    const std::size_t n = problem.size();
    if (n > kGapMaxSpins)
        throw CapError("qa-dense", n, kGapMaxSpins);
    if (steps < 1)
        throw std::invalid_argument("evolve_dense_reference: steps must be >= 1");

    const auto energies = kernels::diagonal_energies_serial(problem);
    const auto dim = static_cast<Eigen::Index>(energies.size());
    Eigen::VectorXcd psi = Eigen::VectorXcd::Constant(dim, Amplitude(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
    const double dt = schedule.t_anneal / static_cast<double>(steps);
    double drift = 0.0;

    for (std::size_t k = 0; k < steps; ++k) {
        const double s = (static_cast<double>(k) + 0.5) / static_cast<double>(steps);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense_hamiltonian(energies, n, schedule.a(s), schedule.b(s)));
        const Eigen::MatrixXd& v = eig.eigenvectors();
        Eigen::VectorXcd coeff = v.transpose().cast<Amplitude>() * psi;
        for (Eigen::Index i = 0; i < dim; ++i)
            coeff[i] *= std::polar(1.0, -dt * eig.eigenvalues()[i]);
        psi = v.cast<Amplitude>() * coeff;
        drift = std::max(drift, std::abs(psi.norm() - 1.0));
    }
    check_drift(drift);
    return finish(std::vector<Amplitude>(psi.data(), psi.data() + dim), energies, n, steps, drift);
}

std::vector<double> instantaneous_spectrum(const IsingProblem& problem, const AnnealSchedule& schedule, double s) {
    const std::size_t n = problem.size();
    if (n > kGapMaxSpins)
        throw CapError("qa-gap", n, kGapMaxSpins);
    const auto energies = kernels::diagonal_energies_serial(problem);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense_hamiltonian(energies, n, schedule.a(s), schedule.b(s)),
                                                      Eigen::EigenvaluesOnly);
    return {eig.eigenvalues().data(), eig.eigenvalues().data() + eig.eigenvalues().size()};
}

GapResult min_gap(const IsingProblem& problem, const AnnealSchedule& schedule, std::size_t s_grid) {
    const std::size_t n = problem.size();
    if (n > kGapMaxSpins)
        throw CapError("qa-gap", n, kGapMaxSpins);
    if (s_grid < 2)
        throw std::invalid_argument("min_gap: need at least two grid points");
    const auto energies = kernels::diagonal_energies_serial(problem);
    GapResult best{std::numeric_limits<double>::infinity(), 0.0};
    for (std::size_t k = 0; k < s_grid; ++k) {
        const double s = static_cast<double>(k) / static_cast<double>(s_grid - 1);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
            dense_hamiltonian(energies, n, schedule.a(s), schedule.b(s)), Eigen::EigenvaluesOnly);
        const double gap = eig.eigenvalues()[1] - eig.eigenvalues()[0];
        if (gap < best.gap)
            best = {gap, s};
    }
    return best;
}

OutcomeCounts sample(const AnnealResult& result, std::size_t shots, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::discrete_distribution<std::size_t> dist(result.probabilities.begin(), result.probabilities.end());
    std::map<std::size_t, std::size_t> tally;
    for (std::size_t k = 0; k < shots; ++k)
        ++tally[dist(rng)];
    OutcomeCounts out;
    for (const auto& [x, count] : tally)
        out.push_back({SpinVector::from_bits(x, result.n), count});
    std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.state < r.state; });
    return out;
}

std::string outcomes_csv(const OutcomeCounts& counts) {
    std::string out = "state,count\n";
    for (const auto& c : counts)
        out += c.state.str() + ',' + std::to_string(c.count) + '\n';
    return out;
}

} // namespace qarecall
