#include "qarecall/ising.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "qarecall/format.hpp"

namespace qarecall {

ProbeSpec::ProbeSpec(SpinVector pattern_, SiteMask mask_, double h_)
    : pattern(std::move(pattern_)), mask(std::move(mask_)), h(h_) {
    if (mask.empty())
        throw std::invalid_argument("ProbeSpec: mask must be nonempty");
    std::sort(mask.begin(), mask.end());
    if (std::adjacent_find(mask.begin(), mask.end()) != mask.end())
        throw std::invalid_argument("ProbeSpec: duplicate mask site");
    if (mask.back() >= pattern.size())
        throw std::invalid_argument("ProbeSpec: mask site out of range");
    if (!(h >= 0.0))
        throw std::invalid_argument("ProbeSpec: field strength must be >= 0");
}

ProbeSpec::ProbeSpec(SpinVector pattern_, double h_) : ProbeSpec(pattern_, full_mask(pattern_.size()), h_) {}

IsingProblem::IsingProblem(std::size_t n) : n_(n), j_(n * n, 0.0), h_(n, 0.0) {
    if (n == 0)
        throw std::invalid_argument("IsingProblem: size must be >= 1");
}

IsingProblem::IsingProblem(std::size_t n, std::vector<double> couplings, std::vector<double> fields)
    : n_(n), j_(std::move(couplings)), h_(std::move(fields)) {
    if (n == 0 || j_.size() != n * n || h_.size() != n)
        throw std::invalid_argument("IsingProblem: dimension mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        if (j_[i * n + i] != 0.0)
            throw std::invalid_argument("IsingProblem: couplings must have zero diagonal");
        for (std::size_t k = 0; k < i; ++k)
            if (j_[i * n + k] != j_[k * n + i])
                throw std::invalid_argument("IsingProblem: couplings must be symmetric");
    }
}

void IsingProblem::set_coupling(std::size_t i, std::size_t j, double value) {
    if (i == j)
        throw std::invalid_argument("IsingProblem: no self couplings");
    j_.at(i * n_ + j) = value;
    j_.at(j * n_ + i) = value;
}

double IsingProblem::energy(std::span<const Spin> s) const {
    if (s.size() != n_)
        throw std::invalid_argument("IsingProblem::energy: dimension mismatch");
    double e = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        double local = h_[i];
        const double* row = j_.data() + i * n_;
        for (std::size_t k = i + 1; k < n_; ++k)
            local += row[k] * s[k];
        e -= s[i] * local;
    }
    return e;
}

double IsingProblem::energy_bits(std::uint64_t bits) const {
    double e = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        const double si = ((bits >> i) & 1u) ? 1.0 : -1.0;
        double local = h_[i];
        const double* row = j_.data() + i * n_;
        for (std::size_t k = i + 1; k < n_; ++k)
            local += ((bits >> k) & 1u) ? row[k] : -row[k];
        e -= si * local;
    }
    return e;
}

double IsingProblem::max_abs_coupling() const {
    double m = 0.0;
    for (double v : j_)
        m = std::max(m, std::abs(v));
    return m;
}

double IsingProblem::max_abs_field() const {
    double m = 0.0;
    for (double v : h_)
        m = std::max(m, std::abs(v));
    return m;
}

IsingProblem build_problem(const WeightMatrix& weights, const ProbeSpec& probe) {
    const std::size_t n = weights.size();
    if (probe.pattern.size() != n)
        throw std::invalid_argument("build_problem: probe length does not match weights");
    std::vector<double> fields(n, 0.0);
    for (std::size_t i : probe.mask)
        fields[i] = probe.h * probe.pattern[i];
    return IsingProblem(n, std::vector<double>(weights.data().begin(), weights.data().end()), std::move(fields));
}

double probe_energy_shift(const ProbeSpec& probe, const SpinVector& memory) {
    const auto d = static_cast<double>(hamming(probe.pattern, memory, probe.mask));
    const auto n = static_cast<double>(probe.active_sites());
    return -probe.h * (n - 2.0 * d);
}

double spurious_flip_shift(const ProbeSpec& probe, const SpinVector& memory) {
    return -probe_energy_shift(probe, memory);
}

double h_max(const MemorySet& memories, const ProbeSpec& probe, std::size_t target) {
    if (target >= memories.size())
        throw std::out_of_range("h_max: target index out of range");
    if (!probe.full())
        throw std::domain_error("h_max: closed form requires a full-length probe");
    if (!memories.mutually_orthogonal())
        throw std::domain_error("h_max: memories are not mutually orthogonal; use h_max_generic");
    const std::size_t n_sites = memories.length();
    const auto n = static_cast<double>(n_sites);
    const auto p = static_cast<double>(memories.size());

    double sum_d = 0.0;
    double sum_d2 = 0.0;
    for (const auto& xi : memories) {
        const auto d = static_cast<double>(hamming(probe.pattern, xi));
        sum_d += d;
        sum_d2 += d * d;
    }
    const auto d_target = static_cast<double>(hamming(probe.pattern, memories[target]));
    if (d_target == 0.0)
        throw std::domain_error("h_max: probe is already a stored memory");
    return (n * (1.0 - p) + 4.0 * sum_d - (4.0 / n) * sum_d2) / (4.0 * d_target);
}

FieldBounds h_max_bounds(const MemorySet& memories, const ProbeSpec& probe) {
    FieldBounds bounds{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 0, 0};
    bool any = false;
    for (std::size_t mu = 0; mu < memories.size(); ++mu) {
        if (hamming(probe.pattern, memories[mu]) == 0)
            continue;
        const double v = h_max(memories, probe, mu);
        any = true;
        if (v > bounds.max) {
            bounds.max = v;
            bounds.argmax = mu;
        }
        if (v < bounds.min) {
            bounds.min = v;
            bounds.argmin = mu;
        }
    }
    if (!any)
        throw std::domain_error("h_max_bounds: probe coincides with every memory");
    return bounds;
}

double h_max_generic(const WeightMatrix& weights, const ProbeSpec& probe, const SpinVector& target) {
    const std::size_t d = hamming(target, probe.pattern, probe.mask);
    if (d == 0)
        throw std::domain_error("h_max_generic: target equals the probe on the mask");
    return (weights.half_quadratic_form(target) - weights.half_quadratic_form(probe.pattern)) /
           (2.0 * static_cast<double>(d));
}

EnergyReport energy_report(const MemorySet& memories, const ProbeSpec& probe, std::span<const double> h_grid) {
    const WeightMatrix w = hebbian_learn(memories);
    const std::vector<double> zero(memories.length(), 0.0);
    const ProbeSpec unit = probe.with_field(1.0);
    const bool closed_form = probe.full() && memories.mutually_orthogonal();

    EnergyReport r;
    r.h_grid.assign(h_grid.begin(), h_grid.end());
    r.probe_mem = energy(w, zero, probe.pattern);
    r.probe_probe_slope = -static_cast<double>(probe.active_sites());
    for (std::size_t mu = 0; mu < memories.size(); ++mu) {
        const auto& xi = memories[mu];
        r.memory_mem.push_back(energy(w, zero, xi));
        r.flip_mem.push_back(energy(w, zero, xi.flipped()));
        r.memory_probe_slope.push_back(probe_energy_shift(unit, xi));
        r.flip_probe_slope.push_back(spurious_flip_shift(unit, xi));
        if (hamming(xi, probe.pattern, probe.mask) == 0)
            r.h_max.push_back(std::numeric_limits<double>::quiet_NaN());
        else
            r.h_max.push_back(closed_form ? h_max(memories, probe, mu) : h_max_generic(w, probe, xi));
    }
    return r;
}

std::string EnergyReport::to_csv() const {
    std::ostringstream out;
    out << "h,E_probe";
    for (std::size_t mu = 0; mu < memory_mem.size(); ++mu)
        out << ",E_mem_" << mu + 1;
    for (std::size_t mu = 0; mu < flip_mem.size(); ++mu)
        out << ",E_flip_" << mu + 1;
    out << '\n';
    for (double h : h_grid) {
        out << fmt_double(h) << ',' << fmt_double(probe_total(h));
        for (std::size_t mu = 0; mu < memory_mem.size(); ++mu)
            out << ',' << fmt_double(memory_total(mu, h));
        for (std::size_t mu = 0; mu < flip_mem.size(); ++mu)
            out << ',' << fmt_double(flip_total(mu, h));
        out << '\n';
    }
    return out.str();
}

double hardware_scale(const IsingProblem& problem) {
    double s = 1.0;
    if (const double j = problem.max_abs_coupling(); j > 1.0)
        s = std::min(s, 1.0 / j);
    if (const double h = problem.max_abs_field(); h > 2.0)
        s = std::min(s, 2.0 / h);
    return s;
}

IsingProblem scaled(const IsingProblem& problem, double factor) {
    std::vector<double> j(problem.couplings().begin(), problem.couplings().end());
    std::vector<double> h(problem.fields().begin(), problem.fields().end());
    for (double& v : j)
        v *= factor;
    for (double& v : h)
        v *= factor;
    return IsingProblem(problem.size(), std::move(j), std::move(h));
}

namespace {

double round_to_grid(double value, double step) {
    return std::round(value / step) * step;
}

} // namespace

IsingProblem quantize_hardware(const IsingProblem& problem, bool rescale) {
    const double s = hardware_scale(problem);
    if (s < 1.0 && !rescale)
        throw std::out_of_range("quantize_hardware: values exceed |J| <= 1, |h| <= 2");
    const IsingProblem in = s < 1.0 ? scaled(problem, s) : problem;
    constexpr double j_step = 1.0 / 256.0;
    constexpr double h_step = 1.0 / 128.0;
    std::vector<double> j(in.couplings().begin(), in.couplings().end());
    std::vector<double> h(in.fields().begin(), in.fields().end());
    for (double& v : j)
        v = std::clamp(round_to_grid(v, j_step), -1.0, 1.0);
    for (double& v : h)
        v = std::clamp(round_to_grid(v, h_step), -2.0, 2.0);
    return IsingProblem(in.size(), std::move(j), std::move(h));
}

} // namespace qarecall
