#include "qarecall/spin.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace qarecall {

SpinVector::SpinVector(std::vector<Spin> spins) : spins_(std::move(spins)) {
    if (spins_.empty())
        throw std::invalid_argument("SpinVector: length must be >= 1");
    for (Spin s : spins_)
        if (s != 1 && s != -1)
            throw std::invalid_argument("SpinVector: entries must be -1 or +1");
}

SpinVector SpinVector::filled(std::size_t n, Spin value) {
    return SpinVector(std::vector<Spin>(n, value));
}

SpinVector SpinVector::parse(std::string_view text) {
    std::vector<Spin> spins;
    spins.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '+':
        case '1': spins.push_back(1); break;
        case '-':
        case '0': spins.push_back(-1); break;
        default:
            throw std::invalid_argument(std::string("SpinVector: bad character '") + c + "'");
        }
    }
    return SpinVector(std::move(spins));
}

SpinVector SpinVector::from_bits(std::uint64_t bits, std::size_t n) {
    std::vector<Spin> spins(n);
    for (std::size_t i = 0; i < n; ++i)
        spins[i] = ((bits >> i) & 1u) ? 1 : -1;
    return SpinVector(std::move(spins));
}

std::uint64_t SpinVector::to_bits() const {
    if (spins_.size() > 64)
        throw std::length_error("SpinVector::to_bits: more than 64 spins");
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < spins_.size(); ++i)
        if (spins_[i] > 0)
            bits |= std::uint64_t{1} << i;
    return bits;
}

SpinVector SpinVector::flipped() const {
    SpinVector out = *this;
    for (Spin& s : out.spins_)
        s = static_cast<Spin>(-s);
    return out;
}

SpinVector SpinVector::with_flip(std::size_t i) const {
    SpinVector out = *this;
    out.spins_.at(i) = static_cast<Spin>(-out.spins_[i]);
    return out;
}

std::string SpinVector::str() const {
    std::string out(spins_.size(), '+');
    for (std::size_t i = 0; i < spins_.size(); ++i)
        if (spins_[i] < 0)
            out[i] = '-';
    return out;
}

int dot(const SpinVector& a, const SpinVector& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("dot: length mismatch");
    int sum = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        sum += a[i] * b[i];
    return sum;
}

SiteMask full_mask(std::size_t n) {
    SiteMask mask(n);
    std::iota(mask.begin(), mask.end(), std::size_t{0});
    return mask;
}

std::size_t hamming(const SpinVector& a, const SpinVector& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("hamming: length mismatch");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d += a[i] != b[i];
    return d;
}

std::size_t hamming(const SpinVector& a, const SpinVector& b, const SiteMask& mask) {
    if (a.size() != b.size())
        throw std::invalid_argument("hamming: length mismatch");
    std::size_t d = 0;
    for (std::size_t i : mask) {
        if (i >= a.size())
            throw std::out_of_range("hamming: mask site out of range");
        d += a[i] != b[i];
    }
    return d;
}

MemorySet::MemorySet(std::vector<SpinVector> memories) : memories_(std::move(memories)) {
    if (memories_.empty())
        throw std::invalid_argument("MemorySet: need at least one memory");
    const std::size_t n = memories_.front().size();
    for (std::size_t mu = 0; mu < memories_.size(); ++mu) {
        if (memories_[mu].size() != n)
            throw std::invalid_argument("MemorySet: memories differ in length");
        for (std::size_t nu = 0; nu < mu; ++nu)
            if (memories_[nu] == memories_[mu])
                throw std::invalid_argument("MemorySet: duplicate memory at index " + std::to_string(mu));
    }
}

bool MemorySet::mutually_orthogonal() const {
    for (std::size_t mu = 0; mu < size(); ++mu)
        for (std::size_t nu = mu + 1; nu < size(); ++nu)
            if (dot(memories_[mu], memories_[nu]) != 0)
                return false;
    return true;
}

std::optional<std::size_t> MemorySet::find(const SpinVector& state) const {
    for (std::size_t mu = 0; mu < size(); ++mu)
        if (memories_[mu] == state)
            return mu;
    return std::nullopt;
}

MemorySet parse_memory_set(std::string_view text) {
    std::vector<SpinVector> memories;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos)
            continue;
        auto last = line.find_last_not_of(" \t\r");
        try {
            memories.push_back(SpinVector::parse(std::string_view(line).substr(first, last - first + 1)));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return MemorySet(std::move(memories));
}

MemorySet load_memory_set(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open memory file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_memory_set(buf.str());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

std::string format_memory_set(const MemorySet& memories) {
    std::string out;
    for (const auto& m : memories)
        out += m.str() + '\n';
    return out;
}

WeightMatrix::WeightMatrix(std::size_t n) : n_(n), w_(n * n, 0.0) {
    if (n == 0)
        throw std::invalid_argument("WeightMatrix: size must be >= 1");
}

WeightMatrix::WeightMatrix(std::size_t n, std::vector<double> row_major) : n_(n), w_(std::move(row_major)) {
    if (n == 0 || w_.size() != n * n)
        throw std::invalid_argument("WeightMatrix: expected n*n entries");
    for (std::size_t i = 0; i < n; ++i) {
        if (w_[i * n + i] != 0.0)
            throw std::invalid_argument("WeightMatrix: diagonal must be zero");
        for (std::size_t j = 0; j < i; ++j)
            if (w_[i * n + j] != w_[j * n + i])
                throw std::invalid_argument("WeightMatrix: not symmetric");
    }
}

void WeightMatrix::set(std::size_t i, std::size_t j, double value) {
    if (i == j && value != 0.0)
        throw std::invalid_argument("WeightMatrix: diagonal must be zero");
    w_[i * n_ + j] = value;
    w_[j * n_ + i] = value;
}

double WeightMatrix::half_quadratic_form(const SpinVector& s) const {
    if (s.size() != n_)
        throw std::invalid_argument("half_quadratic_form: dimension mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < n_; ++j)
            row_sum += w_[i * n_ + j] * s[j];
        sum += s[i] * row_sum;
    }
    return 0.5 * sum;
}

WeightMatrix hebbian_learn(const MemorySet& memories) {
    const std::size_t n = memories.length();
    WeightMatrix w(n);
    const auto denom = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            int corr = 0;
            for (const auto& xi : memories)
                corr += xi[i] * xi[j];
            w.set(i, j, corr / denom);
        }
    }
    return w;
}

double energy(const WeightMatrix& weights, std::span<const double> biases, const SpinVector& state) {
    const std::size_t n = weights.size();
    if (state.size() != n || biases.size() != n)
        throw std::invalid_argument("energy: dimension mismatch");
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double coupling = 0.0;
        for (std::size_t j = i + 1; j < n; ++j)
            coupling += weights(i, j) * state[j];
        e -= state[i] * (coupling + biases[i]);
    }
    return e;
}

UpdateResult classical_update(const WeightMatrix& weights, std::span<const double> biases,
                              SpinVector state, std::uint64_t seed, std::size_t max_sweeps,
                              const FlipObserver& on_flip) {
    const std::size_t n = weights.size();
    if (state.size() != n || biases.size() != n)
        throw std::invalid_argument("classical_update: dimension mismatch");
    if (max_sweeps < 1)
        throw std::invalid_argument("classical_update: max_sweeps must be >= 1");

    std::vector<Spin> s(state.spins().begin(), state.spins().end());
    std::vector<std::size_t> order = full_mask(n);
    std::mt19937_64 rng(seed);

    UpdateResult result;
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        std::shuffle(order.begin(), order.end(), rng);
        bool flipped = false;
        for (std::size_t i : order) {
            double local = -biases[i];
            auto row = weights.row(i);
            for (std::size_t j = 0; j < n; ++j)
                local += row[j] * s[j];
            // Sign(0): keep
            if (local * s[i] < 0.0) {
                s[i] = static_cast<Spin>(-s[i]);
                flipped = true;
                if (on_flip)
                    on_flip(i, s);
            }
        }
        result.sweeps_used = sweep + 1;
        if (!flipped) {
            result.converged = true;
            break;
        }
    }
    result.state = SpinVector(std::move(s));
    return result;
}

} // namespace qarecall
