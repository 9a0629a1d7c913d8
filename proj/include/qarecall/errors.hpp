#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qarecall {

// Problem size beyond what an exact engine can handle.
class CapError : public std::runtime_error {
public:
    CapError(const std::string& engine, std::size_t n, std::size_t cap)
        : std::runtime_error(engine + ": N=" + std::to_string(n) + " exceeds cap " + std::to_string(cap)),
          n_(n), cap_(cap) {}
    std::size_t n() const { return n_; }
    std::size_t cap() const { return cap_; }

private:
    std::size_t n_;
    std::size_t cap_;
};

class EmbeddingError : public std::runtime_error {
public:
    EmbeddingError(std::size_t logical, const std::string& what)
        : std::runtime_error(what), logical_(logical) {}
    // First logical qubit that could not be placed.
    std::size_t logical() const { return logical_; }

private:
    std::size_t logical_;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qarecall
