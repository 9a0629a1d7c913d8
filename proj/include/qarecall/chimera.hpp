#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qarecall/ising.hpp"

namespace qarecall {

// Undirected graph over ids 0..size()-1; dead ids carry no edges.
class Graph {
public:
    Graph() = default;
    explicit Graph(std::size_t n) : adj_(n), alive_(n, true) {}

    void add_edge(std::size_t a, std::size_t b);
    void kill(std::size_t v);

    std::size_t size() const { return adj_.size(); }
    bool alive(std::size_t v) const { return alive_.at(v); }
    bool has_edge(std::size_t a, std::size_t b) const;
    const std::vector<std::size_t>& neighbors(std::size_t v) const { return adj_.at(v); }
    std::size_t node_count() const;
    std::size_t edge_count() const;
    // Each edge once, a < b, sorted.
    std::vector<std::pair<std::size_t, std::size_t>> edges() const;

private:
    std::vector<std::vector<std::size_t>> adj_;
    std::vector<bool> alive_;
};

Graph complete_graph(std::size_t n);

// m x m cells of K_{4,4}. Qubit ((row * m + col) * 2 + u) * 4 + k: u = 0 is the vertical shore
// (coupled to the same k one row down), u = 1 the horizontal shore (one column right).
class ChimeraGraph {
public:
    ChimeraGraph(std::size_t m, std::set<std::size_t> missing = {});

    std::size_t m() const { return m_; }
    const std::set<std::size_t>& missing() const { return missing_; }
    const Graph& graph() const { return graph_; }
    std::size_t qubit(std::size_t row, std::size_t col, std::size_t u, std::size_t k) const;

    // Header "chimera m=<m>", then "dead <id>" lines, then "<a> <b>" edge lines.
    std::string to_text() const;
    static ChimeraGraph parse(std::string_view text);
    static ChimeraGraph load(const std::string& path);

private:
    std::size_t m_;
    std::set<std::size_t> missing_;
    Graph graph_;
};

inline constexpr std::uint64_t kDefectSeed = 476;

// Deterministic stand-in for the 8 x 8 processor with 36 inoperable qubits (476 usable).
std::set<std::size_t> synthetic_defects(std::size_t m, std::size_t count, std::uint64_t seed = kDefectSeed);
ChimeraGraph defective_processor();

struct Embedding {
    std::vector<std::vector<std::size_t>> chains;
    // <= 0 means "choose per problem" (see default_chain_strength).
    double chain_strength = 0.0;

    std::size_t physical_qubits() const;
    std::size_t max_chain_length() const;
    std::size_t min_chain_length() const;

    // "chain <logical>: <id>,<id>,..." lines, optional "chain_strength <value>".
    std::string to_text() const;
    static Embedding parse(std::string_view text);
};

// Every chain a single qubit.
Embedding identity_embedding(std::size_t n);

// Diagonal clique embedding on the smallest usable square sub-grid, trying every offset and
// symmetry of the grid and skipping chain slots that touch dead qubits. Throws EmbeddingError
// naming the first logical qubit that found no slot.
Embedding embed_clique(std::size_t n, const ChimeraGraph& graph);
// Same scheme restricted to size x size sub-grids (chains of length size + 1).
Embedding embed_clique(std::size_t n, const ChimeraGraph& graph, std::size_t size);

// Structural problems with an embedding (empty when valid): dead or out-of-range qubits,
// overlapping or disconnected chains, and logical edges with no physical coupler.
std::vector<std::string> verify_embedding(const Embedding& embedding, const Graph& graph, const IsingProblem& logical);

// 2 * max(max|J|, max|h|) * longest chain; 1 when the problem is empty.
double default_chain_strength(const IsingProblem& logical, const Embedding& embedding);

struct EmbeddedProblem {
    // Compact index c is physical qubit qubits[c].
    IsingProblem physical;
    std::vector<std::size_t> qubits;
    // Chains in compact indices.
    std::vector<std::vector<std::size_t>> chains;
    double chain_strength = 0.0;

    // "h <qubit> <value>" and "J <qubit> <qubit> <value>" lines using physical ids.
    std::string to_text() const;
};

// Intra-chain couplers get +J_F (aligned spins lower the energy); each logical coupling is split
// equally across the couplers joining its chains and each field equally across its chain.
// Throws EmbeddingError when verify_embedding reports a problem.
EmbeddedProblem embed_problem(const IsingProblem& logical, const Embedding& embedding, const Graph& graph);

struct DecodeResult {
    SpinVector logical;
    std::size_t broken_chains = 0;
};

// Majority vote per chain, exact ties to +1. `physical` is indexed by physical qubit id.
DecodeResult decode(const SpinVector& physical, const Embedding& embedding);
// Same, for a sample of the compact embedded problem.
DecodeResult decode(const SpinVector& compact, const EmbeddedProblem& embedded);

// J'_ij = g_i g_j J_ij, h'_i = g_i h_i.
IsingProblem gauge_transform(const IsingProblem& problem, const SpinVector& gauge);

} // namespace qarecall
