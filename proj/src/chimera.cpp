#include "qarecall/chimera.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "qarecall/errors.hpp"
#include "qarecall/format.hpp"

namespace qarecall {

void Graph::add_edge(std::size_t a, std::size_t b) {
    if (a >= size() || b >= size() || a == b)
        throw std::invalid_argument("Graph: bad edge " + std::to_string(a) + "-" + std::to_string(b));
    if (!alive_[a] || !alive_[b] || has_edge(a, b))
        return;
    adj_[a].insert(std::lower_bound(adj_[a].begin(), adj_[a].end(), b), b);
    adj_[b].insert(std::lower_bound(adj_[b].begin(), adj_[b].end(), a), a);
}

void Graph::kill(std::size_t v) {
    for (std::size_t u : adj_.at(v)) {
        auto& back = adj_[u];
        back.erase(std::lower_bound(back.begin(), back.end(), v));
    }
    adj_[v].clear();
    alive_[v] = false;
}

bool Graph::has_edge(std::size_t a, std::size_t b) const {
    if (a >= size() || b >= size())
        return false;
    return std::binary_search(adj_[a].begin(), adj_[a].end(), b);
}

std::size_t Graph::node_count() const { return static_cast<std::size_t>(std::count(alive_.begin(), alive_.end(), true)); }

std::size_t Graph::edge_count() const {
    std::size_t twice = 0;
    for (const auto& a : adj_)
        twice += a.size();
    return twice / 2;
}

std::vector<std::pair<std::size_t, std::size_t>> Graph::edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < size(); ++a)
        for (std::size_t b : adj_[a])
            if (a < b)
                out.emplace_back(a, b);
    return out;
}

Graph complete_graph(std::size_t n) {
    Graph g(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            g.add_edge(a, b);
    return g;
}

ChimeraGraph::ChimeraGraph(std::size_t m, std::set<std::size_t> missing)
    : m_(m), missing_(std::move(missing)), graph_(8 * m * m) {
    if (m < 1)
        throw std::invalid_argument("chimera_graph: m must be at least 1");
    for (std::size_t q : missing_)
        if (q >= 8 * m * m)
            throw std::invalid_argument("chimera_graph: dead qubit " + std::to_string(q) + " out of range");
    for (std::size_t q : missing_)
        graph_.kill(q);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c)
            for (std::size_t k = 0; k < 4; ++k) {
                for (std::size_t l = 0; l < 4; ++l)
                    graph_.add_edge(qubit(r, c, 0, k), qubit(r, c, 1, l));
                if (r + 1 < m)
                    graph_.add_edge(qubit(r, c, 0, k), qubit(r + 1, c, 0, k));
                if (c + 1 < m)
                    graph_.add_edge(qubit(r, c, 1, k), qubit(r, c + 1, 1, k));
            }
}

std::size_t ChimeraGraph::qubit(std::size_t row, std::size_t col, std::size_t u, std::size_t k) const {
    return ((row * m_ + col) * 2 + u) * 4 + k;
}

std::string ChimeraGraph::to_text() const {
    std::string out = "chimera m=" + std::to_string(m_) + "\n";
    for (std::size_t q : missing_)
        out += "dead " + std::to_string(q) + "\n";
    for (const auto& [a, b] : graph_.edges())
        out += std::to_string(a) + " " + std::to_string(b) + "\n";
    return out;
}

ChimeraGraph ChimeraGraph::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::optional<std::size_t> m;
    std::set<std::size_t> dead;
    std::vector<std::pair<std::size_t, std::size_t>> listed;
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument("graph line " + std::to_string(line_no) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream fields(line);
        std::string first;
        if (!(fields >> first))
            continue;
        if (!m) {
            if (first != "chimera" || !(fields >> first) || first.rfind("m=", 0) != 0)
                fail("expected header 'chimera m=<m>'");
            try {
                m = std::stoul(first.substr(2));
            } catch (const std::exception&) {
                fail("bad grid size '" + first.substr(2) + "'");
            }
            continue;
        }
        std::size_t a = 0, b = 0;
        if (first == "dead") {
            if (!(fields >> a))
                fail("expected 'dead <id>'");
            dead.insert(a);
            continue;
        }
        try {
            a = std::stoul(first);
        } catch (const std::exception&) {
            fail("unrecognised line");
        }
        if (!(fields >> b))
            fail("expected an edge '<a> <b>'");
        listed.emplace_back(std::min(a, b), std::max(a, b));
    }
    if (!m)
        throw std::invalid_argument("graph: missing 'chimera m=<m>' header");
    ChimeraGraph g(*m, dead);
    if (!listed.empty()) {
        std::sort(listed.begin(), listed.end());
        listed.erase(std::unique(listed.begin(), listed.end()), listed.end());
        if (listed != g.graph().edges())
            throw std::invalid_argument("graph: edge list does not match a chimera m=" + std::to_string(*m) +
                                        " graph with the listed dead qubits");
    }
    return g;
}

ChimeraGraph ChimeraGraph::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open graph file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::set<std::size_t> synthetic_defects(std::size_t m, std::size_t count, std::uint64_t seed) {
    const std::size_t total = 8 * m * m;
    if (count > total)
        throw std::invalid_argument("synthetic_defects: more defects than qubits");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, total - 1);
    std::set<std::size_t> out;
    while (out.size() < count)
        out.insert(pick(rng));
    return out;
}

ChimeraGraph defective_processor() { return ChimeraGraph(8, synthetic_defects(8, 36)); }

std::size_t Embedding::physical_qubits() const {
    std::size_t total = 0;
    for (const auto& c : chains)
        total += c.size();
    return total;
}

std::size_t Embedding::max_chain_length() const {
    std::size_t best = 0;
    for (const auto& c : chains)
        best = std::max(best, c.size());
    return best;
}

std::size_t Embedding::min_chain_length() const {
    if (chains.empty())
        return 0;
    std::size_t best = chains.front().size();
    for (const auto& c : chains)
        best = std::min(best, c.size());
    return best;
}

std::string Embedding::to_text() const {
    std::string out;
    if (chain_strength > 0.0)
        out += "chain_strength " + fmt_double(chain_strength) + "\n";
    for (std::size_t i = 0; i < chains.size(); ++i) {
        out += "chain " + std::to_string(i) + ":";
        for (std::size_t k = 0; k < chains[i].size(); ++k)
            out += (k ? "," : " ") + std::to_string(chains[i][k]);
        out += "\n";
    }
    return out;
}

Embedding Embedding::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::map<std::size_t, std::vector<std::size_t>> chains;
    Embedding e;
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument("embedding line " + std::to_string(line_no) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream fields(line);
        std::string word;
        if (!(fields >> word))
            continue;
        if (word == "chain_strength") {
            if (!(fields >> e.chain_strength) || !(e.chain_strength > 0.0))
                fail("chain_strength must be a positive number");
            continue;
        }
        if (word != "chain")
            fail("expected 'chain <logical>: <ids>'");
        std::string rest;
        std::getline(fields, rest);
        const auto colon = rest.find(':');
        if (colon == std::string::npos)
            fail("missing ':'");
        std::size_t logical = 0;
        try {
            logical = std::stoul(rest.substr(0, colon));
        } catch (const std::exception&) {
            fail("bad logical index");
        }
        if (chains.count(logical))
            fail("logical qubit " + std::to_string(logical) + " listed twice");
        std::vector<std::size_t> ids;
        std::string ids_text = rest.substr(colon + 1);
        std::replace(ids_text.begin(), ids_text.end(), ',', ' ');
        std::istringstream id_stream(ids_text);
        std::string id;
        while (id_stream >> id) {
            try {
                ids.push_back(std::stoul(id));
            } catch (const std::exception&) {
                fail("bad qubit id '" + id + "'");
            }
        }
        if (ids.empty())
            fail("empty chain");
        chains[logical] = std::move(ids);
    }
    for (auto& [logical, ids] : chains) {
        if (logical != e.chains.size())
            throw std::invalid_argument("embedding: logical qubit " + std::to_string(e.chains.size()) + " has no chain");
        e.chains.push_back(std::move(ids));
    }
    return e;
}

Embedding identity_embedding(std::size_t n) {
    Embedding e;
    for (std::size_t i = 0; i < n; ++i)
        e.chains.push_back({i});
    return e;
}

namespace {

struct Cell {
    std::size_t row, col, u;
};

// Chain for logical slot (c, k) on a size x size grid: vertical qubits of column c in rows 0..c,
// horizontal qubits of row c in columns c..size-1. Any two slots meet in cell (min c, max c).
std::vector<Cell> slot_cells(std::size_t size, std::size_t c) {
    std::vector<Cell> out;
    for (std::size_t r = 0; r <= c; ++r)
        out.push_back({r, c, 0});
    for (std::size_t col = c; col < size; ++col)
        out.push_back({c, col, 1});
    return out;
}

// Bit 2 transposes (swapping shores), bits 0 and 1 mirror rows and columns.
Cell apply_symmetry(Cell cell, std::size_t size, unsigned sym) {
    if (sym & 4u)
        cell = {cell.col, cell.row, 1 - cell.u};
    if (sym & 1u)
        cell.row = size - 1 - cell.row;
    if (sym & 2u)
        cell.col = size - 1 - cell.col;
    return cell;
}

// Usable chains, in slot order, for one placement of the scheme.
std::vector<std::vector<std::size_t>> usable_slots(const ChimeraGraph& g, std::size_t size, std::size_t r0,
                                                   std::size_t c0, unsigned sym, std::size_t want) {
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t c = 0; c < size && out.size() < want; ++c) {
        const auto cells = slot_cells(size, c);
        for (std::size_t k = 0; k < 4 && out.size() < want; ++k) {
            std::vector<std::size_t> chain;
            bool ok = true;
            for (Cell cell : cells) {
                cell = apply_symmetry(cell, size, sym);
                const std::size_t q = g.qubit(r0 + cell.row, c0 + cell.col, cell.u, k);
                if (!g.graph().alive(q)) {
                    ok = false;
                    break;
                }
                chain.push_back(q);
            }
            if (ok) {
                std::sort(chain.begin(), chain.end());
                out.push_back(std::move(chain));
            }
        }
    }
    return out;
}

} // namespace

namespace {

Embedding search_clique(std::size_t n, const ChimeraGraph& graph, std::size_t smallest, std::size_t largest) {
    const std::size_t m = graph.m();
    std::size_t most = 0;
    for (std::size_t size = smallest; size <= largest; ++size)
        for (std::size_t r0 = 0; r0 + size <= m; ++r0)
            for (std::size_t c0 = 0; c0 + size <= m; ++c0)
                for (unsigned sym = 0; sym < 8; ++sym) {
                    auto slots = usable_slots(graph, size, r0, c0, sym, n);
                    if (slots.size() == n) {
                        Embedding e;
                        e.chains = std::move(slots);
                        return e;
                    }
                    most = std::max(most, slots.size());
                }
    throw EmbeddingError(most, "no clique embedding of " + std::to_string(n) + " logical qubits on chimera m=" +
                                   std::to_string(m) + ": logical qubit " + std::to_string(most) +
                                   " has no usable chain (at most " + std::to_string(most) + " fit)");
}

} // namespace

Embedding embed_clique(std::size_t n, const ChimeraGraph& graph) {
    if (n == 0)
        return {};
    return search_clique(n, graph, std::min((n + 3) / 4, graph.m()), graph.m());
}

Embedding embed_clique(std::size_t n, const ChimeraGraph& graph, std::size_t size) {
    if (size < 1 || size > graph.m())
        throw std::invalid_argument("embed_clique: sub-grid size must lie in [1, m]");
    if (n == 0)
        return {};
    return search_clique(n, graph, size, size);
}

std::vector<std::string> verify_embedding(const Embedding& embedding, const Graph& graph, const IsingProblem& logical) {
    std::vector<std::string> problems;
    const auto& chains = embedding.chains;
    if (chains.size() != logical.size())
        problems.push_back("embedding has " + std::to_string(chains.size()) + " chains for " +
                           std::to_string(logical.size()) + " logical qubits");
    std::map<std::size_t, std::size_t> owner;
    for (std::size_t i = 0; i < chains.size(); ++i) {
        const auto& chain = chains[i];
        if (chain.empty())
            problems.push_back("chain " + std::to_string(i) + " is empty");
        bool placed = true;
        for (std::size_t q : chain) {
            if (q >= graph.size() || !graph.alive(q)) {
                problems.push_back("chain " + std::to_string(i) + " uses unavailable qubit " + std::to_string(q));
                placed = false;
                continue;
            }
            auto [it, fresh] = owner.emplace(q, i);
            if (!fresh)
                problems.push_back("qubit " + std::to_string(q) + " is in chains " + std::to_string(it->second) +
                                   " and " + std::to_string(i));
        }
        if (!placed || chain.empty())
            continue;
        // breadth-first search inside the chain
        std::vector<std::size_t> seen{chain.front()};
        for (std::size_t head = 0; head < seen.size(); ++head)
            for (std::size_t q : chain)
                if (std::find(seen.begin(), seen.end(), q) == seen.end() && graph.has_edge(seen[head], q))
                    seen.push_back(q);
        if (seen.size() != std::set<std::size_t>(chain.begin(), chain.end()).size())
            problems.push_back("chain " + std::to_string(i) + " is not connected");
    }
    const std::size_t n = std::min(chains.size(), logical.size());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (logical.coupling(i, j) == 0.0)
                continue;
            bool joined = false;
            for (std::size_t a : chains[i])
                for (std::size_t b : chains[j])
                    joined = joined || graph.has_edge(a, b);
            if (!joined)
                problems.push_back("no coupler between chains " + std::to_string(i) + " and " + std::to_string(j));
        }
    return problems;
}

double default_chain_strength(const IsingProblem& logical, const Embedding& embedding) {
    const double scale = std::max(logical.max_abs_coupling(), logical.max_abs_field());
    if (scale == 0.0)
        return 1.0;
    return 2.0 * scale * static_cast<double>(std::max<std::size_t>(1, embedding.max_chain_length()));
}

std::string EmbeddedProblem::to_text() const {
    std::string out = "# physical problem: " + std::to_string(qubits.size()) + " qubits, chain strength " +
                      fmt_double(chain_strength) + "\n";
    for (std::size_t a = 0; a < qubits.size(); ++a)
        if (physical.field(a) != 0.0)
            out += "h " + std::to_string(qubits[a]) + " " + fmt_double(physical.field(a)) + "\n";
    for (std::size_t a = 0; a < qubits.size(); ++a)
        for (std::size_t b = a + 1; b < qubits.size(); ++b)
            if (physical.coupling(a, b) != 0.0)
                out += "J " + std::to_string(qubits[a]) + " " + std::to_string(qubits[b]) + " " +
                       fmt_double(physical.coupling(a, b)) + "\n";
    return out;
}

EmbeddedProblem embed_problem(const IsingProblem& logical, const Embedding& embedding, const Graph& graph) {
    const auto problems = verify_embedding(embedding, graph, logical);
    if (!problems.empty())
        throw EmbeddingError(0, "invalid embedding: " + problems.front());

    EmbeddedProblem out;
    out.chain_strength =
        embedding.chain_strength > 0.0 ? embedding.chain_strength : default_chain_strength(logical, embedding);
    for (const auto& chain : embedding.chains) {
        std::vector<std::size_t> local;
        for (std::size_t q : chain) {
            local.push_back(out.qubits.size());
            out.qubits.push_back(q);
        }
        out.chains.push_back(std::move(local));
    }
    out.physical = IsingProblem(out.qubits.size());
    auto& phys = out.physical;

    for (std::size_t i = 0; i < out.chains.size(); ++i) {
        const auto& chain = out.chains[i];
        const double share = logical.field(i) / static_cast<double>(chain.size());
        for (std::size_t a : chain)
            phys.set_field(a, share);
        for (std::size_t x = 0; x < chain.size(); ++x)
            for (std::size_t y = x + 1; y < chain.size(); ++y)
                if (graph.has_edge(out.qubits[chain[x]], out.qubits[chain[y]]))
                    phys.set_coupling(chain[x], chain[y], out.chain_strength);
    }
    for (std::size_t i = 0; i < out.chains.size(); ++i)
        for (std::size_t j = i + 1; j < out.chains.size(); ++j) {
            const double jij = logical.coupling(i, j);
            if (jij == 0.0)
                continue;
            std::vector<std::pair<std::size_t, std::size_t>> couplers;
            for (std::size_t a : out.chains[i])
                for (std::size_t b : out.chains[j])
                    if (graph.has_edge(out.qubits[a], out.qubits[b]))
                        couplers.emplace_back(a, b);
            for (const auto& [a, b] : couplers)
                phys.set_coupling(a, b, jij / static_cast<double>(couplers.size()));
        }
    return out;
}

namespace {

template <class SpinAt>
DecodeResult vote(const std::vector<std::vector<std::size_t>>& chains, SpinAt spin_at) {
    DecodeResult r;
    std::vector<Spin> logical;
    for (const auto& chain : chains) {
        int sum = 0;
        for (std::size_t q : chain)
            sum += spin_at(q);
        logical.push_back(sum >= 0 ? 1 : -1);
        if (static_cast<std::size_t>(std::abs(sum)) != chain.size())
            ++r.broken_chains;
    }
    r.logical = SpinVector(std::move(logical));
    return r;
}

} // namespace

DecodeResult decode(const SpinVector& physical, const Embedding& embedding) {
    for (const auto& chain : embedding.chains)
        for (std::size_t q : chain)
            if (q >= physical.size())
                throw std::invalid_argument("decode: qubit " + std::to_string(q) + " outside the sample");
    return vote(embedding.chains, [&](std::size_t q) { return int(physical[q]); });
}

DecodeResult decode(const SpinVector& compact, const EmbeddedProblem& embedded) {
    if (compact.size() != embedded.qubits.size())
        throw std::invalid_argument("decode: sample has the wrong number of qubits");
    return vote(embedded.chains, [&](std::size_t q) { return int(compact[q]); });
}

IsingProblem gauge_transform(const IsingProblem& problem, const SpinVector& gauge) {
    const std::size_t n = problem.size();
    if (gauge.size() != n)
        throw std::invalid_argument("gauge_transform: gauge length differs from the problem size");
    IsingProblem out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.set_field(i, gauge[i] * problem.field(i));
        for (std::size_t j = i + 1; j < n; ++j)
            out.set_coupling(i, j, gauge[i] * gauge[j] * problem.coupling(i, j));
    }
    return out;
}

} // namespace qarecall
