#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qarecall/commands.hpp"
#include "qarecall/errors.hpp"

using namespace qarecall;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("qarecall_cmd_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Body of a CSV artifact after its timestamp line.
std::string body(const std::string& path) {
    const auto text = slurp(path);
    REQUIRE(text.starts_with("# generated "));
    return text.substr(text.find('\n') + 1);
}

ExperimentConfig config16(const std::string& name) {
    ExperimentConfig c;
    c.memories.path = std::string(QARECALL_DATA_DIR) + "/memories16.txt";
    c.probe.pattern = "-+++--------+++-";
    c.output.dir = scratch(name).string();
    return c;
}

std::string write_memories(const fs::path& dir, const std::string& text) {
    const auto path = (dir / "memories.txt").string();
    std::ofstream(path) << text;
    return path;
}

} // namespace

TEST_CASE("learn writes the weight matrix") {
    auto c = config16("learn");
    const auto r = cmd_learn(c);
    REQUIRE(r.files.size() == 1);
    std::istringstream rows(body(r.files[0]));
    std::string first;
    std::getline(rows, first);
    // W_01 = 3/16, W_00 = 0
    CHECK(first.starts_with("0,0.1875,"));
    CHECK(r.summary.find("mutually orthogonal") != std::string::npos);
}

TEST_CASE("oracle recall on the 16-spin instance") {
    auto c = config16("recall");
    const auto rep = cmd_recall(c);
    REQUIRE(rep.outcome);
    CHECK(rep.outcome->classification == RecallClass::unique_memory);
    CHECK(rep.nearest == 2);
    CHECK(rep.success == 1.0);
    const auto doc = nlohmann::json::parse(slurp(rep.result.files.at(0)));
    CHECK(doc["classification"] == "unique-memory");
    CHECK(doc["h_max"] == "0.75");
}

TEST_CASE("oracle sweep switches to over-bias past h_max") {
    auto c = config16("sweep");
    const auto rep = cmd_sweep_h(c);
    REQUIRE(rep.rows.size() == 38);
    for (std::size_t k = 0; k < rep.rows.size(); ++k) {
        CHECK(rep.rows[k].h == (k + 1) / 32.0);
        CHECK(rep.rows[k].h_max == 0.75);
        CHECK(rep.rows[k].success == (k + 1 < 24 ? 1.0 : 0.0));
    }
    const auto again = cmd_sweep_h(c);
    CHECK(body(again.result.files[0]) == body(rep.result.files[0]));
    const auto csv = body(rep.result.files[0]);
    CHECK(csv.starts_with("h,success,probability,classification,h_max\n0.03125,1,1,unique-memory,0.75\n"));
}

TEST_CASE("SA recall and sweep are deterministic") {
    auto c = config16("sa");
    c.engine = "sa";
    c.sa.restarts = 20;
    c.sweep.start = 0.25;
    c.sweep.stop = 0.5;
    c.sweep.step = 0.25;
    const auto rep = cmd_recall(c);
    CHECK(rep.success >= 0.9);
    REQUIRE(rep.result.files.size() == 2);
    CHECK(body(rep.result.files[1]).starts_with("state,count\n"));
    const auto a = cmd_sweep_h(c);
    const auto b = cmd_sweep_h(c);
    CHECK(body(a.result.files[0]) == body(b.result.files[0]));
    c.run.majority = true;
    for (const auto& row : cmd_sweep_h(c).rows)
        CHECK((row.success == 0.0 || row.success == 1.0));
}

TEST_CASE("QA refuses instances above its cap") {
    auto c = config16("qa_cap");
    c.engine = "qa";
    CHECK_THROWS_AS(cmd_recall(c), CapError);
    CHECK_THROWS_AS(cmd_sweep_h(c), CapError);
    CHECK_THROWS_AS(cmd_qa_gap(c), CapError);
}

TEST_CASE("QA recall and gap on a small instance") {
    const auto dir = scratch("qa");
    ExperimentConfig c;
    c.memories.path = write_memories(dir, "++++++\n+++---\n");
    c.probe.pattern = "+++--+";
    c.output.dir = dir.string();
    c.engine = "qa";
    c.probe.h = 0.3;
    c.qa.t_anneal = 50;
    c.qa.steps = 1000;
    c.run.shots = 200;
    const auto rep = cmd_recall(c);
    CHECK(rep.nearest == 1);
    CHECK(rep.success > 0.5);
    const auto doc = nlohmann::json::parse(slurp(rep.result.files.at(0)));
    CHECK(doc["modal_state"] == "+++---");

    c.qa.gap_grid = 11;
    const auto gap = cmd_qa_gap(c);
    std::istringstream rows(body(gap.files[0]));
    std::string line;
    std::size_t n = 0;
    while (std::getline(rows, line))
        ++n;
    CHECK(n == 12);
}

TEST_CASE("radius and basin verification") {
    auto c = config16("radius");
    const auto r = cmd_radius(c);
    CHECK(body(r.files[0]) == "n,d_s,d_b,d_of_n,condition,chain,radius_bound\n16,2,10,8,1,1,7\n");

    const auto dir = scratch("basin");
    ExperimentConfig b;
    b.memories.path = write_memories(dir, "++++++++\n++++----\n");
    b.output.dir = dir.string();
    const auto v = cmd_basin_verify(b);
    CHECK(body(v.files[0]).starts_with("probe,d_s,d_b,h,condition,classification\n"));
    CHECK(v.summary.find("probes checked within distance 3") != std::string::npos);
}

TEST_CASE("capacity artifacts") {
    ExperimentConfig c;
    c.output.dir = scratch("capacity").string();
    c.capacity.n_max = 8;
    c.capacity.f_step = 0.125;
    c.capacity.n = 8;
    c.capacity.p = {1};
    c.capacity.trials = 40;
    const auto r = cmd_capacity(c);
    REQUIRE(r.files.size() == 4);
    const auto pstar = body(r.files[0]);
    CHECK(pstar.starts_with("N,x,exact,bound,exact_ge_bound\n2,0,"));
    CHECK(pstar.find(",0\n") == std::string::npos);
    const auto trade = body(r.files[1]);
    CHECK(trade.starts_with("f,c1_plus_c2\n0,0.25\n0.125,"));
    CHECK(std::count(trade.begin(), trade.end(), '\n') == 5);
    const auto mc = body(r.files[3]);
    CHECK(mc.starts_with("N,p,t_frac,trials,successes,rate,predicted,engine\n8,1,0.25,40,"));
    const auto m = cmd_montecarlo(c);
    CHECK(body(m.files[0]) == mc);
}

TEST_CASE("embedding on the defective processor") {
    auto c = config16("embed");
    c.sa.restarts = 20;
    const auto r = cmd_embed(c);
    CHECK(r.summary.starts_with("16 logical qubits on 80 physical qubits, chains 5-5"));
    CHECK(r.summary.find("(oracle ground state)") != std::string::npos);
    const auto doc = nlohmann::json::parse(slurp(r.files.at(2)));
    CHECK(doc["decoded"] == "++++--------++++");
    CHECK(doc["broken_chains"] == 0);
    CHECK(slurp(r.files[0]).starts_with("chain_strength 5\nchain 0: "));

    const auto dir = scratch("embed_big");
    ExperimentConfig big;
    big.memories.path = write_memories(dir, std::string(40, '+') + "\n");
    big.probe.pattern = std::string(40, '+');
    big.output.dir = dir.string();
    big.embed.m = 4;
    big.embed.defects = 0;
    try {
        cmd_embed(big);
        FAIL("expected an embedding failure");
    } catch (const EmbeddingError& e) {
        CHECK(e.logical() == 16);
    }
}

TEST_CASE("input problems surface as config errors") {
    ExperimentConfig c;
    c.output.dir = scratch("bad").string();
    CHECK_THROWS_AS(cmd_learn(c), ConfigError);
    c.memories.path = "/nonexistent/memories.txt";
    CHECK_THROWS_AS(cmd_learn(c), ConfigError);
    c = config16("bad2");
    c.probe.pattern = "+-+";
    CHECK_THROWS_AS(cmd_recall(c), ConfigError);
    c.probe.pattern.clear();
    CHECK_THROWS_AS(cmd_radius(c), ConfigError);
}
