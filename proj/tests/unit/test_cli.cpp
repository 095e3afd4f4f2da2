#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <sys/wait.h>

#include "hksim/experiment.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path fixtures = HKSIM_FIXTURES;

struct Outcome {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome cli(const std::string& args) {
    static int counter = 0;
    const auto dir = fs::temp_directory_path() / "hksim_cli_capture";
    fs::create_directories(dir);
    const auto out = dir / ("out" + std::to_string(counter) + ".txt");
    const auto err = dir / ("err" + std::to_string(counter++) + ".txt");
    const std::string cmd = std::string(HKSIM_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

fs::path scratch(const std::string& name) {
    auto d = fs::temp_directory_path() / "hksim_cli_test" / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

// measure -> node -> value
std::map<std::string, std::map<std::string, double>> centrality_table(const std::string& csv) {
    std::map<std::string, std::map<std::string, double>> t;
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    REQUIRE(line == "node,measure,value");
    while (std::getline(in, line)) {
        auto a = line.find(','), b = line.rfind(',');
        t[line.substr(a + 1, b - a - 1)][line.substr(0, a)] = std::stod(line.substr(b + 1));
    }
    return t;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("cli: usage errors exit nonzero with one error line") {
    auto r = cli("");
    CHECK(r.code != 0);
    r = cli("simulate --measure bogus");
    CHECK(r.code == 1);
    CHECK(r.err.rfind("error: ", 0) == 0);
    CHECK(count_lines(r.err) == 1);
    r = cli("centrality --edges /nonexistent.edges");
    CHECK(r.code != 0);
    CHECK(r.err.rfind("error: ", 0) == 0);
    r = cli("report --runs " + (fixtures / "p3.edges").string() + " --out /tmp/hksim_cli_bad.csv");
    CHECK(r.code == 1);
    CHECK(r.err.find("unexpected header") != std::string::npos);
    CHECK(cli("--help").code == 0);
}

TEST_CASE("cli generate: default instance, seeds, small community example") {
    auto d = scratch("generate");
    auto r = cli("generate --out " + (d / "a").string());
    REQUIRE(r.code == 0);
    CHECK(r.err.find("lfr-000: N=1000") != std::string::npos);
    CHECK(fs::exists(d / "a" / "lfr-000.communities"));
    std::set<std::string> nodes;
    std::istringstream comm(slurp(d / "a" / "lfr-000.communities"));
    std::string line;
    while (std::getline(comm, line)) nodes.insert(line.substr(0, line.find(' ')));
    CHECK(nodes.size() == 1000);

    REQUIRE(cli("generate --seed 1 --out " + (d / "b").string()).code == 0);
    CHECK(slurp(d / "a" / "lfr-000.edges") == slurp(d / "b" / "lfr-000.edges"));
    REQUIRE(cli("generate --seed 2 --out " + (d / "c").string()).code == 0);
    CHECK(slurp(d / "a" / "lfr-000.edges") != slurp(d / "c" / "lfr-000.edges"));

    // Small graphs need degree bounds below n as well.
    r = cli("generate --n 40 --cmin 20 --cmax 20 --kmean 6 --kmin 4 --kmax 12 --instances 2 --out " + (d / "s").string());
    REQUIRE(r.code == 0);
    for (auto id : {"lfr-000", "lfr-001"}) {
        std::set<std::string> communities;
        std::istringstream in(slurp(d / "s" / (std::string(id) + ".communities")));
        while (std::getline(in, line)) communities.insert(line.substr(line.find(' ') + 1));
        CHECK(communities.size() == 2);
    }
    r = cli("generate --n 40 --out " + (d / "bad").string());
    CHECK(r.code == 1);
    CHECK(r.err.find("k_max must be smaller than n") != std::string::npos);
}

TEST_CASE("cli centrality: fixtures") {
    auto r = cli("centrality --edges " + (fixtures / "p3.edges").string());
    REQUIRE(r.code == 0);
    auto t = centrality_table(r.out);
    CHECK(t["degree"] == std::map<std::string, double>{{"0", 1}, {"1", 2}, {"2", 1}});

    r = cli("centrality --edges " + (fixtures / "tree.edges").string());
    REQUIRE(r.code == 0);
    t = centrality_table(r.out);
    CHECK(t["salience"] == t["degree"]);
    CHECK(t["hss_degree"] == t["degree"]);

    auto d = scratch("centrality");
    REQUIRE(cli("generate --n 200 --kmax 50 --out " + d.string()).code == 0);
    // No edge of this small dense graph reaches salience 0.9.
    std::ofstream(d / "cfg.json") << R"({"centrality": {"hss_threshold": 0.5}})";
    r = cli("centrality --config " + (d / "cfg.json").string() + " --edges " + (d / "lfr-000.edges").string() +
            " --communities " + (d / "lfr-000.communities").string() + " --out " + (d / "c.csv").string() +
            " --hss " + (d / "hss.edges").string());
    REQUIRE(r.code == 0);
    t = centrality_table(slurp(d / "c.csv"));
    CHECK(t.size() == 8);
    for (const auto& [m, col] : t) CHECK(col.size() == 200);
    for (auto m : {"degree", "strength", "betweenness", "pagerank", "k_coreness", "s_coreness", "salience", "hss_degree"}) {
        CHECK(t.count(m) == 1);
    }
    double hss_degree_sum = 0.0;
    for (const auto& [node, k] : t["hss_degree"]) hss_degree_sum += k;
    const auto skeleton_edges = count_lines(slurp(d / "hss.edges"));
    CHECK(skeleton_edges > 0);
    CHECK(hss_degree_sum == 2.0 * static_cast<double>(skeleton_edges));
}

TEST_CASE("cli simulate: reproducible row, stubborn agents move the mean") {
    auto d = scratch("simulate");
    const std::string net = "--n 300 --kmax 60 ";
    auto r = cli("simulate " + net + "--measure none --out " + (d / "a").string());
    REQUIRE(r.code == 0);
    REQUIRE(cli("simulate " + net + "--measure none --out " + (d / "b").string()).code == 0);
    CHECK(slurp(d / "a" / "runs.csv") == slurp(d / "b" / "runs.csv"));
    CHECK(slurp(d / "a" / "run.json") == slurp(d / "b" / "run.json"));
    CHECK(fs::exists(d / "a" / "series.csv"));
    CHECK(fs::exists(d / "a" / "snapshots.csv"));

    REQUIRE(cli("simulate " + net + "--measure salience --fraction 0.02 --out " + (d / "s").string()).code == 0);
    std::istringstream a(slurp(d / "a" / "runs.csv")), s(slurp(d / "s" / "runs.csv"));
    auto base = hksim::read_runs_csv(a, "a");
    auto stub = hksim::read_runs_csv(s, "s");
    REQUIRE(base.size() == 1);
    REQUIRE(stub.size() == 1);
    CHECK(stub[0].fraction_near > base[0].fraction_near);
    CHECK(stub[0].final_mean > base[0].final_mean);
}

TEST_CASE("cli sweep and report") {
    auto d = scratch("sweep");
    std::ofstream(d / "cfg.json") << R"({
        "seed": 3,
        "generator": {"n": 200, "k_max": 50, "instances": 2},
        "simulation": {"max_steps": 200},
        "sweep": {"strategies": ["static", "dynamic"], "measures": ["degree", "random"], "fractions": [0.01, 0.02],
                  "runs_per_cell": 2, "snapshots": true}
    })";
    const std::string base = "sweep --config " + (d / "cfg.json").string();
    auto r = cli(base + " --out " + (d / "a").string());
    REQUIRE(r.code == 0);
    CHECK(r.err.find("32 jobs") != std::string::npos);
    REQUIRE(cli(base + " --jobs 3 --out " + (d / "b").string()).code == 0);
    CHECK(slurp(d / "a" / "runs.csv") == slurp(d / "b" / "runs.csv"));
    CHECK(slurp(d / "a" / "aggregates.csv") == slurp(d / "b" / "aggregates.csv"));
    CHECK(count_lines(slurp(d / "a" / "runs.csv")) == 33);
    CHECK(count_lines(slurp(d / "a" / "aggregates.csv")) == 9);
    CHECK(fs::exists(d / "a" / "config.json"));
    CHECK(fs::exists(d / "a" / "summary.json"));
    CHECK_FALSE(fs::exists(d / "a" / "failures.csv"));
    std::size_t snaps = 0;
    for (const auto& e : fs::directory_iterator(d / "a" / "snapshots")) snaps += e.path().extension() == ".csv";
    CHECK(snaps == 32);

    r = cli("report --runs " + (d / "a" / "runs.csv").string() + " --out " + (d / "re.csv").string());
    REQUIRE(r.code == 0);
    CHECK(slurp(d / "re.csv") == slurp(d / "a" / "aggregates.csv"));

    // The archived effective config reproduces the run.
    REQUIRE(cli("sweep --config " + (d / "a" / "config.json").string() + " --out " + (d / "c").string()).code == 0);
    CHECK(slurp(d / "c" / "runs.csv") == slurp(d / "a" / "runs.csv"));

    std::ofstream(d / "bad.json") << R"({"sweep": {"runz": 1}})";
    r = cli("sweep --config " + (d / "bad.json").string());
    CHECK(r.code == 1);
    CHECK(r.err.find("sweep.runz") != std::string::npos);
}
