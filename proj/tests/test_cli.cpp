#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "sumsetlab/cli.hpp"

using namespace sumsetlab;
using nlohmann::json;

namespace {

struct CliResult {
    int rc = -1;
    std::string out;
    std::string err;
};

CliResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    CliResult result;
    result.rc = run_command(args, out, err);
    result.out = out.str();
    result.err = err.str();
    return result;
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("sumsetlab-cli-test-" + std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
    std::string write(const std::string& name, const std::string& text) const {
        const std::string p = file(name);
        std::ofstream out(p);
        out << text;
        return p;
    }
    static std::string slurp(const std::string& p) {
        std::ifstream in(p);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    }
};

int count_lines(const std::string& text) {
    int lines = 0;
    for (char c : text) lines += (c == '\n');
    return lines;
}

// Fields of the data row in a two-line summary CSV (header + one row).
std::vector<std::string> summary_fields(const std::string& csv) {
    REQUIRE(csv.rfind("A,n,alpha,g,p,trials,successes,", 0) == 0);
    const std::size_t start = csv.find('\n') + 1;
    const std::size_t stop = csv.find('\n', start);
    std::vector<std::string> fields;
    std::string cell;
    std::istringstream row(csv.substr(start, stop - start));
    while (std::getline(row, cell, ',')) fields.push_back(cell);
    return fields;
}

// Column order matches the summary header above.
enum SummaryCol { colA, colN, colAlpha, colG, colP, colTrials, colSuccesses,
                  colPHat, colCiLo, colCiHi, colMeanX, colLambdaExact };

}  // namespace

TEST_CASE("no arguments and --help both print usage and succeed") {
    const CliResult bare = run({});
    CHECK(bare.rc == 0);
    CHECK(bare.out.find("theory") != std::string::npos);
    CHECK(bare.out.find("simulate-basis") != std::string::npos);
    CHECK(bare.out.find("balls-boxes") != std::string::npos);

    const CliResult help = run({"--help"});
    CHECK(help.rc == 0);
    CHECK(help.out.find("sweep") != std::string::npos);

    const CliResult sub_help = run({"simulate-basis", "--help"});
    CHECK(sub_help.rc == 0);
    CHECK(sub_help.out.find("--seed") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
    const CliResult unknown = run({"theory", "--frobnicate"});
    CHECK(unknown.rc == 2);
    CHECK(unknown.err.rfind("usage error:", 0) == 0);

    const CliResult bad_engine = run({"count", "--in", "x", "--engine", "quantum"});
    CHECK(bad_engine.rc == 2);

    const CliResult missing_n = run({"theory"});
    CHECK(missing_n.rc == 2);
    CHECK(missing_n.err.rfind("config error:", 0) == 0);
}

TEST_CASE("theory emits the closed-form report") {
    const CliResult result =
        run({"theory", "--n", "1000", "--alpha", "0.5", "--g", "2", "--A", "0"});
    REQUIRE(result.rc == 0);
    const json doc = json::parse(result.out);
    CHECK(doc.at("n") == 1000);
    CHECK(doc.at("h") == 2);
    CHECK(doc.at("g") == 2);
    CHECK(std::fabs(doc.at("p").get<double>() - 0.166225813626911) < 1e-12);
    CHECK(std::fabs(doc.at("limit_prob").get<double>() - std::exp(-1.0)) < 1e-12);
    CHECK(doc.at("window").at("lo") == 500);
    CHECK(doc.at("window").at("hi") == 1500);
    CHECK(std::fabs(doc.at("bhg_threshold_size").get<double>() - 10.0) < 1e-9);
    CHECK(std::fabs(doc.at("lambda_asymptotic").get<double>() - 1.0) < 1e-9);
    CHECK(doc.at("lambda_exact").is_number());
    CHECK(doc.at("sc_bound").at("total").get<double>() > 0.0);
    CHECK(doc.at("sc_bound").at("t1").get<double>() > 0.0);

    // Same quantities through the g=1 route with an explicit h.
    const CliResult g1 = run({"theory", "--n", "4096", "--alpha", "0.4", "--h", "3"});
    REQUIRE(g1.rc == 0);
    const json g1_doc = json::parse(g1.out);
    CHECK(g1_doc.at("h") == 3);
    CHECK(g1_doc.at("window").at("lo") == 1639);  // ceil(0.4 * 4096)
    CHECK_FALSE(g1_doc.contains("lambda_exact"));  // pair model only

    const CliResult invalid = run({"theory", "--n", "100", "--alpha", "0.5", "--A", "-100"});
    CHECK(invalid.rc == 1);  // radicand below zero is a runtime domain error
    CHECK(invalid.err.rfind("error:", 0) == 0);

    const CliResult bad_spec = run({"theory", "--n", "100", "--h", "3", "--g", "2"});
    CHECK(bad_spec.rc == 2);  // unsupported corner is a config error
}

TEST_CASE("count reports representation counts in every format") {
    TempDir tmp;
    const std::string set_path = tmp.write("set.txt", "n=6\n2\n4\n6\n");

    const CliResult csv = run({"count", "--in", set_path});
    REQUIRE(csv.rc == 0);
    CHECK(csv.out.rfind("j,count\n", 0) == 0);
    CHECK(count_lines(csv.out) == 14);  // header + j = 0..12
    CHECK(csv.out.find("8,2\n") != std::string::npos);

    const CliResult sparse = run({"count", "--in", set_path, "--sparse"});
    REQUIRE(sparse.rc == 0);
    CHECK(sparse.out == "j,count\n4,1\n6,1\n8,2\n10,1\n12,1\n");

    for (const char* engine : {"naive", "convolution"}) {
        const CliResult by_engine = run({"count", "--in", set_path, "--engine", engine});
        CHECK(by_engine.out == csv.out);
    }

    const CliResult h3 = run({"count", "--in", set_path, "--h", "3", "--sparse"});
    REQUIRE(h3.rc == 0);
    CHECK(h3.out ==
          "j,count\n6,1\n8,1\n10,2\n12,2\n14,2\n16,1\n18,1\n");

    const CliResult jsonl = run({"count", "--in", set_path, "--format", "jsonl", "--sparse"});
    REQUIRE(jsonl.rc == 0);
    CHECK(count_lines(jsonl.out) == 5);
    CHECK(jsonl.out.find(R"({"j":8,"count":2})") != std::string::npos);

    const CliResult as_json = run({"count", "--in", set_path, "--format", "json"});
    REQUIRE(as_json.rc == 0);
    const json doc = json::parse(as_json.out);
    CHECK(doc.at("n") == 6);
    CHECK(doc.at("max_sum") == 12);
    CHECK(doc.at("counts").size() == 13);
    CHECK(doc.at("counts")[8] == 2);

    const CliResult missing = run({"count", "--in", tmp.file("absent.txt")});
    CHECK(missing.rc == 1);

    const CliResult bad_h = run({"count", "--in", set_path, "--h", "4",
                                 "--engine", "convolution"});
    CHECK(bad_h.rc == 1);
}

TEST_CASE("check reports the predicate bundle") {
    TempDir tmp;
    const std::string sidon_path = tmp.write("sidon.txt", "n=4\n1\n2\n4\n");
    const CliResult result = run({"check", "--in", sidon_path, "--h", "2", "--g", "1"});
    REQUIRE(result.rc == 0);
    const json doc = json::parse(result.out);
    CHECK(doc.at("n") == 4);
    CHECK(doc.at("size") == 3);
    CHECK(doc.at("alpha") == 0.5);
    CHECK(doc.at("sidon") == true);
    CHECK(doc.at("bhg") == true);
    CHECK(doc.at("truncated_basis") == true);
    CHECK(doc.at("max_sigma") == 2);
    CHECK(doc.at("max_delta") == 1);
    CHECK(doc.at("max_sigma_delta") == 3);

    const std::string ap_path = tmp.write("ap.txt", "n=8\n0\n2\n4\n");
    const CliResult ap = run({"check", "--in", ap_path});
    REQUIRE(ap.rc == 0);
    const json ap_doc = json::parse(ap.out);
    CHECK(ap_doc.at("sidon") == false);
    CHECK(ap_doc.at("truncated_basis") == false);  // odd targets lack pairs

    const std::string bad_path = tmp.write("bad.txt", "5\n1\n");
    CHECK(run({"check", "--in", bad_path}).rc == 1);
}

TEST_CASE("simulate-basis routes records and summary by destination") {
    TempDir tmp;
    const std::vector<std::string> base{"simulate-basis", "--n",    "128",  "--alpha",
                                        "0.5",            "--g",    "1",    "--A",
                                        "2",              "--trials", "10", "--seed",
                                        "7"};

    // Records on stdout, summary on stderr.
    CliResult direct = run(base);
    REQUIRE(direct.rc == 0);
    CHECK(count_lines(direct.out) == 10);
    const json first = json::parse(direct.out.substr(0, direct.out.find('\n')));
    CHECK(first.at("trial_index") == 0);
    CHECK(first.contains("derived_seed"));
    CHECK(first.contains("X"));
    CHECK_FALSE(first.contains("wall_time_ms"));
    const std::vector<std::string> summary = summary_fields(direct.err);
    CHECK(summary.at(colTrials) == "10");
    CHECK(summary.at(colN) == "128");
    CHECK_FALSE(summary.at(colSuccesses).empty());
    CHECK_FALSE(summary.at(colLambdaExact).empty());

    // Byte-for-byte reproducibility of the full record stream.
    const CliResult replay = run(base);
    CHECK(replay.out == direct.out);
    CHECK(replay.err == direct.err);

    // Records to a file: the summary CSV moves to stdout.
    std::vector<std::string> to_file = base;
    to_file.insert(to_file.end(), {"--out", tmp.file("records.jsonl")});
    const CliResult filed = run(to_file);
    REQUIRE(filed.rc == 0);
    CHECK(TempDir::slurp(tmp.file("records.jsonl")) == direct.out);
    CHECK(filed.out == direct.err);
    CHECK(filed.err.empty());

    // CSV record format.
    std::vector<std::string> as_csv = base;
    as_csv.insert(as_csv.end(), {"--format", "csv"});
    const CliResult csv = run(as_csv);
    REQUIRE(csv.rc == 0);
    CHECK(csv.out.rfind("trial_index,derived_seed,set_size,X,is_basis\n", 0) == 0);
    CHECK(count_lines(csv.out) == 11);

    // Single-document JSON format.
    std::vector<std::string> as_json = base;
    as_json.insert(as_json.end(), {"--format", "json"});
    const CliResult bundled = run(as_json);
    REQUIRE(bundled.rc == 0);
    const json doc = json::parse(bundled.out);
    CHECK(doc.at("config").at("n") == 128);
    CHECK(doc.at("records").size() == 10);
    CHECK(doc.at("summary").at("n") == 128);
    CHECK(doc.at("summary").at("trials") == 10);
    CHECK(doc.at("summary").at("successes") == std::stoll(summary.at(colSuccesses)));
    CHECK(doc.at("summary").at("lambda_exact").is_number());
}

TEST_CASE("simulate-bhg requires an explicit probability") {
    const CliResult missing = run({"simulate-bhg", "--n", "64", "--trials", "4"});
    CHECK(missing.rc == 2);
    CHECK(missing.err.rfind("config error:", 0) == 0);

    const CliResult ok = run({"simulate-bhg", "--n", "64", "--trials", "4", "--p", "0.5",
                              "--seed", "3"});
    REQUIRE(ok.rc == 0);
    CHECK(count_lines(ok.out) == 4);
    const std::vector<std::string> summary = summary_fields(ok.err);
    CHECK(summary.at(colP) == "0.5");
    CHECK(summary.at(colLambdaExact).empty());  // pair-threshold theory not applicable
}

TEST_CASE("config files feed simulations and flags override them") {
    TempDir tmp;
    const std::string config_path = tmp.write(
        "config.json",
        R"({"kind": "basis", "n": 128, "alpha": 0.5, "g": 1, "A": 2.0, "trials": 3, "master_seed": 7})");

    const CliResult from_config = run({"simulate-basis", "--config", config_path});
    REQUIRE(from_config.rc == 0);
    CHECK(count_lines(from_config.out) == 3);

    const CliResult overridden =
        run({"simulate-basis", "--config", config_path, "--trials", "5"});
    REQUIRE(overridden.rc == 0);
    CHECK(count_lines(overridden.out) == 5);
    // The first three records coincide: same master seed, same parameters.
    CHECK(overridden.out.rfind(from_config.out, 0) == 0);

    const CliResult mismatched = run({"simulate-bhg", "--config", config_path, "--p", "0.1"});
    CHECK(mismatched.rc == 2);

    const CliResult unreadable = run({"simulate-basis", "--config", tmp.file("nope.json")});
    CHECK(unreadable.rc == 2);

    const std::string broken = tmp.write("broken.json", "{\"n\": 12,");
    CHECK(run({"simulate-basis", "--config", broken}).rc == 2);
}

TEST_CASE("sweep walks the offset grid and emits plot artifacts") {
    TempDir tmp;
    const CliResult result =
        run({"sweep", "--n", "128", "--alpha", "0.5", "--g", "1", "--A-grid", "-2,0,2,4",
             "--trials", "12", "--seed", "5", "--plot", tmp.file("curve")});
    REQUIRE(result.rc == 0);
    CHECK(result.out.rfind("A,n,alpha,g,p,trials,successes,p_hat,", 0) == 0);
    CHECK(count_lines(result.out) == 5);
    // First data line starts at the lowest offset.
    const std::string second_line =
        result.out.substr(result.out.find('\n') + 1,
                          result.out.find('\n', result.out.find('\n') + 1) -
                              result.out.find('\n') - 1);
    CHECK(second_line.rfind("-2.0,128,0.5,1,", 0) == 0);

    const std::string dat = TempDir::slurp(tmp.file("curve.dat"));
    CHECK(dat.rfind("# A p_hat ci_lo ci_hi limit_prob\n", 0) == 0);
    CHECK(count_lines(dat) == 5);
    const std::string gp = TempDir::slurp(tmp.file("curve.gp"));
    CHECK(gp.find("yerrorbars") != std::string::npos);
    CHECK(gp.find("curve.dat") != std::string::npos);

    const CliResult no_grid = run({"sweep", "--n", "128", "--trials", "4"});
    CHECK(no_grid.rc == 2);

    const CliResult as_jsonl =
        run({"sweep", "--n", "128", "--A-grid", "0,2", "--trials", "6", "--seed", "5",
             "--format", "jsonl"});
    REQUIRE(as_jsonl.rc == 0);
    CHECK(count_lines(as_jsonl.out) == 2);
    const json row = json::parse(as_jsonl.out.substr(0, as_jsonl.out.find('\n')));
    CHECK(row.at("A") == 0.0);
    CHECK(row.at("trials") == 6);
}

TEST_CASE("balls-boxes runs both modes deterministically") {
    const std::vector<std::string> waiting{"balls-boxes", "--boxes", "50", "--g", "2",
                                           "--trials", "5", "--seed", "11"};
    const CliResult first = run(waiting);
    REQUIRE(first.rc == 0);
    CHECK(first.out.rfind("trial,seed,value\n", 0) == 0);
    CHECK(count_lines(first.out) == 6);
    const CliResult second = run(waiting);
    CHECK(second.out == first.out);

    const CliResult threshold =
        run({"balls-boxes", "--boxes", "50", "--g", "1", "--trials", "3", "--n", "200",
             "--seed", "11", "--mode", "threshold", "--format", "jsonl"});
    REQUIRE(threshold.rc == 0);
    CHECK(count_lines(threshold.out) == 3);
    const json row = json::parse(threshold.out.substr(0, threshold.out.find('\n')));
    CHECK(row.at("trial") == 0);
    CHECK(row.at("value").get<std::int64_t>() >= 0);
    CHECK(row.at("value").get<std::int64_t>() <= 50);

    const CliResult no_balls = run({"balls-boxes", "--boxes", "50", "--mode", "threshold"});
    CHECK(no_balls.rc == 2);

    const CliResult bundled =
        run({"balls-boxes", "--boxes", "20", "--trials", "2", "--seed", "1", "--format",
             "json"});
    REQUIRE(bundled.rc == 0);
    const json doc = json::parse(bundled.out);
    CHECK(doc.at("mode") == "waiting");
    CHECK(doc.at("records").size() == 2);
}

TEST_CASE("outputs write to --out files") {
    TempDir tmp;
    const std::string out_path = tmp.file("theory.json");
    const CliResult result = run({"theory", "--n", "100", "--out", out_path});
    REQUIRE(result.rc == 0);
    CHECK(result.out.empty());
    const json doc = json::parse(TempDir::slurp(out_path));
    CHECK(doc.at("n") == 100);

    const CliResult unwritable =
        run({"theory", "--n", "100", "--out", tmp.file("no-such-dir/x.json")});
    CHECK(unwritable.rc == 1);
}
