#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "suranyi/cli.hpp"

using namespace suranyi;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Run {
    int code;
    json report;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    json report;
    if (!out.str().empty() && out.str().front() == '{') report = json::parse(out.str());
    return {code, report, err.str()};
}

fs::path temp_path(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "suranyi_cli_tests";
    fs::create_directories(dir);
    fs::remove(dir / name);
    return dir / name;
}

}  // namespace

TEST_CASE("scan examples") {
    auto r = run({"scan", "--a-min", "2", "--a-max", "100", "--k-min", "2", "--k-max", "12"});
    CHECK(r.code == 0);
    REQUIRE(r.report["result"]["hits"].size() == 1);
    CHECK(r.report["result"]["hits"][0]["A"] == 6);
    CHECK(r.report["result"]["hits"][0]["B"] == 7);
    CHECK(r.report["result"]["new_hits"].empty());

    r = run({"scan", "--a-min", "7", "--a-max", "2000", "--k-min", "2", "--k-max", "12", "--workers", "2"});
    CHECK(r.code == 0);
    CHECK(r.report["result"]["hits"].empty());

    CHECK(run({"scan", "--a-max", "1"}).code == 2);
    CHECK(run({"scan", "--a-max", "10", "--k-max", "21"}).code == 2);
    CHECK(run({"scan"}).code == 2);
    CHECK(run({"scan", "--a-max", "10", "--bogus"}).code == 2);
    CHECK(run({}).code == 2);
}

TEST_CASE("scan reports an unknown hit with exit 3") {
    const auto r = run({"--no-known", "scan", "--a-max", "10"});
    CHECK(r.code == 3);
    CHECK(r.report["result"]["new_hits"].size() == 1);
    CHECK(run({"--known", "6,3,8", "scan", "--a-max", "10"}).code == 3);
    CHECK(run({"--known", "6;3;7", "scan", "--a-max", "10"}).code == 2);
}

TEST_CASE("report schema") {
    const auto r = run({"scan", "--a-max", "20"});
    std::ostringstream out, err;
    run_cli({"scan", "--a-max", "20"}, out, err);
    const auto ordered = nlohmann::ordered_json::parse(out.str());
    std::vector<std::string> keys;
    for (const auto& [k, v] : ordered.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"schema", "command", "config", "result", "assumptions", "elapsed_s"});
    CHECK(r.report["schema"] == "v1");
    CHECK(r.report["command"] == "scan");
    CHECK(r.report["assumptions"][0] == "B ≥ 10⁶ from prior verification");

    for (const auto& args : std::vector<std::vector<std::string>>{
             {"constants", "--bmin", "1e6"}, {"window-cert"}, {"ladder", "--stages", "1e6:1e7"}}) {
        const auto other = run(args);
        CHECK(other.code == 0);
        CHECK(other.report["assumptions"][0] == "B ≥ 10⁶ from prior verification");
    }
}

TEST_CASE("config round trip reproduces the result") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"--workers", "3", "--block-size", "7", "scan", "--a-min", "3", "--a-max", "150", "--k-max", "9"},
             {"constants", "--bmin", "1e1000", "--t", "-1.2979"},
             {"constants", "--bmin", "1e6"},
             {"--no-known", "ladder", "--stages", "1e6:1e9,1e9:1e12", "--global-scan"},
             {"window-cert", "--k-min", "3", "--k-max", "14"}}) {
        const auto first = run(args);
        REQUIRE(first.code == 0);
        const auto again = run(args_from_report(first.report));
        CHECK(again.code == 0);
        CHECK(again.report["result"] == first.report["result"]);
        CHECK(again.report["config"] == first.report["config"]);
    }
}

TEST_CASE("constants") {
    auto r = run({"constants", "--bmin", "1e6", "--t", "2.1221"});
    CHECK(r.code == 0);
    CHECK(r.report["result"]["u_bound_hi"].get<double>() < 1.819);
    CHECK(r.report["result"]["c_at_t"]["lo"].get<double>() >= 1.6e-5);

    r = run({"constants", "--bmin", "1e3000", "--t", "-1.3479"});
    CHECK(r.code == 0);
    CHECK(r.report["result"]["u"] == "-0.8803");
    CHECK(r.report["result"]["v"] == "2.2282");

    r = run({"--max-precision", "512", "constants", "--bmin", "1e6", "--t", "-1.39"});
    CHECK(r.code == 4);
    CHECK(r.err.find("C(-1.3900, 1e6) > 0") != std::string::npos);

    CHECK(run({"constants", "--bmin", "1e6", "--t", "2.12215"}).code == 2);
    CHECK(run({"constants", "--bmin", "banana"}).code == 2);
    CHECK(run({"constants"}).code == 2);
    CHECK(run({"--precision", "8192", "constants", "--bmin", "1e6"}).code == 2);
}

TEST_CASE("precision from the environment") {
    ::setenv("SURANYI_PRECISION_BITS", "512", 1);
    auto r = run({"constants", "--bmin", "1e6"});
    ::unsetenv("SURANYI_PRECISION_BITS");
    CHECK(r.report["config"]["precision_bits"] == 512);
    CHECK(r.report["result"]["precision_bits"] == 512);
    CHECK(r.report["result"]["t"] == "2.1221");

    r = run({"--precision", "128", "constants", "--bmin", "1e6"});
    CHECK(r.report["config"]["precision_bits"] == 128);
}

TEST_CASE("ladder") {
    auto r = run({"ladder", "--stages", "1e6:1e20"});
    CHECK(r.code == 0);
    CHECK(r.report["result"]["frontier"] == "1e20");
    const auto a_max = r.report["result"]["stages"][0]["bounds"]["a_max"].get<int>();
    CHECK(a_max > 60);
    CHECK(a_max < 100);

    CHECK(run({"ladder", "--stages", "1e6-1e20"}).code == 2);
    CHECK(run({"ladder", "--stages", "1e6:1e20,"}).code == 2);
    CHECK(run({"ladder", "--stages", "1e6:1e20:1e30"}).code == 2);
    CHECK(run({"ladder", "--stages", "1e7:1e20"}).code == 2);

    // Short coverage is not a pass.
    r = run({"ladder", "--stages", "1e6:1e20", "--a-cap", "10"});
    CHECK(r.code == 1);
    CHECK(r.report["result"]["frontier"] == "1e6");
}

TEST_CASE("ladder with a prior report and an A cap") {
    const auto prior = temp_path("prior.json");
    REQUIRE(run({"--out", prior.string(), "scan", "--a-max", "200"}).code == 0);
    const auto r = run({"ladder", "--stages", "1e6:1e20", "--a-cap", "10", "--prior", prior.string()});
    CHECK(r.code == 0);
    CHECK(r.report["result"]["frontier"] == "1e20");
    CHECK(r.report["assumptions"].size() == 2);

    std::ofstream(prior) << "{not json";
    CHECK(run({"ladder", "--stages", "1e6:1e20", "--prior", prior.string()}).code == 2);
    CHECK(run({"ladder", "--stages", "1e6:1e20", "--prior", temp_path("none.json").string()}).code == 1);
}

TEST_CASE("scan checkpoint via the command line") {
    const auto ck = temp_path("cli.ckpt");
    const auto fresh = run({"scan", "--a-max", "500"});
    auto partial = run({"--block-size", "40", "scan", "--a-max", "500", "--checkpoint", ck.string(), "--halt-after", "200"});
    CHECK(partial.code == 0);
    CHECK_FALSE(partial.report["result"]["complete"].get<bool>());
    auto resumed = run({"--block-size", "40", "scan", "--a-max", "500", "--checkpoint", ck.string()});
    CHECK(resumed.code == 0);
    CHECK(resumed.err.find("resuming") != std::string::npos);
    auto a = resumed.report["result"];
    auto b = fresh.report["result"];
    CHECK(a == b);

    CHECK(run({"scan", "--a-max", "400", "--checkpoint", ck.string()}).code == 1);
    std::ofstream(ck, std::ios::app) << "garbage\n";
    CHECK(run({"scan", "--a-max", "500", "--checkpoint", ck.string()}).code == 1);
}

TEST_CASE("csv output") {
    const auto csv = temp_path("hits.csv");
    REQUIRE(run({"--csv", csv.string(), "scan", "--a-max", "100"}).code == 0);
    std::ifstream in(csv);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == "A,k,B,C,b_below_a\n6,3,7,10,0\n5,3,3,6,1\n7,4,6,10,1\n");
}

TEST_CASE("--out writes the report file") {
    const auto out = temp_path("report.json");
    const auto r = run({"--out", out.string(), "window-cert"});
    CHECK(r.code == 0);
    CHECK(r.report.is_null());
    std::ifstream in(out);
    const json j = json::parse(in);
    CHECK(j["result"]["certificates"][0]["coeffs"] == json::array({15, 8}));
}

TEST_CASE("window-cert") {
    auto r = run({"window-cert", "--k-min", "2", "--k-max", "12"});
    CHECK(r.code == 0);
    CHECK(r.report["result"]["all_verified_in_range"] == true);
    r = run({"window-cert", "--k-max", "25"});
    CHECK(r.code == 0);
    CHECK(r.report["result"]["failed_outside_range"].size() == 13);
    CHECK(run({"window-cert", "--k-min", "1"}).code == 2);
    CHECK(run({"window-cert", "--k-max", "65"}).code == 2);
}

TEST_CASE("selftest") {
    auto r = run({"selftest", "--quick"});
    CHECK(r.code == 0);
    CHECK(r.report["result"]["passed"] == true);
    CHECK(r.report["result"]["properties"].size() == 8);

    r = run({"--precision", "64", "selftest", "--quick"});
    CHECK(r.code == 0);

    r = run({"selftest", "--quick", "--corrupt-constants"});
    CHECK(r.code == 1);
    CHECK(r.err.find("t_thresh") != std::string::npos);
}

TEST_CASE("help exits 0") {
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"scan", "--help"}).code == 0);
}
