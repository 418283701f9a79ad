#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rtbp/cli.hpp"

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run_tool(const std::string& args) {
    const std::string cmd = std::string(RTBP_TOOL) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    return out;
}

}  // namespace

TEST_CASE("verify identities exits 0 with a JSON report", "[integration]") {
    const Run r = run_tool("verify --suite identities");
    CHECK(r.code == 0);
    const auto j = rtbp::cli::Json::parse(r.out);
    CHECK(j["schema"] == rtbp::cli::kSchema);
    CHECK(j["command"] == "verify");
    REQUIRE(j["runs"].size() == 1);
    const auto& checks = j["runs"][0]["checks"];
    REQUIRE(checks.size() == 1);
    CHECK(checks[0]["check"] == "identities");
    CHECK(checks[0]["passed"] == true);
    CHECK(checks[0]["metrics"].size() > 3);
}

TEST_CASE("melnikov grid to CSV", "[integration]") {
    std::remove("d0.csv");
    const Run r = run_tool("melnikov --eps 0.45 --theta0-grid 64 --out d0.csv");
    REQUIRE(r.code == 0);
    const std::string text = slurp("d0.csv");
    const auto lines = split(text, '\n');
    REQUIRE(lines.size() == 66);
    const auto header = split(lines[0], ',');
    for (const char* col : {"theta0", "D0_direct", "D0_series", "leading"})
        CHECK(std::find(header.begin(), header.end(), col) != header.end());
    for (std::size_t i = 1; i <= 64; ++i) {
        const auto f = split(lines[i], ',');
        REQUIRE(f.size() == header.size());
        for (const auto& v : f) CHECK(std::isfinite(std::stod(v)));
    }
    CHECK(lines.back().rfind("# schema=rtbp-cli/1 command=melnikov config_hash=", 0) == 0);
    CHECK(text.back() == '\n');
}

TEST_CASE("manifold residuals decrease after iteration 2", "[integration]") {
    const Run r = run_tool("manifold --rho 0.2 --eps 0.35 --theta0 0.7");
    REQUIRE(r.code == 0);
    const auto j = rtbp::cli::Json::parse(r.out);
    const auto& run = j["runs"][0];
    for (const char* br : {"stable", "unstable"}) {
        const auto& res = run[br]["residuals"];
        REQUIRE(res.size() > 3);
        for (std::size_t i = 2; i < res.size(); ++i) CHECK(res[i].get<double>() < res[i - 1].get<double>());
    }
}

TEST_CASE("output is byte-identical across job counts and repeats", "[integration]") {
    const std::string args = "asympt --eps-sweep 0.3:0.5:6 --theta0 1.1 --format csv";
    const Run a = run_tool(args + " --jobs 1");
    const Run b = run_tool(args + " --jobs 4");
    const Run c = run_tool(args + " --jobs 4");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(b.out == c.out);
    const Run m1 = run_tool("melnikov --eps-sweep 0.4,0.45 --theta0-grid 8 --jobs 1 --format json");
    const Run m3 = run_tool("melnikov --eps-sweep 0.4,0.45 --theta0-grid 8 --jobs 3 --format json");
    REQUIRE(m1.code == 0);
    CHECK(m1.out == m3.out);
}

TEST_CASE("config hash tracks the configuration only", "[integration]") {
    const Run a = run_tool("asympt --eps 0.4 --format csv --jobs 1");
    const Run b = run_tool("asympt --eps 0.4 --format csv --jobs 2");
    const Run c = run_tool("asympt --eps 0.41 --format csv");
    auto hash = [](const std::string& s) { return s.substr(s.rfind("config_hash=")); };
    CHECK(hash(a.out) == hash(b.out));
    CHECK(hash(a.out) != hash(c.out));
}

TEST_CASE("exit codes", "[integration]") {
    CHECK(run_tool("melnikov --eps 0.9").code == 2);
    CHECK(run_tool("melnikov --no-such-flag").code == 2);
    CHECK(run_tool("integrate --rho 0.7").code == 2);
    CHECK(run_tool("verify --suite nope").code == 2);
    CHECK(run_tool("homoclinic --rho 0 --eps 0.4 --theta0 1.5").code == 3);
}
