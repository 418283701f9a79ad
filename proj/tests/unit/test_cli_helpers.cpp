#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <sstream>

#include "rtbp/cli.hpp"

using namespace rtbp::cli;

TEST_CASE("format_double", "[cli]") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(-0.0) == "0");
    CHECK(format_double(-2.5) == "-2.5");
    CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
    CHECK(format_double(1e-300) == "1e-300");
    CHECK(std::stod(format_double(M_PI)) == M_PI);
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("csv_field", "[cli]") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_field("two\nlines") == "\"two\nlines\"");
}

TEST_CASE("parse_list", "[cli]") {
    CHECK(parse_list("0.3,0.4,0.5") == std::vector<double>{0.3, 0.4, 0.5});
    CHECK(parse_list("0:1:5") == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK(parse_list("2") == std::vector<double>{2.0});
    CHECK_THROWS_AS(parse_list(""), ConfigError);
    CHECK_THROWS_AS(parse_list("1,x"), ConfigError);
    CHECK_THROWS_AS(parse_list("0:1:0"), ConfigError);
}

TEST_CASE("fnv1a64", "[cli]") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(hex64(0xaf63dc4c8601ec8cULL) == "af63dc4c8601ec8c");
    CHECK(hex64(1) == "0000000000000001");
}

TEST_CASE("write_json keeps 17 significant digits", "[cli]") {
    Json j;
    j["x"] = 0.1;
    j["n"] = 3;
    j["w"] = 2.0;
    j["bad"] = std::numeric_limits<double>::quiet_NaN();
    std::ostringstream os;
    write_json(os, j);
    const std::string s = os.str();
    CHECK(s.find("0.10000000000000001") != std::string::npos);
    CHECK(s.find("2.0") != std::string::npos);
    CHECK(s.find("null") != std::string::npos);
    CHECK(Json::parse(s)["n"] == 3);
}

TEST_CASE("run reports configuration errors", "[cli]") {
    std::ostringstream out, err;
    const char* argv[] = {"rtbp", "melnikov", "--eps", "0.9"};
    CHECK(run(4, argv, out, err) == kConfigError);
    CHECK(err.str().find("config error") != std::string::npos);
    const char* argv2[] = {"rtbp", "verify", "--suite", "nope"};
    std::ostringstream out2, err2;
    CHECK(run(4, argv2, out2, err2) == kConfigError);
}
