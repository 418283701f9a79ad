#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace rtbp::cli {

inline constexpr const char* kSchema = "rtbp-cli/1";

enum ExitCode : int {
    kOk = 0,
    kCheckFailed = 1,  // verify ran, at least one check failed
    kConfigError = 2,
    kNumericalFailure = 3,
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// -- serialization helpers ------------------------------------------------------------
// 17 significant digits; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double v);
// RFC-4180 field quoting.
std::string csv_field(const std::string& s);
std::uint64_t fnv1a64(const std::string& s);
std::string hex64(std::uint64_t v);

// "a,b,c" or "start:stop:count" (inclusive linspace). Throws ConfigError.
std::vector<double> parse_list(const std::string& spec);

using Json = nlohmann::ordered_json;
// Pretty JSON with every float at 17 significant digits (non-finite as null).
void write_json(std::ostream& os, const Json& j);

}  // namespace rtbp::cli
