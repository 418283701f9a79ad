#pragma once

#include <string>
#include <vector>

namespace rtbp {

struct Metric {
    std::string name;
    double value = 0.0;
};

// One acceptance check: what was measured, the pinned rule, and the outcome.
struct CheckResult {
    int id = 0;
    std::string key;    // suite name, e.g. "identities"
    std::string title;
    std::string rule;   // pass rule with its pinned tolerances
    bool passed = false;
    std::vector<Metric> metrics;
    std::vector<std::string> notes;
};

CheckResult check_identities();
CheckResult check_jacobi();
CheckResult check_coefficients();
CheckResult check_representation();
CheckResult check_watson();
CheckResult check_dual_path();
CheckResult check_leading_trend();
CheckResult check_contraction();
CheckResult check_melnikov_limit();
CheckResult check_transversality();

// Suite names accepted by run_suite: the ten keys above plus "all".
const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);
// Throws std::invalid_argument for an unknown suite.
std::vector<CheckResult> run_suite(const std::string& name);

}  // namespace rtbp
