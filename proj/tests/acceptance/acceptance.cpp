#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include "rtbp/verify.hpp"

int main() {
    using rtbp::CheckResult;
    const std::vector<std::function<CheckResult()>> checks = {
        rtbp::check_identities,     rtbp::check_jacobi,          rtbp::check_coefficients,
        rtbp::check_representation, rtbp::check_watson,          rtbp::check_dual_path,
        rtbp::check_leading_trend,  rtbp::check_contraction,     rtbp::check_melnikov_limit,
        rtbp::check_transversality,
    };
    int failed = 0;
    for (const auto& check : checks) {
        const auto t0 = std::chrono::steady_clock::now();
        CheckResult r;
        try {
            r = check();
        } catch (const std::exception& e) {
            r.passed = false;
            r.notes.push_back(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s criterion %d (%s): %s [%.2fs]\n", r.passed ? "PASS" : "FAIL", r.id, r.key.c_str(),
                    r.title.c_str(), secs);
        std::printf("    rule: %s\n", r.rule.c_str());
        for (const auto& m : r.metrics) std::printf("    %s = %.10g\n", m.name.c_str(), m.value);
        for (const auto& n : r.notes) std::printf("    note: %s\n", n.c_str());
        if (!r.passed) ++failed;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(checks.size()) - failed, checks.size());
    return failed == 0 ? 0 : 1;
}
