#pragma once

#include <functional>
#include <string>
#include <vector>

namespace rnnhl {

// Hooks let the harness self-test substitute a corrupted primitive and
// watch the matching criterion fail by name.
struct VerifyHooks {
    std::function<double(double)> sigmoid_fn; // empty = library sigmoid
};

struct CriterionResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyReport {
    std::vector<CriterionResult> results;
    bool all_pass = false;
};

const std::vector<std::string>& verify_suite_names();

// Runs one named suite or "all". Throws ConfigError for unknown names.
VerifyReport run_verify(const std::string& selector, int jobs = 1,
                        const VerifyHooks& hooks = {});

}  // namespace rnnhl
