#ifndef QPS_VERIFY_HPP
#define QPS_VERIFY_HPP

#include <string>
#include <vector>

namespace qps {

// One acceptance criterion outcome. `value` is the measured quantity the
// criterion pins and `detail` a human-readable account of every number
// that went into the verdict.
struct CriterionResult {
    int id = 0;
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    double seconds = 0.0;
    std::string detail;
};

// Runs one criterion (1..11). Criterion 12 is the aggregate and is only
// produced by run_suite("all").
CriterionResult run_criterion(int id);

// suite in {oscillator, well, dynamics, symplectic, all}; throws
// qps::Error for anything else.
std::vector<int> suite_criteria(const std::string& suite);
std::vector<CriterionResult> run_suite(const std::string& suite);

} // namespace qps

#endif
