#pragma once

#include <string>
#include <vector>

#include "ec/types.hpp"
#include "ec/zero_locator.hpp"

namespace ec {

// deviation: the literal criterion cannot hold for the exact function, and a
// stated substitute check passed instead. It does not count as a failure.
enum class Status { pass, fail, deviation };
const char* status_name(Status s);

struct CheckResult {
    std::string id;
    std::string name;
    Status status = Status::fail;
    std::string detail;
    double seconds = 0.0;
};

struct CheckConfig {
    PrecisionPolicy pp;
    ContourParams contour;
};

CheckResult check_special_values(const CheckConfig& cfg);
CheckResult check_identities(const CheckConfig& cfg);
CheckResult check_zero_counts(const CheckConfig& cfg);
CheckResult check_cusp(const CheckConfig& cfg);
CheckResult check_intervals(const CheckConfig& cfg);
CheckResult check_symmetry(const CheckConfig& cfg);
CheckResult check_critical(const CheckConfig& cfg);
CheckResult check_blowup(const CheckConfig& cfg);
CheckResult check_degeneracy(const CheckConfig& cfg);
CheckResult check_asymptotic(const CheckConfig& cfg);

CheckResult check_group_action(const CheckConfig& cfg);
CheckResult check_reduction(const CheckConfig& cfg);
CheckResult check_tiling(const CheckConfig& cfg);
CheckResult check_transform_quasi(const CheckConfig& cfg);

// The ten numbered criteria in order.
std::vector<CheckResult> run_criteria(const CheckConfig& cfg);

// functions, modular, premodular, curves, special, all.
const std::vector<std::string>& suite_names();
std::vector<CheckResult> run_suite(const std::string& suite, const CheckConfig& cfg);

}  // namespace ec
