#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace conekit {

struct CheckResult {
    std::string id;
    bool pass = false;
    std::string detail;
};

// Suites: euclid, thresholds, bessel, boundary, zf, offdiag, schur, probe, all.
// Random sample points are drawn from a generator seeded with `seed`.
std::vector<CheckResult> run_suite(const std::string& suite, std::uint64_t seed = 1);

const std::vector<std::string>& suite_names();

// "PASS id detail" per line
std::string format_report(const std::vector<CheckResult>& results);

}  // namespace conekit
