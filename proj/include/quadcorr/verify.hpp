#pragma once

// Named consistency suites behind the `verify` CLI command: cross-route
// identities (Gauss, divisor-sum r(n)), symbol laws, stabilization,
// exponential-sum laws, and the singular-integral consistency checks.

#include <string>
#include <vector>

#include "quadcorr/arith.hpp"

namespace qc {

struct SuiteResult {
    std::string name;
    bool pass = false;
    i64 checks = 0;
    i64 failures = 0;
    std::string note;
    double seconds = 0.0;
};

// Runs every suite whose name contains `filter` (empty = all).
std::vector<SuiteResult> run_verify(const std::string& filter, int threads);

std::vector<std::string> verify_suite_names();

// sigma_inf closed form vs quadrature on the standard grid, with the closed
// form scaled by `mutation_scale` (1.0 = production; used by the mutation test).
bool sigma_inf_consistent(double mutation_scale);

}  // namespace qc
