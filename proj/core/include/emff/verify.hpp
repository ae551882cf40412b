#pragma once

#include <string>
#include <vector>

#include "emff/sim_engine.hpp"

namespace emff {

struct SuiteResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Runs the built-in property suites: closed-form amplitude allocation,
/// window averaging against quadrature, steady-state filter gain, and
/// momentum conservation on a three-body closed-loop run.
std::vector<SuiteResult> run_verify();

bool all_passed(const std::vector<SuiteResult>& results);

/// The bundled three-satellite repulsion setup, also used by the momentum
/// suite. Callers may tweak fields before running.
Scenario reference_three_sat_scenario();

/// The bundled two-satellite repulsion setup.
Scenario reference_two_sat_scenario();

} // namespace emff
