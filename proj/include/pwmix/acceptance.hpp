#pragma once

#include <string>
#include <vector>

#include "pwmix/search_kernels.hpp"

namespace pwmix {

struct AcceptanceOptions {
    Execution execution = Execution::parallel;
    int workers = 0;
};

struct CriterionResult {
    std::string suite;
    bool pass = false;
    std::string detail;   // counts, worst deviation, reported-only values
    double seconds = 0.0;
};

/// closed_form, degeneracy, tent, circulant, appendix, asymptotic, bounds,
/// correlation, in that order.
const std::vector<std::string>& acceptance_suites();

/// Runs one suite; throws PreconditionError for an unknown name.
CriterionResult run_acceptance(const std::string& suite, const AcceptanceOptions& options = {});

/// "PASS <suite> (<seconds>s): <detail>" or "FAIL ...".
std::string format_result(const CriterionResult& r);

} // namespace pwmix
