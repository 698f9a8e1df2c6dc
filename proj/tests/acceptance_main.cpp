#include <cstdio>
#include <string>
#include <vector>

#include "pwmix/acceptance.hpp"
#include "pwmix/errors.hpp"

// Runs the acceptance suites (all, or those named on the command line) and
// prints one PASS/FAIL line per suite.
int main(int argc, char** argv) {
    std::vector<std::string> suites(argv + 1, argv + argc);
    if (suites.empty()) suites = pwmix::acceptance_suites();
    int failures = 0;
    for (const auto& name : suites) {
        pwmix::CriterionResult r;
        try {
            r = pwmix::run_acceptance(name);
        } catch (const std::exception& e) {
            r.suite = name;
            r.detail = std::string("error: ") + e.what();
        }
        std::printf("%s\n", pwmix::format_result(r).c_str());
        std::fflush(stdout);
        failures += r.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
