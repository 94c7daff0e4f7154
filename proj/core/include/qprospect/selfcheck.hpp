// selfcheck.hpp: the acceptance criteria as executable checks.
//
// Each criterion evaluates its stated tolerance and reports the worst value
// it observed. Shared by the `selftest` subcommand and the acceptance test.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qprospect::selfcheck {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

std::vector<CriterionResult> run_all();

/// One "[PASS]/[FAIL] #id name: detail" line per criterion; returns true when all pass.
bool print_report(const std::vector<CriterionResult>& results, std::ostream& out);

}  // namespace qprospect::selfcheck
