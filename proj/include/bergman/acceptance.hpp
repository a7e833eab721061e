#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace bergman {

struct CriterionResult {
    int id = 0;
    std::string status; // PASS, FAIL or SKIP
    std::string detail;
};

struct AcceptanceOptions {
    // Restrict every criterion to this domain spec; nullopt runs all domains.
    std::optional<std::string> scope;
    // When set, criterion 12 also runs `<exe> verify` twice on a disk config and compares bytes.
    std::string exe;
    std::string work_dir = ".";
    std::vector<int> only;
};

std::string format_result(const CriterionResult& r);

// Runs criteria 1..12, calling report after each one.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            const std::function<void(const CriterionResult&)>& report = {});

} // namespace bergman
