#pragma once

#include "confluence/kernels.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace confluence {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    // one entry per predicate: name, measured value, threshold, verdict
    std::vector<std::string> details;
};

// Runs the eight acceptance criteria against the bundled scenarios in scenario_dir.
std::vector<CriterionResult> run_acceptance(const std::filesystem::path& scenario_dir, const KernelTable& table);

}  // namespace confluence
