#pragma once

// The ten acceptance criteria, each evaluated against an independent oracle
// where one exists (dense eigensolver, polynomial products, dense SVD).

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ddw {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
    double budget = 0.0;
};

inline constexpr int kCriterionCount = 10;

/// Runs one criterion (1..10); exceptions inside a criterion count as a failure.
CriterionResult run_criterion(int id, std::uint64_t seed = 42);

/// Runs every criterion in order, reporting each result as soon as it is known.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed = 42,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS [n] name (x s / budget s): detail".
std::string format_result(const CriterionResult& result);

}  // namespace ddw
