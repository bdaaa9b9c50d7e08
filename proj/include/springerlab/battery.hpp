#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace springerlab {

// One case of the acceptance battery.
struct CaseResult {
    std::string id;  // "c03-07-..." sorts by criterion, then case
    int criterion = 0;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

struct CriterionSummary {
    int criterion = 0;
    std::string title;
    int cases = 0;
    int failed = 0;
    int required_cases = 0;
    double seconds = 0;  // wall time of the whole criterion
    double budget = 0;   // seconds
    bool pass() const { return failed == 0 && cases >= required_cases && seconds <= budget; }
};

struct BatteryOptions {
    int jobs = 1;
    std::uint64_t seed = 20260101;
    std::set<int> criteria;  // empty: all of 1..10
};

struct BatteryReport {
    std::vector<CaseResult> cases;  // sorted by id
    std::vector<CriterionSummary> criteria;
};

// Cases of one criterion are sharded over `jobs` workers; rows are sorted by id.
BatteryReport run_battery(const BatteryOptions& opt);

std::string battery_tsv(const std::vector<CaseResult>& rows);

// Reads SPRINGERLAB_SEED; the default seed when unset or unparsable.
std::uint64_t seed_from_env(std::uint64_t fallback = 20260101);

}  // namespace springerlab
