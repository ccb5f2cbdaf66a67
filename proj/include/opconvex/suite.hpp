#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "opconvex/report.hpp"

namespace opconvex {

inline constexpr const char* kToolVersion = "0.1.0";

/// One verified contract: a stable id, the formula it is anchored to, what
/// the run produced, and whether the contract held.  For hunting checks
/// (where finding a violation IS the contract) pass and verdict point in
/// opposite directions on purpose.
struct CheckResult {
    std::string id;
    std::string paper_anchor;
    std::string verdict;
    double margin = 0.0;
    bool pass = false;
    nlohmann::json witness;
    nlohmann::json extra;

    nlohmann::json to_json() const;
};

struct SuiteResult {
    std::string name;
    std::vector<CheckResult> checks;

    bool pass() const;
};

// ---------------------------------------------------------------------------
// Check batteries.  Each battery covers one acceptance area and returns its
// checks in a fixed order regardless of execution strategy.
// ---------------------------------------------------------------------------

std::vector<CheckResult> check_squaring_gap();
std::vector<CheckResult> check_domain_crosscheck(std::uint64_t seed);
std::vector<CheckResult> check_trace_identities(std::uint64_t seed);
std::vector<CheckResult> check_trace_concavity(std::uint64_t seed);
std::vector<CheckResult> check_hessian_battery(std::uint64_t seed);
std::vector<CheckResult> check_fraction_window(std::uint64_t seed);
std::vector<CheckResult> check_means_battery(std::uint64_t seed);
std::vector<CheckResult> check_convexity_battery(std::uint64_t seed);

/// name in {all, funcalc, means, domain, hessian, certify}; ConfigError
/// otherwise.  The certify suite bundles the squaring gap, the trace
/// concavity sweep, the fraction window and the convexity battery.
std::vector<SuiteResult> run_suite(const std::string& name, std::uint64_t seed);

/// {"tool_version", "seed", "suites": [{name, checks: [...]}]}; an empty
/// result list collapses to {"suites": []}.
nlohmann::json emit_report(const std::vector<SuiteResult>& suites, std::uint64_t seed);

} // namespace opconvex
