// Acceptance gate: every release criterion in one binary, one line each.
// Each criterion reuses the corresponding suite battery so the gate and the
// CLI report cannot drift apart, and each carries a wall-clock budget.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "opconvex/suite.hpp"

namespace {

constexpr std::uint64_t kSeed = 0;

struct Criterion {
    std::string label;
    double time_limit_s;
    std::function<std::vector<opconvex::CheckResult>()> run;
};

bool run_criterion(int number, const Criterion& c) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<opconvex::CheckResult> checks;
    std::string error;
    try {
        checks = c.run();
    } catch (const std::exception& e) {
        error = e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    bool ok = error.empty() && !checks.empty();
    for (const opconvex::CheckResult& r : checks) ok = ok && r.pass;
    const bool in_time = elapsed < c.time_limit_s;

    std::printf("[%s] criterion %d: %s (%.2f s, limit %.0f s)\n",
                ok && in_time ? "PASS" : "FAIL", number, c.label.c_str(), elapsed,
                c.time_limit_s);
    if (!error.empty()) std::printf("       error: %s\n", error.c_str());
    if (!in_time) std::printf("       over time budget\n");
    for (const opconvex::CheckResult& r : checks)
        if (!r.pass)
            std::printf("       failed check %s: %s (margin %.3e)\n", r.id.c_str(),
                        r.verdict.c_str(), r.margin);
    return ok && in_time;
}

} // namespace

int main() {
    using opconvex::CheckResult;
    const std::vector<Criterion> criteria = {
        {"squaring counterexample pins -1/16 and stays negative perturbed", 1.0,
         [] { return opconvex::check_squaring_gap(); }},
        {"closed-form domain test matches the eigenvalue test on 3x10^4 points", 5.0,
         [] { return opconvex::check_domain_crosscheck(kSeed); }},
        {"trace and intertwining identities hold to 1e-10 on 500 instances", 30.0,
         [] { return opconvex::check_trace_identities(kSeed); }},
        {"trace concavity certified on the simplex, refuted at (0.7,0.7)/(0.6,0.6)", 120.0,
         [] { return opconvex::check_trace_concavity(kSeed); }},
        {"generalized Hessians match closed forms and classify definiteness", 60.0,
         [] { return opconvex::check_hessian_battery(kSeed); }},
        {"fraction trace map concave on the window, refuted below the threshold", 30.0,
         [] { return opconvex::check_fraction_window(kSeed); }},
        {"geometric/harmonic mean certificates and the product-mean identity", 60.0,
         [] { return opconvex::check_means_battery(kSeed); }},
        {"reciprocal, resolvent, two-of-three and bridge convexity batteries", 120.0,
         [] { return opconvex::check_convexity_battery(kSeed); }},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i)
        if (!run_criterion(static_cast<int>(i) + 1, criteria[i])) ++failures;

    if (failures == 0)
        std::printf("all %zu criteria passed\n", criteria.size());
    else
        std::printf("%d of %zu criteria FAILED\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
