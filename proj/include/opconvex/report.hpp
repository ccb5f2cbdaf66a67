#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace opconvex {

enum class Verdict {
    ConcaveConsistent, // no concavity violation found
    ConvexConsistent,  // no convexity violation found
    Violation,
};

std::string verdict_name(Verdict v);

/// Outcome of a randomized certification run.  worst_margin is signed so
/// that negative means "against the claimed direction"; the witness json
/// carries whatever inputs attained it.  extra holds op-specific counters
/// (admissible sample counts, per-index records and the like).
struct ConvexityReport {
    Verdict verdict = Verdict::ConcaveConsistent;
    long trials = 0;
    double worst_margin = 0.0;
    nlohmann::json witness;
    uint64_t seed = 0;
    nlohmann::json extra;

    nlohmann::json to_json() const;
};

} // namespace opconvex
