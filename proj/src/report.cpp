#include "opconvex/report.hpp"

namespace opconvex {

std::string verdict_name(Verdict v) {
    switch (v) {
    case Verdict::ConcaveConsistent: return "CONCAVE-consistent";
    case Verdict::ConvexConsistent: return "CONVEX-consistent";
    case Verdict::Violation: return "VIOLATION";
    }
    return "?";
}

nlohmann::json ConvexityReport::to_json() const {
    nlohmann::json j{{"verdict", verdict_name(verdict)},
                     {"trials", trials},
                     {"worst_margin", worst_margin},
                     {"seed", seed}};
    j["witness"] = witness.is_null() ? nlohmann::json() : witness;
    if (!extra.is_null()) {
        for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    }
    return j;
}

} // namespace opconvex
