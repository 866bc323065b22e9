#pragma once

#include "liectrl/config.hpp"

#include <iosfwd>

namespace liectrl {

/// One verification criterion outcome. measured is the worst residual
/// normalized by its tolerance, so every criterion passes iff
/// measured <= threshold = 1. "blocked" marks criteria skipped after the
/// structural-conditions criterion failed.
struct CriterionResult {
    int id;
    std::string name;
    std::string status; // "pass" | "fail" | "blocked"
    double measured;
    double threshold;
    std::string detail;
    double seconds;
};

struct VerifyReport {
    std::vector<CriterionResult> criteria;

    bool all_passed() const;
    /// criterion_id,status,measured,threshold rows.
    std::string csv() const;
    /// One line per criterion.
    void print(std::ostream& os) const;
};

/// Run the full verification suite on a configuration. The structural
/// conditions run first; when they fail every other criterion is reported
/// as blocked.
VerifyReport run_verify(const RunConfig& cfg);

} // namespace liectrl
