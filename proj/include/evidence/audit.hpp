#pragma once

#include "evidence/model_checker.hpp"

#include <map>
#include <string>
#include <vector>

namespace evidence {

struct AuditEntry {
    std::string axiom;    // e.g. "Pr3", "E5", "T2"
    std::string instance; // printed instance
    size_t time = 0;      // run audits only
    bool passed = true;
    std::string detail;
};

struct AuditReport {
    std::vector<AuditEntry> entries;

    size_t failures() const;
    bool passed() const { return failures() == 0; }
    // axiom -> (instances, failures)
    std::map<std::string, std::pair<size_t, size_t>> summary() const;
};

// Groups: "H", "O", "Pr", "Po", "E" (E1-E4), "E'" (E1', E2' under unnormalized weights).
// An empty selection means H, O, Pr, Po and E.
AuditReport audit_world(const EvidentialWorld& w, const std::vector<std::string>& groups = {});

// Groups: "H", "O", "Po", "E" (E1, E2, E4), "E5", "E6", "T" (T1-T6).
// Instances are checked at every time 0..horizon; O1 only from time 1 on, since
// nothing has been observed at time 0. An empty selection means all groups.
AuditReport audit_run(const EvidentialRun& r, size_t horizon,
                      const std::vector<std::string>& groups = {});

bool propositionally_equivalent(const HypFormula& a, const HypFormula& b);

} // namespace evidence
