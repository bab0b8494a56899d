#pragma once

#include "evidence/distribution.hpp"
#include "evidence/evidence_space.hpp"
#include "evidence/formula.hpp"

#include <map>
#include <optional>
#include <string>

namespace evidence {

struct EvidentialWorld {
    std::string hypothesis;
    std::string observation;
    Distribution prior;
    EvidenceSpace space;
    // Replaces the combined posterior when set. Only tests use this, to build
    // structures that break the update rule on purpose.
    std::optional<Distribution> posterior_override;

    EvidentialWorld(std::string h, std::string ob, Distribution prior, EvidenceSpace space);
};

// Observations are read from an eventually periodic trace: prefix, then cycle forever.
struct EvidentialRun {
    std::string hypothesis;
    Distribution prior;
    EvidenceSpace space;
    Sequence prefix;
    Sequence cycle;

    EvidentialRun(std::string h, Distribution prior, EvidenceSpace space, Sequence prefix,
                  Sequence cycle);

    // k-th observation, 1-based
    const std::string& observation_at(size_t k) const;
    Sequence history(size_t m) const;
};

using Valuation = std::map<std::string, Rational>;

enum class WeightSemantics { Normalized, Unnormalized };

struct CheckOptions {
    WeightSemantics weights = WeightSemantics::Normalized;
    // Reject structures whose true hypothesis has prior 0.
    bool strict_prior = false;
};

Rational eval_term(const Polynomial& p, const EvidentialWorld& w, const Valuation& v = {},
                   const CheckOptions& opts = {});
bool satisfies(const Formula& f, const EvidentialWorld& w, const Valuation& v = {},
               const CheckOptions& opts = {});

Rational eval_term_at(const Polynomial& p, const EvidentialRun& r, size_t m,
                      const Valuation& v = {}, const CheckOptions& opts = {});
bool satisfies_at(const Formula& f, const EvidentialRun& r, size_t m, const Valuation& v = {},
                  const CheckOptions& opts = {});

// Posterior of a world under the chosen semantics (the override wins when present).
Distribution world_posterior(const EvidentialWorld& w, const CheckOptions& opts = {});
Distribution run_posterior(const EvidentialRun& r, size_t m, const CheckOptions& opts = {});

} // namespace evidence
