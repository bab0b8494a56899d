#pragma once

#include "evidence/evidence_space.hpp"
#include "evidence/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace evidence {

// Candidate weight function f(ob, h). Entries are meant to lie in [0,1]; rows
// are not required to be distributions so unrealizable tables stay representable.
class WeightTable {
public:
    // entry[ob][h]
    WeightTable(std::vector<std::string> hypotheses, std::vector<std::string> observations,
                std::vector<std::vector<Rational>> entry);

    const std::vector<std::string>& hypotheses() const { return hypotheses_; }
    const std::vector<std::string>& observations() const { return observations_; }
    size_t num_hypotheses() const { return hypotheses_.size(); }
    size_t num_observations() const { return observations_.size(); }
    const Rational& entry(size_t ob, size_t h) const { return entry_[ob][h]; }
    const Rational& entry(std::string_view ob, std::string_view h) const;
    const std::vector<std::vector<Rational>>& entries() const { return entry_; }

    friend bool operator==(const WeightTable& a, const WeightTable& b) {
        return a.hypotheses_ == b.hypotheses_ && a.observations_ == b.observations_ &&
               a.entry_ == b.entry_;
    }

private:
    std::vector<std::string> hypotheses_;
    std::vector<std::string> observations_;
    std::vector<std::vector<Rational>> entry_;
};

WeightTable weight_table_of(const EvidenceSpace& space);

struct Wf1Result {
    enum class Violation { None, RowSum, Range };
    bool ok = true;
    Violation violation = Violation::None;
    std::string observation;
    std::string hypothesis; // for range violations
    Rational row_sum;
    std::string message() const;
};

Wf1Result check_wf1(const WeightTable& table);

struct Wf2Certificate {
    std::vector<std::string> observations;
    std::vector<Rational> scalars; // x_i > 0, aligned with observations
};

struct Wf2Result {
    enum class Status { Certified, EqualitiesInfeasible, NonPositiveOnly };
    Status status = Status::EqualitiesInfeasible;
    std::optional<Wf2Certificate> certificate;
    Rational t_star; // optimal min_i x_i when the equalities are feasible
    bool feasible() const { return status == Status::Certified; }
    std::string message() const;
};

Wf2Result check_wf2(const WeightTable& table);

struct ReconstructResult {
    enum class Failure { None, WF1, WF2, Relevance };
    Failure failure = Failure::None;
    std::optional<EvidenceSpace> space;
    std::optional<Wf2Certificate> certificate;
    std::string message;
    bool ok() const { return failure == Failure::None; }
};

ReconstructResult reconstruct(const WeightTable& table);

} // namespace evidence
