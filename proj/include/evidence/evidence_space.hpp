#pragma once

#include "evidence/distribution.hpp"
#include "evidence/rational.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace evidence {

class EvidenceSpace {
public:
    // likelihood[h][ob] = mu_h(ob)
    EvidenceSpace(std::vector<std::string> hypotheses, std::vector<std::string> observations,
                  std::vector<std::vector<Rational>> likelihood);

    const std::vector<std::string>& hypotheses() const { return hypotheses_; }
    const std::vector<std::string>& observations() const { return observations_; }
    size_t num_hypotheses() const { return hypotheses_.size(); }
    size_t num_observations() const { return observations_.size(); }

    size_t hypothesis_index(std::string_view name) const;
    size_t observation_index(std::string_view name) const;
    bool has_hypothesis(std::string_view name) const { return hyp_index_.count(name) > 0; }
    bool has_observation(std::string_view name) const { return obs_index_.count(name) > 0; }

    const Rational& likelihood(size_t h, size_t ob) const { return mu_[h][ob]; }
    const Rational& likelihood(std::string_view h, std::string_view ob) const;
    const std::vector<std::vector<Rational>>& likelihood_matrix() const { return mu_; }
    Distribution likelihood_row(std::string_view h) const;
    // sum over hypotheses of mu_h(ob)
    const Rational& observation_total(size_t ob) const { return totals_[ob]; }

    friend bool operator==(const EvidenceSpace& a, const EvidenceSpace& b) {
        return a.hypotheses_ == b.hypotheses_ && a.observations_ == b.observations_ && a.mu_ == b.mu_;
    }

private:
    std::vector<std::string> hypotheses_;
    std::vector<std::string> observations_;
    std::vector<std::vector<Rational>> mu_;
    std::vector<Rational> totals_;
    std::map<std::string, size_t, std::less<>> hyp_index_;
    std::map<std::string, size_t, std::less<>> obs_index_;
};

using Sequence = std::vector<std::string>;

Rational weight_of_evidence(const EvidenceSpace& space, std::string_view ob, std::string_view h);
Distribution weight_column(const EvidenceSpace& space, std::string_view ob);
Distribution posterior(const EvidenceSpace& space, const Distribution& prior, std::string_view ob);

Rational sequence_likelihood(const EvidenceSpace& space, std::string_view h, const Sequence& seq);
Rational sequence_weight(const EvidenceSpace& space, const Sequence& seq, std::string_view h);
Distribution sequence_weight_column(const EvidenceSpace& space, const Sequence& seq);
// prior combined with the weights of every observation in seq; the prior itself for an empty seq
Distribution sequence_posterior(const EvidenceSpace& space, const Distribution& prior,
                                const Sequence& seq);

// The product space restricted to sequences of length k, dropping sequences
// no hypothesis can produce. Observation names are the members joined by ','.
EvidenceSpace product_space(const EvidenceSpace& space, size_t k);
std::string sequence_name(const Sequence& seq);

struct LikelihoodRatio {
    enum class Kind { Finite, PlusInfinity, MinusInfinity };
    Kind kind = Kind::Finite;
    Rational ratio; // 0 for MinusInfinity, meaningless for PlusInfinity

    // Ordering of the (extended) log values.
    friend std::strong_ordering operator<=>(const LikelihoodRatio& a, const LikelihoodRatio& b);
    friend bool operator==(const LikelihoodRatio& a, const LikelihoodRatio& b) {
        return (a <=> b) == 0;
    }
    std::string str() const;
};

LikelihoodRatio log_likelihood_ratio(const EvidenceSpace& space, std::string_view ob,
                                     std::string_view h);

struct BayesReport {
    bool ok = true;
    std::string observation;
    std::string hypothesis;
    std::string message;
};

JointDistribution joint_from_prior(const EvidenceSpace& space, const Distribution& prior);
BayesReport bayes_check(const EvidenceSpace& space, const JointDistribution& joint);

Rational unnormalized_weight(const EvidenceSpace& space, std::string_view ob, std::string_view h);
// The update rule written with unnormalized weights: mu(h) mu_h(ob) / sum mu(h') mu_h'(ob).
Distribution unnormalized_posterior(const EvidenceSpace& space, const Distribution& prior,
                                    std::string_view ob);
Rational shafer_weight(const EvidenceSpace& space, std::string_view ob, std::string_view h);

} // namespace evidence
