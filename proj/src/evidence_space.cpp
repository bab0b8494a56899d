#include "evidence/evidence_space.hpp"

#include "evidence/errors.hpp"

namespace evidence {

EvidenceSpace::EvidenceSpace(std::vector<std::string> hypotheses,
                             std::vector<std::string> observations,
                             std::vector<std::vector<Rational>> likelihood)
    : hypotheses_(std::move(hypotheses)), observations_(std::move(observations)),
      mu_(std::move(likelihood)) {
    if (hypotheses_.empty()) throw InvalidStructure("evidence space without hypotheses");
    if (observations_.empty()) throw InvalidStructure("evidence space without observations");
    check_unique_names(hypotheses_, "hypothesis");
    check_unique_names(observations_, "observation");
    if (mu_.size() != hypotheses_.size())
        throw InvalidStructure("likelihood matrix needs one row per hypothesis");
    totals_.assign(observations_.size(), Rational());
    for (size_t h = 0; h < mu_.size(); ++h) {
        if (mu_[h].size() != observations_.size())
            throw InvalidStructure("likelihood row of '" + hypotheses_[h] + "' has wrong length");
        Rational row;
        for (size_t o = 0; o < mu_[h].size(); ++o) {
            if (mu_[h][o].sign() < 0)
                throw InvalidStructure("negative likelihood for '" + hypotheses_[h] + "'");
            row += mu_[h][o];
            totals_[o] += mu_[h][o];
        }
        if (row != 1)
            throw InvalidStructure("likelihoods of '" + hypotheses_[h] + "' sum to " + row.str());
    }
    for (size_t o = 0; o < totals_.size(); ++o)
        if (totals_[o].is_zero())
            throw InvalidStructure("observation '" + observations_[o] +
                                   "' is irrelevant: no hypothesis gives it positive probability");
    for (size_t i = 0; i < hypotheses_.size(); ++i) hyp_index_.emplace(hypotheses_[i], i);
    for (size_t i = 0; i < observations_.size(); ++i) obs_index_.emplace(observations_[i], i);
    for (const auto& h : hypotheses_)
        if (obs_index_.count(h))
            throw InvalidStructure("name '" + h + "' is both a hypothesis and an observation");
}

size_t EvidenceSpace::hypothesis_index(std::string_view name) const {
    auto it = hyp_index_.find(name);
    if (it == hyp_index_.end()) throw UnknownName("unknown hypothesis '" + std::string(name) + "'");
    return it->second;
}

size_t EvidenceSpace::observation_index(std::string_view name) const {
    auto it = obs_index_.find(name);
    if (it == obs_index_.end()) throw UnknownName("unknown observation '" + std::string(name) + "'");
    return it->second;
}

const Rational& EvidenceSpace::likelihood(std::string_view h, std::string_view ob) const {
    return mu_[hypothesis_index(h)][observation_index(ob)];
}

Distribution EvidenceSpace::likelihood_row(std::string_view h) const {
    return Distribution(observations_, mu_[hypothesis_index(h)]);
}

Rational weight_of_evidence(const EvidenceSpace& space, std::string_view ob, std::string_view h) {
    size_t o = space.observation_index(ob);
    size_t i = space.hypothesis_index(h);
    return space.likelihood(i, o) / space.observation_total(o);
}

Distribution weight_column(const EvidenceSpace& space, std::string_view ob) {
    size_t o = space.observation_index(ob);
    std::vector<Rational> col(space.num_hypotheses());
    for (size_t i = 0; i < col.size(); ++i) col[i] = space.likelihood(i, o) / space.observation_total(o);
    return Distribution(space.hypotheses(), std::move(col));
}

Distribution posterior(const EvidenceSpace& space, const Distribution& prior, std::string_view ob) {
    return dempster_combine(prior, weight_column(space, ob));
}

Rational sequence_likelihood(const EvidenceSpace& space, std::string_view h, const Sequence& seq) {
    if (seq.empty()) throw EmptySequence("observation sequence is empty");
    size_t i = space.hypothesis_index(h);
    Rational p(1);
    for (const auto& ob : seq) p *= space.likelihood(i, space.observation_index(ob));
    return p;
}

Distribution sequence_weight_column(const EvidenceSpace& space, const Sequence& seq) {
    if (seq.empty()) throw EmptySequence("observation sequence is empty");
    std::vector<Rational> col;
    col.reserve(space.num_hypotheses());
    Rational total;
    for (const auto& h : space.hypotheses()) {
        col.push_back(sequence_likelihood(space, h, seq));
        total += col.back();
    }
    if (total.is_zero())
        throw ZeroSequenceLikelihood("sequence " + sequence_name(seq) +
                                     " has probability 0 under every hypothesis");
    for (auto& v : col) v /= total;
    return Distribution(space.hypotheses(), std::move(col));
}

Rational sequence_weight(const EvidenceSpace& space, const Sequence& seq, std::string_view h) {
    size_t i = space.hypothesis_index(h);
    return sequence_weight_column(space, seq).at(i);
}

Distribution sequence_posterior(const EvidenceSpace& space, const Distribution& prior,
                                const Sequence& seq) {
    if (seq.empty()) return prior;
    return dempster_combine(prior, sequence_weight_column(space, seq));
}

std::string sequence_name(const Sequence& seq) {
    std::string s;
    for (size_t k = 0; k < seq.size(); ++k) {
        if (k) s += ',';
        s += seq[k];
    }
    return s;
}

EvidenceSpace product_space(const EvidenceSpace& space, size_t k) {
    if (k == 0) throw EmptySequence("product space of length 0");
    const size_t n = space.num_observations();
    std::vector<size_t> idx(k, 0);
    std::vector<std::string> names;
    std::vector<std::vector<Rational>> mu(space.num_hypotheses());
    while (true) {
        std::vector<Rational> col(space.num_hypotheses(), Rational(1));
        bool relevant = false;
        for (size_t h = 0; h < col.size(); ++h) {
            for (size_t j = 0; j < k; ++j) col[h] *= space.likelihood(h, idx[j]);
            relevant = relevant || !col[h].is_zero();
        }
        if (relevant) {
            Sequence seq;
            for (size_t j = 0; j < k; ++j) seq.push_back(space.observations()[idx[j]]);
            names.push_back(sequence_name(seq));
            for (size_t h = 0; h < col.size(); ++h) mu[h].push_back(col[h]);
        }
        size_t pos = k;
        while (pos > 0) {
            --pos;
            if (++idx[pos] < n) break;
            idx[pos] = 0;
            if (pos == 0) return EvidenceSpace(space.hypotheses(), std::move(names), std::move(mu));
        }
    }
}

std::strong_ordering operator<=>(const LikelihoodRatio& a, const LikelihoodRatio& b) {
    auto rank = [](const LikelihoodRatio& r) {
        return r.kind == LikelihoodRatio::Kind::MinusInfinity ? 0
               : r.kind == LikelihoodRatio::Kind::Finite     ? 1
                                                             : 2;
    };
    int ra = rank(a), rb = rank(b);
    if (ra != rb) return ra <=> rb;
    if (ra == 1) return a.ratio <=> b.ratio;
    return std::strong_ordering::equal;
}

std::string LikelihoodRatio::str() const {
    switch (kind) {
    case Kind::PlusInfinity: return "+inf";
    case Kind::MinusInfinity: return "-inf";
    default: return ratio.str();
    }
}

LikelihoodRatio log_likelihood_ratio(const EvidenceSpace& space, std::string_view ob,
                                     std::string_view h) {
    if (space.num_hypotheses() != 2)
        throw MoreThanTwoHypotheses("log-likelihood ratio needs exactly two hypotheses");
    size_t o = space.observation_index(ob);
    size_t i = space.hypothesis_index(h);
    const Rational& mine = space.likelihood(i, o);
    const Rational& other = space.likelihood(1 - i, o);
    if (mine.is_zero() && other.is_zero())
        throw UndefinedRatio("both likelihoods are 0");
    if (other.is_zero()) return {LikelihoodRatio::Kind::PlusInfinity, Rational()};
    if (mine.is_zero()) return {LikelihoodRatio::Kind::MinusInfinity, Rational()};
    return {LikelihoodRatio::Kind::Finite, mine / other};
}

JointDistribution joint_from_prior(const EvidenceSpace& space, const Distribution& prior) {
    if (prior.support() != space.hypotheses())
        throw InvalidStructure("prior support differs from the space's hypotheses");
    std::vector<std::vector<Rational>> m(space.num_hypotheses(),
                                         std::vector<Rational>(space.num_observations()));
    for (size_t h = 0; h < m.size(); ++h)
        for (size_t o = 0; o < m[h].size(); ++o) m[h][o] = prior.at(h) * space.likelihood(h, o);
    return JointDistribution(space.hypotheses(), space.observations(), std::move(m));
}

BayesReport bayes_check(const EvidenceSpace& space, const JointDistribution& joint) {
    if (joint.rows() != space.hypotheses() || joint.cols() != space.observations())
        throw ConditionalMismatch("joint distribution is not over the space's hypotheses and observations");
    const size_t nh = space.num_hypotheses(), no = space.num_observations();
    std::vector<Rational> marginal(nh);
    for (size_t h = 0; h < nh; ++h) {
        marginal[h] = joint.row_marginal(h);
        if (marginal[h].is_zero()) continue;
        for (size_t o = 0; o < no; ++o)
            if (joint.mass(h, o) / marginal[h] != space.likelihood(h, o))
                throw ConditionalMismatch("P(" + space.observations()[o] + " | " +
                                          space.hypotheses()[h] + ") = " +
                                          (joint.mass(h, o) / marginal[h]).str() +
                                          " but the likelihood is " + space.likelihood(h, o).str());
    }
    Distribution prior(space.hypotheses(), marginal);
    for (size_t o = 0; o < no; ++o) {
        Rational col = joint.col_marginal(o);
        if (col.is_zero()) continue;
        Distribution post = posterior(space, prior, space.observations()[o]);
        for (size_t h = 0; h < nh; ++h) {
            Rational cond = joint.mass(h, o) / col;
            if (post.at(h) != cond) {
                return {false, space.observations()[o], space.hypotheses()[h],
                        "posterior " + post.at(h).str() + " differs from conditional " + cond.str()};
            }
        }
    }
    return {};
}

Rational unnormalized_weight(const EvidenceSpace& space, std::string_view ob, std::string_view h) {
    return space.likelihood(h, ob);
}

Distribution unnormalized_posterior(const EvidenceSpace& space, const Distribution& prior,
                                    std::string_view ob) {
    if (prior.support() != space.hypotheses())
        throw InvalidStructure("prior support differs from the space's hypotheses");
    size_t o = space.observation_index(ob);
    std::vector<Rational> c(space.num_hypotheses());
    Rational norm;
    for (size_t h = 0; h < c.size(); ++h) {
        c[h] = prior.at(h) * space.likelihood(h, o);
        norm += c[h];
    }
    if (norm.is_zero()) throw OrthogonalMeasures("measures are orthogonal: normalizer is 0");
    for (auto& v : c) v /= norm;
    return Distribution(space.hypotheses(), std::move(c));
}

Rational shafer_weight(const EvidenceSpace& space, std::string_view ob, std::string_view h) {
    size_t o = space.observation_index(ob);
    size_t i = space.hypothesis_index(h);
    Rational best;
    for (size_t k = 0; k < space.num_hypotheses(); ++k)
        if (space.likelihood(k, o) > best) best = space.likelihood(k, o);
    return space.likelihood(i, o) / best;
}

} // namespace evidence
