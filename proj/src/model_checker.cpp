#include "evidence/model_checker.hpp"

#include "evidence/errors.hpp"

namespace evidence {

EvidentialWorld::EvidentialWorld(std::string h, std::string ob, Distribution pr, EvidenceSpace sp)
    : hypothesis(std::move(h)), observation(std::move(ob)), prior(std::move(pr)), space(std::move(sp)) {
    space.hypothesis_index(hypothesis);
    space.observation_index(observation);
    if (prior.support() != space.hypotheses())
        throw InvalidStructure("prior must be over the space's hypotheses, in order");
}

EvidentialRun::EvidentialRun(std::string h, Distribution pr, EvidenceSpace sp, Sequence pre,
                             Sequence cyc)
    : hypothesis(std::move(h)), prior(std::move(pr)), space(std::move(sp)), prefix(std::move(pre)),
      cycle(std::move(cyc)) {
    space.hypothesis_index(hypothesis);
    if (prior.support() != space.hypotheses())
        throw InvalidStructure("prior must be over the space's hypotheses, in order");
    if (cycle.empty()) throw InvalidStructure("run trace needs a nonempty cycle");
    for (const auto& o : prefix) space.observation_index(o);
    for (const auto& o : cycle) space.observation_index(o);
}

const std::string& EvidentialRun::observation_at(size_t k) const {
    if (k == 0) throw std::out_of_range("observations are numbered from 1");
    if (k <= prefix.size()) return prefix[k - 1];
    return cycle[(k - 1 - prefix.size()) % cycle.size()];
}

Sequence EvidentialRun::history(size_t m) const {
    Sequence s;
    s.reserve(m);
    for (size_t k = 1; k <= m; ++k) s.push_back(observation_at(k));
    return s;
}

namespace {

Distribution unnormalized_sequence_posterior(const EvidenceSpace& space, const Distribution& prior,
                                             const Sequence& seq) {
    std::vector<Rational> c(space.num_hypotheses());
    Rational norm;
    for (size_t h = 0; h < c.size(); ++h) {
        c[h] = prior.at(h);
        for (const auto& o : seq) c[h] *= space.likelihood(h, space.observation_index(o));
        norm += c[h];
    }
    if (norm.is_zero()) throw OrthogonalMeasures("measures are orthogonal: normalizer is 0");
    for (auto& x : c) x /= norm;
    return Distribution(space.hypotheses(), std::move(c));
}

// Shared evaluation core; `Point` supplies the structure-specific pieces.
class Evaluator {
public:
    Evaluator(const EvidenceSpace& space, const Distribution& prior, const std::string& hyp,
              const CheckOptions& opts)
        : space_(space), prior_(prior), hyp_(hyp), opts_(opts), sig_(Signature::of(space)) {
        if (opts.strict_prior && prior.mass(hyp).is_zero())
            throw InvalidStructure("true hypothesis '" + hyp + "' has prior 0");
    }

    virtual ~Evaluator() = default;

    Rational term(const Polynomial& p, const Valuation& v) {
        Rational total;
        for (const auto& m : p.monomials) {
            Rational prod(m.coefficient);
            for (const auto& f : m.factors) {
                if (prod.is_zero()) break;
                prod *= factor(f, v);
            }
            total += prod;
        }
        return total;
    }

    bool holds(const Formula& f, const Valuation& v) {
        switch (f.kind) {
        case Formula::Kind::Hyp:
            sig_.hypothesis_index(f.name);
            return f.name == hyp_;
        case Formula::Kind::Obs: {
            sig_.observation_index(f.name);
            const std::string* ob = current_observation();
            return ob && *ob == f.name;
        }
        case Formula::Kind::Cmp: {
            Rational lhs = term(f.cmp.lhs, v);
            Rational rhs(f.cmp.rhs);
            switch (f.cmp.rel) {
            case Relation::Ge: return lhs >= rhs;
            case Relation::Gt: return lhs > rhs;
            case Relation::Eq: return lhs == rhs;
            }
            return false;
        }
        case Formula::Kind::Not: return !holds(*f.left, v);
        case Formula::Kind::And: return holds(*f.left, v) && holds(*f.right, v);
        case Formula::Kind::Forall:
            if (free_variables(*f.left).count(f.name))
                throw QuantifierUnsupported("cannot evaluate 'forall " + f.name +
                                            "' exactly; emit it as a real-arithmetic problem instead");
            return holds(*f.left, v);
        case Formula::Kind::Next: return next(*f.left, v);
        }
        return false;
    }

protected:
    virtual const std::string* current_observation() const = 0;
    virtual const Distribution& current_posterior() = 0;
    virtual bool next(const Formula& f, const Valuation& v) = 0;

    const EvidenceSpace& space_;
    const Distribution& prior_;
    const std::string& hyp_;
    CheckOptions opts_;
    Signature sig_;

    Rational weight(const ObsSequence& seq, const std::string& h) {
        if (opts_.weights == WeightSemantics::Unnormalized) {
            Rational p(1);
            size_t i = space_.hypothesis_index(h);
            for (const auto& o : seq) p *= space_.likelihood(i, space_.observation_index(o));
            return p;
        }
        if (seq.size() == 1) return weight_of_evidence(space_, seq[0], h);
        return sequence_weight(space_, seq, h);
    }

private:
    Rational factor(const Factor& f, const Valuation& v) {
        if (auto* var = std::get_if<Variable>(&f)) {
            auto it = v.find(var->name);
            if (it == v.end()) throw UnboundVariable("variable '" + var->name + "' has no value");
            return it->second;
        }
        const auto& t = std::get<BasicTerm>(f);
        switch (t.kind) {
        case BasicTerm::Kind::Prior: return prior_.measure(intension_mask(*t.rho, sig_));
        case BasicTerm::Kind::Posterior: return current_posterior().measure(intension_mask(*t.rho, sig_));
        case BasicTerm::Kind::Weight: return weight(t.sequence, t.hypothesis);
        }
        return {};
    }
};

class WorldEvaluator : public Evaluator {
public:
    WorldEvaluator(const EvidentialWorld& w, const CheckOptions& opts)
        : Evaluator(w.space, w.prior, w.hypothesis, opts), w_(w) {}

protected:
    const std::string* current_observation() const override { return &w_.observation; }
    const Distribution& current_posterior() override {
        if (!post_) post_ = world_posterior(w_, opts_);
        return *post_;
    }
    bool next(const Formula&, const Valuation&) override {
        throw DynamicUnsupported("the next-time operator needs a run, not a world");
    }

private:
    const EvidentialWorld& w_;
    std::optional<Distribution> post_;
};

class RunEvaluator : public Evaluator {
public:
    RunEvaluator(const EvidentialRun& r, size_t m, const CheckOptions& opts)
        : Evaluator(r.space, r.prior, r.hypothesis, opts), r_(r), m_(m) {
        if (m_ > 0) ob_ = r_.observation_at(m_);
    }

protected:
    const std::string* current_observation() const override { return m_ == 0 ? nullptr : &ob_; }
    const Distribution& current_posterior() override {
        if (!post_) post_ = run_posterior(r_, m_, opts_);
        return *post_;
    }
    bool next(const Formula& f, const Valuation& v) override {
        RunEvaluator later(r_, m_ + 1, opts_);
        return later.holds(f, v);
    }

private:
    const EvidentialRun& r_;
    size_t m_;
    std::string ob_;
    std::optional<Distribution> post_;
};

} // namespace

Distribution world_posterior(const EvidentialWorld& w, const CheckOptions& opts) {
    if (w.posterior_override) return *w.posterior_override;
    if (opts.weights == WeightSemantics::Unnormalized)
        return unnormalized_posterior(w.space, w.prior, w.observation);
    return posterior(w.space, w.prior, w.observation);
}

Distribution run_posterior(const EvidentialRun& r, size_t m, const CheckOptions& opts) {
    Sequence hist = r.history(m);
    if (opts.weights == WeightSemantics::Unnormalized)
        return hist.empty() ? r.prior : unnormalized_sequence_posterior(r.space, r.prior, hist);
    return sequence_posterior(r.space, r.prior, hist);
}

Rational eval_term(const Polynomial& p, const EvidentialWorld& w, const Valuation& v,
                   const CheckOptions& opts) {
    return WorldEvaluator(w, opts).term(p, v);
}

bool satisfies(const Formula& f, const EvidentialWorld& w, const Valuation& v, const CheckOptions& opts) {
    return WorldEvaluator(w, opts).holds(f, v);
}

Rational eval_term_at(const Polynomial& p, const EvidentialRun& r, size_t m, const Valuation& v,
                      const CheckOptions& opts) {
    return RunEvaluator(r, m, opts).term(p, v);
}

bool satisfies_at(const Formula& f, const EvidentialRun& r, size_t m, const Valuation& v,
                  const CheckOptions& opts) {
    return RunEvaluator(r, m, opts).holds(f, v);
}

} // namespace evidence
