#include "evidence/formula.hpp"

#include "evidence/errors.hpp"
#include "evidence/evidence_space.hpp"

#include <algorithm>
#include <set>

namespace evidence {

Signature::Signature(std::vector<std::string> hyps, std::vector<std::string> obs)
    : hypotheses(std::move(hyps)), observations(std::move(obs)) {
    if (hypotheses.empty()) throw InvalidStructure("signature without hypotheses");
    if (observations.empty()) throw InvalidStructure("signature without observations");
    check_unique_names(hypotheses, "hypothesis");
    check_unique_names(observations, "observation");
    for (const auto& h : hypotheses)
        if (std::find(observations.begin(), observations.end(), h) != observations.end())
            throw InvalidStructure("name '" + h + "' is both a hypothesis and an observation");
}

Signature Signature::of(const EvidenceSpace& space) {
    return Signature(space.hypotheses(), space.observations());
}

bool Signature::is_hypothesis(std::string_view name) const {
    return std::find(hypotheses.begin(), hypotheses.end(), name) != hypotheses.end();
}

bool Signature::is_observation(std::string_view name) const {
    return std::find(observations.begin(), observations.end(), name) != observations.end();
}

size_t Signature::hypothesis_index(std::string_view name) const {
    auto it = std::find(hypotheses.begin(), hypotheses.end(), name);
    if (it == hypotheses.end()) throw UnknownName("unknown hypothesis '" + std::string(name) + "'");
    return static_cast<size_t>(it - hypotheses.begin());
}

size_t Signature::observation_index(std::string_view name) const {
    auto it = std::find(observations.begin(), observations.end(), name);
    if (it == observations.end())
        throw UnknownName("unknown observation '" + std::string(name) + "'");
    return static_cast<size_t>(it - observations.begin());
}

// ---- hypothesis formulas ----------------------------------------------------

HypPtr HypFormula::atom(std::string name) {
    return std::make_shared<const HypFormula>(HypFormula{Kind::Atom, std::move(name), nullptr, nullptr});
}

HypPtr HypFormula::negate(HypPtr a) {
    if (a->kind == Kind::Not) return a->left;
    return std::make_shared<const HypFormula>(HypFormula{Kind::Not, {}, std::move(a), nullptr});
}

HypPtr HypFormula::conj(HypPtr a, HypPtr b) {
    return std::make_shared<const HypFormula>(HypFormula{Kind::And, {}, std::move(a), std::move(b)});
}

HypPtr HypFormula::disj(HypPtr a, HypPtr b) { return negate(conj(negate(a), negate(b))); }

HypPtr HypFormula::implies(HypPtr a, HypPtr b) { return negate(conj(a, negate(b))); }

HypPtr HypFormula::iff(HypPtr a, HypPtr b) { return conj(implies(a, b), implies(b, a)); }

HypPtr HypFormula::truth(const Signature& sig) {
    auto h = atom(sig.hypotheses.at(0));
    return disj(h, negate(h));
}

HypPtr HypFormula::falsity(const Signature& sig) { return negate(truth(sig)); }

// ---- formulas -----------------------------------------------------------------

namespace {

FormulaPtr make(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

} // namespace

FormulaPtr Formula::hyp(std::string name) { return make({Kind::Hyp, std::move(name), {}, nullptr, nullptr}); }
FormulaPtr Formula::obs(std::string name) { return make({Kind::Obs, std::move(name), {}, nullptr, nullptr}); }
FormulaPtr Formula::compare(Comparison c) { return make({Kind::Cmp, {}, std::move(c), nullptr, nullptr}); }

FormulaPtr Formula::negate(FormulaPtr a) {
    if (a->kind == Kind::Not) return a->left;
    return make({Kind::Not, {}, {}, std::move(a), nullptr});
}

FormulaPtr Formula::conj(FormulaPtr a, FormulaPtr b) {
    return make({Kind::And, {}, {}, std::move(a), std::move(b)});
}

FormulaPtr Formula::forall(std::string var, FormulaPtr body) {
    return make({Kind::Forall, std::move(var), {}, std::move(body), nullptr});
}

FormulaPtr Formula::next(FormulaPtr body) { return make({Kind::Next, {}, {}, std::move(body), nullptr}); }

FormulaPtr Formula::disj(FormulaPtr a, FormulaPtr b) { return negate(conj(negate(a), negate(b))); }
FormulaPtr Formula::implies(FormulaPtr a, FormulaPtr b) { return negate(conj(a, negate(b))); }
FormulaPtr Formula::iff(FormulaPtr a, FormulaPtr b) { return conj(implies(a, b), implies(b, a)); }
FormulaPtr Formula::exists(std::string var, FormulaPtr body) {
    return negate(forall(std::move(var), negate(std::move(body))));
}

FormulaPtr Formula::from_hyp(const HypPtr& rho) {
    switch (rho->kind) {
    case HypFormula::Kind::Atom: return hyp(rho->name);
    case HypFormula::Kind::Not: return negate(from_hyp(rho->left));
    case HypFormula::Kind::And: return conj(from_hyp(rho->left), from_hyp(rho->right));
    }
    return nullptr;
}

FormulaPtr Formula::truth(const Signature& sig) { return from_hyp(HypFormula::truth(sig)); }
FormulaPtr Formula::falsity(const Signature& sig) { return from_hyp(HypFormula::falsity(sig)); }

// ---- structural equality --------------------------------------------------------

bool equal(const HypFormula& a, const HypFormula& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case HypFormula::Kind::Atom: return a.name == b.name;
    case HypFormula::Kind::Not: return equal(*a.left, *b.left);
    case HypFormula::Kind::And: return equal(*a.left, *b.left) && equal(*a.right, *b.right);
    }
    return false;
}

bool equal(const Factor& a, const Factor& b) {
    if (a.index() != b.index()) return false;
    if (auto* va = std::get_if<Variable>(&a)) return va->name == std::get<Variable>(b).name;
    const auto& ta = std::get<BasicTerm>(a);
    const auto& tb = std::get<BasicTerm>(b);
    if (ta.kind != tb.kind) return false;
    if (ta.kind == BasicTerm::Kind::Weight)
        return ta.sequence == tb.sequence && ta.hypothesis == tb.hypothesis;
    return equal(*ta.rho, *tb.rho);
}

bool equal(const Polynomial& a, const Polynomial& b) {
    if (a.monomials.size() != b.monomials.size()) return false;
    for (size_t i = 0; i < a.monomials.size(); ++i) {
        const auto& ma = a.monomials[i];
        const auto& mb = b.monomials[i];
        if (ma.coefficient != mb.coefficient || ma.factors.size() != mb.factors.size()) return false;
        for (size_t k = 0; k < ma.factors.size(); ++k)
            if (!equal(ma.factors[k], mb.factors[k])) return false;
    }
    return true;
}

bool equal(const Formula& a, const Formula& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case Formula::Kind::Hyp:
    case Formula::Kind::Obs: return a.name == b.name;
    case Formula::Kind::Cmp:
        return a.cmp.rel == b.cmp.rel && a.cmp.rhs == b.cmp.rhs && equal(a.cmp.lhs, b.cmp.lhs);
    case Formula::Kind::Not:
    case Formula::Kind::Next: return equal(*a.left, *b.left);
    case Formula::Kind::And: return equal(*a.left, *b.left) && equal(*a.right, *b.right);
    case Formula::Kind::Forall: return a.name == b.name && equal(*a.left, *b.left);
    }
    return false;
}

// ---- polynomial normalization -----------------------------------------------

namespace {

int factor_rank(const Factor& f) {
    if (std::holds_alternative<Variable>(f)) return 3;
    return static_cast<int>(std::get<BasicTerm>(f).kind);
}

} // namespace

bool factor_less(const Factor& a, const Factor& b) {
    int ra = factor_rank(a), rb = factor_rank(b);
    if (ra != rb) return ra < rb;
    return print(a) < print(b);
}

Polynomial normalize(Polynomial p) {
    Polynomial out;
    for (auto& m : p.monomials) {
        std::stable_sort(m.factors.begin(), m.factors.end(), factor_less);
        bool merged = false;
        for (auto& o : out.monomials) {
            if (o.factors.size() != m.factors.size()) continue;
            bool same = true;
            for (size_t k = 0; k < m.factors.size() && same; ++k) same = equal(o.factors[k], m.factors[k]);
            if (same) {
                o.coefficient += m.coefficient;
                merged = true;
                break;
            }
        }
        if (!merged) out.monomials.push_back(std::move(m));
    }
    std::erase_if(out.monomials, [](const Monomial& m) { return m.coefficient == 0; });
    return out;
}

// ---- intension --------------------------------------------------------------

std::vector<bool> intension_mask(const HypFormula& rho, const Signature& sig) {
    switch (rho.kind) {
    case HypFormula::Kind::Atom: {
        std::vector<bool> m(sig.hypotheses.size(), false);
        m[sig.hypothesis_index(rho.name)] = true;
        return m;
    }
    case HypFormula::Kind::Not: {
        auto m = intension_mask(*rho.left, sig);
        m.flip();
        return m;
    }
    case HypFormula::Kind::And: {
        auto a = intension_mask(*rho.left, sig);
        auto b = intension_mask(*rho.right, sig);
        for (size_t i = 0; i < a.size(); ++i) a[i] = a[i] && b[i];
        return a;
    }
    }
    return {};
}

std::vector<std::string> intension(const HypFormula& rho, const Signature& sig) {
    auto m = intension_mask(rho, sig);
    std::vector<std::string> out;
    for (size_t i = 0; i < m.size(); ++i)
        if (m[i]) out.push_back(sig.hypotheses[i]);
    return out;
}

// ---- structural queries -------------------------------------------------------

bool has_next(const Formula& f) {
    switch (f.kind) {
    case Formula::Kind::Next: return true;
    case Formula::Kind::Not:
    case Formula::Kind::Forall: return has_next(*f.left);
    case Formula::Kind::And: return has_next(*f.left) || has_next(*f.right);
    default: return false;
    }
}

size_t next_depth(const Formula& f) {
    switch (f.kind) {
    case Formula::Kind::Next: return 1 + next_depth(*f.left);
    case Formula::Kind::Not:
    case Formula::Kind::Forall: return next_depth(*f.left);
    case Formula::Kind::And: return std::max(next_depth(*f.left), next_depth(*f.right));
    default: return 0;
    }
}

bool is_quantifier_free(const Formula& f) {
    switch (f.kind) {
    case Formula::Kind::Forall: return false;
    case Formula::Kind::Not:
    case Formula::Kind::Next: return is_quantifier_free(*f.left);
    case Formula::Kind::And: return is_quantifier_free(*f.left) && is_quantifier_free(*f.right);
    default: return true;
    }
}

namespace {

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
    switch (f.kind) {
    case Formula::Kind::Cmp:
        for (const auto& m : f.cmp.lhs.monomials)
            for (const auto& fac : m.factors)
                if (auto* v = std::get_if<Variable>(&fac))
                    if (!bound.count(v->name)) out.insert(v->name);
        break;
    case Formula::Kind::Not:
    case Formula::Kind::Next: collect_free(*f.left, bound, out); break;
    case Formula::Kind::And:
        collect_free(*f.left, bound, out);
        collect_free(*f.right, bound, out);
        break;
    case Formula::Kind::Forall: {
        bool added = bound.insert(f.name).second;
        collect_free(*f.left, bound, out);
        if (added) bound.erase(f.name);
        break;
    }
    default: break;
    }
}

void collect_hyp_names(const HypFormula& rho, std::set<std::string>& out) {
    if (rho.kind == HypFormula::Kind::Atom) {
        out.insert(rho.name);
        return;
    }
    collect_hyp_names(*rho.left, out);
    if (rho.right) collect_hyp_names(*rho.right, out);
}

} // namespace

std::set<std::string> free_variables(const Formula& f) {
    std::set<std::string> bound, out;
    collect_free(f, bound, out);
    return out;
}

Fragment classify_fragment(const Formula& f) {
    bool long_sequence = false;
    bool has_variable = false;
    bool linear_weight = true;
    for_each_comparison(f, [&](const Comparison& c) {
        for (const auto& m : c.lhs.monomials) {
            if (m.factors.size() > 1) linear_weight = false;
            for (const auto& fac : m.factors) {
                if (std::holds_alternative<Variable>(fac)) {
                    has_variable = true;
                    continue;
                }
                const auto& t = std::get<BasicTerm>(fac);
                if (t.kind != BasicTerm::Kind::Weight) linear_weight = false;
                else if (t.sequence.size() > 1) long_sequence = true;
            }
        }
    });
    if (has_next(f) || long_sequence) return Fragment::LfoEvDyn;
    if (!is_quantifier_free(f) || has_variable) return Fragment::LfoEv;
    return linear_weight ? Fragment::Lw : Fragment::Lev;
}

const char* fragment_name(Fragment f) {
    switch (f) {
    case Fragment::Lw: return "L^w";
    case Fragment::Lev: return "L^ev";
    case Fragment::LfoEv: return "L^fo-ev";
    case Fragment::LfoEvDyn: return "L^fo-ev_dyn";
    }
    return "?";
}

MentionedNames mentioned_names(const Formula& f) {
    MentionedNames out;
    auto walk = [&](auto& self, const Formula& g) -> void {
        switch (g.kind) {
        case Formula::Kind::Hyp: out.hypotheses.insert(g.name); break;
        case Formula::Kind::Obs: out.observations.insert(g.name); break;
        case Formula::Kind::Cmp:
            for (const auto& m : g.cmp.lhs.monomials)
                for (const auto& fac : m.factors) {
                    const auto* t = std::get_if<BasicTerm>(&fac);
                    if (!t) continue;
                    if (t->kind == BasicTerm::Kind::Weight) {
                        out.weight = true;
                        out.hypotheses.insert(t->hypothesis);
                        for (const auto& o : t->sequence) out.observations.insert(o);
                        if (std::find(out.sequences.begin(), out.sequences.end(), t->sequence) ==
                            out.sequences.end())
                            out.sequences.push_back(t->sequence);
                    } else {
                        (t->kind == BasicTerm::Kind::Prior ? out.prior : out.posterior) = true;
                        collect_hyp_names(*t->rho, out.hypotheses);
                    }
                }
            break;
        case Formula::Kind::And:
            self(self, *g.left);
            self(self, *g.right);
            break;
        default:
            if (g.left) self(self, *g.left);
            break;
        }
    };
    walk(walk, f);
    return out;
}

} // namespace evidence
