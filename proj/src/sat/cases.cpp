#include "sat/internal.hpp"

#include "evidence/errors.hpp"

#include <algorithm>
#include <functional>

namespace evidence::sat {

namespace {

void collect_atoms(const Formula& f, std::set<std::string>& hyps, std::set<std::string>& obs) {
    switch (f.kind) {
    case Formula::Kind::Hyp: hyps.insert(f.name); break;
    case Formula::Kind::Obs: obs.insert(f.name); break;
    case Formula::Kind::Cmp: break;
    case Formula::Kind::And:
        collect_atoms(*f.left, hyps, obs);
        collect_atoms(*f.right, hyps, obs);
        break;
    default: collect_atoms(*f.left, hyps, obs); break;
    }
}

// Indices of the atoms that occur, followed by one name that does not (if any).
std::vector<size_t> cases_for(const std::vector<std::string>& names, const std::set<std::string>& atoms) {
    std::vector<size_t> out;
    std::optional<size_t> spare;
    for (size_t i = 0; i < names.size(); ++i) {
        if (atoms.count(names[i]))
            out.push_back(i);
        else if (!spare)
            spare = i;
    }
    if (spare) out.push_back(*spare);
    return out;
}

enum Tri { F = 0, T = 1, U = 2 };

struct Evaluator3 {
    const CaseSpace& cs;
    const std::string& h;
    const std::string& ob;
    const std::vector<int8_t>& signs;

    Tri eval(const Formula& f) const {
        switch (f.kind) {
        case Formula::Kind::Hyp: return f.name == h ? T : F;
        case Formula::Kind::Obs: return f.name == ob ? T : F;
        case Formula::Kind::Cmp: {
            int8_t s = signs[cs.index.at(&f.cmp)];
            if (s == DontCare) return U;
            return s == True ? T : F;
        }
        case Formula::Kind::Not: {
            Tri a = eval(*f.left);
            return a == U ? U : (a == T ? F : T);
        }
        case Formula::Kind::And: {
            Tri a = eval(*f.left);
            if (a == F) return F;
            Tri b = eval(*f.right);
            if (b == F) return F;
            return (a == T && b == T) ? T : U;
        }
        default: throw FragmentUnsupported("quantifiers and X are not decided by the solver");
        }
    }

    // First undecided comparison that can influence the value of f.
    std::optional<size_t> pick(const Formula& f) const {
        if (eval(f) != U) return std::nullopt;
        switch (f.kind) {
        case Formula::Kind::Cmp: return cs.index.at(&f.cmp);
        case Formula::Kind::Not: return pick(*f.left);
        case Formula::Kind::And: {
            if (auto l = pick(*f.left)) return l;
            return pick(*f.right);
        }
        default: return std::nullopt;
        }
    }
};

} // namespace

CaseSpace build_case_space(const Formula& f, const Signature& sig) {
    CaseSpace cs;
    MentionedNames names = mentioned_names(f);
    cs.use_posterior = names.posterior;
    cs.use_prior = names.prior || names.posterior;

    std::set<std::string> hyp_atoms, obs_atoms;
    collect_atoms(f, hyp_atoms, obs_atoms);
    cs.hypothesis_cases = cases_for(sig.hypotheses, hyp_atoms);
    if (names.posterior) {
        // the posterior depends on which observation was made
        for (size_t i = 0; i < sig.observations.size(); ++i) cs.observation_cases.push_back(i);
    } else {
        cs.observation_cases = cases_for(sig.observations, obs_atoms);
    }

    std::map<std::string, size_t> by_key;
    for_each_comparison(f, [&](const Comparison& c) {
        std::string key = print(c);
        auto it = by_key.find(key);
        if (it == by_key.end()) {
            it = by_key.emplace(key, cs.comparisons.size()).first;
            cs.comparisons.push_back(&c);
        }
        cs.index[&c] = it->second;
    });
    return cs;
}

std::vector<std::vector<int8_t>> sign_patterns(const Formula& f, const Signature& sig,
                                               const CaseSpace& cs, size_t hc, size_t oc) {
    std::vector<std::vector<int8_t>> out;
    std::vector<int8_t> signs(cs.comparisons.size(), DontCare);
    Evaluator3 ev{cs, sig.hypotheses[hc], sig.observations[oc], signs};

    std::function<void()> dfs = [&]() {
        Tri v = ev.eval(f);
        if (v == F) return;
        if (v == T) {
            out.push_back(signs);
            return;
        }
        auto k = ev.pick(f);
        if (!k) return;
        if (cs.comparisons[*k]->rel == Relation::Eq) {
            for (int8_t s : {int8_t(True), int8_t(FalseAbove), int8_t(FalseBelow)}) {
                signs[*k] = s;
                dfs();
            }
        } else {
            for (int8_t s : {int8_t(True), int8_t(False)}) {
                signs[*k] = s;
                dfs();
            }
        }
        signs[*k] = DontCare;
    };
    dfs();
    return out;
}

} // namespace evidence::sat
