#pragma once

// Formula corpora for the satisfiability tests.

#include "generators.hpp"

#include "evidence/formula.hpp"
#include "evidence/parser.hpp"

namespace corpus {

using namespace evidence;

struct Instance {
    FormulaPtr formula;
    Signature signature;
    EvidentialWorld hidden;
};

// A conjunction of comparisons, each true at a hidden random world. Linear
// instances use exact equalities over weights; polynomial ones mix Pr0, Pr
// and w in products and keep slack on every inequality.
inline Instance hidden_world(std::mt19937_64& rng, bool linear) {
    auto w = gen::world(rng, 3, 3);
    auto sig = Signature::of(w.space);
    auto post = posterior(w.space, w.prior, w.observation);

    auto random_factor = [&]() -> std::pair<Factor, Rational> {
        const auto& hs = sig.hypotheses;
        const auto& os = sig.observations;
        const std::string& h = hs[gen::pick(rng, 0, hs.size() - 1)];
        size_t k = linear ? 2 : gen::pick(rng, 0, 2);
        if (k == 0) return {BasicTerm::prior(HypFormula::atom(h)), w.prior.mass(h)};
        if (k == 1) return {BasicTerm::posterior(HypFormula::atom(h)), post.mass(h)};
        const std::string& o = os[gen::pick(rng, 0, os.size() - 1)];
        return {BasicTerm::weight({o}, h), weight_of_evidence(w.space, o, h)};
    };

    FormulaPtr f;
    auto add = [&](FormulaPtr g) { f = f ? Formula::conj(f, g) : g; };
    if (gen::pick(rng, 0, 1)) add(Formula::hyp(w.hypothesis));
    if (gen::pick(rng, 0, 1)) add(Formula::obs(w.observation));

    size_t comparisons = gen::pick(rng, 1, 6);
    for (size_t c = 0; c < comparisons; ++c) {
        Polynomial p;
        Rational value;
        for (size_t m = gen::pick(rng, 1, 3); m > 0; --m) {
            long coef = static_cast<long>(gen::pick(rng, 1, 5)) * (gen::pick(rng, 0, 3) == 0 ? -1 : 1);
            Monomial mono{coef, {}};
            Rational v(coef);
            for (size_t d = linear ? 1 : gen::pick(rng, 1, 2); d > 0; --d) {
                auto [fac, val] = random_factor();
                mono.factors.push_back(fac);
                v *= val;
            }
            p.monomials.push_back(mono);
            value += v;
        }
        // Scale to integer coefficients: q * p rel numerator.
        BigInt q = value.denominator();
        for (auto& m : p.monomials) m.coefficient *= q;
        BigInt num = value.numerator();
        Comparison cmp;
        cmp.lhs = normalize(p);
        size_t kind = gen::pick(rng, 0, 2);
        if (linear && kind == 0) {
            cmp.rel = Relation::Eq;
            cmp.rhs = num;
        } else {
            // Slack of at least 1/q below the true value.
            for (auto& m : cmp.lhs.monomials) m.coefficient *= 4;
            cmp.rel = kind == 1 ? Relation::Ge : Relation::Gt;
            cmp.rhs = 4 * num - static_cast<long>(gen::pick(rng, 1, 3));
        }
        if (cmp.lhs.monomials.empty()) continue;
        add(Formula::compare(std::move(cmp)));
    }
    if (!f) f = Formula::obs(w.observation);
    return {f, sig, w};
}

// Random quantifier-free formula over sig; dynamic formulas may use X and
// weights of sequences but no Pr0.
struct FormulaGen {
    std::mt19937_64& rng;
    Signature sig;
    bool dynamic = false;

    size_t pick(size_t lo, size_t hi) { return gen::pick(rng, lo, hi); }
    const std::string& hyp_name() { return sig.hypotheses[pick(0, sig.hypotheses.size() - 1)]; }
    const std::string& obs_name() { return sig.observations[pick(0, sig.observations.size() - 1)]; }

    HypPtr rho(int depth) {
        size_t k = depth <= 0 ? 0 : pick(0, 3);
        if (k <= 1) return HypFormula::atom(hyp_name());
        if (k == 2) return HypFormula::negate(rho(depth - 1));
        return pick(0, 1) ? HypFormula::conj(rho(depth - 1), rho(depth - 1))
                          : HypFormula::disj(rho(depth - 1), rho(depth - 1));
    }

    Factor factor() {
        switch (pick(dynamic ? 1 : 0, 2)) {
        case 0: return BasicTerm::prior(rho(1));
        case 1: return BasicTerm::posterior(rho(1));
        default: {
            ObsSequence seq{obs_name()};
            if (dynamic)
                for (size_t k = pick(0, 2); k > 0; --k) seq.push_back(obs_name());
            return BasicTerm::weight(seq, hyp_name());
        }
        }
    }

    Comparison comparison() {
        Polynomial p;
        for (size_t m = pick(1, 3); m > 0; --m) {
            Monomial mono{BigInt(static_cast<long>(pick(1, 9)) - 4), {}};
            if (mono.coefficient == 0) mono.coefficient = 1;
            if (pick(0, 6) == 0) mono.coefficient *= big_pow(2, 40);
            for (size_t d = pick(1, 2); d > 0; --d) mono.factors.push_back(factor());
            p.monomials.push_back(mono);
        }
        return {normalize(p), static_cast<Relation>(pick(0, 2)), BigInt(static_cast<long>(pick(0, 6)) - 2)};
    }

    FormulaPtr formula(int depth) {
        size_t k = depth <= 0 ? pick(0, 2) : pick(0, dynamic ? 5 : 4);
        switch (k) {
        case 0: return Formula::hyp(hyp_name());
        case 1: return Formula::obs(obs_name());
        case 2: return Formula::compare(comparison());
        case 3: return Formula::negate(formula(depth - 1));
        case 4: return Formula::conj(formula(depth - 1), formula(depth - 1));
        default: return Formula::next(formula(depth - 1));
        }
    }
};

struct UnsatCase {
    std::string text;
    Signature signature;
    bool decidable; // expected to come back UNSAT rather than UNKNOWN
};

inline std::vector<UnsatCase> unsat_corpus() {
    Signature two({"h1", "h2"}, {"ob"});
    Signature two2({"h1", "h2"}, {"ob1", "ob2"});
    Signature three({"h1", "h2", "h3"}, {"ob1", "ob2"});
    return {
        {"w(ob,h1) = 2/3 & w(ob,h2) = 2/3", two, true},
        {"4*w(ob1,h1) = 1 & 4*w(ob1,h2) = 1 & 2*w(ob1,h3) = 1 & "
         "4*w(ob2,h1) = 1 & 2*w(ob2,h2) = 1 & 4*w(ob2,h3) = 1",
         three, true},
        {"w(ob1,h1) + w(ob1,h2) > 1", two2, true},
        {"w(ob1,h1) < 0", two2, true},
        {"h1 & h2", two2, true},
        {"ob1 & ob2", two2, true},
        {"h1 & !h1", two, true},
        {"Pr(h1) > 1", two, true},
        {"Pr0(h1) + Pr0(h2) > 1", two, true},
        {"Pr0(h1 | h2) < 1", two, true},
        {"Pr(h1 & !h1) > 0", three, true},
        {"Pr0(h1) * Pr(h2) > 2", two, true},
        {"Pr0(h1) * Pr0(h2) > 1/3", two, true},
        {"w(ob1,h1) = 1 & w(ob1,h2) > 0", two2, true},
        {"w(ob1,h1) = 1/2 & w(ob1,h2) = 1/2 & w(ob1,h3) = 1/2", three, true},
        {"ob1 & w(ob1,h1) = 1 & Pr0(h1) = 1/2 & Pr(h1) < 1", two2, false},
        {"ob & Pr0(h1) = 1/2 & w(ob,h1) = 3/4 & Pr(h1) = 1/2", two, false},
        {"Pr0(h1) * Pr0(h2) > 1/4", two, false},
        {"w(ob1,h1) * w(ob2,h1) > 1/4 & w(ob1,h2) * w(ob2,h2) > 1/4 & w(ob1,h1) + w(ob1,h2) = 1", two2, false},
    };
}

} // namespace corpus
