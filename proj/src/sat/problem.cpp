#include "sat/internal.hpp"

#include "evidence/errors.hpp"

#include <algorithm>
#include <cmath>

namespace evidence::sat {

namespace {

Poly sum_of(const std::vector<bool>& mask, uint32_t base) {
    size_t hits = static_cast<size_t>(std::count(mask.begin(), mask.end(), true));
    if (hits == mask.size()) return Poly::constant(1);
    Poly p;
    for (size_t j = 0; j < mask.size(); ++j)
        if (mask[j]) p += Poly::variable(base + static_cast<uint32_t>(j));
    return p;
}

Poly translate_term(const BasicTerm& t, const Layout& L, const Signature& sig) {
    switch (t.kind) {
    case BasicTerm::Kind::Prior: return sum_of(intension_mask(*t.rho, sig), L.x0);
    case BasicTerm::Kind::Posterior: return sum_of(intension_mask(*t.rho, sig), L.y0);
    case BasicTerm::Kind::Weight:
        if (t.sequence.size() != 1) throw FragmentUnsupported("weights of sequences need the dynamic translation");
        return Poly::variable(L.z(sig.observation_index(t.sequence[0]), sig.hypothesis_index(t.hypothesis)));
    }
    return {};
}

void add(Problem& P, Poly p, Rel rel, std::string origin, bool from_formula) {
    Constraint c;
    double m = 0.0;
    for (const auto& t : p.terms()) m = std::max(m, std::fabs(t.coef_d));
    c.scale = (m > 0.0 && std::isfinite(m)) ? 1.0 / m : 1.0;
    for (uint32_t v : p.variables()) {
        Constraint::Split s{v, {}, {}};
        if (p.split_linear(v, s.a, s.b)) c.splits.push_back(std::move(s));
    }
    c.p = std::move(p);
    c.rel = rel;
    c.origin = std::move(origin);
    c.from_formula = from_formula;
    P.constraints.push_back(std::move(c));
}

} // namespace

Poly translate(const Polynomial& p, const Layout& L, const Signature& sig) {
    Poly out;
    for (const auto& m : p.monomials) {
        Poly term = Poly::constant(Rational(m.coefficient));
        for (const auto& f : m.factors) {
            if (std::holds_alternative<Variable>(f))
                throw FragmentUnsupported("free variable " + std::get<Variable>(f).name + " in solver input");
            term = term * translate_term(std::get<BasicTerm>(f), L, sig);
        }
        out += term;
    }
    return out;
}

Problem build_problem(const Signature& sig, const CaseSpace& cs, size_t hc, size_t oc,
                      const std::vector<int8_t>& signs) {
    Problem P;
    P.hc = hc;
    P.oc = oc;
    P.signs = signs;
    Layout& L = P.layout;
    L.nh = sig.hypotheses.size();
    L.no = sig.observations.size();
    L.use_x = cs.use_prior;
    L.use_y = cs.use_posterior;
    uint32_t next = 0;
    auto block = [&](size_t n) {
        uint32_t b = next;
        next += static_cast<uint32_t>(n);
        return b;
    };
    L.x0 = block(L.use_x ? L.nh : 0);
    L.y0 = block(L.use_y ? L.nh : 0);
    L.z0 = block(L.no * L.nh);
    L.s0 = block(L.no);
    L.t = block(1);
    L.n = next;

    const double nh = static_cast<double>(L.nh);
    P.root.assign(L.n, Interval{0.0, 1.0});
    for (size_t i = 0; i < L.no; ++i) P.root[L.s(i)] = Interval{0.0, nh};
    P.root[L.t] = Interval{0.0, nh};

    if (L.use_x) {
        Poly p = Poly::constant(-1);
        for (size_t j = 0; j < L.nh; ++j) p += Poly::variable(L.x(j));
        add(P, std::move(p), Rel::Eq, "prior simplex", false);
    }
    if (L.use_y) {
        Poly p = Poly::constant(-1);
        for (size_t j = 0; j < L.nh; ++j) p += Poly::variable(L.y(j));
        add(P, std::move(p), Rel::Eq, "posterior simplex", false);
    }
    for (size_t i = 0; i < L.no; ++i) {
        Poly p = Poly::constant(-1);
        for (size_t j = 0; j < L.nh; ++j) p += Poly::variable(L.z(i, j));
        add(P, std::move(p), Rel::Eq, "row " + sig.observations[i], false);
    }
    for (size_t j = 0; j < L.nh; ++j) {
        Poly p = Poly::constant(-1);
        for (size_t i = 0; i < L.no; ++i) p += Poly::variable(L.z(i, j)) * Poly::variable(L.s(i));
        add(P, std::move(p), Rel::Eq, "WF2 " + sig.hypotheses[j], false);
    }
    {
        Poly p = Poly::constant(Rational(static_cast<long>(L.nh)) * Rational(-1));
        for (size_t i = 0; i < L.no; ++i) p += Poly::variable(L.s(i));
        add(P, std::move(p), Rel::Eq, "scalar sum", false);
    }
    for (size_t i = 0; i < L.no; ++i)
        add(P, Poly::variable(L.s(i)) - Poly::variable(L.t), Rel::Ge, "scalar floor", false);
    add(P, Poly::variable(L.t), Rel::Gt, "scalar positivity", false);

    if (L.use_y) {
        Poly norm;
        for (size_t k = 0; k < L.nh; ++k) norm += Poly::variable(L.x(k)) * Poly::variable(L.z(oc, k));
        for (size_t j = 0; j < L.nh; ++j) {
            Poly p = Poly::variable(L.x(j)) * Poly::variable(L.z(oc, j)) - Poly::variable(L.y(j)) * norm;
            add(P, std::move(p), Rel::Eq, "update " + sig.hypotheses[j], false);
        }
        add(P, norm, Rel::Gt, "nondegenerate update", false);
    }

    for (size_t k = 0; k < cs.comparisons.size(); ++k) {
        int8_t s = signs[k];
        if (s == DontCare) continue;
        const Comparison& c = *cs.comparisons[k];
        Poly base = translate(c.lhs, L, sig) - Poly::constant(Rational(c.rhs));
        Poly neg = base * Rational(-1);
        std::string origin = print(c);
        switch (s) {
        case True:
            add(P, base, c.rel == Relation::Ge ? Rel::Ge : c.rel == Relation::Gt ? Rel::Gt : Rel::Eq, origin, true);
            break;
        case False:
            add(P, neg, c.rel == Relation::Ge ? Rel::Gt : Rel::Ge, "not " + origin, true);
            break;
        case FalseAbove: add(P, base, Rel::Gt, "above " + origin, true); break;
        case FalseBelow: add(P, neg, Rel::Gt, "below " + origin, true); break;
        default: break;
        }
    }
    return P;
}

} // namespace evidence::sat
