#include "evidence/rcf.hpp"

#include "evidence/errors.hpp"

#include <algorithm>
#include <set>

namespace evidence::rcf {

PropPtr Prop::truth() { return std::make_shared<const Prop>(Prop{Kind::True, {}, Rel::Eq, {}, 0}); }
PropPtr Prop::falsity() { return std::make_shared<const Prop>(Prop{Kind::False, {}, Rel::Eq, {}, 0}); }

PropPtr Prop::atom(Poly p, Rel rel) {
    if (p.degree() == 0) {
        Rational c = p.is_zero() ? Rational() : p.terms()[0].coef;
        bool ok = rel == Rel::Eq ? c.is_zero() : rel == Rel::Ge ? c.sign() >= 0 : c.sign() > 0;
        return ok ? truth() : falsity();
    }
    return std::make_shared<const Prop>(Prop{Kind::Atom, std::move(p), rel, {}, 0});
}

PropPtr Prop::negate(PropPtr a) {
    if (a->kind == Kind::True) return falsity();
    if (a->kind == Kind::False) return truth();
    if (a->kind == Kind::Not) return a->args[0];
    return std::make_shared<const Prop>(Prop{Kind::Not, {}, Rel::Eq, {std::move(a)}, 0});
}

PropPtr Prop::conj(std::vector<PropPtr> args) {
    std::vector<PropPtr> kept;
    for (auto& a : args) {
        if (a->kind == Kind::False) return falsity();
        if (a->kind == Kind::True) continue;
        kept.push_back(std::move(a));
    }
    if (kept.empty()) return truth();
    if (kept.size() == 1) return kept[0];
    return std::make_shared<const Prop>(Prop{Kind::And, {}, Rel::Eq, std::move(kept), 0});
}

PropPtr Prop::disj(std::vector<PropPtr> args) {
    std::vector<PropPtr> kept;
    for (auto& a : args) {
        if (a->kind == Kind::True) return truth();
        if (a->kind == Kind::False) continue;
        kept.push_back(std::move(a));
    }
    if (kept.empty()) return falsity();
    if (kept.size() == 1) return kept[0];
    return std::make_shared<const Prop>(Prop{Kind::Or, {}, Rel::Eq, std::move(kept), 0});
}

PropPtr Prop::implies(PropPtr a, PropPtr b) {
    if (a->kind == Kind::False || b->kind == Kind::True) return truth();
    if (a->kind == Kind::True) return b;
    return std::make_shared<const Prop>(Prop{Kind::Implies, {}, Rel::Eq, {std::move(a), std::move(b)}, 0});
}

PropPtr Prop::forall(uint32_t var, PropPtr body) {
    if (body->kind == Kind::True || body->kind == Kind::False) return body;
    return std::make_shared<const Prop>(Prop{Kind::Forall, {}, Rel::Eq, {std::move(body)}, var});
}

std::optional<uint32_t> RcfProblem::find(std::string_view name) const {
    for (size_t i = 0; i < variables.size(); ++i)
        if (variables[i].name == name) return static_cast<uint32_t>(i);
    return std::nullopt;
}

uint32_t RcfProblem::index(std::string_view name) const {
    if (auto i = find(name)) return *i;
    throw UnknownName("no variable " + std::string(name) + " in the problem");
}

std::string u_name(size_t h) { return "u_" + std::to_string(h + 1); }
std::string v_name(size_t ob) { return "v_" + std::to_string(ob + 1); }
std::string v_name(size_t ob, size_t time) { return "v_t" + std::to_string(time) + "_" + std::to_string(ob + 1); }
std::string x_name(size_t h) { return "x_" + std::to_string(h + 1); }
std::string y_name(size_t h) { return "y_" + std::to_string(h + 1); }
std::string y_name(size_t h, size_t time) { return "y_t" + std::to_string(time) + "_" + std::to_string(h + 1); }
std::string s_name(size_t ob) { return "s_" + std::to_string(ob + 1); }

std::string z_name(const std::vector<size_t>& seq, size_t h) {
    std::string out = "z_";
    for (size_t k = 0; k < seq.size(); ++k) {
        if (k) out += '.';
        out += std::to_string(seq[k] + 1);
    }
    return out + "_" + std::to_string(h + 1);
}

namespace {

using PR = Prop::Rel;

class Builder {
public:
    RcfProblem P;

    Builder(const Formula& f, const Signature& sig, bool dynamic, size_t horizon) {
        P.dynamic = dynamic;
        P.horizon = horizon;
        P.signature = sig;
        P.source = print(f);
    }

    uint32_t declare(const std::string& name, std::string meaning, bool bound = false) {
        if (auto i = P.find(name)) return *i;
        P.variables.push_back({name, std::move(meaning), bound});
        return static_cast<uint32_t>(P.variables.size() - 1);
    }
    Poly var(const std::string& name) { return Poly::variable(P.index(name)); }

    void add(PropPtr p, const char* family) { P.assertions.push_back({std::move(p), family}); }

    const Signature& sig() const { return P.signature; }
    size_t nh() const { return P.signature.hypotheses.size(); }
    size_t no() const { return P.signature.observations.size(); }

    // (w = 0 or w = 1) for each, and the sum is 1
    void exactly_one(const std::vector<std::string>& names, const char* family) {
        Poly sum = Poly::constant(-1);
        for (const auto& n : names) {
            Poly p = var(n);
            add(Prop::disj({Prop::atom(p, PR::Eq), Prop::atom(p - Poly::constant(1), PR::Eq)}), family);
            sum += p;
        }
        add(Prop::atom(sum, PR::Eq), family);
    }

    void distribution(const std::vector<std::string>& names, const char* family) {
        Poly sum = Poly::constant(-1);
        for (const auto& n : names) {
            add(Prop::atom(var(n), PR::Ge), family);
            sum += var(n);
        }
        add(Prop::atom(sum, PR::Eq), family);
    }

    void weight_families() {
        for (size_t i = 0; i < no(); ++i) {
            Poly row = Poly::constant(-1);
            for (size_t j = 0; j < nh(); ++j) {
                add(Prop::atom(var(z_name({i}, j)), PR::Ge), "phi_w,p");
                row += var(z_name({i}, j));
            }
            add(Prop::atom(row, PR::Eq), "phi_w,p");
        }
        for (size_t i = 0; i < no(); ++i) add(Prop::atom(var(s_name(i)), PR::Gt), "phi_w,f");
        for (size_t j = 0; j < nh(); ++j) {
            Poly col = Poly::constant(-1);
            for (size_t i = 0; i < no(); ++i) col += var(z_name({i}, j)) * var(s_name(i));
            add(Prop::atom(col, PR::Eq), "phi_w,f");
        }
    }

    // v_i = 1 implies after_j * sum_k before_k z_ik = before_j z_ij, and the sum is positive
    void update(const std::vector<std::string>& v, const std::vector<std::string>& before,
                const std::vector<std::string>& after) {
        for (size_t i = 0; i < no(); ++i) {
            Poly norm;
            for (size_t k = 0; k < nh(); ++k) norm += var(before[k]) * var(z_name({i}, k));
            std::vector<PropPtr> eqs;
            for (size_t j = 0; j < nh(); ++j)
                eqs.push_back(Prop::atom(var(before[j]) * var(z_name({i}, j)) - var(after[j]) * norm, PR::Eq));
            PropPtr when = Prop::atom(var(v[i]) - Poly::constant(1), PR::Eq);
            add(Prop::implies(when, Prop::conj(std::move(eqs))), "phi_w,up");
            add(Prop::implies(when, Prop::atom(norm, PR::Gt)), "phi_w,nd");
        }
    }

    std::vector<size_t> seq_indices(const Sequence& seq) const {
        std::vector<size_t> out;
        for (const auto& ob : seq) out.push_back(sig().observation_index(ob));
        return out;
    }

    // ---- the formula ----

    std::vector<std::string> scope;

    Poly sum_over(const HypFormula& rho, const std::vector<std::string>& names) {
        std::vector<bool> mask = intension_mask(rho, sig());
        Poly p;
        for (size_t j = 0; j < mask.size(); ++j)
            if (mask[j]) p += var(names[j]);
        return p;
    }

    std::vector<std::string> x_names() const {
        std::vector<std::string> out;
        for (size_t j = 0; j < nh(); ++j) out.push_back(P.dynamic ? y_name(j, 0) : x_name(j));
        return out;
    }
    std::vector<std::string> y_names(size_t time) const {
        std::vector<std::string> out;
        for (size_t j = 0; j < nh(); ++j) out.push_back(P.dynamic ? y_name(j, time) : y_name(j));
        return out;
    }

    Poly term(const BasicTerm& t, size_t time) {
        switch (t.kind) {
        case BasicTerm::Kind::Prior: return sum_over(*t.rho, x_names());
        case BasicTerm::Kind::Posterior: return sum_over(*t.rho, y_names(time));
        case BasicTerm::Kind::Weight: {
            if (t.sequence.empty()) throw InvalidStructure("weight of an empty sequence");
            if (t.sequence.size() > 1 && !P.dynamic)
                throw DynamicUnsupported("weights of sequences need the dynamic translation");
            std::vector<size_t> idx = seq_indices(t.sequence);
            size_t h = sig().hypothesis_index(t.hypothesis);
            return var(z_name(idx, h));
        }
        }
        return {};
    }

    Poly polynomial(const Polynomial& p, size_t time) {
        Poly out;
        for (const auto& m : p.monomials) {
            Poly t = Poly::constant(Rational(m.coefficient));
            for (const auto& f : m.factors) {
                if (std::holds_alternative<Variable>(f)) {
                    const std::string& name = std::get<Variable>(f).name;
                    bool bound = std::find(scope.begin(), scope.end(), name) != scope.end();
                    uint32_t i = declare("q_" + name, "variable " + name, bound);
                    if (!bound) P.variables[i].bound = false;
                    t = t * Poly::variable(i);
                } else {
                    t = t * term(std::get<BasicTerm>(f), time);
                }
            }
            out += t;
        }
        return out;
    }

    static bool hyp_only(const Formula& g) {
        switch (g.kind) {
        case Formula::Kind::Hyp: return true;
        case Formula::Kind::Not: return hyp_only(*g.left);
        case Formula::Kind::And: return hyp_only(*g.left) && hyp_only(*g.right);
        default: return false;
        }
    }
    static bool hyp_value(const Formula& g, const std::string& h) {
        switch (g.kind) {
        case Formula::Kind::Hyp: return g.name == h;
        case Formula::Kind::Not: return !hyp_value(*g.left, h);
        default: return hyp_value(*g.left, h) && hyp_value(*g.right, h);
        }
    }

    PropPtr formula(const Formula& g, size_t time) {
        if (g.kind != Formula::Kind::Hyp && hyp_only(g)) {
            // exactly one hypothesis holds, so tautologies and contradictions fold away
            size_t hits = 0;
            for (const auto& h : sig().hypotheses) hits += hyp_value(g, h);
            if (hits == nh()) return Prop::truth();
            if (hits == 0) return Prop::falsity();
        }
        switch (g.kind) {
        case Formula::Kind::Hyp:
            return Prop::atom(var(u_name(sig().hypothesis_index(g.name))) - Poly::constant(1), PR::Eq);
        case Formula::Kind::Obs: {
            size_t i = sig().observation_index(g.name);
            if (!P.dynamic) return Prop::atom(var(v_name(i)) - Poly::constant(1), PR::Eq);
            if (time == 0) return Prop::falsity(); // nothing has been observed at time 0
            return Prop::atom(var(v_name(i, time)) - Poly::constant(1), PR::Eq);
        }
        case Formula::Kind::Cmp: {
            Poly p = polynomial(g.cmp.lhs, time) - Poly::constant(Rational(g.cmp.rhs));
            PR rel = g.cmp.rel == Relation::Ge ? PR::Ge : g.cmp.rel == Relation::Gt ? PR::Gt : PR::Eq;
            return Prop::atom(std::move(p), rel);
        }
        case Formula::Kind::Not: return Prop::negate(formula(*g.left, time));
        case Formula::Kind::And: return Prop::conj({formula(*g.left, time), formula(*g.right, time)});
        case Formula::Kind::Forall: {
            P.quantified = true;
            uint32_t i = declare("q_" + g.name, "variable " + g.name, true);
            scope.push_back(g.name);
            PropPtr body = formula(*g.left, time);
            scope.pop_back();
            return Prop::forall(i, std::move(body));
        }
        case Formula::Kind::Next:
            if (!P.dynamic) throw DynamicUnsupported("X needs the dynamic translation");
            if (time + 1 > P.horizon)
                throw HorizonTooSmall("horizon " + std::to_string(P.horizon) + " is below the X depth");
            return formula(*g.left, time + 1);
        }
        return Prop::truth();
    }
};

void check_names(const Formula& f, const Signature& sig) {
    MentionedNames names = mentioned_names(f);
    for (const auto& h : names.hypotheses)
        if (!sig.is_hypothesis(h)) throw UnknownName("hypothesis '" + h + "' is not in the signature");
    for (const auto& ob : names.observations)
        if (!sig.is_observation(ob)) throw UnknownName("observation '" + ob + "' is not in the signature");
}

bool mentions_posterior(const Polynomial& p) {
    for (const auto& m : p.monomials)
        for (const auto& f : m.factors)
            if (const auto* t = std::get_if<BasicTerm>(&f); t && t->kind == BasicTerm::Kind::Posterior) return true;
    return false;
}

FormulaPtr wrap(size_t n, FormulaPtr g) {
    for (size_t k = 0; k < n; ++k) g = Formula::next(std::move(g));
    return g;
}

FormulaPtr push(const FormulaPtr& g, size_t n) {
    switch (g->kind) {
    case Formula::Kind::Hyp: return g;
    case Formula::Kind::Obs: return wrap(n, g);
    case Formula::Kind::Cmp: return mentions_posterior(g->cmp.lhs) ? wrap(n, g) : g;
    case Formula::Kind::Not: return Formula::negate(push(g->left, n));
    case Formula::Kind::And: return Formula::conj(push(g->left, n), push(g->right, n));
    case Formula::Kind::Forall: return Formula::forall(g->name, push(g->left, n));
    case Formula::Kind::Next: return push(g->left, n + 1);
    }
    return g;
}

} // namespace

FormulaPtr normalize_next(const FormulaPtr& f) { return push(f, 0); }

RcfProblem translate_static(const Formula& f, const Signature& sig) {
    if (has_next(f)) throw DynamicUnsupported("X needs the dynamic translation");
    check_names(f, sig);
    Builder b(f, sig, false, 0);
    const size_t nh = sig.hypotheses.size(), no = sig.observations.size();
    std::vector<std::string> us, vs, xs, ys;
    for (size_t j = 0; j < nh; ++j) {
        us.push_back(u_name(j));
        b.declare(us.back(), sig.hypotheses[j] + " holds");
    }
    for (size_t i = 0; i < no; ++i) {
        vs.push_back(v_name(i));
        b.declare(vs.back(), sig.observations[i] + " observed");
    }
    for (size_t j = 0; j < nh; ++j) {
        xs.push_back(x_name(j));
        b.declare(xs.back(), "Pr0(" + sig.hypotheses[j] + ")");
    }
    for (size_t j = 0; j < nh; ++j) {
        ys.push_back(y_name(j));
        b.declare(ys.back(), "Pr(" + sig.hypotheses[j] + ")");
    }
    for (size_t i = 0; i < no; ++i)
        for (size_t j = 0; j < nh; ++j)
            b.declare(z_name({i}, j), "w(" + sig.observations[i] + "," + sig.hypotheses[j] + ")");
    for (size_t i = 0; i < no; ++i) b.declare(s_name(i), "WF2 scalar for " + sig.observations[i]);

    b.exactly_one(us, "phi_h");
    b.exactly_one(vs, "phi_o");
    b.distribution(xs, "phi_pr");
    b.distribution(ys, "phi_po");
    b.weight_families();
    b.update(vs, xs, ys);
    PropPtr hat = b.formula(f, 0);
    if (hat->kind != Prop::Kind::True) b.add(hat, "phi_hat");
    return std::move(b.P);
}

RcfProblem translate_dynamic(const Formula& f, const Signature& sig, size_t horizon, const DynamicOptions& opts) {
    check_names(f, sig);
    FormulaPtr nf = normalize_next(std::make_shared<const Formula>(f));
    if (next_depth(*nf) > horizon)
        throw HorizonTooSmall("the formula needs a horizon of at least " + std::to_string(next_depth(*nf)));
    Builder b(f, sig, true, horizon);
    const size_t nh = sig.hypotheses.size(), no = sig.observations.size();

    std::vector<Sequence> seqs;
    auto add_seq = [&](const Sequence& s) {
        if (s.size() >= 2 && std::find(seqs.begin(), seqs.end(), s) == seqs.end()) seqs.push_back(s);
    };
    if (opts.full_sequences) {
        for (size_t len = 2; len <= horizon; ++len) {
            std::vector<size_t> idx(len, 0);
            while (true) {
                Sequence s;
                for (size_t k : idx) s.push_back(sig.observations[k]);
                add_seq(s);
                size_t pos = len;
                while (pos > 0 && ++idx[pos - 1] == no) idx[--pos] = 0;
                if (pos == 0) break;
            }
        }
    }
    for (const auto& s : mentioned_names(*nf).sequences) {
        for (size_t len = 2; len <= s.size(); ++len) add_seq(Sequence(s.begin(), s.begin() + static_cast<long>(len)));
    }
    b.P.sequences = seqs;

    std::vector<std::string> us;
    for (size_t j = 0; j < nh; ++j) {
        us.push_back(u_name(j));
        b.declare(us.back(), sig.hypotheses[j] + " holds");
    }
    std::vector<std::vector<std::string>> vs(horizon + 1), ys(horizon + 1);
    for (size_t n = 1; n <= horizon; ++n)
        for (size_t i = 0; i < no; ++i) {
            vs[n].push_back(v_name(i, n));
            b.declare(vs[n].back(), sig.observations[i] + " observed at time " + std::to_string(n));
        }
    for (size_t n = 0; n <= horizon; ++n)
        for (size_t j = 0; j < nh; ++j) {
            ys[n].push_back(y_name(j, n));
            b.declare(ys[n].back(), "Pr(" + sig.hypotheses[j] + ") at time " + std::to_string(n));
        }
    for (size_t i = 0; i < no; ++i)
        for (size_t j = 0; j < nh; ++j)
            b.declare(z_name({i}, j), "w(" + sig.observations[i] + "," + sig.hypotheses[j] + ")");
    for (const auto& s : seqs) {
        std::vector<size_t> idx = b.seq_indices(s);
        for (size_t j = 0; j < nh; ++j)
            b.declare(z_name(idx, j), "w([" + sequence_name(s) + "]," + sig.hypotheses[j] + ")");
    }
    for (size_t i = 0; i < no; ++i) b.declare(s_name(i), "WF2 scalar for " + sig.observations[i]);

    b.exactly_one(us, "phi_h");
    for (size_t n = 1; n <= horizon; ++n) b.exactly_one(vs[n], "phi_o'");
    for (size_t n = 0; n <= horizon; ++n) b.distribution(ys[n], "phi_p");
    b.weight_families();
    for (size_t n = 1; n <= horizon; ++n) b.update(vs[n], ys[n - 1], ys[n]);
    for (const auto& s : seqs) {
        std::vector<size_t> idx = b.seq_indices(s);
        std::vector<Poly> prods(nh);
        Poly total;
        for (size_t j = 0; j < nh; ++j) {
            prods[j] = Poly::constant(1);
            for (size_t i : idx) prods[j] = prods[j] * b.var(z_name({i}, j));
            total += prods[j];
        }
        for (size_t j = 0; j < nh; ++j)
            b.add(Prop::atom(prods[j] - b.var(z_name(idx, j)) * total, PR::Eq), "phi_w,c");
    }
    PropPtr hat = b.formula(*nf, 0);
    if (hat->kind != Prop::Kind::True) b.add(hat, "phi_hat");
    return std::move(b.P);
}

} // namespace evidence::rcf
