#include "evidence/audit.hpp"

#include "evidence/characterization.hpp"
#include "evidence/errors.hpp"

#include <algorithm>
#include <functional>
#include <optional>

namespace evidence {

size_t AuditReport::failures() const {
    return static_cast<size_t>(
        std::count_if(entries.begin(), entries.end(), [](const AuditEntry& e) { return !e.passed; }));
}

std::map<std::string, std::pair<size_t, size_t>> AuditReport::summary() const {
    std::map<std::string, std::pair<size_t, size_t>> out;
    for (const auto& e : entries) {
        auto& s = out[e.axiom];
        ++s.first;
        if (!e.passed) ++s.second;
    }
    return out;
}

namespace {

using HP = HypPtr;
using FP = FormulaPtr;

Factor prior(HP rho) { return BasicTerm::prior(std::move(rho)); }
Factor post(HP rho) { return BasicTerm::posterior(std::move(rho)); }
Factor weight(ObsSequence seq, std::string h) { return BasicTerm::weight(std::move(seq), std::move(h)); }
Factor weight(const std::string& ob, std::string h) { return weight(ObsSequence{ob}, std::move(h)); }

Monomial mono(long c, std::vector<Factor> fs) { return {BigInt(c), std::move(fs)}; }

FP cmp(std::vector<Monomial> ms, Relation rel, long rhs) {
    Comparison c;
    c.lhs = normalize(Polynomial{std::move(ms)});
    c.rel = rel;
    c.rhs = rhs;
    return Formula::compare(std::move(c));
}

FP big_or(const std::vector<FP>& fs) {
    FP acc = fs.at(0);
    for (size_t i = 1; i < fs.size(); ++i) acc = Formula::disj(acc, fs[i]);
    return acc;
}

bool eval_hyp(const HypFormula& rho, const std::map<std::string, bool>& val) {
    switch (rho.kind) {
    case HypFormula::Kind::Atom: return val.at(rho.name);
    case HypFormula::Kind::Not: return !eval_hyp(*rho.left, val);
    case HypFormula::Kind::And: return eval_hyp(*rho.left, val) && eval_hyp(*rho.right, val);
    }
    return false;
}

void hyp_atoms(const HypFormula& rho, std::vector<std::string>& out) {
    if (rho.kind == HypFormula::Kind::Atom) {
        if (std::find(out.begin(), out.end(), rho.name) == out.end()) out.push_back(rho.name);
        return;
    }
    hyp_atoms(*rho.left, out);
    if (rho.right) hyp_atoms(*rho.right, out);
}

// Hypothesis formulas used to instantiate the probability schemas.
std::vector<HP> hyp_pool(const Signature& sig) {
    std::vector<HP> pool;
    std::vector<HP> atoms;
    for (const auto& h : sig.hypotheses) atoms.push_back(HypFormula::atom(h));
    pool.push_back(HypFormula::truth(sig));
    pool.push_back(HypFormula::falsity(sig));
    for (const auto& a : atoms) pool.push_back(a);
    for (const auto& a : atoms) pool.push_back(HypFormula::negate(a));
    for (size_t i = 0; i < atoms.size(); ++i)
        for (size_t j = i + 1; j < atoms.size(); ++j) {
            pool.push_back(HypFormula::conj(atoms[i], atoms[j]));
            pool.push_back(HypFormula::disj(atoms[i], atoms[j]));
            pool.push_back(HypFormula::disj(atoms[j], atoms[i]));
            pool.push_back(HypFormula::negate(HypFormula::conj(atoms[i], HypFormula::negate(atoms[j]))));
        }
    if (atoms.size() >= 2) {
        pool.push_back(HypFormula::conj(atoms[0], atoms[0]));
        pool.push_back(HypFormula::disj(HypFormula::negate(atoms[0]), atoms[1]));
    }
    return pool;
}

class Auditor {
public:
    AuditReport report;

    void check(const std::string& axiom, const FP& f, size_t time,
               const std::function<bool(const Formula&)>& holds) {
        AuditEntry e;
        e.axiom = axiom;
        e.instance = print(*f);
        e.time = time;
        try {
            e.passed = holds(*f);
            if (!e.passed) e.detail = "instance is false";
        } catch (const Error& err) {
            e.passed = false;
            e.detail = err.what();
        }
        report.entries.push_back(std::move(e));
    }

    void record(const std::string& axiom, const std::string& instance, size_t time, bool ok,
                std::string detail) {
        report.entries.push_back({axiom, instance, time, ok, std::move(detail)});
    }
};

bool selected(const std::vector<std::string>& groups, const char* g) {
    return std::find(groups.begin(), groups.end(), g) != groups.end();
}

void hypothesis_axioms(Auditor& a, const Signature& sig, size_t t,
                       const std::function<bool(const Formula&)>& holds) {
    std::vector<FP> atoms;
    for (const auto& h : sig.hypotheses) atoms.push_back(Formula::hyp(h));
    a.check("H1", big_or(atoms), t, holds);
    for (size_t i = 0; i < atoms.size(); ++i)
        for (size_t j = 0; j < atoms.size(); ++j)
            if (i != j) a.check("H2", Formula::implies(atoms[i], Formula::negate(atoms[j])), t, holds);
}

void observation_axioms(Auditor& a, const Signature& sig, size_t t, bool with_o1,
                        const std::function<bool(const Formula&)>& holds) {
    std::vector<FP> atoms;
    for (const auto& o : sig.observations) atoms.push_back(Formula::obs(o));
    if (with_o1) a.check("O1", big_or(atoms), t, holds);
    for (size_t i = 0; i < atoms.size(); ++i)
        for (size_t j = 0; j < atoms.size(); ++j)
            if (i != j) a.check("O2", Formula::implies(atoms[i], Formula::negate(atoms[j])), t, holds);
}

// Pr1-4 (posterior = false) or Po1-4 (posterior = true).
void probability_axioms(Auditor& a, const Signature& sig, bool posterior, size_t t,
                        const std::function<bool(const Formula&)>& holds) {
    const std::string p = posterior ? "Po" : "Pr";
    auto term = [&](HP rho) { return posterior ? post(std::move(rho)) : prior(std::move(rho)); };
    auto pool = hyp_pool(sig);
    a.check(p + "1", cmp({mono(1, {term(HypFormula::truth(sig))})}, Relation::Eq, 1), t, holds);
    for (const auto& rho : pool) a.check(p + "2", cmp({mono(1, {term(rho)})}, Relation::Ge, 0), t, holds);
    for (const auto& r1 : pool)
        for (const auto& r2 : pool) {
            auto f = cmp({mono(1, {term(HypFormula::conj(r1, r2))}),
                          mono(1, {term(HypFormula::conj(r1, HypFormula::negate(r2)))}),
                          mono(-1, {term(r1)})},
                         Relation::Eq, 0);
            a.check(p + "3", f, t, holds);
        }
    for (size_t i = 0; i < pool.size(); ++i)
        for (size_t j = 0; j < pool.size(); ++j) {
            if (i == j || !propositionally_equivalent(*pool[i], *pool[j])) continue;
            a.check(p + "4", cmp({mono(1, {term(pool[i])}), mono(-1, {term(pool[j])})}, Relation::Eq, 0),
                    t, holds);
        }
}

void weight_axioms_12(Auditor& a, const Signature& sig, size_t t,
                      const std::function<bool(const Formula&)>& holds) {
    for (const auto& o : sig.observations) {
        std::vector<Monomial> sum;
        for (const auto& h : sig.hypotheses) {
            a.check("E1", cmp({mono(1, {weight(o, h)})}, Relation::Ge, 0), t, holds);
            sum.push_back(mono(1, {weight(o, h)}));
        }
        a.check("E2", cmp(std::move(sum), Relation::Eq, 1), t, holds);
    }
}

void weight_axiom_4(Auditor& a, const EvidenceSpace& space) {
    Wf2Result r = check_wf2(weight_table_of(space));
    a.record("E4", "exists x_1..x_n > 0 with sum_i w(ob_i,h) x_i = 1 for every h", 0, r.feasible(),
             r.message());
}

} // namespace

bool propositionally_equivalent(const HypFormula& a, const HypFormula& b) {
    std::vector<std::string> atoms;
    hyp_atoms(a, atoms);
    hyp_atoms(b, atoms);
    if (atoms.size() > 20) throw InvalidStructure("too many atoms for a truth-table check");
    for (unsigned long bits = 0; bits < (1ul << atoms.size()); ++bits) {
        std::map<std::string, bool> val;
        for (size_t i = 0; i < atoms.size(); ++i) val[atoms[i]] = (bits >> i) & 1u;
        if (eval_hyp(a, val) != eval_hyp(b, val)) return false;
    }
    return true;
}

AuditReport audit_world(const EvidentialWorld& w, const std::vector<std::string>& requested) {
    std::vector<std::string> groups = requested;
    if (groups.empty()) groups = {"H", "O", "Pr", "Po", "E"};
    Signature sig = Signature::of(w.space);
    Auditor a;
    auto holds = [&](const Formula& f) { return satisfies(f, w); };
    if (selected(groups, "H")) hypothesis_axioms(a, sig, 0, holds);
    if (selected(groups, "O")) observation_axioms(a, sig, 0, true, holds);
    if (selected(groups, "Pr")) probability_axioms(a, sig, false, 0, holds);
    if (selected(groups, "Po")) probability_axioms(a, sig, true, 0, holds);
    if (selected(groups, "E")) {
        weight_axioms_12(a, sig, 0, holds);
        for (const auto& o : sig.observations)
            for (const auto& h : sig.hypotheses) {
                auto any = HypFormula::atom(h);
                std::vector<Monomial> ms{mono(1, {prior(any), weight(o, h)})};
                for (const auto& hi : sig.hypotheses)
                    ms.push_back(mono(-1, {post(any), prior(HypFormula::atom(hi)), weight(o, hi)}));
                a.check("E3", Formula::implies(Formula::obs(o), cmp(std::move(ms), Relation::Eq, 0)), 0,
                        holds);
            }
        weight_axiom_4(a, w.space);
    }
    if (selected(groups, "E'")) {
        CheckOptions un{WeightSemantics::Unnormalized, false};
        auto holds_u = [&](const Formula& f) { return satisfies(f, w, {}, un); };
        for (const auto& h : sig.hypotheses) {
            std::vector<Monomial> sum;
            for (const auto& o : sig.observations) {
                a.check("E1'", cmp({mono(1, {weight(o, h)})}, Relation::Ge, 0), 0, holds_u);
                sum.push_back(mono(1, {weight(o, h)}));
            }
            a.check("E2'", cmp(std::move(sum), Relation::Eq, 1), 0, holds_u);
        }
    }
    return a.report;
}

namespace {

void all_sequences(const std::vector<std::string>& obs, size_t max_len,
                   const std::function<void(const ObsSequence&)>& fn) {
    ObsSequence cur;
    std::function<void()> rec = [&]() {
        if (!cur.empty()) fn(cur);
        if (cur.size() == max_len) return;
        for (const auto& o : obs) {
            cur.push_back(o);
            rec();
            cur.pop_back();
        }
    };
    rec();
}

bool possible(const EvidenceSpace& space, const ObsSequence& seq) {
    for (const auto& h : space.hypotheses())
        if (!sequence_likelihood(space, h, seq).is_zero()) return true;
    return false;
}

std::optional<ObsSequence> possible_pair(const EvidenceSpace& space) {
    for (const auto& a : space.observations())
        for (const auto& b : space.observations())
            if (possible(space, {a, b})) return ObsSequence{a, b};
    return std::nullopt;
}

} // namespace

AuditReport audit_run(const EvidentialRun& r, size_t horizon, const std::vector<std::string>& requested) {
    std::vector<std::string> groups = requested;
    if (groups.empty()) groups = {"H", "O", "Po", "E", "E5", "E6", "T"};
    Signature sig = Signature::of(r.space);
    Auditor a;

    for (size_t m = 0; m <= horizon; ++m) {
        auto holds = [&, m](const Formula& f) { return satisfies_at(f, r, m); };
        if (selected(groups, "H")) hypothesis_axioms(a, sig, m, holds);
        if (selected(groups, "O")) observation_axioms(a, sig, m, m >= 1, holds);
        if (selected(groups, "Po")) probability_axioms(a, sig, true, m, holds);
        if (selected(groups, "E")) weight_axioms_12(a, sig, m, holds);

        if (selected(groups, "E5")) {
            // X(ob) => (X(Pr(h) = x) => Pr(h) w(ob,h) = x Pr(h_1) w(ob,h_1) + ...), with x
            // bound to the posterior of h one step later.
            std::optional<Distribution> later;
            try {
                later = run_posterior(r, m + 1);
            } catch (const Error& e) {
                a.record("E5", "posterior at time " + std::to_string(m + 1), m, false, e.what());
            }
            for (const auto& o : sig.observations)
                for (const auto& h : sig.hypotheses) {
                    if (!later) break;
                    auto hh = HypFormula::atom(h);
                    std::vector<Monomial> ms{mono(1, {post(hh), weight(o, h)})};
                    for (const auto& hi : sig.hypotheses)
                        ms.push_back(mono(-1, {Variable{"x"}, post(HypFormula::atom(hi)), weight(o, hi)}));
                    FP antecedent = Formula::next(cmp({mono(1, {post(hh)}), mono(-1, {Variable{"x"}})},
                                                      Relation::Eq, 0));
                    FP f = Formula::implies(Formula::next(Formula::obs(o)),
                                            Formula::implies(antecedent, cmp(std::move(ms), Relation::Eq, 0)));
                    Valuation v{{"x", later->mass(h)}};
                    a.check("E5", f, m, [&](const Formula& g) { return satisfies_at(g, r, m, v); });
                }
        }

        if (selected(groups, "T")) {
            const std::string& h0 = sig.hypotheses.front();
            const std::string& hl = sig.hypotheses.back();
            const std::string& o0 = sig.observations.front();
            const std::string& ol = sig.observations.back();
            std::vector<FP> pool{
                Formula::hyp(h0),
                Formula::obs(o0),
                Formula::negate(Formula::obs(ol)),
                cmp({mono(2, {post(HypFormula::atom(h0))})}, Relation::Ge, 1),
                cmp({mono(1, {post(HypFormula::atom(hl))}), mono(-1, {post(HypFormula::atom(h0))})},
                    Relation::Gt, 0),
                cmp({mono(3, {weight(o0, h0)})}, Relation::Ge, 1),
                Formula::next(Formula::obs(ol)),
            };
            for (const auto& phi : pool)
                for (const auto& psi : pool) {
                    FP t1 = Formula::implies(
                        Formula::conj(Formula::next(phi), Formula::next(Formula::implies(phi, psi))),
                        Formula::next(psi));
                    a.check("T1", t1, m, holds);
                }
            for (const auto& phi : pool)
                a.check("T2",
                        Formula::iff(Formula::next(Formula::negate(phi)),
                                     Formula::negate(Formula::next(phi))),
                        m, holds);
            // T3 is a rule: valid formulas stay valid one step later.
            std::vector<FP> valid;
            {
                std::vector<FP> atoms;
                for (const auto& h : sig.hypotheses) atoms.push_back(Formula::hyp(h));
                valid.push_back(big_or(atoms));
                valid.push_back(cmp({mono(1, {post(HypFormula::truth(sig))})}, Relation::Eq, 1));
                std::vector<Monomial> sum;
                for (const auto& h : sig.hypotheses) sum.push_back(mono(1, {weight(o0, h)}));
                valid.push_back(cmp(std::move(sum), Relation::Eq, 1));
                valid.push_back(Formula::implies(Formula::obs(o0), Formula::negate(Formula::obs(ol))));
            }
            for (const auto& phi : valid) {
                if (o0 == ol && phi->kind == Formula::Kind::Not) continue;
                a.check("T3", Formula::next(phi), m, holds);
            }
            for (const auto& rho : hyp_pool(sig)) {
                FP f = Formula::from_hyp(rho);
                a.check("T4", Formula::iff(Formula::next(f), f), m, holds);
            }
            std::vector<FP> static_terms{
                cmp({mono(2, {weight(o0, h0)})}, Relation::Ge, 1),
                cmp({mono(4, {weight(ol, hl)})}, Relation::Eq, 1),
            };
            if (auto pair = possible_pair(r.space)) {
                static_terms.push_back(cmp({mono(3, {weight(*pair, hl)})}, Relation::Gt, 1));
                static_terms.push_back(cmp({mono(1, {weight((*pair)[0], h0), weight((*pair)[1], hl)}),
                                            mono(-1, {weight(*pair, h0)})},
                                           Relation::Ge, 0));
            }
            for (const auto& f : static_terms) a.check("T5", Formula::iff(Formula::next(f), f), m, holds);
            for (const auto& phi : pool)
                a.check("T6",
                        Formula::iff(Formula::next(Formula::forall("q", phi)),
                                     Formula::forall("q", Formula::next(phi))),
                        m, holds);
        }
    }

    if (selected(groups, "E")) weight_axiom_4(a, r.space);

    if (selected(groups, "E6")) {
        all_sequences(sig.observations, std::max<size_t>(horizon, 1), [&](const ObsSequence& seq) {
            for (const auto& h : sig.hypotheses) {
                std::vector<Factor> lhs;
                for (const auto& o : seq) lhs.push_back(weight(o, h));
                std::vector<Monomial> ms{mono(1, lhs)};
                for (const auto& hi : sig.hypotheses) {
                    std::vector<Factor> fs{weight(seq, h)};
                    for (const auto& o : seq) fs.push_back(weight(o, hi));
                    ms.push_back(mono(-1, std::move(fs)));
                }
                FP f = cmp(std::move(ms), Relation::Eq, 0);
                if (!possible(r.space, seq)) {
                    a.record("E6", print(*f), 0, true, "vacuous: sequence has probability 0");
                    continue;
                }
                a.check("E6", f, 0, [&](const Formula& g) { return satisfies_at(g, r, 0); });
            }
        });
    }
    return a.report;
}

} // namespace evidence
