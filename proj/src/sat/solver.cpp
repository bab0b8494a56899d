#include "evidence/sat_solver.hpp"

#include "sat/internal.hpp"

#include "evidence/characterization.hpp"
#include "evidence/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>

namespace evidence {

const char* verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Sat: return "SAT";
    case Verdict::Unsat: return "UNSAT";
    case Verdict::Unknown: return "UNKNOWN";
    }
    return "?";
}

Signature augment_signature(const Formula& f) {
    MentionedNames names = mentioned_names(f);
    std::vector<std::string> hyps(names.hypotheses.begin(), names.hypotheses.end());
    std::vector<std::string> obs(names.observations.begin(), names.observations.end());
    hyps.push_back("h*");
    obs.push_back("ob*");
    return Signature(std::move(hyps), std::move(obs));
}

namespace sat {

Rational snap(double v, long max_den) {
    Rational exact = Rational::from_double(v);
    BigInt num = exact.numerator(), den = exact.denominator();
    BigInt p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    while (den != 0) {
        BigInt a;
        mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        BigInt p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        BigInt r = num - a * den;
        num = den;
        den = r;
    }
    if (q1 == 0) return exact;
    return Rational(p1, q1);
}

namespace {

std::optional<EvidentialWorld> build_world(const Context& ctx, const Problem& P, const std::vector<double>& x,
                                           long max_den) {
    const Layout& L = P.layout;
    auto value = [&](double v) {
        if (v < 1e-13) return Rational(); // polishing leaves dust where a value should be 0
        return max_den > 0 ? snap(v, max_den) : Rational::from_double(v);
    };

    std::vector<std::vector<Rational>> z(L.no, std::vector<Rational>(L.nh));
    for (size_t i = 0; i < L.no; ++i) {
        Rational total;
        for (size_t j = 0; j < L.nh; ++j) {
            z[i][j] = value(x[L.z(i, j)]);
            total += z[i][j];
        }
        if (total.is_zero()) return std::nullopt;
        for (auto& e : z[i]) e = e / total;
    }

    std::vector<Rational> s(L.no);
    Wf2Result wf2 = check_wf2(WeightTable(ctx.sig.hypotheses, ctx.sig.observations, z));
    std::vector<std::vector<Rational>> mu(L.nh, std::vector<Rational>(L.no));
    if (wf2.feasible()) {
        for (size_t i = 0; i < L.no; ++i) s[i] = wf2.certificate->scalars[i];
        for (size_t j = 0; j < L.nh; ++j)
            for (size_t i = 0; i < L.no; ++i) mu[j][i] = z[i][j] * s[i];
    } else {
        for (size_t i = 0; i < L.no; ++i) {
            s[i] = value(x[L.s(i)]);
            if (s[i].sign() <= 0) return std::nullopt;
        }
        for (size_t j = 0; j < L.nh; ++j) {
            Rational total;
            for (size_t i = 0; i < L.no; ++i) {
                mu[j][i] = z[i][j] * s[i];
                total += mu[j][i];
            }
            if (total.is_zero()) return std::nullopt;
            for (auto& m : mu[j]) m = m / total;
        }
    }

    std::vector<Rational> prior(L.nh);
    if (L.use_x) {
        Rational total;
        for (size_t j = 0; j < L.nh; ++j) {
            prior[j] = value(x[L.x(j)]);
            total += prior[j];
        }
        if (total.is_zero()) return std::nullopt;
        for (auto& p : prior) p = p / total;
    } else {
        for (auto& p : prior) p = Rational(1, L.nh);
    }

    try {
        EvidenceSpace space(ctx.sig.hypotheses, ctx.sig.observations, std::move(mu));
        EvidentialWorld w(ctx.sig.hypotheses[P.hc], ctx.sig.observations[P.oc],
                          Distribution(ctx.sig.hypotheses, std::move(prior)), std::move(space));
        if (L.use_y) world_posterior(w); // throws on a degenerate update
        return w;
    } catch (const Error&) {
        return std::nullopt;
    }
}

double coefficient_scale(const Comparison& c) {
    double m = std::max(1.0, std::fabs(Rational(c.rhs).to_double()));
    for (const auto& mono : c.lhs.monomials) m = std::max(m, std::fabs(Rational(mono.coefficient).to_double()));
    return m;
}

} // namespace

std::optional<double> tolerant_check(const Context& ctx, const Problem& P, const EvidentialWorld& w) {
    double worst = 0.0;
    for (size_t k = 0; k < ctx.cases.comparisons.size(); ++k) {
        int8_t s = P.signs[k];
        if (s == DontCare) continue;
        const Comparison& c = *ctx.cases.comparisons[k];
        Rational d = eval_term(c.lhs, w) - Rational(c.rhs);
        double r = d.to_double() / coefficient_scale(c);
        int sg = d.sign();
        double viol = 0.0;
        switch (s) {
        case True:
            if (c.rel == Relation::Gt && sg <= 0) return std::nullopt;
            if (c.rel == Relation::Ge && sg < 0) viol = -r;
            if (c.rel == Relation::Eq) viol = std::fabs(r);
            break;
        case False:
            if (c.rel == Relation::Ge && sg >= 0) return std::nullopt;
            if (c.rel == Relation::Gt && sg > 0) viol = r;
            break;
        case FalseAbove:
            if (sg <= 0) return std::nullopt;
            break;
        case FalseBelow:
            if (sg >= 0) return std::nullopt;
            break;
        default: break;
        }
        if (!(viol <= ctx.opts.tolerance)) return std::nullopt;
        worst = std::max(worst, viol);
    }
    return worst;
}

std::optional<SatModel> verify_point(const Context& ctx, const Problem& P, const std::vector<double>& x) {
    for (long den : {12L, 1000L, 1000000L, 1000000000L, 0L}) {
        auto w = build_world(ctx, P, x, den);
        if (!w) continue;
        bool ok = false;
        try {
            ok = satisfies(ctx.formula, *w);
        } catch (const Error&) {
            ok = false;
        }
        if (ok) return SatModel{std::move(*w), true, 0.0};
        if (den == 1000000000L || den == 0) {
            if (auto r = tolerant_check(ctx, P, *w)) return SatModel{std::move(*w), false, *r};
        }
    }
    return std::nullopt;
}

} // namespace sat

namespace {

void accumulate(SatStats& into, const SatStats& s) {
    into.cases_pruned_at_root += s.cases_pruned_at_root;
    into.boxes += s.boxes;
    into.max_depth = std::max(into.max_depth, s.max_depth);
    into.polish_calls += s.polish_calls;
    into.lp_calls += s.lp_calls;
}

void check_names(const Formula& f, const Signature& sig) {
    MentionedNames names = mentioned_names(f);
    for (const auto& h : names.hypotheses)
        if (!sig.is_hypothesis(h)) throw UnknownName("hypothesis '" + h + "' is not in the signature");
    for (const auto& ob : names.observations)
        if (!sig.is_observation(ob)) throw UnknownName("observation '" + ob + "' is not in the signature");
}

} // namespace

SatResult solve(const Formula& f, const Signature& sig, const SolveOptions& opts) {
    using namespace sat;
    auto started = std::chrono::steady_clock::now();
    Fragment frag = classify_fragment(f);
    if (frag != Fragment::Lw && frag != Fragment::Lev)
        throw FragmentUnsupported(std::string("the solver decides L^w and L^ev; this formula is ") +
                                  fragment_name(frag) + ", use emit-rcf");
    check_names(f, sig);

    CaseSpace cs = build_case_space(f, sig);
    Context ctx{f, sig, cs, opts};
    const bool linear = frag == Fragment::Lw;

    SatResult result;
    result.route = linear ? "linear" : "polynomial";
    result.stats.hypothesis_cases = cs.hypothesis_cases.size();
    result.stats.observation_cases = cs.observation_cases.size();

    std::vector<Problem> problems;
    for (size_t oc : cs.observation_cases)
        for (size_t hc : cs.hypothesis_cases)
            for (auto& signs : sign_patterns(f, sig, cs, hc, oc)) problems.push_back(build_problem(sig, cs, hc, oc, signs));
    result.stats.sign_cases = problems.size();

    auto seed_of = [&](size_t i) { return opts.seed * 1000003ULL + i; };
    auto finish = [&](SatResult& r) {
        r.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        return r;
    };

    // quick pass: root pruning and polishing, in case order
    std::vector<size_t> pending;
    for (size_t i = 0; i < problems.size(); ++i) {
        CaseOutcome o = linear ? quick_linear(ctx, problems[i]) : quick_polynomial(ctx, problems[i], seed_of(i));
        accumulate(result.stats, o.stats);
        if (o.kind == CaseOutcome::Kind::Sat) {
            result.verdict = Verdict::Sat;
            result.model = std::move(o.model);
            return finish(result);
        }
        if (o.kind == CaseOutcome::Kind::Unknown) pending.push_back(i);
    }

    std::vector<CaseOutcome> outcomes(pending.size());
    auto work = [&](size_t k, const std::atomic<size_t>* best) {
        const Problem& P = problems[pending[k]];
        return linear ? search_linear(ctx, P, best, k) : search_polynomial(ctx, P, seed_of(pending[k]), best, k);
    };

    size_t first_sat = pending.size();
    if (opts.parallel && pending.size() > 1) {
        unsigned n = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
        n = static_cast<unsigned>(std::min<size_t>(n, pending.size()));
        std::atomic<size_t> next{0};
        std::atomic<size_t> best{pending.size()};
        std::vector<std::exception_ptr> errors(n);
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (size_t k = next++; k < pending.size(); k = next++) {
                        if (best.load() < k) continue;
                        outcomes[k] = work(k, &best);
                        if (outcomes[k].kind == CaseOutcome::Kind::Sat) {
                            size_t cur = best.load();
                            while (k < cur && !best.compare_exchange_weak(cur, k)) {
                            }
                        }
                    }
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
        first_sat = best.load();
    } else {
        for (size_t k = 0; k < pending.size(); ++k) {
            outcomes[k] = work(k, nullptr);
            if (outcomes[k].kind == CaseOutcome::Kind::Sat) {
                first_sat = k;
                break;
            }
        }
    }

    size_t last = std::min(first_sat + 1, pending.size());
    size_t unknown = 0;
    std::string reason;
    for (size_t k = 0; k < last; ++k) {
        accumulate(result.stats, outcomes[k].stats);
        if (outcomes[k].kind == CaseOutcome::Kind::Unknown) {
            ++unknown;
            if (reason.empty()) reason = outcomes[k].reason;
        }
    }
    if (first_sat < pending.size()) {
        result.verdict = Verdict::Sat;
        result.model = std::move(outcomes[first_sat].model);
    } else if (unknown == 0) {
        result.verdict = Verdict::Unsat;
        result.reason = "every case was refuted (" + std::to_string(problems.size()) + " sign cases)";
    } else {
        result.verdict = Verdict::Unknown;
        result.reason = reason + " in " + std::to_string(unknown) + " of " + std::to_string(problems.size()) +
                        " sign cases";
    }
    return finish(result);
}

} // namespace evidence
