// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "corpus.hpp"

#include "evidence/audit.hpp"
#include "evidence/characterization.hpp"
#include "evidence/errors.hpp"
#include "evidence/rcf.hpp"
#include "evidence/sat_solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

using namespace evidence;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Collects the first few problems of a criterion for the report line.
struct Check {
    bool ok = true;
    std::ostringstream notes;
    int shown = 0;

    void require(bool cond, const std::string& what) {
        if (cond) return;
        ok = false;
        if (shown++ < 3) notes << " [" << what << "]";
    }
};

BigInt choose(unsigned n, unsigned k) {
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

EvidenceSpace coin_space() {
    std::vector<std::string> obs;
    std::vector<Rational> fair, doubled;
    BigInt two100 = big_pow(2, 100);
    for (unsigned m = 0; m <= 100; ++m) {
        obs.push_back(std::to_string(m));
        fair.push_back(Rational(choose(100, m), two100));
        doubled.push_back(m == 100 ? Rational(1) : Rational(0));
    }
    return EvidenceSpace({"F", "D"}, obs, {fair, doubled});
}

std::string criterion_1(Check& c) {
    auto t0 = Clock::now();
    auto sp = coin_space();
    auto table = weight_table_of(sp);
    BigInt two100 = big_pow(2, 100);
    c.require(table.entry("100", "F") == Rational(BigInt(1), two100 + 1), "w(100,F)");
    c.require(table.entry("100", "D") == Rational(two100, two100 + 1), "w(100,D)");
    for (unsigned m = 0; m < 100; ++m) {
        c.require(table.entry(std::to_string(m), "F") == 1, "w(m,F) at " + std::to_string(m));
        c.require(table.entry(std::to_string(m), "D") == 0, "w(m,D) at " + std::to_string(m));
    }
    double s = seconds_since(t0);
    c.require(s < 1.0, "runtime");
    return "101 observations, " + std::to_string(s) + " s";
}

std::string criterion_2(Check& c) {
    auto sp = coin_space();
    Rational two100(big_pow(2, 100));
    std::vector<Rational> alphas{Rational(1, 2), Rational(BigInt(1), big_pow(10, 100)),
                                 Rational(BigInt(7), big_pow(10, 101)), Rational(BigInt(1), big_pow(2, 100) + 1)};
    for (const auto& a : alphas) {
        auto post = posterior(sp, Distribution({"F", "D"}, {a, Rational(1) - a}), "100");
        c.require(post.mass("F") == a / (a + (Rational(1) - a) * two100), "alpha " + a.str());
    }
    return std::to_string(alphas.size()) + " priors";
}

std::string criterion_3(Check& c) {
    // w(ob,h1) = 2/3: likelihoods 1/2 and 1/4 for ob.
    EvidenceSpace sp({"h1", "h2"}, {"ob", "other"},
                     {{Rational(1, 2), Rational(1, 2)}, {Rational(1, 4), Rational(3, 4)}});
    c.require(weight_of_evidence(sp, "ob", "h1") == Rational(2, 3), "weight 2/3");
    auto f = parse("Pr0(h1) >= 1/100 & ob => Pr(h1) >= 2/101", Signature::of(sp));
    auto post_term = parse("Pr(h1) >= 0", Signature::of(sp))->cmp.lhs;
    size_t swept = 0;
    for (long q = 2; q <= 100; ++q)
        for (long p = 1; p < q; ++p) {
            Rational prior(p, q);
            if (prior.denominator() != q || prior < Rational(1, 100) || prior > Rational(99, 100)) continue;
            ++swept;
            for (const char* h : {"h1", "h2"}) {
                EvidentialWorld w(h, "ob", Distribution({"h1", "h2"}, {prior, Rational(1) - prior}), sp);
                Rational post = eval_term(post_term, w);
                c.require(post == 2 * prior / (1 + prior), "posterior at " + prior.str());
                c.require(post >= Rational(2, 101), "bound at " + prior.str());
                c.require((post == Rational(2, 101)) == (prior == Rational(1, 100)), "equality at " + prior.str());
                c.require(satisfies(*f, w), "implication at " + prior.str());
            }
        }
    return std::to_string(swept) + " priors";
}

std::string criterion_4(Check& c) {
    auto t0 = Clock::now();
    WeightTable counter({"h1", "h2", "h3"}, {"ob1", "ob2"},
                        {{Rational(1, 4), Rational(1, 4), Rational(1, 2)},
                         {Rational(1, 4), Rational(1, 2), Rational(1, 4)}});
    auto r = reconstruct(counter);
    c.require(r.failure == ReconstructResult::Failure::WF2, "counterexample accepted");
    std::mt19937_64 rng(4004);
    size_t n = 500;
    for (size_t k = 0; k < n; ++k) {
        auto sp = gen::space(rng, gen::pick(rng, 1, 5), gen::pick(rng, 1, 5));
        auto table = weight_table_of(sp);
        auto back = reconstruct(table);
        c.require(back.ok() && weight_table_of(*back.space) == table, "round trip " + std::to_string(k));
    }
    double s = seconds_since(t0);
    c.require(s < 10.0, "runtime");
    return std::to_string(n) + " spaces, " + std::to_string(s) + " s";
}

std::string criterion_5(Check& c) {
    std::mt19937_64 rng(5005);
    size_t n = 300, checked = 0;
    for (size_t k = 0; k < n; ++k) {
        auto sp = gen::space(rng, gen::pick(rng, 1, 5), gen::pick(rng, 1, 5));
        auto prior = gen::distribution(rng, sp.hypotheses());
        // Joint P(h, ob) = prior(h) mu_h(ob), conditioned on ob by brute force.
        for (const auto& ob : sp.observations()) {
            Rational col;
            for (const auto& h : sp.hypotheses()) col += prior.mass(h) * sp.likelihood(h, ob);
            if (col.is_zero()) continue;
            auto post = posterior(sp, prior, ob);
            for (const auto& h : sp.hypotheses())
                c.require(post.mass(h) == prior.mass(h) * sp.likelihood(h, ob) / col, "pair " + std::to_string(k));
            ++checked;
        }
        c.require(bayes_check(sp, joint_from_prior(sp, prior)).ok, "bayes_check " + std::to_string(k));
    }
    return std::to_string(n) + " pairs, " + std::to_string(checked) + " updates";
}

std::string criterion_6(Check& c) {
    std::mt19937_64 rng(6006);
    size_t n = 250;
    for (size_t k = 0; k < n; ++k) {
        auto sp = gen::space(rng, gen::pick(rng, 1, 3), gen::pick(rng, 1, 3), true);
        auto seq = gen::sequence(rng, sp, gen::pick(rng, 1, 5));
        auto product = product_space(sp, seq.size());
        Distribution folded = weight_column(sp, seq[0]);
        for (size_t j = 1; j < seq.size(); ++j) folded = dempster_combine(folded, weight_column(sp, seq[j]));
        for (const auto& h : sp.hypotheses()) {
            Rational direct = sequence_weight(sp, seq, h);
            c.require(direct == weight_of_evidence(product, sequence_name(seq), h), "product " + std::to_string(k));
            c.require(direct == folded.mass(h), "fold " + std::to_string(k));
        }
    }
    return std::to_string(n) + " spaces";
}

std::string criterion_7(Check& c) {
    auto t0 = Clock::now();
    Signature sig({"h1", "h2", "h3"}, {"ob1", "ob2"});
    auto f = parse("Pr0(h1) = w(ob1,h1) & Pr0(h2) = 1 - Pr0(h1) & Pr(h1) = 1/2 & w(ob1,h2) = 1/4 & ob1", sig);
    auto r = solve(*f, sig);
    double s = seconds_since(t0);
    c.require(r.verdict == Verdict::Sat && r.model.has_value(), std::string("verdict ") + verdict_name(r.verdict));
    double w = 0;
    if (r.model) {
        w = weight_of_evidence(r.model->world.space, "ob1", "h1").to_double();
        c.require(std::abs(w - (std::sqrt(17.0) - 1) / 8) <= 1e-6, "w(ob1,h1) = " + std::to_string(w));
        c.require(r.model->max_residual <= 1e-9, "residual");
    }
    c.require(s < 30.0, "runtime");
    char buf[160];
    std::snprintf(buf, sizeof buf, "w(ob1,h1) = %.12f, residual %.1e, %.3f s", w,
                  r.model ? r.model->max_residual : 0.0, s);
    return buf;
}

std::string criterion_8(Check& c) {
    auto corpus = corpus::unsat_corpus();
    size_t unsat = 0;
    for (size_t k = 0; k < corpus.size(); ++k) {
        const auto& u = corpus[k];
        auto r = solve(*parse(u.text, u.signature), u.signature);
        c.require(r.verdict != Verdict::Sat, "false SAT on " + u.text);
        if (k < 2) c.require(r.verdict == Verdict::Unsat, "not refuted: " + u.text);
        if (r.verdict == Verdict::Unsat) ++unsat;
    }
    return std::to_string(corpus.size()) + " formulas, " + std::to_string(unsat) + " UNSAT, 0 SAT allowed";
}

std::string criterion_9(Check& c) {
    std::mt19937_64 rng(9009);
    size_t n = 240, sat = 0, unknown = 0;
    auto t0 = Clock::now();
    for (size_t k = 0; k < n; ++k) {
        auto inst = corpus::hidden_world(rng, k % 2 == 0);
        c.require(satisfies(*inst.formula, inst.hidden), "generator");
        auto r = solve(*inst.formula, inst.signature);
        if (r.verdict == Verdict::Unsat) {
            c.require(false, "UNSAT on " + print(*inst.formula));
            continue;
        }
        if (r.verdict == Verdict::Unknown) {
            ++unknown;
            continue;
        }
        ++sat;
        c.require(r.model && r.model->exact && satisfies(*inst.formula, r.model->world),
                  "model fails " + print(*inst.formula));
    }
    c.require(unknown * 10 <= n, "too many UNKNOWN");
    return std::to_string(n) + " instances, " + std::to_string(sat) + " SAT, " + std::to_string(unknown) +
           " UNKNOWN, " + std::to_string(seconds_since(t0)) + " s";
}

std::string criterion_10(Check& c) {
    std::mt19937_64 rng(1010);
    size_t instances = 0;
    for (size_t k = 0; k < 1000; ++k) {
        auto w = gen::world(rng);
        auto rep = audit_world(w, {"H", "O", "Pr", "Po", "E"});
        instances += rep.entries.size();
        c.require(rep.passed(), "world " + std::to_string(k));
    }
    for (size_t k = 0; k < 200; ++k) {
        auto r = gen::run(rng);
        auto rep = audit_run(r, 5, {"E5", "E6", "T"});
        instances += rep.entries.size();
        c.require(rep.passed(), "run " + std::to_string(k));
        auto sum = rep.summary();
        for (const char* ax : {"E5", "E6", "T1", "T2", "T3", "T4", "T5", "T6"})
            c.require(sum.count(ax) && sum[ax].first > 0, std::string("no ") + ax + " instances");
    }
    return "1000 worlds, 200 runs, " + std::to_string(instances) + " instances";
}

std::string criterion_11(Check& c) {
    std::mt19937_64 rng(1111);
    CheckOptions un{WeightSemantics::Unnormalized, false};
    size_t n = 300;
    for (size_t k = 0; k < n; ++k) {
        auto w = gen::world(rng);
        c.require(unnormalized_posterior(w.space, w.prior, w.observation) == posterior(w.space, w.prior, w.observation),
                  "world " + std::to_string(k));
        c.require(world_posterior(w, un) == world_posterior(w), "checker " + std::to_string(k));
        c.require(audit_world(w, {"E'"}).passed(), "E' audit " + std::to_string(k));
        auto r = gen::run(rng);
        for (size_t m = 0; m <= 4; ++m) c.require(run_posterior(r, m, un) == run_posterior(r, m), "run " + std::to_string(k));
    }
    return std::to_string(n) + " worlds and runs";
}

std::string criterion_12(Check& c) {
    std::mt19937_64 rng(1212);
    size_t n = 50, assertions = 0;
    for (size_t k = 0; k < n; ++k) {
        auto w = gen::world(rng, 3, 3);
        auto sig = Signature::of(w.space);
        corpus::FormulaGen g{rng, sig};
        auto f = g.formula(3);
        if (!satisfies(*f, w)) f = Formula::negate(f);
        auto p = rcf::translate_static(*f, sig);
        assertions += p.assertions.size();
        c.require(rcf::violated_assertions(p, rcf::encode_world(p, w)).empty(), "substitution " + std::to_string(k));
        c.require(rcf::emit(p) == rcf::emit(rcf::translate_static(*f, sig)), "determinism " + std::to_string(k));
    }
    Signature sig({"h1", "h2"}, {"ob"});
    auto size_for = [&](unsigned bits) {
        auto f = parse("2^" + std::to_string(bits) + " * w(ob,h1) >= 1", sig);
        return rcf::emit(rcf::translate_static(*f, sig)).size();
    };
    size_t base = size_for(0);
    std::ostringstream sizes;
    size_t prev = size_for(32) - base;
    for (unsigned bits = 64; bits <= 8192; bits *= 2) {
        size_t cur = size_for(bits) - base;
        // linear in the bit length: doubling the bits at most doubles the growth
        c.require(cur <= 2 * prev + 64, "growth at " + std::to_string(bits) + " bits");
        if (bits == 8192) sizes << cur / bits << " chars per bit at 8192 bits";
        prev = cur;
    }
    return std::to_string(n) + " formulas, " + std::to_string(assertions) + " assertions, " + sizes.str();
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<std::string(Check&)> run;
    };
    const Criterion criteria[] = {
        {"coin weights are exact", criterion_1},
        {"coin posterior formula", criterion_2},
        {"x:valid prior sweep", criterion_3},
        {"weight tables: characterization and round trip", criterion_4},
        {"combination equals Bayes conditioning", criterion_5},
        {"sequence weights: product space and iterated combination", criterion_6},
        {"irrational model", criterion_7},
        {"UNSAT soundness", criterion_8},
        {"hidden-world corpus", criterion_9},
        {"axiom audits", criterion_10},
        {"unnormalized weights", criterion_11},
        {"emitter round trip and size", criterion_12},
    };
    int failures = 0, index = 0;
    for (const auto& cr : criteria) {
        ++index;
        Check c;
        std::string detail;
        try {
            detail = cr.run(c);
        } catch (const std::exception& e) {
            c.ok = false;
            detail = std::string("exception: ") + e.what();
        }
        if (!c.ok) ++failures;
        std::cout << (c.ok ? "PASS" : "FAIL") << " " << index << " " << cr.name << ": " << detail << c.notes.str()
                  << std::endl;
    }
    std::cout << (failures ? std::to_string(failures) + " criteria failed" : "all 12 criteria passed") << std::endl;
    return failures ? 1 : 0;
}
