#include "sat/internal.hpp"

#include "evidence/characterization.hpp"
#include "evidence/errors.hpp"
#include "evidence/lp.hpp"

#include <algorithm>

namespace evidence::sat {

namespace {

struct SBox {
    std::vector<Rational> lo, hi;
    size_t depth = 0;
};

// LP over z (and epsilon for strict rows). Extra rows come from the scalar box
// or from fixed scalars.
struct ZProgram {
    const Problem& P;
    size_t nz;
    bool strict = false;
    LinearProgram base;

    explicit ZProgram(const Problem& p) : P(p), nz(p.layout.no * p.layout.nh) {
        const Layout& L = P.layout;
        base.num_vars = nz + 1;
        for (size_t i = 0; i < L.no; ++i) {
            std::vector<Rational> row(nz + 1);
            for (size_t j = 0; j < L.nh; ++j) row[i * L.nh + j] = Rational(1);
            base.add(std::move(row), LinearProgram::Relation::Eq, Rational(1));
        }
        for (const Constraint& c : P.constraints) {
            if (!c.from_formula) continue;
            if (c.p.degree() > 1) throw FragmentUnsupported("nonlinear constraint on the linear route");
            std::vector<Rational> row(nz + 1);
            Rational constant;
            for (const auto& t : c.p.terms()) {
                if (t.powers.empty())
                    constant += t.coef;
                else
                    row[t.powers[0].first - L.z0] += t.coef;
            }
            if (c.rel == Rel::Gt) {
                row[nz] = Rational(-1);
                strict = true;
            }
            base.add(std::move(row), c.rel == Rel::Eq ? LinearProgram::Relation::Eq : LinearProgram::Relation::Ge,
                     -constant);
        }
        std::vector<Rational> eps(nz + 1);
        eps[nz] = Rational(1);
        base.add(eps, LinearProgram::Relation::Le, Rational(1));
        base.objective.assign(nz + 1, Rational());
        base.objective[nz] = Rational(1);
    }

    // Column rows sum_i a_i z_ij rel 1 for every hypothesis.
    void add_columns(LinearProgram& lp, const std::vector<Rational>& a, LinearProgram::Relation rel) const {
        const Layout& L = P.layout;
        for (size_t j = 0; j < L.nh; ++j) {
            std::vector<Rational> row(nz + 1);
            for (size_t i = 0; i < L.no; ++i) row[i * L.nh + j] = a[i];
            lp.add(std::move(row), rel, Rational(1));
        }
    }

    std::optional<std::vector<Rational>> solve(const LinearProgram& lp, SatStats& stats) const {
        ++stats.lp_calls;
        LpResult r = solve_lp(lp);
        if (r.status != LpResult::Status::Optimal) return std::nullopt;
        if (strict && r.value.sign() <= 0) return std::nullopt;
        r.x.resize(nz);
        return r.x;
    }
};

std::optional<SatModel> make_model(const Context& ctx, const Problem& P, const std::vector<Rational>& z,
                                   const std::vector<Rational>& s) {
    const Layout& L = P.layout;
    std::vector<std::vector<Rational>> mu(L.nh, std::vector<Rational>(L.no));
    for (size_t j = 0; j < L.nh; ++j)
        for (size_t i = 0; i < L.no; ++i) mu[j][i] = z[i * L.nh + j] * s[i];
    try {
        EvidenceSpace space(ctx.sig.hypotheses, ctx.sig.observations, std::move(mu));
        EvidentialWorld w(ctx.sig.hypotheses[P.hc], ctx.sig.observations[P.oc],
                          Distribution::uniform(ctx.sig.hypotheses), std::move(space));
        if (!satisfies(ctx.formula, w)) return std::nullopt;
        return SatModel{std::move(w), true, 0.0};
    } catch (const Error&) {
        return std::nullopt;
    }
}

enum class BoxVerdict { Pruned, Found, Open };

BoxVerdict process(const Context& ctx, const ZProgram& zp, const SBox& box, std::optional<SatModel>& model,
                   SatStats& stats) {
    const Layout& L = zp.P.layout;
    Rational nh(static_cast<long>(L.nh));
    Rational lo_sum, hi_sum;
    for (size_t i = 0; i < L.no; ++i) {
        lo_sum += box.lo[i];
        hi_sum += box.hi[i];
    }
    if (lo_sum > nh || hi_sum < nh) return BoxVerdict::Pruned;

    LinearProgram relax = zp.base;
    zp.add_columns(relax, box.lo, LinearProgram::Relation::Le);
    zp.add_columns(relax, box.hi, LinearProgram::Relation::Ge);
    auto z = zp.solve(relax, stats);
    if (!z) return BoxVerdict::Pruned;

    std::vector<std::vector<Rational>> entry(L.no, std::vector<Rational>(L.nh));
    for (size_t i = 0; i < L.no; ++i)
        for (size_t j = 0; j < L.nh; ++j) entry[i][j] = (*z)[i * L.nh + j];
    Wf2Result wf2 = check_wf2(WeightTable(ctx.sig.hypotheses, ctx.sig.observations, entry));
    if (wf2.feasible()) {
        model = make_model(ctx, zp.P, *z, wf2.certificate->scalars);
        if (model) return BoxVerdict::Found;
    }

    std::vector<Rational> mid(L.no);
    Rational total;
    for (size_t i = 0; i < L.no; ++i) {
        mid[i] = (box.lo[i] + box.hi[i]) / Rational(2);
        total += mid[i];
    }
    if (total.sign() > 0) {
        for (auto& m : mid) m = m * nh / total;
        if (std::all_of(mid.begin(), mid.end(), [](const Rational& m) { return m.sign() > 0; })) {
            LinearProgram fixed = zp.base;
            zp.add_columns(fixed, mid, LinearProgram::Relation::Eq);
            if (auto zf = zp.solve(fixed, stats)) {
                model = make_model(ctx, zp.P, *zf, mid);
                if (model) return BoxVerdict::Found;
            }
        }
    }
    return BoxVerdict::Open;
}

SBox root_box(const Problem& P) {
    SBox b;
    b.lo.assign(P.layout.no, Rational());
    b.hi.assign(P.layout.no, Rational(static_cast<long>(P.layout.nh)));
    return b;
}

CaseOutcome run(const Context& ctx, const Problem& P, size_t budget, const std::atomic<size_t>* best,
                size_t my_index) {
    CaseOutcome out;
    ZProgram zp(P);
    std::vector<SBox> stack{root_box(P)};
    size_t unresolved = 0;
    bool budget_hit = false;
    while (!stack.empty()) {
        if (best && best->load(std::memory_order_relaxed) < my_index) {
            out.reason = "cancelled";
            return out;
        }
        if (out.stats.boxes >= budget) {
            budget_hit = true;
            break;
        }
        SBox box = std::move(stack.back());
        stack.pop_back();
        ++out.stats.boxes;
        out.stats.max_depth = std::max(out.stats.max_depth, box.depth);
        std::optional<SatModel> model;
        BoxVerdict v = process(ctx, zp, box, model, out.stats);
        if (v == BoxVerdict::Found) {
            out.kind = CaseOutcome::Kind::Sat;
            out.model = std::move(model);
            return out;
        }
        if (v == BoxVerdict::Pruned) {
            if (box.depth == 0) out.stats.cases_pruned_at_root = 1;
            continue;
        }
        if (box.depth >= ctx.opts.max_depth) {
            ++unresolved;
            continue;
        }
        size_t var = 0;
        Rational widest(-1);
        for (size_t i = 0; i < box.lo.size(); ++i) {
            Rational w = box.hi[i] - box.lo[i];
            if (w > widest) {
                widest = w;
                var = i;
            }
        }
        Rational m = (box.lo[var] + box.hi[var]) / Rational(2);
        SBox left = box, right = std::move(box);
        left.hi[var] = m;
        right.lo[var] = m;
        left.depth = right.depth = left.depth + 1;
        stack.push_back(std::move(right));
        stack.push_back(std::move(left));
    }
    if (budget_hit) {
        out.kind = CaseOutcome::Kind::Unknown;
        out.reason = "box budget exhausted";
    } else if (unresolved > 0) {
        out.kind = CaseOutcome::Kind::Unknown;
        out.reason = "scalar boxes at the depth limit could not be decided";
    } else {
        out.kind = CaseOutcome::Kind::Unsat;
    }
    return out;
}

} // namespace

CaseOutcome quick_linear(const Context& ctx, const Problem& P) {
    CaseOutcome out = run(ctx, P, 1, nullptr, 0);
    // a single box is conclusive only when it settles the case
    if (out.kind == CaseOutcome::Kind::Unknown) out.reason.clear();
    return out;
}

CaseOutcome search_linear(const Context& ctx, const Problem& P, const std::atomic<size_t>* best,
                          size_t my_index) {
    return run(ctx, P, ctx.opts.budget_boxes, best, my_index);
}

} // namespace evidence::sat
