#include "sat/internal.hpp"

#include "evidence/lp.hpp"

#include <algorithm>
#include <cmath>

namespace evidence::sat {

bool certified_violation(const Interval& range, Rel rel, double margin) {
    switch (rel) {
    case Rel::Ge: return range.hi < -margin;
    case Rel::Gt: return range.hi <= -margin;
    case Rel::Eq: return range.lo > margin || range.hi < -margin;
    }
    return false;
}

bool contract(const Problem& P, std::vector<Interval>& box, double margin) {
    for (int sweep = 0; sweep < 40; ++sweep) {
        bool changed = false;
        for (const Constraint& c : P.constraints) {
            Interval range = c.p.range(box);
            if (certified_violation(range, c.rel, margin)) return false;
            for (const auto& sp : c.splits) {
                Interval a = sp.a.range(box);
                if (a.contains(0.0)) continue;
                Interval b = sp.b.range(box);
                // a*v + b rel 0  =>  a*v in target
                Interval target{-b.hi - margin, c.rel == Rel::Eq ? -b.lo + margin : Interval::inf};
                target.lo = down(target.lo);
                target.hi = up(target.hi);
                Interval cand = divide(target, a);
                Interval& cur = box[sp.var];
                Interval next = intersect(cur, cand);
                if (next.empty()) return false;
                if (next.width() < cur.width() * 0.999) changed = true;
                cur = next;
            }
        }
        if (!changed) break;
    }
    return true;
}

bool linear_part_infeasible(const Problem& P, const std::vector<Interval>* box, SatStats& stats) {
    const size_t n = P.layout.n;
    LinearProgram lp;
    lp.num_vars = n + 1; // last: epsilon for strict rows
    bool strict = false;
    for (const Constraint& c : P.constraints) {
        if (c.p.degree() > 1) continue;
        std::vector<Rational> row(n + 1);
        Rational constant;
        for (const auto& t : c.p.terms()) {
            if (t.powers.empty())
                constant += t.coef;
            else
                row[t.powers[0].first] += t.coef;
        }
        LinearProgram::Relation rel = c.rel == Rel::Eq ? LinearProgram::Relation::Eq : LinearProgram::Relation::Ge;
        if (c.rel == Rel::Gt) {
            row[n] = Rational(-1);
            strict = true;
        }
        lp.add(std::move(row), rel, -constant);
    }
    for (size_t v = 0; v < n; ++v) {
        const Interval& iv = box ? (*box)[v] : P.root[v];
        std::vector<Rational> row(n + 1);
        row[v] = Rational(1);
        lp.add(row, LinearProgram::Relation::Le, Rational::from_double(iv.hi));
        if (iv.lo > 0.0) lp.add(row, LinearProgram::Relation::Ge, Rational::from_double(iv.lo));
    }
    std::vector<Rational> eps(n + 1);
    eps[n] = Rational(1);
    lp.add(eps, LinearProgram::Relation::Le, Rational(1));
    lp.objective.assign(n + 1, Rational());
    lp.objective[n] = Rational(1);
    ++stats.lp_calls;
    LpResult res = solve_lp(lp);
    if (res.status != LpResult::Status::Optimal) return true;
    return strict && res.value.sign() <= 0;
}

namespace {

bool cancelled(const std::atomic<size_t>* best, size_t me) {
    return best && best->load(std::memory_order_relaxed) < me;
}

std::optional<SatModel> try_start(const Context& ctx, const Problem& P, std::vector<double> x,
                                  SatStats& stats) {
    ++stats.polish_calls;
    double cost = polish(P, x, ctx.opts.polish_iterations);
    if (!(cost < 1e-12)) return std::nullopt;
    return verify_point(ctx, P, x);
}

std::vector<double> midpoint(const std::vector<Interval>& box) {
    std::vector<double> x(box.size());
    for (size_t j = 0; j < box.size(); ++j) x[j] = box[j].mid();
    return x;
}

} // namespace

CaseOutcome quick_polynomial(const Context& ctx, const Problem& P, uint64_t seed) {
    CaseOutcome out;
    std::vector<Interval> box = P.root;
    if (!contract(P, box, ctx.opts.margin) || linear_part_infeasible(P, &box, out.stats)) {
        out.kind = CaseOutcome::Kind::Unsat;
        out.stats.cases_pruned_at_root = 1;
        return out;
    }
    if (auto m = try_start(ctx, P, midpoint(box), out.stats)) {
        out.kind = CaseOutcome::Kind::Sat;
        out.model = std::move(m);
        return out;
    }
    std::mt19937_64 rng(seed);
    for (size_t r = 0; r < ctx.opts.restarts; ++r) {
        std::vector<double> x(box.size());
        for (size_t j = 0; j < box.size(); ++j) {
            std::uniform_real_distribution<double> d(box[j].lo, box[j].hi);
            x[j] = box[j].width() > 0 ? d(rng) : box[j].lo;
        }
        if (auto m = try_start(ctx, P, std::move(x), out.stats)) {
            out.kind = CaseOutcome::Kind::Sat;
            out.model = std::move(m);
            return out;
        }
    }
    out.kind = CaseOutcome::Kind::Unknown;
    return out;
}

CaseOutcome search_polynomial(const Context& ctx, const Problem& P, uint64_t seed,
                              const std::atomic<size_t>* best, size_t my_index) {
    CaseOutcome out;
    struct Node {
        std::vector<Interval> box;
        size_t depth;
    };
    std::vector<Node> stack{{P.root, 0}};
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    size_t unresolved = 0;
    bool budget_hit = false;
    while (!stack.empty()) {
        if (cancelled(best, my_index)) {
            out.reason = "cancelled";
            return out;
        }
        if (out.stats.boxes >= ctx.opts.budget_boxes) {
            budget_hit = true;
            break;
        }
        Node node = std::move(stack.back());
        stack.pop_back();
        ++out.stats.boxes;
        out.stats.max_depth = std::max(out.stats.max_depth, node.depth);
        if (!contract(P, node.box, ctx.opts.margin)) continue;

        bool deep = node.depth >= 12;
        if (deep && node.depth % 4 == 0 && linear_part_infeasible(P, &node.box, out.stats)) continue;

        if (node.depth <= 3 || out.stats.boxes % 16 == 0) {
            std::vector<double> x = midpoint(node.box);
            if (out.stats.boxes % 32 == 0) {
                for (size_t j = 0; j < x.size(); ++j) {
                    std::uniform_real_distribution<double> d(node.box[j].lo, node.box[j].hi);
                    if (node.box[j].width() > 0) x[j] = d(rng);
                }
            }
            if (auto m = try_start(ctx, P, std::move(x), out.stats)) {
                out.kind = CaseOutcome::Kind::Sat;
                out.model = std::move(m);
                return out;
            }
        }

        size_t var = 0;
        double widest = -1.0;
        for (size_t j = 0; j < node.box.size(); ++j) {
            double w0 = P.root[j].width();
            double rel = w0 > 0 ? node.box[j].width() / w0 : 0.0;
            if (rel > widest) {
                widest = rel;
                var = j;
            }
        }
        if (node.depth >= ctx.opts.max_depth || widest < 1e-12) {
            ++unresolved;
            continue;
        }
        double mid = node.box[var].mid();
        Node left{node.box, node.depth + 1};
        Node right{std::move(node.box), node.depth + 1};
        left.box[var].hi = mid;
        right.box[var].lo = mid;
        stack.push_back(std::move(right));
        stack.push_back(std::move(left));
    }
    if (budget_hit) {
        out.kind = CaseOutcome::Kind::Unknown;
        out.reason = "box budget exhausted";
    } else if (unresolved > 0) {
        out.kind = CaseOutcome::Kind::Unknown;
        out.reason = "boxes at the resolution limit could not be decided";
    } else {
        out.kind = CaseOutcome::Kind::Unsat;
    }
    return out;
}

} // namespace evidence::sat
