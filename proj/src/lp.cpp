#include "evidence/lp.hpp"

#include <optional>

namespace evidence {

namespace {

class Tableau {
public:
    // rows_ x (cols_ + 1); the last column is the right-hand side.
    std::vector<std::vector<Rational>> a;
    std::vector<size_t> basis;
    size_t cols = 0;
    size_t pivots = 0;

    void pivot(size_t r, size_t c) {
        Rational p = a[r][c];
        for (auto& v : a[r]) v /= p;
        for (size_t i = 0; i < a.size(); ++i) {
            if (i == r || a[i][c].is_zero()) continue;
            Rational f = a[i][c];
            for (size_t j = 0; j <= cols; ++j)
                if (!a[r][j].is_zero()) a[i][j] -= f * a[r][j];
        }
        basis[r] = c;
        ++pivots;
    }

    // Maximizes obj over allowed columns. Returns false when unbounded.
    bool optimize(const std::vector<Rational>& obj, const std::vector<bool>& allowed) {
        while (true) {
            // reduced cost of column j: obj_j - sum_i obj_{basis_i} a_ij
            std::optional<size_t> enter;
            for (size_t j = 0; j < cols && !enter; ++j) {
                if (!allowed[j]) continue;
                bool basic = false;
                for (size_t b : basis) basic = basic || b == j;
                if (basic) continue;
                Rational rc = obj[j];
                for (size_t i = 0; i < a.size(); ++i)
                    if (!a[i][j].is_zero()) rc -= obj[basis[i]] * a[i][j];
                if (rc.sign() > 0) enter = j;
            }
            if (!enter) return true;
            std::optional<size_t> leave;
            Rational best;
            for (size_t i = 0; i < a.size(); ++i) {
                if (a[i][*enter].sign() <= 0) continue;
                Rational ratio = a[i][cols] / a[i][*enter];
                if (!leave || ratio < best || (ratio == best && basis[i] < basis[*leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (!leave) return false;
            pivot(*leave, *enter);
        }
    }

    Rational value(const std::vector<Rational>& obj) const {
        Rational v;
        for (size_t i = 0; i < a.size(); ++i) v += obj[basis[i]] * a[i][cols];
        return v;
    }
};

} // namespace

LpResult solve_lp(const LinearProgram& lp) {
    using Rel = LinearProgram::Relation;
    const size_t n = lp.num_vars;
    const size_t m = lp.rows.size();

    // Column layout: structural | slack/surplus | artificial
    size_t n_slack = 0, n_art = 0;
    std::vector<LinearProgram::Row> rows = lp.rows;
    for (auto& r : rows) {
        r.coeffs.resize(n);
        if (r.rhs.sign() < 0) {
            for (auto& c : r.coeffs) c = -c;
            r.rhs = -r.rhs;
            if (r.rel == Rel::Le) r.rel = Rel::Ge;
            else if (r.rel == Rel::Ge) r.rel = Rel::Le;
        }
        if (r.rel != Rel::Eq) ++n_slack;
        if (r.rel != Rel::Le) ++n_art;
    }
    Tableau t;
    t.cols = n + n_slack + n_art;
    t.a.assign(m, std::vector<Rational>(t.cols + 1));
    t.basis.assign(m, 0);
    size_t slack = n, art = n + n_slack;
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = 0; j < n; ++j) t.a[i][j] = rows[i].coeffs[j];
        t.a[i][t.cols] = rows[i].rhs;
        switch (rows[i].rel) {
        case Rel::Le:
            t.a[i][slack] = 1;
            t.basis[i] = slack++;
            break;
        case Rel::Ge:
            t.a[i][slack++] = -1;
            t.a[i][art] = 1;
            t.basis[i] = art++;
            break;
        case Rel::Eq:
            t.a[i][art] = 1;
            t.basis[i] = art++;
            break;
        }
    }

    LpResult res;
    std::vector<bool> all(t.cols, true);
    if (n_art > 0) {
        std::vector<Rational> phase1(t.cols);
        for (size_t j = n + n_slack; j < t.cols; ++j) phase1[j] = -1;
        t.optimize(phase1, all);
        if (t.value(phase1).sign() < 0) {
            res.status = LpResult::Status::Infeasible;
            res.pivots = t.pivots;
            return res;
        }
        // Drive remaining (zero-valued) artificials out of the basis.
        for (size_t i = 0; i < t.a.size();) {
            if (t.basis[i] < n + n_slack) {
                ++i;
                continue;
            }
            std::optional<size_t> col;
            for (size_t j = 0; j < n + n_slack && !col; ++j)
                if (!t.a[i][j].is_zero()) col = j;
            if (col) {
                t.pivot(i, *col);
                ++i;
            } else {
                t.a.erase(t.a.begin() + static_cast<long>(i));
                t.basis.erase(t.basis.begin() + static_cast<long>(i));
            }
        }
        for (size_t j = n + n_slack; j < t.cols; ++j) all[j] = false;
    }

    std::vector<Rational> obj(t.cols);
    for (size_t j = 0; j < n && j < lp.objective.size(); ++j) obj[j] = lp.objective[j];
    if (!t.optimize(obj, all)) {
        res.status = LpResult::Status::Unbounded;
        res.pivots = t.pivots;
        return res;
    }
    res.status = LpResult::Status::Optimal;
    res.x.assign(n, Rational());
    for (size_t i = 0; i < t.a.size(); ++i)
        if (t.basis[i] < n) res.x[t.basis[i]] = t.a[i][t.cols];
    res.value = t.value(obj);
    res.pivots = t.pivots;
    return res;
}

} // namespace evidence
