#include "evidence/characterization.hpp"

#include "evidence/errors.hpp"
#include "evidence/lp.hpp"

namespace evidence {

WeightTable::WeightTable(std::vector<std::string> hypotheses, std::vector<std::string> observations,
                         std::vector<std::vector<Rational>> entry)
    : hypotheses_(std::move(hypotheses)), observations_(std::move(observations)),
      entry_(std::move(entry)) {
    if (hypotheses_.empty() || observations_.empty())
        throw InvalidStructure("weight table needs hypotheses and observations");
    check_unique_names(hypotheses_, "hypothesis");
    check_unique_names(observations_, "observation");
    if (entry_.size() != observations_.size())
        throw InvalidStructure("weight table needs one row per observation");
    for (const auto& row : entry_)
        if (row.size() != hypotheses_.size())
            throw InvalidStructure("weight table row has wrong length");
}

const Rational& WeightTable::entry(std::string_view ob, std::string_view h) const {
    for (size_t o = 0; o < observations_.size(); ++o) {
        if (observations_[o] != ob) continue;
        for (size_t i = 0; i < hypotheses_.size(); ++i)
            if (hypotheses_[i] == h) return entry_[o][i];
        throw UnknownName("unknown hypothesis '" + std::string(h) + "'");
    }
    throw UnknownName("unknown observation '" + std::string(ob) + "'");
}

WeightTable weight_table_of(const EvidenceSpace& space) {
    std::vector<std::vector<Rational>> e;
    for (const auto& ob : space.observations()) e.push_back(weight_column(space, ob).masses());
    return WeightTable(space.hypotheses(), space.observations(), std::move(e));
}

std::string Wf1Result::message() const {
    switch (violation) {
    case Violation::None: return "WF1 holds";
    case Violation::RowSum:
        return "WF1 violated: row '" + observation + "' sums to " + row_sum.str();
    case Violation::Range:
        return "WF1 violated: entry (" + observation + ", " + hypothesis + ") outside [0,1]";
    }
    return {};
}

Wf1Result check_wf1(const WeightTable& table) {
    for (size_t o = 0; o < table.num_observations(); ++o) {
        Rational sum;
        for (size_t h = 0; h < table.num_hypotheses(); ++h) {
            const Rational& v = table.entry(o, h);
            if (v.sign() < 0 || v > 1) {
                Wf1Result r;
                r.ok = false;
                r.violation = Wf1Result::Violation::Range;
                r.observation = table.observations()[o];
                r.hypothesis = table.hypotheses()[h];
                for (const auto& x : table.entries()[o]) r.row_sum += x;
                return r;
            }
            sum += v;
        }
        if (sum != 1) {
            Wf1Result r;
            r.ok = false;
            r.violation = Wf1Result::Violation::RowSum;
            r.observation = table.observations()[o];
            r.row_sum = sum;
            return r;
        }
    }
    return {};
}

std::string Wf2Result::message() const {
    switch (status) {
    case Status::Certified: return "WF2 holds (min scalar " + t_star.str() + ")";
    case Status::EqualitiesInfeasible: return "WF2 infeasible: the equality system has no solution";
    case Status::NonPositiveOnly:
        return "WF2 infeasible: every solution has some scalar <= 0 (max min scalar " +
               t_star.str() + ")";
    }
    return {};
}

Wf2Result check_wf2(const WeightTable& table) {
    // x_i = xp_i - xm_i, t = tp - tm; maximize t s.t. sum_i f(ob_i,h) x_i = 1, x_i - t >= 0.
    const size_t n = table.num_observations();
    const size_t nh = table.num_hypotheses();
    LinearProgram lp;
    lp.num_vars = 2 * n + 2;
    const size_t tp = 2 * n, tm = 2 * n + 1;
    for (size_t h = 0; h < nh; ++h) {
        std::vector<Rational> c(lp.num_vars);
        for (size_t i = 0; i < n; ++i) {
            c[2 * i] = table.entry(i, h);
            c[2 * i + 1] = -table.entry(i, h);
        }
        lp.add(std::move(c), LinearProgram::Relation::Eq, Rational(1));
    }
    for (size_t i = 0; i < n; ++i) {
        std::vector<Rational> c(lp.num_vars);
        c[2 * i] = 1;
        c[2 * i + 1] = -1;
        c[tp] = -1;
        c[tm] = 1;
        lp.add(std::move(c), LinearProgram::Relation::Ge, Rational(0));
    }
    lp.objective.assign(lp.num_vars, Rational());
    lp.objective[tp] = 1;
    lp.objective[tm] = -1;
    LpResult res = solve_lp(lp);

    Wf2Result out;
    if (res.status == LpResult::Status::Infeasible) {
        out.status = Wf2Result::Status::EqualitiesInfeasible;
        return out;
    }
    if (res.status == LpResult::Status::Unbounded) {
        // Only possible when WF1 fails (the sum identity bounds t otherwise).
        out.status = Wf2Result::Status::NonPositiveOnly;
        return out;
    }
    out.t_star = res.value;
    if (res.value.sign() <= 0) {
        out.status = Wf2Result::Status::NonPositiveOnly;
        return out;
    }
    Wf2Certificate cert;
    cert.observations = table.observations();
    for (size_t i = 0; i < n; ++i) cert.scalars.push_back(res.x[2 * i] - res.x[2 * i + 1]);
    out.status = Wf2Result::Status::Certified;
    out.certificate = std::move(cert);
    return out;
}

ReconstructResult reconstruct(const WeightTable& table) {
    ReconstructResult out;
    Wf1Result wf1 = check_wf1(table);
    if (!wf1.ok) {
        out.failure = ReconstructResult::Failure::WF1;
        out.message = wf1.message();
        return out;
    }
    Wf2Result wf2 = check_wf2(table);
    if (!wf2.feasible()) {
        out.failure = ReconstructResult::Failure::WF2;
        out.message = wf2.message();
        return out;
    }
    const auto& x = wf2.certificate->scalars;
    std::vector<std::vector<Rational>> mu(table.num_hypotheses(),
                                          std::vector<Rational>(table.num_observations()));
    for (size_t h = 0; h < table.num_hypotheses(); ++h)
        for (size_t i = 0; i < table.num_observations(); ++i) mu[h][i] = table.entry(i, h) * x[i];
    try {
        out.space.emplace(table.hypotheses(), table.observations(), std::move(mu));
    } catch (const InvalidStructure& e) {
        out.failure = ReconstructResult::Failure::Relevance;
        out.message = e.what();
        return out;
    }
    out.certificate = wf2.certificate;
    out.message = "realizable";
    return out;
}

} // namespace evidence
