#pragma once

#include "evidence/rational.hpp"

#include <vector>

namespace evidence {

// Dense exact LP: maximize c.x subject to rows, x >= 0. Two-phase simplex
// with Bland's rule, so results are deterministic and cycling cannot occur.
struct LinearProgram {
    enum class Relation { Le, Ge, Eq };
    struct Row {
        std::vector<Rational> coeffs;
        Relation rel;
        Rational rhs;
    };
    size_t num_vars = 0;
    std::vector<Row> rows;
    std::vector<Rational> objective;

    void add(std::vector<Rational> coeffs, Relation rel, Rational rhs) {
        coeffs.resize(num_vars);
        rows.push_back({std::move(coeffs), rel, std::move(rhs)});
    }
};

struct LpResult {
    enum class Status { Optimal, Infeasible, Unbounded };
    Status status = Status::Infeasible;
    Rational value;
    std::vector<Rational> x;
    size_t pivots = 0;
};

LpResult solve_lp(const LinearProgram& lp);

} // namespace evidence
