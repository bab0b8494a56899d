#include "generators.hpp"

#include "evidence/characterization.hpp"
#include "evidence/documents.hpp"
#include "evidence/errors.hpp"
#include "evidence/lp.hpp"

#include <doctest.h>

using namespace evidence;
using R = LinearProgram::Relation;

namespace {

WeightTable counterexample() {
    return WeightTable({"h1", "h2", "h3"}, {"ob1", "ob2"},
                       {{Rational(1, 4), Rational(1, 4), Rational(1, 2)},
                        {Rational(1, 4), Rational(1, 2), Rational(1, 4)}});
}

// Every column weighted by the scalars sums to 1, all scalars positive.
bool valid_certificate(const WeightTable& t, const Wf2Certificate& c) {
    if (c.observations != t.observations()) return false;
    Rational total;
    for (const auto& x : c.scalars) {
        if (x.sign() <= 0) return false;
        total += x;
    }
    for (size_t h = 0; h < t.num_hypotheses(); ++h) {
        Rational col;
        for (size_t o = 0; o < t.num_observations(); ++o) col += t.entry(o, h) * c.scalars[o];
        if (col != 1) return false;
    }
    return total == Rational(t.num_hypotheses());
}

} // namespace

TEST_CASE("lp: small optimum") {
    LinearProgram lp;
    lp.num_vars = 2;
    lp.objective = {1, 1};
    lp.add({1, 2}, R::Le, 4);
    lp.add({3, 1}, R::Le, 6);
    auto r = solve_lp(lp);
    REQUIRE(r.status == LpResult::Status::Optimal);
    CHECK(r.value == Rational(14, 5));
    CHECK(r.x[0] == Rational(8, 5));
    CHECK(r.x[1] == Rational(6, 5));
}

TEST_CASE("lp: equalities, infeasible, unbounded") {
    LinearProgram eq;
    eq.num_vars = 3;
    eq.objective = {0, 0, 1};
    eq.add({1, 1, 1}, R::Eq, 1);
    eq.add({1, -1, 0}, R::Ge, 0);
    auto r = solve_lp(eq);
    REQUIRE(r.status == LpResult::Status::Optimal);
    CHECK(r.value == 1);

    LinearProgram bad;
    bad.num_vars = 1;
    bad.add({1}, R::Ge, 2);
    bad.add({1}, R::Le, 1);
    CHECK(solve_lp(bad).status == LpResult::Status::Infeasible);

    LinearProgram open;
    open.num_vars = 2;
    open.objective = {1, 0};
    open.add({1, -1}, R::Le, 1);
    CHECK(solve_lp(open).status == LpResult::Status::Unbounded);
}

TEST_CASE("lp: Beale's cycling example terminates") {
    LinearProgram lp;
    lp.num_vars = 4;
    lp.objective = {Rational(3, 4), -20, Rational(1, 2), -6};
    lp.add({Rational(1, 4), -8, -1, 9}, R::Le, 0);
    lp.add({Rational(1, 2), -12, Rational(-1, 2), 3}, R::Le, 0);
    lp.add({0, 0, 1, 0}, R::Le, 1);
    auto r = solve_lp(lp);
    REQUIRE(r.status == LpResult::Status::Optimal);
    CHECK(r.value == Rational(5, 4));
}

TEST_CASE("lp: random feasibility agrees with a planted point") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        size_t n = gen::pick(rng, 1, 4), m = gen::pick(rng, 1, 4);
        std::vector<Rational> point;
        for (size_t j = 0; j < n; ++j) point.push_back(Rational(static_cast<long>(gen::pick(rng, 0, 6)), 3));
        LinearProgram lp;
        lp.num_vars = n;
        lp.objective.assign(n, 0);
        for (size_t i = 0; i < m; ++i) {
            std::vector<Rational> row;
            Rational at;
            for (size_t j = 0; j < n; ++j) {
                row.push_back(static_cast<long>(gen::pick(rng, 0, 8)) - 4);
                at += row.back() * point[j];
            }
            R rel = static_cast<R>(gen::pick(rng, 0, 2));
            lp.add(row, rel, at);
        }
        auto r = solve_lp(lp);
        REQUIRE(r.status == LpResult::Status::Optimal);
        for (const auto& row : lp.rows) {
            Rational lhs;
            for (size_t j = 0; j < n; ++j) {
                CHECK(r.x[j].sign() >= 0);
                lhs += row.coeffs[j] * r.x[j];
            }
            if (row.rel == R::Le) CHECK(lhs <= row.rhs);
            if (row.rel == R::Ge) CHECK(lhs >= row.rhs);
            if (row.rel == R::Eq) CHECK(lhs == row.rhs);
        }
    }
}

TEST_CASE("wf1") {
    CHECK(check_wf1(counterexample()).ok);
    WeightTable short_row({"h1", "h2"}, {"a", "b"},
                          {{Rational(1, 2), Rational(1, 2)}, {Rational(1, 2), Rational(1, 4)}});
    auto r = check_wf1(short_row);
    CHECK_FALSE(r.ok);
    CHECK(r.violation == Wf1Result::Violation::RowSum);
    CHECK(r.observation == "b");
    CHECK(r.row_sum == Rational(3, 4));

    WeightTable range({"h1", "h2"}, {"a"}, {{Rational(3, 2), Rational(-1, 2)}});
    CHECK(check_wf1(range).violation == Wf1Result::Violation::Range);

    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 50; ++trial) CHECK(check_wf1(weight_table_of(gen::space(rng, 4, 4))).ok);
}

TEST_CASE("wf2") {
    auto bad = check_wf2(counterexample());
    CHECK_FALSE(bad.feasible());
    CHECK(bad.status == Wf2Result::Status::EqualitiesInfeasible);

    auto coins = space_from_json(load_json_file(EVIDENCE_DATA_DIR "/coins.json"));
    auto table = weight_table_of(coins);
    auto ok = check_wf2(table);
    REQUIRE(ok.feasible());
    CHECK(valid_certificate(table, *ok.certificate));

    // With one observation every column equation reads f(a,h) x = 1.
    WeightTable uneven({"h1", "h2"}, {"a"}, {{Rational(1, 3), Rational(2, 3)}});
    CHECK_FALSE(check_wf2(uneven).feasible());
    WeightTable flat({"h1", "h2"}, {"a"}, {{Rational(1, 2), Rational(1, 2)}});
    auto two = check_wf2(flat);
    REQUIRE(two.feasible());
    CHECK(two.certificate->scalars == std::vector<Rational>{2});
    WeightTable one({"h"}, {"a"}, {{1}});
    auto single = check_wf2(one);
    REQUIRE(single.feasible());
    CHECK(single.certificate->scalars == std::vector<Rational>{1});
}

TEST_CASE("wf2 needs strictly positive scalars") {
    // Columns sum to 1 only with x_b = 0.
    WeightTable t({"h1", "h2"}, {"a", "b"}, {{Rational(1, 2), Rational(1, 2)}, {1, 0}});
    auto r = check_wf2(t);
    CHECK_FALSE(r.feasible());
    CHECK(r.status == Wf2Result::Status::NonPositiveOnly);
}

TEST_CASE("reconstruct") {
    auto r = reconstruct(counterexample());
    CHECK(r.failure == ReconstructResult::Failure::WF2);
    CHECK_FALSE(r.space.has_value());

    WeightTable ident({"h1", "h2", "h3"}, {"a", "b", "c"}, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    auto id = reconstruct(ident);
    REQUIRE(id.ok());
    CHECK(id.space->likelihood("h2", "b") == 1);
    CHECK(weight_table_of(*id.space) == ident);

    WeightTable wf1({"h1", "h2"}, {"a"}, {{Rational(1, 3), Rational(1, 3)}});
    CHECK(reconstruct(wf1).failure == ReconstructResult::Failure::WF1);
}

TEST_CASE("reconstruct round trips random spaces") {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 200; ++trial) {
        auto sp = gen::space(rng, gen::pick(rng, 1, 5), gen::pick(rng, 1, 5));
        auto table = weight_table_of(sp);
        auto r = reconstruct(table);
        REQUIRE(r.ok());
        CHECK(valid_certificate(table, *r.certificate));
        CHECK(weight_table_of(*r.space) == table);
    }
}

TEST_CASE("table documents") {
    auto t = table_from_json(load_json_file(EVIDENCE_DATA_DIR "/counterexample_table.json"));
    CHECK(t == counterexample());
    CHECK(table_from_json(table_to_json(t)) == t);
}
