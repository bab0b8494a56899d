#include "corpus.hpp"

#include "evidence/documents.hpp"
#include "evidence/errors.hpp"
#include "evidence/sat_solver.hpp"

#include <doctest.h>

#include <cmath>

using namespace evidence;

namespace {

SatResult run(std::string_view text, const Signature& sig, const SolveOptions& o = {}) {
    return solve(*parse(text, sig), sig, o);
}

} // namespace

TEST_CASE("quadratic system has an irrational solution") {
    auto file = parse_formula_file(read_text_file(EVIDENCE_DATA_DIR "/irrational.formula"), std::nullopt);
    auto r = solve(*file.result.formula, file.signature);
    REQUIRE(r.verdict == Verdict::Sat);
    REQUIRE(r.model);
    CHECK(r.route == "polynomial");
    double w = weight_of_evidence(r.model->world.space, "ob1", "h1").to_double();
    CHECK(std::abs(w - (std::sqrt(17.0) - 1) / 8) <= 1e-6);
    CHECK(r.model->max_residual <= 1e-9);
}

TEST_CASE("two weights of 2/3 cannot share an observation") {
    auto r = run("w(ob,h1) = 2/3 & w(ob,h2) = 2/3", Signature({"h1", "h2"}, {"ob"}));
    CHECK(r.verdict == Verdict::Unsat);
    CHECK(r.route == "linear");
    CHECK_FALSE(r.model);
}

TEST_CASE("unsat corpus") {
    for (const auto& c : corpus::unsat_corpus()) {
        INFO(c.text);
        auto r = run(c.text, c.signature);
        CHECK(r.verdict != Verdict::Sat);
        if (c.decidable) CHECK(r.verdict == Verdict::Unsat);
    }
}

TEST_CASE("boundary-only formulas are not claimed") {
    // Only Pr0(h1) = Pr0(h2) = 1/2 reaches 1/4, and the inequality is strict.
    auto r = run("Pr0(h1) * Pr0(h2) > 1/4", Signature({"h1", "h2"}, {"ob"}));
    CHECK(r.verdict != Verdict::Sat);
    CHECK_FALSE(r.reason.empty());

    // With two observations the scalars must satisfy s1/3 + s2/2 = 1 and s1 + s2 = 3, so s2 = 0.
    auto s = run("w(ob1,h1) = 1/3 & w(ob2,h1) = 1/2", Signature({"h1", "h2", "h3"}, {"ob1", "ob2"}));
    CHECK(s.verdict != Verdict::Sat);
}

TEST_CASE("simple satisfiable formulas") {
    Signature sig({"h1", "h2", "h3"}, {"ob1", "ob2"});
    for (const char* text : {"h1 & ob2", "w(ob1,h1) = 1/3 & w(ob2,h2) = 1/2", "!h1 & Pr(h1) > 1/2",
                             "Pr0(h1) * Pr(h2) >= 1/10 & Pr0(h3) = 0", "h1 | h2 => Pr(h3) = 1/7",
                             "w(ob1,h1) + 3*w(ob2,h1) >= 2", "Pr(h1) = Pr0(h1) & w(ob1,h1) = 1/4 & ob1"}) {
        INFO(std::string(text));
        auto f = parse(text, sig);
        auto r = solve(*f, sig);
        REQUIRE(r.verdict == Verdict::Sat);
        REQUIRE(r.model);
        if (r.model->exact) CHECK(satisfies(*f, r.model->world));
        CHECK(r.model->world.space.hypotheses() == sig.hypotheses);
    }
}

TEST_CASE("hidden-world corpus") {
    std::mt19937_64 rng(2024);
    size_t unknown = 0, total = 0;
    for (int trial = 0; trial < 60; ++trial) {
        auto inst = corpus::hidden_world(rng, trial % 2 == 0);
        INFO(print(*inst.formula));
        REQUIRE(satisfies(*inst.formula, inst.hidden));
        auto r = solve(*inst.formula, inst.signature);
        ++total;
        CHECK(r.verdict != Verdict::Unsat);
        if (r.verdict == Verdict::Unknown) {
            ++unknown;
            continue;
        }
        REQUIRE(r.model);
        CHECK(r.model->exact);
        CHECK(satisfies(*inst.formula, r.model->world));
    }
    CHECK(unknown * 10 <= total);
}

TEST_CASE("results do not depend on parallelism") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 12; ++trial) {
        auto inst = corpus::hidden_world(rng, trial % 3 == 0);
        SolveOptions seq, par;
        par.parallel = true;
        par.threads = 4;
        auto a = solve(*inst.formula, inst.signature, seq);
        auto b = solve(*inst.formula, inst.signature, par);
        auto c = solve(*inst.formula, inst.signature, seq);
        CHECK(a.verdict == b.verdict);
        CHECK(a.stats == b.stats);
        CHECK(a.stats == c.stats);
        if (a.model && b.model) CHECK(world_to_json(a.model->world).dump() == world_to_json(b.model->world).dump());
    }
    auto u1 = run("w(ob,h1) = 2/3 & w(ob,h2) = 2/3", Signature({"h1", "h2"}, {"ob"}));
    SolveOptions par;
    par.parallel = true;
    auto u2 = run("w(ob,h1) = 2/3 & w(ob,h2) = 2/3", Signature({"h1", "h2"}, {"ob"}), par);
    CHECK(u1.stats == u2.stats);
    CHECK(u1.reason == u2.reason);
}

TEST_CASE("small signatures") {
    Signature sig({"h1", "h2", "h3"}, {"ob1", "ob2"});
    auto f = parse("w(ob1, h1) >= 1/2", sig);
    CHECK(augment_signature(*f) == Signature({"h1", "h*"}, {"ob1", "ob*"}));
    auto g = parse("Pr(h2) > Pr0(h1 | h3)", sig);
    CHECK(augment_signature(*g) == Signature({"h1", "h2", "h3", "h*"}, {"ob*"}));

    // Solving over the augmented signature agrees with the full one.
    for (const char* text : {"w(ob1,h1) = 2/3 & w(ob1,h2) = 2/3", "w(ob1,h1) = 2/3 & Pr(h1) > 1/2 & ob1"}) {
        auto h = parse(text, sig);
        CHECK(solve(*h, sig).verdict == solve(*h, augment_signature(*h)).verdict);
    }
}

TEST_CASE("input outside the decidable fragments is rejected") {
    Signature sig({"h1", "h2"}, {"ob"});
    CHECK_THROWS_AS(run("forall x (Pr(h1) >= x)", sig), FragmentUnsupported);
    CHECK_THROWS_AS(run("Pr(h1) >= x", sig), FragmentUnsupported);
    auto f = parse("w(ob, h2) >= 0", Signature({"h1", "h2"}, {"ob"}));
    CHECK_THROWS_AS(solve(*f, Signature({"h1", "h9"}, {"ob"})), UnknownName);
}

TEST_CASE("budget exhaustion gives UNKNOWN, never a wrong answer") {
    SolveOptions tiny;
    tiny.budget_boxes = 1;
    tiny.restarts = 0;
    tiny.max_depth = 1;
    auto r = run("w(ob1,h1) * w(ob2,h1) > 1/4 & w(ob1,h2) * w(ob2,h2) > 1/4", Signature({"h1", "h2"}, {"ob1", "ob2"}), tiny);
    CHECK(r.verdict != Verdict::Sat);
}
