#include "generators.hpp"

#include "evidence/errors.hpp"
#include "evidence/parser.hpp"

#include <doctest.h>

using namespace evidence;

namespace {

const Signature kSig({"h1", "h2", "h3"}, {"ob1", "ob2"});

struct AstGen {
    std::mt19937_64& rng;
    bool dynamic = false;
    std::vector<std::string> bound;

    size_t pick(size_t lo, size_t hi) { return gen::pick(rng, lo, hi); }

    HypPtr hyp(int depth) {
        size_t k = depth <= 0 ? 0 : pick(0, 2);
        if (k == 0) return HypFormula::atom(kSig.hypotheses[pick(0, 2)]);
        if (k == 1) return HypFormula::negate(hyp(depth - 1));
        return HypFormula::conj(hyp(depth - 1), hyp(depth - 1));
    }

    Factor factor() {
        switch (pick(dynamic ? 1 : 0, 3)) {
        case 0: return BasicTerm::prior(hyp(2));
        case 1: return BasicTerm::posterior(hyp(2));
        case 2: {
            ObsSequence seq{kSig.observations[pick(0, 1)]};
            if (dynamic && pick(0, 1)) seq.push_back(kSig.observations[pick(0, 1)]);
            return BasicTerm::weight(seq, kSig.hypotheses[pick(0, 2)]);
        }
        default:
            if (!bound.empty() && pick(0, 1)) return Variable{bound[pick(0, bound.size() - 1)]};
            return Variable{pick(0, 1) ? "a" : "b"};
        }
    }

    Comparison comparison() {
        Polynomial p;
        for (size_t m = pick(0, 3); m > 0; --m) {
            Monomial mono{BigInt(static_cast<long>(pick(0, 20)) - 10), {}};
            for (size_t k = pick(1, 2); k > 0; --k) mono.factors.push_back(factor());
            p.monomials.push_back(mono);
        }
        if (pick(0, 5) == 0) p.monomials.push_back({big_pow(2, 70) + 3, {factor()}});
        return {normalize(p), static_cast<Relation>(pick(0, 2)), BigInt(static_cast<long>(pick(0, 14)) - 7)};
    }

    FormulaPtr formula(int depth) {
        size_t k = depth <= 0 ? pick(0, 2) : pick(0, dynamic ? 6 : 5);
        switch (k) {
        case 0: return Formula::hyp(kSig.hypotheses[pick(0, 2)]);
        case 1: return Formula::obs(kSig.observations[pick(0, 1)]);
        case 2: return Formula::compare(comparison());
        case 3: return Formula::negate(formula(depth - 1));
        case 4: return Formula::conj(formula(depth - 1), formula(depth - 1));
        case 5: {
            std::string v = "q" + std::to_string(bound.size());
            bound.push_back(v);
            auto body = formula(depth - 1);
            bound.pop_back();
            return Formula::forall(v, body);
        }
        default: return Formula::next(formula(depth - 1));
        }
    }
};

FormulaPtr p(std::string_view text, Dialect d = Dialect::Static) { return parse(text, kSig, d); }

Comparison only_comparison(const FormulaPtr& f) {
    REQUIRE(f->kind == Formula::Kind::Cmp);
    return f->cmp;
}

} // namespace

TEST_CASE("print and parse are inverse on random formulas") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 500; ++trial) {
        AstGen g{rng, trial % 2 == 1};
        Dialect d = g.dynamic ? Dialect::Dynamic : Dialect::Static;
        auto f = g.formula(4);
        std::string text = print(*f);
        auto back = p(text, d);
        INFO(text);
        CHECK(equal(*f, *back));
        CHECK(print(*back) == text);
    }
}

TEST_CASE("worked formulas") {
    auto f = p("Pr0(h1) >= 1/100 & ob1 => Pr(h1) >= 2/101");
    auto expected = Formula::implies(
        Formula::conj(Formula::compare({normalize({{{100, {BasicTerm::prior(HypFormula::atom("h1"))}}}}),
                                        Relation::Ge, 1}),
                      Formula::obs("ob1")),
        Formula::compare({normalize({{{101, {BasicTerm::posterior(HypFormula::atom("h1"))}}}}), Relation::Ge, 2}));
    CHECK(equal(*f, *expected));

    auto big = only_comparison(p("(1+2^100) * w(ob1, h1) = 1"));
    REQUIRE(big.lhs.monomials.size() == 1);
    CHECK(big.lhs.monomials[0].coefficient == big_pow(2, 100) + 1);
    CHECK(big.rhs == 1);

    auto q = parse_formula("forall x (x = x)", kSig);
    CHECK(q.free_variables.empty());
    CHECK(q.formula->kind == Formula::Kind::Forall);
}

TEST_CASE("rational constants are cleared") {
    auto c = only_comparison(p("1/2*Pr(h1) + 1/3*Pr(h2) >= 1/4"));
    // 6 Pr(h1) + 4 Pr(h2) >= 3 after multiplying by 12
    REQUIRE(c.lhs.monomials.size() == 2);
    CHECK(c.rhs == 3);
    CHECK(c.lhs.monomials[0].coefficient + c.lhs.monomials[1].coefficient == 10);

    auto lt = only_comparison(p("Pr(h1) < 1/2"));
    CHECK(lt.rel == Relation::Gt);
    CHECK(lt.lhs.monomials[0].coefficient == -2);
    CHECK(lt.rhs == -1);

    auto moved = only_comparison(p("Pr(h1) + 3 = 2*Pr(h1)"));
    CHECK(moved.lhs.monomials[0].coefficient == -1);
    CHECK(moved.rhs == -3);
    CHECK(only_comparison(p("a - a >= 0")).lhs.monomials.empty());
}

TEST_CASE("precedence") {
    CHECK(equal(*p("h1 & h2 | h3"), *Formula::disj(p("h1 & h2"), p("h3"))));
    CHECK(equal(*p("h1 | h2 => h3"), *Formula::implies(p("h1 | h2"), p("h3"))));
    CHECK(equal(*p("h1 => h2 => h3"), *Formula::implies(p("h1"), p("h2 => h3"))));
    CHECK(equal(*p("!h1 & h2"), *Formula::conj(p("!h1"), p("h2"))));
    CHECK(equal(*p("h1 <=> h2 => h3"), *Formula::iff(p("h1"), p("h2 => h3"))));
    CHECK(equal(*p("(Pr(h1) >= 0)"), *p("Pr(h1) >= 0")));
    CHECK(equal(*p("(Pr(h1) + 1) * 2 >= 0"), *p("2*Pr(h1) >= -2")));
    CHECK(equal(*p("Pr(h1 | h2) >= 0"), *Formula::compare({normalize({{{1, {BasicTerm::posterior(
                                                               HypFormula::disj(HypFormula::atom("h1"),
                                                                                HypFormula::atom("h2")))}}}}),
                                                           Relation::Ge, 0})));
}

TEST_CASE("errors carry positions") {
    auto err = [](std::string_view text, Dialect d = Dialect::Static) -> std::pair<int, int> {
        try {
            parse(text, kSig, d);
        } catch (const ParseError& e) {
            return {e.line(), e.column()};
        }
        FAIL("no error for " << text);
        return {0, 0};
    };
    CHECK(err("Pr(h1) >= ") == std::pair(1, 11));
    CHECK(err("h1 &\n  Pr(h1) @ 1") == std::pair(2, 10));
    CHECK(err("Pr(h1 >= 1") == std::pair(1, 7));
    CHECK(err("w(ob1, h1) * Pr(h2) / Pr(h1) >= 0").second == 21);
    CHECK(err("Pr(h1)^2 >= 0").second == 7);
    CHECK(err("X(h1)") == std::pair(1, 1));
    CHECK(err("w([ob1, ob2], h1) >= 0").first == 1);
    CHECK(err("Pr0(h1) >= 0", Dialect::Dynamic) == std::pair(1, 1));
    CHECK(err("forall ob1 (ob1)").second == 8);
    CHECK(err("forall Pr (Pr = 0)").second == 8);
    CHECK(err("Pr(h1) >= 1/0").second == 13);
}

TEST_CASE("undeclared names") {
    CHECK_THROWS_AS(p("h9"), UndeclaredName);
    CHECK_THROWS_AS(p("w(ob9, h1) >= 0"), UndeclaredName);
    CHECK_THROWS_AS(p("w(ob1, h9) >= 0"), UndeclaredName);
    CHECK_THROWS_AS(p("Pr(h9) >= 0"), UndeclaredName);
    try {
        p("h1 & bogus");
        FAIL("expected an error");
    } catch (const UndeclaredName& e) {
        CHECK(e.column() == 6);
    }
    // A free variable in a comparison is fine.
    auto r = parse_formula("Pr(h1) >= x", kSig);
    CHECK(r.free_variables == std::set<std::string>{"x"});
}

TEST_CASE("dynamic dialect") {
    auto f = p("X(X(Pr(h1) >= 1)) & w([ob1, ob2, ob1], h2) > 0", Dialect::Dynamic);
    CHECK(next_depth(*f) == 2);
    CHECK(has_next(*f));
    CHECK(classify_fragment(*f) == Fragment::LfoEvDyn);
    CHECK(next_depth(*p("Pr(h1) >= 0")) == 0);
    CHECK(next_depth(*p("X(ob1) & X(X(X(ob2)))", Dialect::Dynamic)) == 3);
}

TEST_CASE("fragments") {
    CHECK(classify_fragment(*p("w(ob1,h1) + 3*w(ob2,h1) >= 7")) == Fragment::Lw);
    CHECK(classify_fragment(*p("ob1 & !h2 => w(ob1,h1) > 0")) == Fragment::Lw);
    CHECK(classify_fragment(*p("Pr0(h1)*Pr(h2) >= 1")) == Fragment::Lev);
    CHECK(classify_fragment(*p("Pr0(h1) >= 1")) == Fragment::Lev);
    CHECK(classify_fragment(*p("forall x (x >= 0 | x < 0)")) == Fragment::LfoEv);
    CHECK(classify_fragment(*p("Pr(h1) >= x")) == Fragment::LfoEv);
    CHECK(is_quantifier_free(*p("Pr(h1) >= x")));
    CHECK_FALSE(is_quantifier_free(*p("exists x (Pr(h1) = x)")));
    CHECK(free_variables(*p("exists x (Pr(h1) = x*y)")) == std::set<std::string>{"y"});
}

TEST_CASE("intension") {
    auto rho = [](std::string_view t) { return parse_hypothesis(t, kSig); };
    CHECK(intension(*rho("!h1"), kSig) == std::vector<std::string>{"h2", "h3"});
    CHECK(intension(*rho("h1 & !h1"), kSig).empty());
    CHECK(intension(*rho("h1 | h3"), kSig) == std::vector<std::string>{"h1", "h3"});
    CHECK(intension(*rho("true"), kSig) == kSig.hypotheses);
    CHECK(intension(*rho("h1 => h2"), kSig) == std::vector<std::string>{"h2", "h3"});
    // Distinct hypotheses never hold together.
    CHECK(intension(*rho("h1 & h2"), kSig).empty());

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        AstGen g{rng};
        auto a = g.hyp(3), b = g.hyp(3);
        auto ia = intension_mask(*a, kSig), ib = intension_mask(*b, kSig);
        auto both = intension_mask(*HypFormula::conj(a, b), kSig);
        auto neg = intension_mask(*HypFormula::negate(a), kSig);
        for (size_t i = 0; i < 3; ++i) {
            CHECK(both[i] == (ia[i] && ib[i]));
            CHECK(neg[i] == !ia[i]);
        }
    }
}

TEST_CASE("mentioned names") {
    auto m = mentioned_names(*p("ob2 & w(ob1, h2) > Pr0(h1 | h3)"));
    CHECK(m.hypotheses == std::set<std::string>{"h1", "h2", "h3"});
    CHECK(m.observations == std::set<std::string>{"ob1", "ob2"});
    CHECK(m.prior);
    CHECK_FALSE(m.posterior);
    CHECK(m.weight);
}

TEST_CASE("formula files") {
    auto file = parse_formula_file("# comment\nhypotheses: a, b;\nobservations: o;\nPr(a) >= 1/2 & o\n", std::nullopt);
    CHECK(file.header);
    CHECK(file.signature == Signature({"a", "b"}, {"o"}));
    auto ext = parse_formula_file("Pr(h1) >= 0", kSig);
    CHECK_FALSE(ext.header);
    CHECK_THROWS_AS(parse_formula_file("Pr(h1) >= 0", std::nullopt), ParseError);
    CHECK_THROWS_AS(parse_formula_file("hypotheses: a;\nPr(a) >= 0", std::nullopt), ParseError);
}

TEST_CASE("signatures") {
    CHECK_THROWS_AS(Signature({"a", "a"}, {"o"}), InvalidStructure);
    CHECK_THROWS_AS(Signature({"a"}, {"a"}), InvalidStructure);
    CHECK_THROWS_AS(Signature({}, {"o"}), InvalidStructure);
}
