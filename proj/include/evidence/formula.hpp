#pragma once

#include "evidence/rational.hpp"

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace evidence {

class EvidenceSpace;

struct Signature {
    std::vector<std::string> hypotheses;
    std::vector<std::string> observations;

    Signature() = default;
    Signature(std::vector<std::string> hyps, std::vector<std::string> obs);
    static Signature of(const EvidenceSpace& space);

    bool is_hypothesis(std::string_view name) const;
    bool is_observation(std::string_view name) const;
    size_t hypothesis_index(std::string_view name) const;
    size_t observation_index(std::string_view name) const;

    friend bool operator==(const Signature&, const Signature&) = default;
};

// ---- hypothesis formulas -------------------------------------------------

struct HypFormula;
using HypPtr = std::shared_ptr<const HypFormula>;

struct HypFormula {
    enum class Kind { Atom, Not, And };
    Kind kind;
    std::string name; // Atom
    HypPtr left;      // Not, And
    HypPtr right;     // And

    static HypPtr atom(std::string name);
    // Double negations collapse, so !!a is a.
    static HypPtr negate(HypPtr a);
    static HypPtr conj(HypPtr a, HypPtr b);
    static HypPtr disj(HypPtr a, HypPtr b);
    static HypPtr implies(HypPtr a, HypPtr b);
    static HypPtr iff(HypPtr a, HypPtr b);
    static HypPtr truth(const Signature& sig);
    static HypPtr falsity(const Signature& sig);
};

// ---- terms ----------------------------------------------------------------

using ObsSequence = std::vector<std::string>;

struct BasicTerm {
    enum class Kind { Prior, Posterior, Weight };
    Kind kind;
    HypPtr rho;             // Prior, Posterior
    ObsSequence sequence;   // Weight
    std::string hypothesis; // Weight

    static BasicTerm prior(HypPtr rho) { return {Kind::Prior, std::move(rho), {}, {}}; }
    static BasicTerm posterior(HypPtr rho) { return {Kind::Posterior, std::move(rho), {}, {}}; }
    static BasicTerm weight(ObsSequence seq, std::string h) {
        return {Kind::Weight, nullptr, std::move(seq), std::move(h)};
    }
};

struct Variable {
    std::string name;
};

using Factor = std::variant<BasicTerm, Variable>;

struct Monomial {
    BigInt coefficient;
    std::vector<Factor> factors; // sorted canonically
};

struct Polynomial {
    std::vector<Monomial> monomials;
};

enum class Relation { Ge, Gt, Eq };

// lhs rel rhs, with integer coefficients and an integer constant.
struct Comparison {
    Polynomial lhs;
    Relation rel;
    BigInt rhs;
};

// ---- formulas ---------------------------------------------------------------

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    enum class Kind { Hyp, Obs, Cmp, Not, And, Forall, Next };
    Kind kind;
    std::string name; // Hyp, Obs atom; bound variable for Forall
    Comparison cmp;   // Cmp
    FormulaPtr left;  // Not, And, Forall, Next
    FormulaPtr right; // And

    static FormulaPtr hyp(std::string name);
    static FormulaPtr obs(std::string name);
    static FormulaPtr compare(Comparison c);
    static FormulaPtr negate(FormulaPtr a);
    static FormulaPtr conj(FormulaPtr a, FormulaPtr b);
    static FormulaPtr forall(std::string var, FormulaPtr body);
    static FormulaPtr next(FormulaPtr body);

    static FormulaPtr disj(FormulaPtr a, FormulaPtr b);
    static FormulaPtr implies(FormulaPtr a, FormulaPtr b);
    static FormulaPtr iff(FormulaPtr a, FormulaPtr b);
    static FormulaPtr exists(std::string var, FormulaPtr body);
    static FormulaPtr from_hyp(const HypPtr& rho);
    static FormulaPtr truth(const Signature& sig);
    static FormulaPtr falsity(const Signature& sig);
};

// ---- utilities --------------------------------------------------------------

bool equal(const HypFormula& a, const HypFormula& b);
bool equal(const Formula& a, const Formula& b);
bool equal(const Polynomial& a, const Polynomial& b);
bool equal(const Factor& a, const Factor& b);

std::string print(const HypFormula& rho);
std::string print(const Factor& f);
std::string print(const Polynomial& p);
std::string print(const Comparison& c);
std::string print(const Formula& f);

// Canonicalizes factor order, merges like monomials and drops zero coefficients.
Polynomial normalize(Polynomial p);
bool factor_less(const Factor& a, const Factor& b);

std::vector<std::string> intension(const HypFormula& rho, const Signature& sig);
std::vector<bool> intension_mask(const HypFormula& rho, const Signature& sig);

enum class Fragment { Lw, Lev, LfoEv, LfoEvDyn };
Fragment classify_fragment(const Formula& f);
const char* fragment_name(Fragment f);

std::set<std::string> free_variables(const Formula& f);
bool is_quantifier_free(const Formula& f);
bool has_next(const Formula& f);
size_t next_depth(const Formula& f);

struct MentionedNames {
    std::set<std::string> hypotheses;
    std::set<std::string> observations;
    bool prior = false;
    bool posterior = false;
    bool weight = false;
    std::vector<ObsSequence> sequences; // distinct, in first-occurrence order
};
MentionedNames mentioned_names(const Formula& f);

// Visits every comparison in f.
template <class F>
void for_each_comparison(const Formula& f, F&& fn) {
    switch (f.kind) {
    case Formula::Kind::Cmp: fn(f.cmp); break;
    case Formula::Kind::And:
        for_each_comparison(*f.left, fn);
        for_each_comparison(*f.right, fn);
        break;
    case Formula::Kind::Not:
    case Formula::Kind::Forall:
    case Formula::Kind::Next: for_each_comparison(*f.left, fn); break;
    default: break;
    }
}

} // namespace evidence
