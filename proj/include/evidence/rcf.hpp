#pragma once

#include "evidence/formula.hpp"
#include "evidence/model_checker.hpp"
#include "evidence/polynomial.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace evidence::rcf {

// Boolean combination of polynomial atoms p rel 0 over the problem's variables.
struct Prop;
using PropPtr = std::shared_ptr<const Prop>;

struct Prop {
    enum class Kind { True, False, Atom, Not, And, Or, Implies, Forall };
    enum class Rel { Ge, Gt, Eq };
    Kind kind = Kind::True;
    Poly poly; // Atom
    Rel rel = Rel::Eq;
    std::vector<PropPtr> args;
    uint32_t bound = 0; // Forall

    static PropPtr truth();
    static PropPtr falsity();
    static PropPtr atom(Poly p, Rel rel);
    static PropPtr negate(PropPtr a);
    static PropPtr conj(std::vector<PropPtr> args);
    static PropPtr disj(std::vector<PropPtr> args);
    static PropPtr implies(PropPtr a, PropPtr b);
    static PropPtr forall(uint32_t var, PropPtr body);
};

struct RcfVariable {
    std::string name;
    std::string meaning; // e.g. "Pr0(h1)"
    bool bound = false;  // only occurs under a quantifier
};

struct Assertion {
    PropPtr prop;
    std::string family; // "phi_h", "phi_w,up", ...
};

struct RcfProblem {
    bool dynamic = false;
    size_t horizon = 0;
    Signature signature;
    std::vector<Sequence> sequences; // dynamic: sequences of length >= 2 with a z family
    std::vector<RcfVariable> variables;
    std::vector<Assertion> assertions;
    bool quantified = false;
    std::string source; // printed input formula

    std::optional<uint32_t> find(std::string_view name) const;
    uint32_t index(std::string_view name) const;
};

// Variable names used by the encoding (1-based indices as in the translation).
std::string u_name(size_t h);
std::string v_name(size_t ob);
std::string v_name(size_t ob, size_t time);
std::string x_name(size_t h);
std::string y_name(size_t h);
std::string y_name(size_t h, size_t time);
std::string z_name(const std::vector<size_t>& seq, size_t h);
std::string s_name(size_t ob);

RcfProblem translate_static(const Formula& f, const Signature& sig);

struct DynamicOptions {
    // Every sequence of length 2..horizon instead of those in the formula and their prefixes.
    bool full_sequences = false;
};
RcfProblem translate_dynamic(const Formula& f, const Signature& sig, size_t horizon,
                             const DynamicOptions& opts = {});

// Pushes X down to observation atoms and comparisons that mention Pr; X over
// anything else is dropped, since those do not change over time.
FormulaPtr normalize_next(const FormulaPtr& f);

struct EmitOptions {
    bool binary_constants = true; // integers written with 1 and + / * in O(log k) size
    bool check_sat = true;        // append (check-sat) and (get-model)
};
std::string emit(const RcfProblem& p, const EmitOptions& opts = {});

using Assignment = std::map<std::string, Rational>;

// Accepts "name = p/q" lines or an SMT-LIB model made of define-fun entries.
Assignment parse_assignment(std::string_view text);

// Exact truth value of a quantifier-free assertion under the assignment.
bool holds(const Prop& p, const std::vector<Rational>& values);

struct DecodedWitness {
    std::optional<EvidentialWorld> world;
    std::optional<EvidentialRun> run;
    size_t unchecked = 0; // quantified assertions that substitution cannot decide
};
DecodedWitness decode_witness(const RcfProblem& p, const Assignment& a);

// Values a structure gives to the encoding's variables; free formula variables come from v.
Assignment encode_world(const RcfProblem& p, const EvidentialWorld& w, const Valuation& v = {});
Assignment encode_run(const RcfProblem& p, const EvidentialRun& r, const Valuation& v = {});

// Indices of assertions that are false under the assignment (quantified ones are skipped).
std::vector<size_t> violated_assertions(const RcfProblem& p, const Assignment& a);

} // namespace evidence::rcf
