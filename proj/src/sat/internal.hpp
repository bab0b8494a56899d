#pragma once

#include "evidence/formula.hpp"
#include "evidence/polynomial.hpp"
#include "evidence/sat_solver.hpp"

#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace evidence::sat {

// Truth assignment of one distinct comparison within a sign case.
enum Sign : int8_t { DontCare = -1, False = 0, True = 1, FalseAbove = 2, FalseBelow = 3 };

struct CaseSpace {
    std::vector<size_t> hypothesis_cases;
    std::vector<size_t> observation_cases;
    std::vector<const Comparison*> comparisons; // distinct, first-occurrence order
    std::map<const Comparison*, size_t> index;  // every comparison node -> distinct index
    bool use_prior = false;
    bool use_posterior = false;
};

CaseSpace build_case_space(const Formula& f, const Signature& sig);
std::vector<std::vector<int8_t>> sign_patterns(const Formula& f, const Signature& sig,
                                               const CaseSpace& cs, size_t hc, size_t oc);

struct Layout {
    size_t nh = 0, no = 0;
    bool use_x = false, use_y = false;
    uint32_t x0 = 0, y0 = 0, z0 = 0, s0 = 0, t = 0, n = 0;
    uint32_t x(size_t j) const { return x0 + static_cast<uint32_t>(j); }
    uint32_t y(size_t j) const { return y0 + static_cast<uint32_t>(j); }
    uint32_t z(size_t i, size_t j) const { return z0 + static_cast<uint32_t>(i * nh + j); }
    uint32_t s(size_t i) const { return s0 + static_cast<uint32_t>(i); }
};

enum class Rel { Ge, Gt, Eq }; // p rel 0

struct Constraint {
    Poly p;
    Rel rel;
    bool from_formula = false;
    std::string origin;
    double scale = 1.0; // 1 / max |coefficient|, for residuals
    struct Split {
        uint32_t var;
        Poly a, b; // p = a * var + b
    };
    std::vector<Split> splits;
};

struct Problem {
    Layout layout;
    std::vector<Constraint> constraints;
    std::vector<Interval> root;
    size_t hc = 0, oc = 0;
    std::vector<int8_t> signs;
};

Problem build_problem(const Signature& sig, const CaseSpace& cs, size_t hc, size_t oc,
                      const std::vector<int8_t>& signs);
Poly translate(const Polynomial& p, const Layout& L, const Signature& sig);

// ---- interval search -------------------------------------------------------

bool certified_violation(const Interval& range, Rel rel, double margin);
// Shrinks the box; false when some constraint is certainly violated on it.
bool contract(const Problem& P, std::vector<Interval>& box, double margin);

// Exact LP over the linear constraints (plus the box bounds when given); true when
// that relaxation already has no solution.
bool linear_part_infeasible(const Problem& P, const std::vector<Interval>* box, SatStats& stats);

// ---- polishing -------------------------------------------------------------

// Damped least squares on the constraint residuals, projected onto the root box.
// Returns the final sum of squared residuals.
double polish(const Problem& P, std::vector<double>& x, size_t iterations);

// ---- candidate verification ------------------------------------------------

struct Context {
    const Formula& formula;
    const Signature& sig;
    const CaseSpace& cases;
    const SolveOptions& opts;
};

std::optional<SatModel> verify_point(const Context& ctx, const Problem& P, const std::vector<double>& x);
Rational snap(double v, long max_den);
// Relative residual of each distinct comparison at the world, under the case's sign assignment.
std::optional<double> tolerant_check(const Context& ctx, const Problem& P, const EvidentialWorld& w);

// ---- per-case searches -----------------------------------------------------

struct CaseOutcome {
    enum class Kind { Sat, Unsat, Unknown };
    Kind kind = Kind::Unknown;
    std::optional<SatModel> model;
    std::string reason;
    SatStats stats;
};

// Quick attempt: root contraction plus polishing from the midpoint and random starts.
CaseOutcome quick_polynomial(const Context& ctx, const Problem& P, uint64_t seed);
CaseOutcome search_polynomial(const Context& ctx, const Problem& P, uint64_t seed,
                              const std::atomic<size_t>* best, size_t my_index);

CaseOutcome quick_linear(const Context& ctx, const Problem& P);
CaseOutcome search_linear(const Context& ctx, const Problem& P, const std::atomic<size_t>* best,
                          size_t my_index);

} // namespace evidence::sat
