#pragma once

#include "evidence/formula.hpp"
#include "evidence/model_checker.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace evidence {

struct SolveOptions {
    size_t budget_boxes = 3000; // per sign case
    size_t max_depth = 64;
    double tolerance = 1e-9;    // residual allowed for non-exact models
    double margin = 0.0;        // robustness margin for pruning certificates
    size_t polish_iterations = 150;
    size_t restarts = 4;        // random polishing starts per case before branching
    uint64_t seed = 1;
    bool parallel = false;
    unsigned threads = 0;       // 0 = hardware concurrency
};

enum class Verdict { Sat, Unsat, Unknown };
const char* verdict_name(Verdict v);

struct SatModel {
    EvidentialWorld world;
    bool exact = true;          // satisfies() holds in exact arithmetic
    double max_residual = 0.0;  // for inexact models
};

struct SatStats {
    size_t hypothesis_cases = 0;
    size_t observation_cases = 0;
    size_t sign_cases = 0;
    size_t cases_pruned_at_root = 0;
    size_t boxes = 0;
    size_t max_depth = 0;
    size_t polish_calls = 0;
    size_t lp_calls = 0;
    double seconds = 0.0;       // wall clock; not part of the determinism contract

    friend bool operator==(const SatStats& a, const SatStats& b) {
        return a.hypothesis_cases == b.hypothesis_cases && a.observation_cases == b.observation_cases &&
               a.sign_cases == b.sign_cases && a.cases_pruned_at_root == b.cases_pruned_at_root &&
               a.boxes == b.boxes && a.max_depth == b.max_depth && a.polish_calls == b.polish_calls &&
               a.lp_calls == b.lp_calls;
    }
};

struct SatResult {
    Verdict verdict = Verdict::Unknown;
    std::optional<SatModel> model;
    std::string reason;
    std::string route; // "linear" or "polynomial"
    SatStats stats;
};

// Decides L^w and L^ev formulas over the given signature.
SatResult solve(const Formula& f, const Signature& sig, const SolveOptions& opts = {});

// Names occurring in f plus fresh h* and ob*.
Signature augment_signature(const Formula& f);

} // namespace evidence
