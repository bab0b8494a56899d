#pragma once

#include "evidence/formula.hpp"

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace evidence {

enum class Dialect { Static, Dynamic };

struct ParseResult {
    FormulaPtr formula;
    std::vector<std::string> warnings;
    std::set<std::string> free_variables;
};

ParseResult parse_formula(std::string_view text, const Signature& sig,
                          Dialect dialect = Dialect::Static);
FormulaPtr parse(std::string_view text, const Signature& sig, Dialect dialect = Dialect::Static);
HypPtr parse_hypothesis(std::string_view text, const Signature& sig);

// A formula file: '#' comments and an optional leading header
//   hypotheses: a, b; observations: u, v;
// The header, when present, takes precedence over `external`.
struct FormulaFile {
    Signature signature;
    bool header = false;
    ParseResult result;
};

FormulaFile parse_formula_file(std::string_view text, const std::optional<Signature>& external,
                               Dialect dialect = Dialect::Static);

} // namespace evidence
