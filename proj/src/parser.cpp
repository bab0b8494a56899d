#include "evidence/parser.hpp"

#include "evidence/errors.hpp"

#include <algorithm>
#include <cctype>
#include <exception>
#include <utility>

namespace evidence {

namespace {

enum class Tok {
    Ident, Int, LParen, RParen, LBrack, RBrack, Comma, Colon, Semi,
    And, Or, Not, Implies, Iff, Le, Ge, Lt, Gt, Eq, Plus, Minus, Star, Slash, Caret, End
};

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
};

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto advance = [&](size_t n) {
        for (size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        int l = line, cl = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), l, cl});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            out.push_back({Tok::Int, std::string(src.substr(i, j - i)), l, cl});
            advance(j - i);
            continue;
        }
        auto starts = [&](std::string_view s) { return src.substr(i, s.size()) == s; };
        static const std::pair<std::string_view, Tok> ops[] = {
            {"<=>", Tok::Iff}, {"=>", Tok::Implies}, {"<=", Tok::Le}, {">=", Tok::Ge},
            {"<", Tok::Lt},    {">", Tok::Gt},      {"=", Tok::Eq},  {"&", Tok::And},
            {"|", Tok::Or},    {"!", Tok::Not},     {"(", Tok::LParen}, {")", Tok::RParen},
            {"[", Tok::LBrack}, {"]", Tok::RBrack}, {",", Tok::Comma}, {":", Tok::Colon},
            {";", Tok::Semi},  {"+", Tok::Plus},    {"-", Tok::Minus}, {"*", Tok::Star},
            {"/", Tok::Slash}, {"^", Tok::Caret},
        };
        bool matched = false;
        for (const auto& [s, k] : ops) {
            if (starts(s)) {
                out.push_back({k, std::string(s), l, cl});
                advance(s.size());
                matched = true;
                break;
            }
        }
        if (!matched) throw ParseError(std::string("unexpected character '") + c + "'", l, cl);
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

bool is_reserved(std::string_view s) {
    return s == "Pr" || s == "Pr0" || s == "w" || s == "X" || s == "forall" || s == "exists" ||
           s == "true" || s == "false";
}

// Polynomial with rational coefficients, used while reading arithmetic.
struct RPoly {
    struct Term {
        Rational coef;
        std::vector<Factor> factors;
    };
    std::vector<Term> terms;
    bool literal = false;

    static RPoly constant(Rational c, bool literal) {
        RPoly p;
        p.terms.push_back({std::move(c), {}});
        p.literal = literal;
        return p;
    }
    static RPoly factor(Factor f) {
        RPoly p;
        p.terms.push_back({Rational(1), {std::move(f)}});
        return p;
    }

    void add_term(Term t) {
        if (t.coef.is_zero()) return;
        std::stable_sort(t.factors.begin(), t.factors.end(), factor_less);
        for (auto& o : terms) {
            if (o.factors.size() != t.factors.size()) continue;
            bool same = true;
            for (size_t k = 0; k < t.factors.size() && same; ++k) same = equal(o.factors[k], t.factors[k]);
            if (same) {
                o.coef += t.coef;
                return;
            }
        }
        terms.push_back(std::move(t));
    }

    RPoly plus(const RPoly& b, const Rational& sign) const {
        RPoly r;
        for (const auto& t : terms) r.add_term(t);
        for (const auto& t : b.terms) r.add_term({t.coef * sign, t.factors});
        return r;
    }

    RPoly times(const RPoly& b) const {
        RPoly r;
        for (const auto& x : terms)
            for (const auto& y : b.terms) {
                Term t{x.coef * y.coef, x.factors};
                t.factors.insert(t.factors.end(), y.factors.begin(), y.factors.end());
                r.add_term(std::move(t));
            }
        r.literal = literal && b.literal;
        return r;
    }

    Rational constant_value() const {
        Rational c;
        for (const auto& t : terms)
            if (t.factors.empty()) c += t.coef;
        return c;
    }
};

class Parser {
public:
    Parser(std::vector<Token> toks, const Signature& sig, Dialect d)
        : toks_(std::move(toks)), sig_(sig), dialect_(d) {}

    ParseResult run_formula() {
        ParseResult r;
        r.formula = formula();
        expect(Tok::End, "end of input");
        r.warnings = warnings_;
        r.free_variables = free_variables(*r.formula);
        return r;
    }

    HypPtr run_hypothesis() {
        HypPtr h = hyp_iff();
        expect(Tok::End, "end of input");
        return h;
    }

private:
    std::vector<Token> toks_;
    size_t pos_ = 0;
    const Signature& sig_;
    Dialect dialect_;
    std::vector<std::string> scope_;
    std::vector<std::string> warnings_;

    const Token& peek(size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    bool at(Tok k) const { return peek().kind == k; }
    bool at_ident(std::string_view s) const { return at(Tok::Ident) && peek().text == s; }
    const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(const std::string& msg, const Token& t) const {
        throw ParseError(msg, t.line, t.col);
    }
    [[noreturn]] void fail(const std::string& msg) const { fail(msg, peek()); }

    static std::string describe(const Token& t) {
        return t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    }

    const Token& expect(Tok k, const char* what) {
        if (!at(k)) fail(std::string("expected ") + what + ", found " + describe(peek()));
        return take();
    }

    // ---- formulas ----

    FormulaPtr formula() {
        FormulaPtr a = implication();
        while (at(Tok::Iff)) {
            take();
            a = Formula::iff(a, implication());
        }
        return a;
    }

    FormulaPtr implication() {
        FormulaPtr a = disjunction();
        if (at(Tok::Implies)) {
            take();
            return Formula::implies(a, implication());
        }
        return a;
    }

    FormulaPtr disjunction() {
        FormulaPtr a = conjunction();
        while (at(Tok::Or)) {
            take();
            a = Formula::disj(a, conjunction());
        }
        return a;
    }

    FormulaPtr conjunction() {
        FormulaPtr a = unary();
        while (at(Tok::And)) {
            take();
            a = Formula::conj(a, unary());
        }
        return a;
    }

    FormulaPtr unary() {
        if (at(Tok::Not)) {
            take();
            return Formula::negate(unary());
        }
        if (at_ident("forall") || at_ident("exists")) {
            bool universal = take().text == "forall";
            const Token& v = expect(Tok::Ident, "a variable name");
            if (is_reserved(v.text)) fail("'" + v.text + "' is reserved", v);
            if (sig_.is_hypothesis(v.text) || sig_.is_observation(v.text))
                fail("variable '" + v.text + "' clashes with a declared name", v);
            if (std::find(scope_.begin(), scope_.end(), v.text) != scope_.end())
                warnings_.push_back(std::to_string(v.line) + ":" + std::to_string(v.col) +
                                    ": variable '" + v.text + "' shadows an outer binding");
            expect(Tok::LParen, "'(' after the quantified variable");
            scope_.push_back(v.text);
            FormulaPtr body = formula();
            scope_.pop_back();
            expect(Tok::RParen, "')'");
            return universal ? Formula::forall(v.text, body) : Formula::exists(v.text, body);
        }
        if (at_ident("X") && peek(1).kind == Tok::LParen) {
            if (dialect_ == Dialect::Static)
                fail("the next-time operator X is not part of the static language");
            take();
            take();
            FormulaPtr body = formula();
            expect(Tok::RParen, "')'");
            return Formula::next(body);
        }
        return primary();
    }

    FormulaPtr primary() {
        if (at(Tok::Ident) && peek(1).kind != Tok::LParen) {
            const std::string& name = peek().text;
            if (name == "true") {
                take();
                return Formula::truth(sig_);
            }
            if (name == "false") {
                take();
                return Formula::falsity(sig_);
            }
            if (sig_.is_hypothesis(name)) return Formula::hyp(take().text);
            if (sig_.is_observation(name)) return Formula::obs(take().text);
        }
        if (at(Tok::LParen)) {
            // Either a parenthesized formula or a comparison whose left side starts with '('.
            // Report whichever reading got further.
            size_t start = pos_;
            size_t scope_depth = scope_.size(), n_warnings = warnings_.size();
            std::exception_ptr cmp_error;
            std::pair<int, int> cmp_at;
            try {
                return Formula::compare(comparison());
            } catch (const ParseError& e) {
                cmp_error = std::current_exception();
                cmp_at = {e.line(), e.column()};
            }
            pos_ = start;
            scope_.resize(scope_depth);
            warnings_.resize(n_warnings);
            try {
                take();
                FormulaPtr f = formula();
                expect(Tok::RParen, "')'");
                return f;
            } catch (const ParseError& e) {
                if (cmp_at > std::pair(e.line(), e.column())) std::rethrow_exception(cmp_error);
                throw;
            }
        }
        return Formula::compare(comparison());
    }

    // ---- comparisons ----

    Comparison comparison() {
        size_t start = pos_;
        RPoly lhs = arith();
        if (!(at(Tok::Ge) || at(Tok::Gt) || at(Tok::Le) || at(Tok::Lt) || at(Tok::Eq))) {
            const Token& first = toks_[start];
            if (pos_ == start + 1 && first.kind == Tok::Ident && !is_reserved(first.text) &&
                std::find(scope_.begin(), scope_.end(), first.text) == scope_.end())
                throw UndeclaredName("undeclared name '" + first.text + "'", first.line, first.col);
            fail("expected a comparison operator, found " + describe(peek()));
        }
        Tok op = take().kind;
        RPoly rhs = arith();
        RPoly diff = lhs.plus(rhs, Rational(-1));
        Rational constant = diff.constant_value();
        BigInt scale = 1;
        for (const auto& t : diff.terms) scale = big_lcm(scale, t.coef.denominator());
        Polynomial p;
        for (const auto& t : diff.terms) {
            if (t.factors.empty() || t.coef.is_zero()) continue;
            Rational c = t.coef * Rational(scale);
            p.monomials.push_back({c.numerator(), t.factors});
        }
        BigInt k = (-constant * Rational(scale)).numerator();
        Comparison c;
        switch (op) {
        case Tok::Ge: c.rel = Relation::Ge; break;
        case Tok::Gt: c.rel = Relation::Gt; break;
        case Tok::Eq: c.rel = Relation::Eq; break;
        case Tok::Le:
        case Tok::Lt:
            c.rel = op == Tok::Le ? Relation::Ge : Relation::Gt;
            for (auto& m : p.monomials) m.coefficient = -m.coefficient;
            k = -k;
            break;
        default: break;
        }
        c.lhs = std::move(p);
        c.rhs = k;
        return c;
    }

    RPoly arith() {
        RPoly a = term();
        while (at(Tok::Plus) || at(Tok::Minus)) {
            Rational sign = take().kind == Tok::Plus ? 1 : -1;
            RPoly b = term();
            bool lit = a.literal && b.literal;
            a = a.plus(b, sign);
            a.literal = lit;
        }
        return a;
    }

    RPoly term() {
        RPoly a = signed_factor();
        while (at(Tok::Star) || at(Tok::Slash)) {
            const Token& op = take();
            if (op.kind == Tok::Star) {
                a = a.times(signed_factor());
                continue;
            }
            const Token& at_den = peek();
            RPoly b = signed_factor();
            if (!a.literal || !b.literal)
                fail("division is only allowed between integer literals; crossmultiply instead", op);
            Rational den = b.constant_value();
            if (den.is_zero()) fail("division by zero", at_den);
            a = RPoly::constant(a.constant_value() / den, true);
        }
        return a;
    }

    RPoly signed_factor() {
        if (at(Tok::Minus)) {
            take();
            RPoly a = signed_factor();
            bool lit = a.literal;
            a = RPoly().plus(a, Rational(-1));
            a.literal = lit;
            return a;
        }
        if (at(Tok::Plus)) {
            take();
            return signed_factor();
        }
        return power();
    }

    RPoly power() {
        if (at(Tok::Int)) {
            BigInt base(take().text);
            if (at(Tok::Caret)) {
                take();
                const Token& e = expect(Tok::Int, "an integer exponent");
                BigInt ev(e.text);
                if (ev > 100000) fail("exponent too large", e);
                base = big_pow(base, ev.get_ui());
            }
            return RPoly::constant(Rational(base), true);
        }
        RPoly a = atom_term();
        if (at(Tok::Caret)) fail("exponents are only allowed on integer literals");
        return a;
    }

    RPoly atom_term() {
        if (at(Tok::LParen)) {
            take();
            RPoly a = arith();
            expect(Tok::RParen, "')'");
            a.literal = false;
            return a;
        }
        if (!at(Tok::Ident)) fail("expected a term, found " + describe(peek()));
        const Token& t = take();
        if ((t.text == "Pr0" || t.text == "Pr") && at(Tok::LParen)) {
            if (t.text == "Pr0" && dialect_ == Dialect::Dynamic)
                fail("Pr0 is not part of the dynamic language; use Pr at time 0", t);
            take();
            HypPtr rho = hyp_iff();
            expect(Tok::RParen, "')'");
            return RPoly::factor(t.text == "Pr0" ? BasicTerm::prior(rho) : BasicTerm::posterior(rho));
        }
        if (t.text == "w" && at(Tok::LParen)) {
            take();
            ObsSequence seq;
            if (at(Tok::LBrack)) {
                take();
                seq.push_back(observation_name());
                while (at(Tok::Comma)) {
                    take();
                    seq.push_back(observation_name());
                }
                expect(Tok::RBrack, "']'");
                if (seq.size() > 1 && dialect_ == Dialect::Static)
                    fail("observation sequences are not part of the static language", t);
            } else {
                seq.push_back(observation_name());
            }
            expect(Tok::Comma, "','");
            std::string h = hypothesis_name();
            expect(Tok::RParen, "')'");
            return RPoly::factor(BasicTerm::weight(std::move(seq), std::move(h)));
        }
        if (is_reserved(t.text)) fail("'" + t.text + "' cannot be used as a term", t);
        if (sig_.is_hypothesis(t.text)) fail("hypothesis '" + t.text + "' cannot be used as a term", t);
        if (sig_.is_observation(t.text)) fail("observation '" + t.text + "' cannot be used as a term", t);
        return RPoly::factor(Variable{t.text});
    }

    std::string observation_name() {
        const Token& t = expect(Tok::Ident, "an observation name");
        if (sig_.is_observation(t.text)) return t.text;
        if (sig_.is_hypothesis(t.text)) fail("'" + t.text + "' is a hypothesis, not an observation", t);
        throw UndeclaredName("undeclared observation '" + t.text + "'", t.line, t.col);
    }

    std::string hypothesis_name() {
        const Token& t = expect(Tok::Ident, "a hypothesis name");
        if (sig_.is_hypothesis(t.text)) return t.text;
        if (sig_.is_observation(t.text)) fail("'" + t.text + "' is an observation, not a hypothesis", t);
        throw UndeclaredName("undeclared hypothesis '" + t.text + "'", t.line, t.col);
    }

    // ---- hypothesis formulas ----

    HypPtr hyp_iff() {
        HypPtr a = hyp_implies();
        while (at(Tok::Iff)) {
            take();
            a = HypFormula::iff(a, hyp_implies());
        }
        return a;
    }

    HypPtr hyp_implies() {
        HypPtr a = hyp_or();
        if (at(Tok::Implies)) {
            take();
            return HypFormula::implies(a, hyp_implies());
        }
        return a;
    }

    HypPtr hyp_or() {
        HypPtr a = hyp_and();
        while (at(Tok::Or)) {
            take();
            a = HypFormula::disj(a, hyp_and());
        }
        return a;
    }

    HypPtr hyp_and() {
        HypPtr a = hyp_unary();
        while (at(Tok::And)) {
            take();
            a = HypFormula::conj(a, hyp_unary());
        }
        return a;
    }

    HypPtr hyp_unary() {
        if (at(Tok::Not)) {
            take();
            return HypFormula::negate(hyp_unary());
        }
        if (at(Tok::LParen)) {
            take();
            HypPtr a = hyp_iff();
            expect(Tok::RParen, "')'");
            return a;
        }
        if (at_ident("true")) {
            take();
            return HypFormula::truth(sig_);
        }
        if (at_ident("false")) {
            take();
            return HypFormula::falsity(sig_);
        }
        return HypFormula::atom(hypothesis_name());
    }
};

std::vector<std::string> name_list(const std::vector<Token>& toks, size_t& i) {
    std::vector<std::string> out;
    while (true) {
        if (toks[i].kind != Tok::Ident) throw ParseError("expected a name", toks[i].line, toks[i].col);
        out.push_back(toks[i++].text);
        if (toks[i].kind != Tok::Comma) break;
        ++i;
    }
    if (toks[i].kind != Tok::Semi) throw ParseError("expected ';'", toks[i].line, toks[i].col);
    ++i;
    return out;
}

} // namespace

ParseResult parse_formula(std::string_view text, const Signature& sig, Dialect dialect) {
    return Parser(lex(text), sig, dialect).run_formula();
}

FormulaPtr parse(std::string_view text, const Signature& sig, Dialect dialect) {
    return parse_formula(text, sig, dialect).formula;
}

HypPtr parse_hypothesis(std::string_view text, const Signature& sig) {
    return Parser(lex(text), sig, Dialect::Static).run_hypothesis();
}

FormulaFile parse_formula_file(std::string_view text, const std::optional<Signature>& external,
                               Dialect dialect) {
    std::vector<Token> toks = lex(text);
    FormulaFile out;
    size_t i = 0;
    std::optional<std::vector<std::string>> hyps, obs;
    while (toks[i].kind == Tok::Ident && toks[i + 1].kind == Tok::Colon &&
           (toks[i].text == "hypotheses" || toks[i].text == "observations")) {
        bool is_h = toks[i].text == "hypotheses";
        const Token& kw = toks[i];
        i += 2;
        auto names = name_list(toks, i);
        auto& slot = is_h ? hyps : obs;
        if (slot) throw ParseError("duplicate '" + kw.text + "' header", kw.line, kw.col);
        slot = std::move(names);
    }
    if (hyps || obs) {
        if (!hyps || !obs)
            throw ParseError("signature header needs both hypotheses and observations", toks[0].line,
                             toks[0].col);
        out.signature = Signature(*hyps, *obs);
        out.header = true;
    } else if (external) {
        out.signature = *external;
    } else {
        throw ParseError("no signature: add a 'hypotheses: ...; observations: ...;' header",
                         toks[0].line, toks[0].col);
    }
    std::vector<Token> rest(toks.begin() + static_cast<long>(i), toks.end());
    out.result = Parser(std::move(rest), out.signature, dialect).run_formula();
    return out;
}

} // namespace evidence
