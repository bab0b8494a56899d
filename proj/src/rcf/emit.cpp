#include "evidence/rcf.hpp"

#include <sstream>

namespace evidence::rcf {

namespace {

std::string binary(const BigInt& k) {
    if (k == 0) return "0";
    if (k == 1) return "1";
    if (k == 2) return "(+ 1 1)";
    BigInt half = k / 2;
    std::string base = half == 1 ? "(+ 1 1)" : "(* (+ 1 1) " + binary(half) + ")";
    return k % 2 == 0 ? base : "(+ " + base + " 1)";
}

class Writer {
public:
    Writer(const RcfProblem& p, const EmitOptions& o) : p_(p), o_(o) {}

    std::string integer(const BigInt& k) const { return o_.binary_constants ? binary(k) : to_string(k); }

    std::string constant(const Rational& c) const {
        if (c.is_integer()) return integer(c.numerator());
        return "(/ " + integer(c.numerator()) + " " + integer(c.denominator()) + ")";
    }

    // |coef| * product of variables
    std::string term(const Poly::Term& t) const {
        std::vector<std::string> parts;
        Rational c = t.coef.abs();
        if (!(c == Rational(1)) || t.powers.empty()) parts.push_back(constant(c));
        for (const auto& [v, e] : t.powers)
            for (uint32_t k = 0; k < e; ++k) parts.push_back(p_.variables[v].name);
        if (parts.size() == 1) return parts[0];
        std::string out = "(*";
        for (const auto& s : parts) out += " " + s;
        return out + ")";
    }

    std::string sum(const std::vector<std::string>& parts) const {
        if (parts.empty()) return "0";
        if (parts.size() == 1) return parts[0];
        std::string out = "(+";
        for (const auto& s : parts) out += " " + s;
        return out + ")";
    }

    std::string prop(const Prop& q) const {
        switch (q.kind) {
        case Prop::Kind::True: return "true";
        case Prop::Kind::False: return "false";
        case Prop::Kind::Atom: {
            // positive terms on the left, negated negative terms on the right
            std::vector<std::string> lhs, rhs;
            for (const auto& t : q.poly.terms()) (t.coef.sign() > 0 ? lhs : rhs).push_back(term(t));
            const char* rel = q.rel == Prop::Rel::Ge ? ">=" : q.rel == Prop::Rel::Gt ? ">" : "=";
            return std::string("(") + rel + " " + sum(lhs) + " " + sum(rhs) + ")";
        }
        case Prop::Kind::Not: return "(not " + prop(*q.args[0]) + ")";
        case Prop::Kind::And:
        case Prop::Kind::Or: {
            std::string out = q.kind == Prop::Kind::And ? "(and" : "(or";
            for (const auto& a : q.args) out += " " + prop(*a);
            return out + ")";
        }
        case Prop::Kind::Implies: return "(=> " + prop(*q.args[0]) + " " + prop(*q.args[1]) + ")";
        case Prop::Kind::Forall:
            return "(forall ((" + p_.variables[q.bound].name + " Real)) " + prop(*q.args[0]) + ")";
        }
        return "true";
    }

private:
    const RcfProblem& p_;
    const EmitOptions& o_;
};

std::string join(const std::vector<std::string>& names) {
    std::string out;
    for (const auto& n : names) out += (out.empty() ? "" : " ") + n;
    return out;
}

} // namespace

std::string emit(const RcfProblem& p, const EmitOptions& opts) {
    Writer w(p, opts);
    std::ostringstream out;
    out << "; evidence logic, " << (p.dynamic ? "dynamic" : "static") << " translation to real arithmetic\n";
    out << "; formula: " << p.source << "\n";
    out << "; hypotheses: " << join(p.signature.hypotheses) << "\n";
    out << "; observations: " << join(p.signature.observations) << "\n";
    if (p.dynamic) out << "; horizon: " << p.horizon << "\n";
    if (p.quantified) out << "; note: the formula has quantifiers; they are emitted as written\n";
    out << "(set-logic " << (p.quantified ? "NRA" : "QF_NRA") << ")\n";
    for (const auto& v : p.variables) {
        if (v.bound) continue;
        out << "(declare-fun " << v.name << " () Real) ; " << v.meaning << "\n";
    }
    std::string family;
    for (const auto& a : p.assertions) {
        if (a.family != family) {
            family = a.family;
            out << "; " << family << "\n";
        }
        out << "(assert " << w.prop(*a.prop) << ")\n";
    }
    if (opts.check_sat) out << "(check-sat)\n(get-model)\n";
    return out.str();
}

} // namespace evidence::rcf
