#include "evidence/formula.hpp"

namespace evidence {

namespace {

std::string print_hyp(const HypFormula& rho, bool top);

// Not(And(Not a, Not b)) reads back as a | b, Not(And(a, Not b)) as a => b.
template <class Node, class Print>
bool resugar(const Node& n, Print&& pr, std::string& out) {
    const Node& inner = *n.left;
    if (inner.kind != Node::Kind::And) return false;
    const Node& a = *inner.left;
    const Node& b = *inner.right;
    if (b.kind != Node::Kind::Not) return false;
    if (a.kind == Node::Kind::Not)
        out = "(" + pr(*a.left) + " | " + pr(*b.left) + ")";
    else
        out = "(" + pr(a) + " => " + pr(*b.left) + ")";
    return true;
}

std::string print_hyp(const HypFormula& rho, bool top) {
    std::string s;
    switch (rho.kind) {
    case HypFormula::Kind::Atom: return rho.name;
    case HypFormula::Kind::Not:
        if (resugar(rho, [](const HypFormula& x) { return print_hyp(x, false); }, s)) break;
        return "!" + print_hyp(*rho.left, false);
    case HypFormula::Kind::And:
        s = "(" + print_hyp(*rho.left, false) + " & " + print_hyp(*rho.right, false) + ")";
        break;
    }
    if (top && s.size() > 1 && s.front() == '(') return s.substr(1, s.size() - 2);
    return s;
}

const char* rel_text(Relation r) {
    switch (r) {
    case Relation::Ge: return " >= ";
    case Relation::Gt: return " > ";
    case Relation::Eq: return " = ";
    }
    return " ? ";
}

} // namespace

std::string print(const HypFormula& rho) { return print_hyp(rho, false); }

std::string print(const Factor& f) {
    if (auto* v = std::get_if<Variable>(&f)) return v->name;
    const auto& t = std::get<BasicTerm>(f);
    switch (t.kind) {
    case BasicTerm::Kind::Prior: return "Pr0(" + print_hyp(*t.rho, true) + ")";
    case BasicTerm::Kind::Posterior: return "Pr(" + print_hyp(*t.rho, true) + ")";
    case BasicTerm::Kind::Weight: {
        std::string s = "w(";
        if (t.sequence.size() == 1) {
            s += t.sequence[0];
        } else {
            s += "[";
            for (size_t i = 0; i < t.sequence.size(); ++i) s += (i ? "," : "") + t.sequence[i];
            s += "]";
        }
        return s + "," + t.hypothesis + ")";
    }
    }
    return "?";
}

std::string print(const Polynomial& p) {
    if (p.monomials.empty()) return "0";
    std::string s;
    for (size_t i = 0; i < p.monomials.size(); ++i) {
        const auto& m = p.monomials[i];
        BigInt c = m.coefficient;
        if (i == 0) {
            if (c < 0) s += "-";
        } else {
            s += c < 0 ? " - " : " + ";
        }
        c = abs(c);
        std::string body;
        for (size_t k = 0; k < m.factors.size(); ++k) body += (k ? "*" : "") + print(m.factors[k]);
        if (body.empty()) s += c.get_str();
        else if (c == 1) s += body;
        else s += c.get_str() + "*" + body;
    }
    return s;
}

std::string print(const Comparison& c) { return print(c.lhs) + rel_text(c.rel) + c.rhs.get_str(); }

std::string print(const Formula& f) {
    std::string s;
    switch (f.kind) {
    case Formula::Kind::Hyp:
    case Formula::Kind::Obs: return f.name;
    case Formula::Kind::Cmp: return print(f.cmp);
    case Formula::Kind::Not:
        if (resugar(f, [](const Formula& x) { return print(x); }, s)) return s;
        if (f.left->kind == Formula::Kind::Cmp) return "!(" + print(*f.left) + ")";
        return "!" + print(*f.left);
    case Formula::Kind::And: return "(" + print(*f.left) + " & " + print(*f.right) + ")";
    case Formula::Kind::Forall: return "forall " + f.name + " (" + print(*f.left) + ")";
    case Formula::Kind::Next: return "X(" + print(*f.left) + ")";
    }
    return "?";
}

} // namespace evidence
