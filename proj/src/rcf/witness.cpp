#include "evidence/rcf.hpp"

#include "evidence/errors.hpp"

#include <cctype>
#include <functional>

namespace evidence::rcf {

namespace {

// ---- SMT-LIB model reader ----

struct Sexp {
    std::string atom;
    std::vector<Sexp> list;
    bool is_list = false;
};

class SexpReader {
public:
    explicit SexpReader(std::string_view t) : t_(t) {}

    std::vector<Sexp> all() {
        std::vector<Sexp> out;
        skip();
        while (i_ < t_.size()) {
            out.push_back(read());
            skip();
        }
        return out;
    }

private:
    std::string_view t_;
    size_t i_ = 0;

    void skip() {
        while (i_ < t_.size()) {
            if (std::isspace(static_cast<unsigned char>(t_[i_]))) {
                ++i_;
            } else if (t_[i_] == ';') {
                while (i_ < t_.size() && t_[i_] != '\n') ++i_;
            } else {
                break;
            }
        }
    }

    Sexp read() {
        Sexp s;
        if (t_[i_] == '(') {
            s.is_list = true;
            ++i_;
            skip();
            while (i_ < t_.size() && t_[i_] != ')') {
                s.list.push_back(read());
                skip();
            }
            if (i_ >= t_.size()) throw DecodeInconsistent("unbalanced parentheses in the model");
            ++i_;
            return s;
        }
        if (t_[i_] == ')') throw DecodeInconsistent("unexpected ')' in the model");
        size_t start = i_;
        if (t_[i_] == '|') {
            size_t end = t_.find('|', i_ + 1);
            if (end == std::string_view::npos) throw DecodeInconsistent("unterminated |symbol| in the model");
            s.atom = std::string(t_.substr(i_ + 1, end - i_ - 1));
            i_ = end + 1;
            return s;
        }
        while (i_ < t_.size() && !std::isspace(static_cast<unsigned char>(t_[i_])) && t_[i_] != '(' && t_[i_] != ')')
            ++i_;
        s.atom = std::string(t_.substr(start, i_ - start));
        return s;
    }
};

Rational value_of(const Sexp& s) {
    if (!s.is_list) {
        try {
            return Rational::parse(s.atom);
        } catch (const std::exception&) {
            throw DecodeInconsistent("model value '" + s.atom + "' is not a rational number");
        }
    }
    if (s.list.empty() || s.list[0].is_list) throw DecodeInconsistent("malformed model value");
    const std::string& op = s.list[0].atom;
    std::vector<Rational> args;
    for (size_t k = 1; k < s.list.size(); ++k) args.push_back(value_of(s.list[k]));
    if (args.empty()) throw DecodeInconsistent("operator " + op + " without arguments in the model");
    if (op == "-") {
        if (args.size() == 1) return -args[0];
        Rational r = args[0];
        for (size_t k = 1; k < args.size(); ++k) r -= args[k];
        return r;
    }
    if (op == "+" || op == "*") {
        Rational r = args[0];
        for (size_t k = 1; k < args.size(); ++k) r = op == "+" ? r + args[k] : r * args[k];
        return r;
    }
    if (op == "/") {
        Rational r = args[0];
        for (size_t k = 1; k < args.size(); ++k) {
            if (args[k].is_zero()) throw DecodeInconsistent("division by zero in the model");
            r = r / args[k];
        }
        return r;
    }
    throw DecodeInconsistent("model value uses '" + op + "'; only rational values can be decoded");
}

void collect_definitions(const Sexp& s, Assignment& out) {
    if (!s.is_list) return;
    if (s.list.size() == 5 && !s.list[0].is_list && s.list[0].atom == "define-fun" && !s.list[1].is_list) {
        out[s.list[1].atom] = value_of(s.list[4]);
        return;
    }
    for (const auto& c : s.list) collect_definitions(c, out);
}

bool has_forall(const Prop& p) {
    if (p.kind == Prop::Kind::Forall) return true;
    for (const auto& a : p.args)
        if (has_forall(*a)) return true;
    return false;
}

std::vector<Rational> values_for(const RcfProblem& p, const Assignment& a) {
    std::vector<Rational> vals(p.variables.size());
    for (size_t i = 0; i < p.variables.size(); ++i) {
        if (p.variables[i].bound) continue;
        auto it = a.find(p.variables[i].name);
        if (it == a.end()) throw DecodeInconsistent("no value for " + p.variables[i].name);
        vals[i] = it->second;
    }
    return vals;
}

const Rational& at(const RcfProblem& p, const std::vector<Rational>& vals, const std::string& name) {
    return vals[p.index(name)];
}

std::string chosen(const RcfProblem& p, const std::vector<Rational>& vals, const std::vector<std::string>& names,
                   const std::vector<std::string>& var_names) {
    for (size_t k = 0; k < names.size(); ++k)
        if (at(p, vals, var_names[k]) == Rational(1)) return names[k];
    throw DecodeInconsistent("no indicator variable is 1");
}

EvidenceSpace decode_space(const RcfProblem& p, const std::vector<Rational>& vals) {
    const Signature& sig = p.signature;
    std::vector<std::vector<Rational>> mu(sig.hypotheses.size(), std::vector<Rational>(sig.observations.size()));
    for (size_t j = 0; j < sig.hypotheses.size(); ++j)
        for (size_t i = 0; i < sig.observations.size(); ++i)
            mu[j][i] = at(p, vals, z_name({i}, j)) * at(p, vals, s_name(i));
    return EvidenceSpace(sig.hypotheses, sig.observations, std::move(mu));
}

void put(Assignment& a, const RcfProblem& p, const std::string& name, Rational v) {
    if (p.find(name)) a[name] = std::move(v);
}

void put_common(Assignment& a, const RcfProblem& p, const std::string& h, const EvidenceSpace& space,
                const Valuation& v) {
    const Signature& sig = p.signature;
    for (size_t j = 0; j < sig.hypotheses.size(); ++j) put(a, p, u_name(j), Rational(sig.hypotheses[j] == h ? 1 : 0));
    for (size_t i = 0; i < sig.observations.size(); ++i) {
        put(a, p, s_name(i), space.observation_total(space.observation_index(sig.observations[i])));
        for (size_t j = 0; j < sig.hypotheses.size(); ++j)
            put(a, p, z_name({i}, j), weight_of_evidence(space, sig.observations[i], sig.hypotheses[j]));
    }
    for (const auto& var : p.variables) {
        if (var.bound || var.name.rfind("q_", 0) != 0) continue;
        std::string name = var.name.substr(2);
        auto it = v.find(name);
        if (it == v.end()) throw UnboundVariable("no value for free variable " + name);
        a[var.name] = it->second;
    }
}

} // namespace

Assignment parse_assignment(std::string_view text) {
    Assignment out;
    if (text.find("define-fun") != std::string_view::npos) {
        for (const auto& s : SexpReader(text).all()) collect_definitions(s, out);
        return out;
    }
    size_t pos = 0;
    size_t line_no = 0;
    while (pos <= text.size()) {
        size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string line(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw DecodeInconsistent("line " + std::to_string(line_no) + ": expected 'name = value'");
        auto trim = [](std::string s) {
            size_t b = s.find_first_not_of(" \t\r"), e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string name = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        try {
            out[name] = Rational::parse(value);
        } catch (const std::exception&) {
            throw DecodeInconsistent("line " + std::to_string(line_no) + ": '" + value + "' is not a rational");
        }
        if (end == text.size()) break;
    }
    return out;
}

bool holds(const Prop& p, const std::vector<Rational>& values) {
    switch (p.kind) {
    case Prop::Kind::True: return true;
    case Prop::Kind::False: return false;
    case Prop::Kind::Atom: {
        int s = p.poly.eval(values).sign();
        return p.rel == Prop::Rel::Eq ? s == 0 : p.rel == Prop::Rel::Ge ? s >= 0 : s > 0;
    }
    case Prop::Kind::Not: return !holds(*p.args[0], values);
    case Prop::Kind::And:
        for (const auto& a : p.args)
            if (!holds(*a, values)) return false;
        return true;
    case Prop::Kind::Or:
        for (const auto& a : p.args)
            if (holds(*a, values)) return true;
        return false;
    case Prop::Kind::Implies: return !holds(*p.args[0], values) || holds(*p.args[1], values);
    case Prop::Kind::Forall: throw QuantifierUnsupported("substitution cannot decide a quantified assertion");
    }
    return false;
}

std::vector<size_t> violated_assertions(const RcfProblem& p, const Assignment& a) {
    std::vector<Rational> vals = values_for(p, a);
    std::vector<size_t> out;
    for (size_t k = 0; k < p.assertions.size(); ++k) {
        const Prop& q = *p.assertions[k].prop;
        if (has_forall(q)) continue;
        if (!holds(q, vals)) out.push_back(k);
    }
    return out;
}

DecodedWitness decode_witness(const RcfProblem& p, const Assignment& a) {
    std::vector<Rational> vals = values_for(p, a);
    DecodedWitness out;
    for (size_t k = 0; k < p.assertions.size(); ++k) {
        const Assertion& as = p.assertions[k];
        if (has_forall(*as.prop)) {
            ++out.unchecked;
            continue;
        }
        if (!holds(*as.prop, vals))
            throw DecodeInconsistent("assertion " + std::to_string(k + 1) + " (" + as.family +
                                     ") is false under the assignment");
    }
    const Signature& sig = p.signature;
    std::vector<std::string> us;
    for (size_t j = 0; j < sig.hypotheses.size(); ++j) us.push_back(u_name(j));
    std::string h = chosen(p, vals, sig.hypotheses, us);
    EvidenceSpace space = decode_space(p, vals);

    std::vector<Rational> prior;
    for (size_t j = 0; j < sig.hypotheses.size(); ++j)
        prior.push_back(at(p, vals, p.dynamic ? y_name(j, 0) : x_name(j)));
    Distribution pr(sig.hypotheses, std::move(prior));

    if (!p.dynamic) {
        std::vector<std::string> vs;
        for (size_t i = 0; i < sig.observations.size(); ++i) vs.push_back(v_name(i));
        out.world.emplace(h, chosen(p, vals, sig.observations, vs), std::move(pr), std::move(space));
        return out;
    }
    Sequence prefix;
    for (size_t n = 1; n <= p.horizon; ++n) {
        std::vector<std::string> vs;
        for (size_t i = 0; i < sig.observations.size(); ++i) vs.push_back(v_name(i, n));
        prefix.push_back(chosen(p, vals, sig.observations, vs));
    }
    // the run is only pinned down up to the horizon; repeat the last observation afterwards
    Sequence cycle{prefix.empty() ? sig.observations.front() : prefix.back()};
    out.run.emplace(h, std::move(pr), std::move(space), std::move(prefix), std::move(cycle));
    return out;
}

Assignment encode_world(const RcfProblem& p, const EvidentialWorld& w, const Valuation& v) {
    if (p.dynamic) throw InvalidStructure("a world encodes the static translation only");
    const Signature& sig = p.signature;
    Assignment a;
    put_common(a, p, w.hypothesis, w.space, v);
    for (size_t i = 0; i < sig.observations.size(); ++i)
        put(a, p, v_name(i), Rational(sig.observations[i] == w.observation ? 1 : 0));
    Distribution post = world_posterior(w);
    for (size_t j = 0; j < sig.hypotheses.size(); ++j) {
        put(a, p, x_name(j), w.prior.mass(sig.hypotheses[j]));
        put(a, p, y_name(j), post.mass(sig.hypotheses[j]));
    }
    return a;
}

Assignment encode_run(const RcfProblem& p, const EvidentialRun& r, const Valuation& v) {
    if (!p.dynamic) throw InvalidStructure("a run encodes the dynamic translation only");
    const Signature& sig = p.signature;
    const size_t nh = sig.hypotheses.size();
    Assignment a;
    put_common(a, p, r.hypothesis, r.space, v);
    for (size_t n = 0; n <= p.horizon; ++n) {
        Distribution post = run_posterior(r, n);
        for (size_t j = 0; j < nh; ++j) put(a, p, y_name(j, n), post.mass(sig.hypotheses[j]));
        if (n == 0) continue;
        for (size_t i = 0; i < sig.observations.size(); ++i)
            put(a, p, v_name(i, n), Rational(sig.observations[i] == r.observation_at(n) ? 1 : 0));
    }
    for (const auto& seq : p.sequences) {
        std::vector<size_t> idx;
        for (const auto& ob : seq) idx.push_back(sig.observation_index(ob));
        for (size_t j = 0; j < nh; ++j) {
            Rational w(1, static_cast<long>(nh)); // any value fits a sequence nobody can observe
            try {
                w = sequence_weight(r.space, seq, sig.hypotheses[j]);
            } catch (const ZeroSequenceLikelihood&) {
            }
            put(a, p, z_name(idx, j), w);
        }
    }
    return a;
}

} // namespace evidence::rcf
