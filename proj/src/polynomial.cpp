#include "evidence/polynomial.hpp"

#include <algorithm>

namespace evidence {

void Poly::cache(Term& t) {
    double d = t.coef.to_double();
    t.coef_d = d;
    // mpq_get_d truncates, so one ulp on each side encloses the exact value.
    t.coef_range = t.coef.is_integer() && std::abs(d) < 9.0e15 ? Interval{d, d} : Interval{down(d), up(d)};
}

void Poly::add_term(Term t) {
    if (t.coef.is_zero()) return;
    for (auto it = terms_.begin(); it != terms_.end(); ++it) {
        if (it->powers != t.powers) continue;
        it->coef += t.coef;
        if (it->coef.is_zero()) terms_.erase(it);
        else cache(*it);
        return;
    }
    cache(t);
    terms_.push_back(std::move(t));
}

Poly Poly::constant(const Rational& c) {
    Poly p;
    p.add_term({c, {}, {}, 0.0});
    return p;
}

Poly Poly::variable(uint32_t v) {
    Poly p;
    p.add_term({Rational(1), {{v, 1}}, {}, 0.0});
    return p;
}

Poly& Poly::operator+=(const Poly& o) {
    for (const auto& t : o.terms_) add_term(t);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    for (auto t : o.terms_) {
        t.coef = -t.coef;
        add_term(std::move(t));
    }
    return *this;
}

Poly& Poly::operator*=(const Rational& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) {
        t.coef *= c;
        cache(t);
    }
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    Poly r;
    for (const auto& x : a.terms_)
        for (const auto& y : b.terms_) {
            Poly::Term t{x.coef * y.coef, x.powers, {}, 0.0};
            for (const auto& [v, e] : y.powers) {
                auto it = std::find_if(t.powers.begin(), t.powers.end(),
                                       [v = v](const auto& p) { return p.first == v; });
                if (it == t.powers.end()) t.powers.emplace_back(v, e);
                else it->second += e;
            }
            std::sort(t.powers.begin(), t.powers.end());
            r.add_term(std::move(t));
        }
    return r;
}

size_t Poly::degree() const {
    size_t d = 0;
    for (const auto& t : terms_) {
        size_t s = 0;
        for (const auto& p : t.powers) s += p.second;
        d = std::max(d, s);
    }
    return d;
}

std::vector<uint32_t> Poly::variables() const {
    std::vector<uint32_t> vs;
    for (const auto& t : terms_)
        for (const auto& p : t.powers) vs.push_back(p.first);
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
}

Rational Poly::eval(const std::vector<Rational>& x) const {
    Rational s;
    for (const auto& t : terms_) {
        Rational m = t.coef;
        for (const auto& [v, e] : t.powers)
            for (uint32_t k = 0; k < e; ++k) m *= x[v];
        s += m;
    }
    return s;
}

double Poly::eval(const std::vector<double>& x) const {
    double s = 0.0;
    for (const auto& t : terms_) {
        double m = t.coef_d;
        for (const auto& [v, e] : t.powers) m *= e == 1 ? x[v] : std::pow(x[v], static_cast<double>(e));
        s += m;
    }
    return s;
}

void Poly::add_gradient(const std::vector<double>& x, double scale, std::vector<double>& g) const {
    for (const auto& t : terms_) {
        for (size_t i = 0; i < t.powers.size(); ++i) {
            double d = t.coef_d * scale * t.powers[i].second;
            for (size_t j = 0; j < t.powers.size(); ++j) {
                auto [v, e] = t.powers[j];
                uint32_t ee = i == j ? e - 1 : e;
                if (ee) d *= ee == 1 ? x[v] : std::pow(x[v], static_cast<double>(ee));
            }
            g[t.powers[i].first] += d;
        }
    }
}

Interval Poly::range(const std::vector<Interval>& box) const {
    Interval s{0.0, 0.0};
    for (const auto& t : terms_) {
        Interval m{1.0, 1.0};
        bool nonneg = true;
        for (const auto& [v, e] : t.powers) nonneg = nonneg && box[v].lo >= 0.0;
        if (nonneg) {
            double lo = 1.0, hi = 1.0;
            for (const auto& [v, e] : t.powers)
                for (uint32_t k = 0; k < e; ++k) {
                    lo = down(lo * box[v].lo);
                    hi = up(hi * box[v].hi);
                }
            m = {std::max(0.0, lo), hi};
        } else {
            for (const auto& [v, e] : t.powers) m = m * power(box[v], e);
        }
        s = s + t.coef_range * m;
    }
    return s;
}

bool Poly::split_linear(uint32_t v, Poly& a, Poly& b) const {
    a = Poly();
    b = Poly();
    for (const auto& t : terms_) {
        auto it = std::find_if(t.powers.begin(), t.powers.end(), [v](const auto& p) { return p.first == v; });
        if (it == t.powers.end()) {
            b.add_term(t);
            continue;
        }
        if (it->second != 1) return false;
        Term r = t;
        r.powers.erase(r.powers.begin() + (it - t.powers.begin()));
        a.add_term(std::move(r));
    }
    return true;
}

} // namespace evidence
