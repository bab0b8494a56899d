#pragma once

#include "evidence/interval.hpp"
#include "evidence/rational.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace evidence {

// Sparse multivariate polynomial over indexed variables with exact coefficients.
// Double images of the coefficients are cached by finalize().
class Poly {
public:
    struct Term {
        Rational coef;
        std::vector<std::pair<uint32_t, uint32_t>> powers; // (variable, exponent), sorted
        Interval coef_range;
        double coef_d = 0.0;
    };

    static Poly constant(const Rational& c);
    static Poly variable(uint32_t v);

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Rational& c);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(Poly a, const Rational& c) { return a *= c; }

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t degree() const;
    std::vector<uint32_t> variables() const;

    Rational eval(const std::vector<Rational>& x) const;
    double eval(const std::vector<double>& x) const;
    // Adds scale * gradient into g.
    void add_gradient(const std::vector<double>& x, double scale, std::vector<double>& g) const;
    // Range over a box of nonnegative variables.
    Interval range(const std::vector<Interval>& box) const;
    // Writes p = a * x_v + b when x_v occurs only linearly; false otherwise.
    bool split_linear(uint32_t v, Poly& a, Poly& b) const;

private:
    std::vector<Term> terms_;
    void add_term(Term t);
    static void cache(Term& t);
};

} // namespace evidence
