#include "evidence/rational.hpp"

#include "evidence/errors.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace evidence {

namespace {

bool parse_digits(std::string_view s, BigInt& out) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    out.set_str(std::string(s), 10);
    return true;
}

[[noreturn]] void bad(std::string_view text) {
    throw DocumentError("malformed rational: '" + std::string(text) + "'");
}

} // namespace

Rational::Rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("division by zero");
    q_ /= o.q_;
    return *this;
}

Rational Rational::inverse() const { return Rational(1) / *this; }

Rational Rational::pow(const Rational& base, unsigned long exp) {
    return Rational(big_pow(base.numerator(), exp), big_pow(base.denominator(), exp));
}

Rational Rational::parse(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) bad(text);
    bool neg = false;
    if (s.front() == '-' || s.front() == '+') {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    Rational r;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        BigInt p, q;
        if (!parse_digits(s.substr(0, slash), p) || !parse_digits(s.substr(slash + 1), q) || q == 0)
            bad(text);
        r = Rational(p, q);
    } else {
        // decimal with optional exponent
        std::string_view mant = s;
        long exp10 = 0;
        if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
            mant = s.substr(0, e);
            std::string_view ex = s.substr(e + 1);
            bool eneg = false;
            if (!ex.empty() && (ex.front() == '-' || ex.front() == '+')) {
                eneg = ex.front() == '-';
                ex.remove_prefix(1);
            }
            BigInt ev;
            if (!parse_digits(ex, ev) || !ev.fits_slong_p()) bad(text);
            exp10 = eneg ? -ev.get_si() : ev.get_si();
        }
        std::string digits;
        long frac = 0;
        if (auto dot = mant.find('.'); dot != std::string_view::npos) {
            digits = std::string(mant.substr(0, dot)) + std::string(mant.substr(dot + 1));
            frac = static_cast<long>(mant.size() - dot - 1);
            if (dot == 0 && frac == 0) bad(text);
        } else {
            digits = std::string(mant);
        }
        BigInt n;
        if (!parse_digits(digits, n)) bad(text);
        exp10 -= frac;
        if (std::labs(exp10) > 100000) bad(text);
        BigInt scale = big_pow(BigInt(10), static_cast<unsigned long>(std::labs(exp10)));
        r = exp10 >= 0 ? Rational(BigInt(n * scale)) : Rational(n, scale);
    }
    return neg ? -r : r;
}

Rational Rational::from_double(double d) {
    if (!std::isfinite(d)) throw std::domain_error("non-finite double");
    mpq_class q(d);
    return Rational(q);
}

std::string Rational::str() const {
    if (is_integer()) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::string Rational::decimal(int digits) const {
    if (digits < 0) digits = 0;
    BigInt scale = big_pow(BigInt(10), static_cast<unsigned long>(digits));
    BigInt num = ::abs(q_.get_num()) * scale;
    BigInt den = q_.get_den();
    BigInt quot = num / den;
    BigInt rem = num - quot * den;
    if (2 * rem >= den) quot += 1;
    std::string body = quot.get_str();
    if (digits > 0) {
        if (body.size() <= static_cast<size_t>(digits))
            body.insert(0, static_cast<size_t>(digits) + 1 - body.size(), '0');
        body.insert(body.size() - static_cast<size_t>(digits), ".");
    }
    bool negative = sign() < 0 && quot != 0;
    return negative ? "-" + body : body;
}

std::string to_string(const BigInt& v) { return v.get_str(); }

BigInt big_pow(const BigInt& base, unsigned long exp) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

BigInt big_lcm(const BigInt& a, const BigInt& b) {
    BigInt r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

} // namespace evidence
