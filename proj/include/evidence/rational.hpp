#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>
#include <type_traits>

namespace evidence {

using BigInt = mpz_class;

// Exact rational, always in lowest terms with a positive denominator.
class Rational {
public:
    Rational() = default;
    template <std::integral T>
    Rational(T v) {
        if constexpr (std::is_signed_v<T>)
            q_ = static_cast<long>(v);
        else
            q_ = static_cast<unsigned long>(v);
    }
    Rational(const BigInt& v) : q_(v) {}
    Rational(const BigInt& num, const BigInt& den);
    explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

    // Accepts "p", "p/q", "-p/q" and decimals like "0.25" or "-1.5e-3".
    static Rational parse(std::string_view text);
    // Exact value of a finite double.
    static Rational from_double(double d);
    static Rational pow(const Rational& base, unsigned long exp);

    BigInt numerator() const { return q_.get_num(); }
    BigInt denominator() const { return q_.get_den(); }
    const mpq_class& raw() const { return q_; }

    int sign() const { return sgn(q_); }
    bool is_zero() const { return sign() == 0; }
    bool is_integer() const { return q_.get_den() == 1; }
    double to_double() const { return q_.get_d(); }
    Rational abs() const { return Rational(mpq_class(::abs(q_))); }
    Rational inverse() const;

    std::string str() const;
    // Fixed-point decimal with `digits` fractional digits, rounded half away from zero.
    std::string decimal(int digits) const;

    Rational operator-() const { return Rational(mpq_class(-q_)); }
    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

private:
    mpq_class q_;
};

std::string to_string(const BigInt& v);
BigInt big_pow(const BigInt& base, unsigned long exp);
BigInt big_lcm(const BigInt& a, const BigInt& b);

} // namespace evidence
