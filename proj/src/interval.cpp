#include "evidence/interval.hpp"

#include <algorithm>

namespace evidence {

namespace {

// 0 * inf is treated as 0: bounds are finite except for one-sided targets.
double mul(double a, double b) {
    if (a == 0.0 || b == 0.0) return 0.0;
    return a * b;
}

} // namespace

Interval operator+(const Interval& a, const Interval& b) { return {down(a.lo + b.lo), up(a.hi + b.hi)}; }

Interval operator-(const Interval& a, const Interval& b) { return {down(a.lo - b.hi), up(a.hi - b.lo)}; }

Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

Interval operator*(const Interval& a, const Interval& b) {
    double p[4] = {mul(a.lo, b.lo), mul(a.lo, b.hi), mul(a.hi, b.lo), mul(a.hi, b.hi)};
    return {down(*std::min_element(p, p + 4)), up(*std::max_element(p, p + 4))};
}

Interval divide(const Interval& a, const Interval& b) {
    double q[4] = {a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi};
    double lo = Interval::inf, hi = -Interval::inf;
    for (double v : q) {
        if (std::isnan(v)) continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {down(lo), up(hi)};
}

Interval intersect(const Interval& a, const Interval& b) {
    return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

Interval power(const Interval& a, unsigned n) {
    Interval r{1.0, 1.0};
    for (unsigned k = 0; k < n; ++k) r = r * a;
    return r;
}

} // namespace evidence
