#pragma once

#include <cmath>
#include <limits>

namespace evidence {

// Closed interval with outward rounding on every operation.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    static constexpr double inf = std::numeric_limits<double>::infinity();

    bool empty() const { return !(lo <= hi); }
    double width() const { return hi - lo; }
    double mid() const { return lo + 0.5 * (hi - lo); }
    bool contains(double v) const { return lo <= v && v <= hi; }
};

inline double down(double v) { return std::isinf(v) ? v : std::nextafter(v, -Interval::inf); }
inline double up(double v) { return std::isinf(v) ? v : std::nextafter(v, Interval::inf); }

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);
// Division by an interval that does not contain 0.
Interval divide(const Interval& a, const Interval& b);
Interval intersect(const Interval& a, const Interval& b);
Interval power(const Interval& a, unsigned n);

} // namespace evidence
