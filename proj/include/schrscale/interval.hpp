#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace schrscale {

// Closed interval [lo, hi] used as a two-sided certificate for series values.
// Endpoints are ordinary doubles; the enclosed quantity is exact up to the
// rounding of the endpoint arithmetic itself, which is orders of magnitude
// below every tolerance used in this project.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    static Interval point(double v) { return {v, v}; }

    static Interval of(double a, double b) {
        if (!(a <= b)) throw std::invalid_argument("interval endpoints out of order");
        return {a, b};
    }

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool contains(double v) const { return lo <= v && v <= hi; }
    bool intersects(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }

    Interval operator+(const Interval& o) const { return {lo + o.lo, hi + o.hi}; }
    Interval operator+(double v) const { return {lo + v, hi + v}; }

    Interval& operator+=(const Interval& o) {
        lo += o.lo;
        hi += o.hi;
        return *this;
    }

    // Scale by a nonnegative factor (the only scaling the norm algebra needs).
    Interval scaled(double c) const {
        if (c < 0.0) throw std::invalid_argument("interval scale must be nonnegative");
        return {lo * c, hi * c};
    }

    // Elementwise square root; lower endpoint clamped at zero so tiny negative
    // excursions from bracket subtraction stay valid.
    Interval sqrt() const {
        return {std::sqrt(std::max(0.0, lo)), std::sqrt(std::max(0.0, hi))};
    }

    Interval clamped_nonnegative() const { return {std::max(0.0, lo), std::max(0.0, hi)}; }
};

// Compensated accumulator; keeps long sums exact to a few units in the last
// place independent of term count.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double v) {
        const double y = v - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }

    double value() const { return sum; }
};

} // namespace schrscale
