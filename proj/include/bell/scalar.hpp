#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <variant>

#include "bell/errors.hpp"

namespace bell {

// Numeric backends. "exact" computations use arbitrary-precision rationals,
// "interval" uses closed intervals with exact rational endpoints. Mixed-backend
// operations are rejected rather than promoted: a certification run must never
// silently degrade to floating point.
enum class Backend { Float64, BigRational, Interval };

enum class Ordering { LT, EQ, GT, INDETERMINATE };

// CLI-facing names: "float", "exact", "interval".
const char* backend_label(Backend b);
Backend parse_backend(std::string_view name);

// Canonical form (lowest terms, positive denominator) is maintained by gmpxx
// for every arithmetic result.
using Rational = mpq_class;

// Closed interval [lo, hi] with rational endpoints. Endpoint arithmetic is
// exact, so every operation returns an enclosure of the exact result.
struct Interval {
    Rational lo;
    Rational hi;
};

class Scalar {
  public:
    Scalar() : value_(0.0) {}

    static Scalar of(double v) { return Scalar(v); }
    static Scalar of(Rational q) { return Scalar(std::move(q)); }
    static Scalar of(Interval iv);
    static Scalar rational(long num, long den);
    static Scalar interval(Rational lo, Rational hi) { return of(Interval{std::move(lo), std::move(hi)}); }
    static Scalar zero(Backend b) { return from_long(0, b); }
    static Scalar from_long(long v, Backend b);

    Backend backend() const;

    const double& as_float() const;
    const Rational& as_rational() const;
    const Interval& as_interval() const;

    // Exact where possible: float -> rational/interval uses the float's exact
    // binary value; rational -> float rounds to nearest. Interval -> rational
    // is lossy and rejected.
    Scalar to_backend(Backend target) const;

    bool contains_zero() const;
    bool is_negative() const; // entirely below zero

    Scalar operator-() const;
    Scalar abs() const;

    friend Scalar operator+(const Scalar& a, const Scalar& b);
    friend Scalar operator-(const Scalar& a, const Scalar& b);
    friend Scalar operator*(const Scalar& a, const Scalar& b);
    friend Scalar operator/(const Scalar& a, const Scalar& b);

  private:
    explicit Scalar(double v) : value_(v) {}
    explicit Scalar(Rational q) : value_(std::move(q)) {}

    std::variant<double, Rational, Interval> value_;
};

// Exact rational value of a finite decimal string: optional sign, digits with
// an optional fraction part, optional decimal exponent ("2.1", "-0.5", "1e-3").
Scalar parse_decimal(std::string_view text);

// Total order per backend; INDETERMINATE only for overlapping non-degenerate
// intervals. Mixed backends are a usage error.
Ordering compare(const Scalar& a, const Scalar& b);

// Nearest 64-bit float (interval: midpoint). Throws on magnitude overflow.
double to_float(const Scalar& a);

// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

// "p/q" for rationals (GMP canonical form, "q" omitted when 1), shortest
// round-trip decimal for floats, "lo..hi" for intervals.
std::string to_string(const Scalar& a);

// Enclosures of min/max (exact for float/rational).
Scalar min(const Scalar& a, const Scalar& b);
Scalar max(const Scalar& a, const Scalar& b);

// Interval backend: round lo down and hi up to multiples of 2^-bits, keeping a
// rigorous enclosure with bounded denominators. Other backends pass through.
Scalar outward_round(const Scalar& a, int bits);

} // namespace bell
