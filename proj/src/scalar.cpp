#include "bell/scalar.hpp"

#include <mpfr.h>

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

namespace bell {

const char* backend_label(Backend b) {
    switch (b) {
        case Backend::Float64: return "float";
        case Backend::BigRational: return "exact";
        case Backend::Interval: return "interval";
    }
    return "?";
}

Backend parse_backend(std::string_view name) {
    if (name == "float") return Backend::Float64;
    if (name == "exact") return Backend::BigRational;
    if (name == "interval") return Backend::Interval;
    throw usage_error("unknown backend '" + std::string(name) + "' (float, exact, interval)");
}

namespace {

void require_same_backend(const Scalar& a, const Scalar& b, const char* op) {
    if (a.backend() != b.backend())
        throw usage_error(std::string("mixed backends in '") + op + "': " +
                          backend_label(a.backend()) + " vs " + backend_label(b.backend()));
}

double require_finite(double v, const char* op) {
    if (std::isnan(v)) throw domain_error(std::string(op) + ": NaN operand");
    return v;
}

double rational_to_double(const Rational& q) {
    mpfr_t f;
    mpfr_init2(f, 53);
    mpfr_set_q(f, q.get_mpq_t(), MPFR_RNDN);
    double d = mpfr_get_d(f, MPFR_RNDN);
    mpfr_clear(f);
    if (std::isinf(d)) throw domain_error("to_float: magnitude overflows double");
    return d;
}

Rational exact_from_double(double v) {
    if (!std::isfinite(v)) throw domain_error("cannot convert non-finite float exactly");
    Rational q;
    mpq_set_d(q.get_mpq_t(), v);
    return q;
}

} // namespace

Scalar Scalar::of(Interval iv) {
    if (iv.lo > iv.hi) throw usage_error("interval endpoints out of order (lo > hi)");
    Scalar s;
    s.value_ = std::move(iv);
    return s;
}

Scalar Scalar::rational(long num, long den) {
    if (den == 0) throw domain_error("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return Scalar(std::move(q));
}

Scalar Scalar::from_long(long v, Backend b) {
    switch (b) {
        case Backend::Float64: return Scalar(static_cast<double>(v));
        case Backend::BigRational: return Scalar(Rational(v));
        case Backend::Interval: return interval(Rational(v), Rational(v));
    }
    throw usage_error("unknown backend");
}

Backend Scalar::backend() const {
    switch (value_.index()) {
        case 0: return Backend::Float64;
        case 1: return Backend::BigRational;
        default: return Backend::Interval;
    }
}

const double& Scalar::as_float() const {
    if (auto* p = std::get_if<double>(&value_)) return *p;
    throw usage_error("scalar is not float-backed");
}

const Rational& Scalar::as_rational() const {
    if (auto* p = std::get_if<Rational>(&value_)) return *p;
    throw usage_error("scalar is not rational-backed");
}

const Interval& Scalar::as_interval() const {
    if (auto* p = std::get_if<Interval>(&value_)) return *p;
    throw usage_error("scalar is not interval-backed");
}

Scalar Scalar::to_backend(Backend target) const {
    if (target == backend()) return *this;
    switch (backend()) {
        case Backend::Float64: {
            double v = as_float();
            if (target == Backend::BigRational) return Scalar(exact_from_double(v));
            Rational q = exact_from_double(v);
            return interval(q, q);
        }
        case Backend::BigRational: {
            const Rational& q = as_rational();
            if (target == Backend::Float64) return Scalar(rational_to_double(q));
            return interval(q, q);
        }
        case Backend::Interval: {
            if (target == Backend::Float64) return Scalar(to_float(*this));
            throw usage_error("interval -> exact conversion is lossy and not allowed");
        }
    }
    throw usage_error("unknown backend");
}

bool Scalar::contains_zero() const {
    switch (backend()) {
        case Backend::Float64: return as_float() == 0.0;
        case Backend::BigRational: return sgn(as_rational()) == 0;
        case Backend::Interval: {
            const Interval& iv = as_interval();
            return sgn(iv.lo) <= 0 && sgn(iv.hi) >= 0;
        }
    }
    return false;
}

bool Scalar::is_negative() const {
    switch (backend()) {
        case Backend::Float64: return as_float() < 0.0;
        case Backend::BigRational: return sgn(as_rational()) < 0;
        case Backend::Interval: return sgn(as_interval().hi) < 0;
    }
    return false;
}

Scalar Scalar::operator-() const {
    switch (backend()) {
        case Backend::Float64: return Scalar(-as_float());
        case Backend::BigRational: return Scalar(Rational(-as_rational()));
        case Backend::Interval: {
            const Interval& iv = as_interval();
            return interval(-iv.hi, -iv.lo);
        }
    }
    throw usage_error("unknown backend");
}

Scalar Scalar::abs() const {
    switch (backend()) {
        case Backend::Float64: return Scalar(std::fabs(as_float()));
        case Backend::BigRational: return Scalar(Rational(::abs(as_rational())));
        case Backend::Interval: {
            const Interval& iv = as_interval();
            if (sgn(iv.lo) >= 0) return *this;
            if (sgn(iv.hi) <= 0) return interval(-iv.hi, -iv.lo);
            Rational m = ::abs(iv.lo) > iv.hi ? ::abs(iv.lo) : iv.hi;
            return interval(Rational(0), m);
        }
    }
    throw usage_error("unknown backend");
}

Scalar operator+(const Scalar& a, const Scalar& b) {
    require_same_backend(a, b, "+");
    switch (a.backend()) {
        case Backend::Float64: return Scalar::of(a.as_float() + b.as_float());
        case Backend::BigRational: return Scalar::of(Rational(a.as_rational() + b.as_rational()));
        case Backend::Interval: {
            const Interval &x = a.as_interval(), &y = b.as_interval();
            return Scalar::interval(x.lo + y.lo, x.hi + y.hi);
        }
    }
    throw usage_error("unknown backend");
}

Scalar operator-(const Scalar& a, const Scalar& b) {
    require_same_backend(a, b, "-");
    switch (a.backend()) {
        case Backend::Float64: return Scalar::of(a.as_float() - b.as_float());
        case Backend::BigRational: return Scalar::of(Rational(a.as_rational() - b.as_rational()));
        case Backend::Interval: {
            const Interval &x = a.as_interval(), &y = b.as_interval();
            return Scalar::interval(x.lo - y.hi, x.hi - y.lo);
        }
    }
    throw usage_error("unknown backend");
}

Scalar operator*(const Scalar& a, const Scalar& b) {
    require_same_backend(a, b, "*");
    switch (a.backend()) {
        case Backend::Float64: return Scalar::of(a.as_float() * b.as_float());
        case Backend::BigRational: return Scalar::of(Rational(a.as_rational() * b.as_rational()));
        case Backend::Interval: {
            const Interval &x = a.as_interval(), &y = b.as_interval();
            Rational p1 = x.lo * y.lo, p2 = x.lo * y.hi, p3 = x.hi * y.lo, p4 = x.hi * y.hi;
            Rational lo = std::min(std::min(p1, p2), std::min(p3, p4));
            Rational hi = std::max(std::max(p1, p2), std::max(p3, p4));
            return Scalar::interval(std::move(lo), std::move(hi));
        }
    }
    throw usage_error("unknown backend");
}

Scalar operator/(const Scalar& a, const Scalar& b) {
    require_same_backend(a, b, "/");
    if (b.contains_zero()) throw domain_error("division by zero (or a zero-containing interval)");
    switch (a.backend()) {
        case Backend::Float64: return Scalar::of(a.as_float() / b.as_float());
        case Backend::BigRational: return Scalar::of(Rational(a.as_rational() / b.as_rational()));
        case Backend::Interval: {
            const Interval &x = a.as_interval(), &y = b.as_interval();
            Rational q1 = x.lo / y.lo, q2 = x.lo / y.hi, q3 = x.hi / y.lo, q4 = x.hi / y.hi;
            Rational lo = std::min(std::min(q1, q2), std::min(q3, q4));
            Rational hi = std::max(std::max(q1, q2), std::max(q3, q4));
            return Scalar::interval(std::move(lo), std::move(hi));
        }
    }
    throw usage_error("unknown backend");
}

Scalar parse_decimal(std::string_view text) {
    const char* p = text.data();
    const char* end = p + text.size();
    if (p == end) throw parse_error("empty decimal string");

    bool negative = false;
    if (*p == '+' || *p == '-') {
        negative = (*p == '-');
        ++p;
    }

    std::string digits;
    long frac_len = 0;
    bool seen_dot = false;
    bool any_digit = false;
    for (; p != end && (*p == '.' || std::isdigit(static_cast<unsigned char>(*p))); ++p) {
        if (*p == '.') {
            if (seen_dot) throw parse_error("malformed decimal: repeated '.'");
            seen_dot = true;
        } else {
            digits.push_back(*p);
            if (seen_dot) ++frac_len;
            any_digit = true;
        }
    }
    if (!any_digit) throw parse_error("malformed decimal: no digits");

    long exponent = 0;
    if (p != end && (*p == 'e' || *p == 'E')) {
        ++p;
        bool exp_neg = false;
        if (p != end && (*p == '+' || *p == '-')) {
            exp_neg = (*p == '-');
            ++p;
        }
        if (p == end || !std::isdigit(static_cast<unsigned char>(*p))) throw parse_error("malformed exponent");
        long e = 0;
        for (; p != end && std::isdigit(static_cast<unsigned char>(*p)); ++p) {
            e = e * 10 + (*p - '0');
            if (e > 1000000) throw parse_error("exponent out of range");
        }
        exponent = exp_neg ? -e : e;
    }
    if (p != end) throw parse_error("malformed decimal: trailing characters");

    mpz_class num(digits.empty() ? "0" : digits, 10);
    if (negative) num = -num;
    mpz_class den = 1;
    long den_pow = frac_len - exponent;
    if (den_pow > 0) {
        mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(den_pow));
    } else if (den_pow < 0) {
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(-den_pow));
        num *= scale;
    }
    Rational q(num, den);
    q.canonicalize();
    return Scalar::of(std::move(q));
}

Ordering compare(const Scalar& a, const Scalar& b) {
    require_same_backend(a, b, "compare");
    switch (a.backend()) {
        case Backend::Float64: {
            double x = require_finite(a.as_float(), "compare");
            double y = require_finite(b.as_float(), "compare");
            if (x < y) return Ordering::LT;
            if (x > y) return Ordering::GT;
            return Ordering::EQ;
        }
        case Backend::BigRational: {
            int c = cmp(a.as_rational(), b.as_rational());
            return c < 0 ? Ordering::LT : (c > 0 ? Ordering::GT : Ordering::EQ);
        }
        case Backend::Interval: {
            const Interval &x = a.as_interval(), &y = b.as_interval();
            if (x.hi < y.lo) return Ordering::LT;
            if (x.lo > y.hi) return Ordering::GT;
            if (x.lo == x.hi && y.lo == y.hi) return Ordering::EQ;
            return Ordering::INDETERMINATE;
        }
    }
    throw usage_error("unknown backend");
}

double to_float(const Scalar& a) {
    switch (a.backend()) {
        case Backend::Float64: return a.as_float();
        case Backend::BigRational: return rational_to_double(a.as_rational());
        case Backend::Interval: {
            const Interval& iv = a.as_interval();
            Rational mid = (iv.lo + iv.hi) / 2;
            return rational_to_double(mid);
        }
    }
    throw usage_error("unknown backend");
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string to_string(const Scalar& a) {
    switch (a.backend()) {
        case Backend::Float64: return format_double(a.as_float());
        case Backend::BigRational: return a.as_rational().get_str();
        case Backend::Interval: {
            const Interval& iv = a.as_interval();
            return iv.lo.get_str() + ".." + iv.hi.get_str();
        }
    }
    throw usage_error("unknown backend");
}

Scalar min(const Scalar& a, const Scalar& b) {
    require_same_backend(a, b, "min");
    switch (a.backend()) {
        case Backend::Float64: return Scalar::of(std::min(a.as_float(), b.as_float()));
        case Backend::BigRational: return Scalar::of(std::min(a.as_rational(), b.as_rational()));
        case Backend::Interval: {
            const Interval &x = a.as_interval(), &y = b.as_interval();
            return Scalar::interval(std::min(x.lo, y.lo), std::min(x.hi, y.hi));
        }
    }
    throw usage_error("unknown backend");
}

Scalar max(const Scalar& a, const Scalar& b) {
    require_same_backend(a, b, "max");
    switch (a.backend()) {
        case Backend::Float64: return Scalar::of(std::max(a.as_float(), b.as_float()));
        case Backend::BigRational: return Scalar::of(std::max(a.as_rational(), b.as_rational()));
        case Backend::Interval: {
            const Interval &x = a.as_interval(), &y = b.as_interval();
            return Scalar::interval(std::max(x.lo, y.lo), std::max(x.hi, y.hi));
        }
    }
    throw usage_error("unknown backend");
}

Scalar outward_round(const Scalar& a, int bits) {
    if (a.backend() != Backend::Interval || bits <= 0) return a;
    const Interval& iv = a.as_interval();
    mpz_class unit = 1;
    mpz_mul_2exp(unit.get_mpz_t(), unit.get_mpz_t(), static_cast<unsigned long>(bits));

    auto snap = [&](const Rational& x, bool up) {
        mpz_class scaled_num = x.get_num() * unit;
        mpz_class q;
        if (up)
            mpz_cdiv_q(q.get_mpz_t(), scaled_num.get_mpz_t(), x.get_den().get_mpz_t());
        else
            mpz_fdiv_q(q.get_mpz_t(), scaled_num.get_mpz_t(), x.get_den().get_mpz_t());
        Rational r(q, unit);
        r.canonicalize();
        return r;
    };
    return Scalar::interval(snap(iv.lo, false), snap(iv.hi, true));
}

} // namespace bell
