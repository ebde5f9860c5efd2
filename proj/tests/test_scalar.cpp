#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <string>

#include "bell/scalar.hpp"
#include "oracles.hpp"

using namespace bell;

namespace {

Rational rat(long num, long den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Scalar iv(long lo_num, long lo_den, long hi_num, long hi_den) {
    return Scalar::interval(rat(lo_num, lo_den), rat(hi_num, hi_den));
}

} // namespace

TEST_CASE("parse_decimal: exact rational values") {
    CHECK(parse_decimal("2.1").as_rational() == rat(21, 10));
    CHECK(parse_decimal("0").as_rational() == 0);
    CHECK(parse_decimal("3.00").as_rational() == 3);
    CHECK(parse_decimal("-0.5").as_rational() == rat(-1, 2));
    CHECK(parse_decimal("+.5").as_rational() == rat(1, 2));
    CHECK(parse_decimal("5.").as_rational() == 5);
    CHECK(parse_decimal("1e-3").as_rational() == rat(1, 1000));
    CHECK(parse_decimal("2.5e2").as_rational() == 250);
    CHECK(parse_decimal("2.1").backend() == Backend::BigRational);
}

TEST_CASE("parse_decimal: malformed input") {
    CHECK_THROWS_AS(parse_decimal(""), parse_error);
    CHECK_THROWS_AS(parse_decimal("abc"), parse_error);
    CHECK_THROWS_AS(parse_decimal("1.2.3"), parse_error);
    CHECK_THROWS_AS(parse_decimal("1e"), parse_error);
    CHECK_THROWS_AS(parse_decimal("2.1x"), parse_error);
    CHECK_THROWS_AS(parse_decimal("."), parse_error);
    CHECK_THROWS_AS(parse_decimal("-"), parse_error);
}

TEST_CASE("parse_decimal + to_float round-trips like strtod") {
    auto gen = oracles::rng(1001);
    std::uniform_int_distribution<int> sig_digits(1, 15);
    std::uniform_int_distribution<int> digit(0, 9);
    std::uniform_int_distribution<int> exponent(-5, 5);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int trial = 0; trial < 500; ++trial) {
        std::string s = coin(gen) ? "-" : "";
        int n_digits = sig_digits(gen);
        int dot_at = std::uniform_int_distribution<int>(0, n_digits)(gen);
        for (int i = 0; i < n_digits; ++i) {
            if (i == dot_at) s.push_back('.');
            s.push_back(static_cast<char>('0' + digit(gen)));
        }
        s += "e" + std::to_string(exponent(gen));
        CAPTURE(s);
        CHECK(to_float(parse_decimal(s)) == std::strtod(s.c_str(), nullptr));
    }
}

TEST_CASE("compare agrees with the cross-multiplication oracle") {
    auto gen = oracles::rng(1002);
    std::uniform_int_distribution<long> num(-1000000000L, 1000000000L);
    std::uniform_int_distribution<long> den(1, 1000000L);
    for (int trial = 0; trial < 500; ++trial) {
        long p = num(gen), q = den(gen), r = num(gen), s = den(gen);
        int expected = oracles::cross_mult_compare(p, q, r, s);
        Ordering got = compare(Scalar::rational(p, q), Scalar::rational(r, s));
        CHECK(got == (expected < 0 ? Ordering::LT : expected > 0 ? Ordering::GT : Ordering::EQ));
    }
}

TEST_CASE("compare: specific cases") {
    CHECK(compare(Scalar::rational(121, 131), Scalar::rational(1, 1)) == Ordering::LT);
    Scalar x = Scalar::rational(7, 3);
    CHECK(compare(x, x) == Ordering::EQ);
    CHECK(compare(iv(1, 1, 2, 1), iv(3, 2, 3, 1)) == Ordering::INDETERMINATE);
    CHECK(compare(iv(1, 1, 2, 1), iv(3, 1, 4, 1)) == Ordering::LT);
    CHECK(compare(iv(5, 1, 5, 1), iv(5, 1, 5, 1)) == Ordering::EQ);
    CHECK(compare(Scalar::of(1.0), Scalar::of(2.0)) == Ordering::LT);
    CHECK_THROWS_AS(compare(Scalar::of(1.0), Scalar::rational(1, 1)), usage_error);
}

TEST_CASE("to_float: nearest rounding") {
    CHECK(to_float(Scalar::rational(21, 10)) == 2.1);
    CHECK(to_float(Scalar::rational(0, 1)) == 0.0);

    // Long-division oracle for 121/131, cross-checked through strtod.
    std::string digits = oracles::long_division_decimal(121, 131, 25);
    CHECK(digits.substr(0, 9) == "0.9236641");
    CHECK(to_float(Scalar::rational(121, 131)) == std::strtod(digits.c_str(), nullptr));

    // Interval midpoint.
    CHECK(to_float(iv(1, 1, 2, 1)) == 1.5);

    // Magnitude overflow.
    Rational huge(1);
    mpz_ui_pow_ui(huge.get_num_mpz_t(), 10, 400);
    CHECK_THROWS_AS(to_float(Scalar::of(huge)), bell::domain_error);
}

TEST_CASE("rationals stay canonical under arithmetic") {
    auto gen = oracles::rng(1003);
    std::uniform_int_distribution<long> num(-100000L, 100000L);
    std::uniform_int_distribution<long> den(1, 10000L);
    Scalar acc = Scalar::rational(1, 3);
    for (int step = 0; step < 200; ++step) {
        Scalar x = Scalar::rational(num(gen), den(gen));
        switch (step % 4) {
            case 0: acc = acc + x; break;
            case 1: acc = acc - x; break;
            case 2: acc = acc * x; break;
            case 3:
                if (!x.contains_zero()) acc = acc / x;
                break;
        }
        const Rational& q = acc.as_rational();
        CHECK(sgn(q.get_den()) > 0);
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
        CHECK(g == 1);
    }
}

TEST_CASE("interval arithmetic encloses the exact result") {
    auto gen = oracles::rng(1004);
    std::uniform_int_distribution<long> num(-10000L, 10000L);
    std::uniform_int_distribution<long> den(1, 1000L);
    std::uniform_int_distribution<int> widen(0, 3);
    for (int trial = 0; trial < 400; ++trial) {
        Rational x = rat(num(gen), den(gen)), y = rat(num(gen), den(gen));
        // Random enclosures around the exact points (sometimes degenerate).
        Rational dx = rat(widen(gen), 97), dy = rat(widen(gen), 89);
        Scalar ix = Scalar::interval(x - dx, x + dx);
        Scalar iy = Scalar::interval(y - dy, y + dy);
        for (int op = 0; op < 4; ++op) {
            Rational exact;
            Scalar enclosure;
            if (op == 0) {
                exact = x + y;
                enclosure = ix + iy;
            } else if (op == 1) {
                exact = x - y;
                enclosure = ix - iy;
            } else if (op == 2) {
                exact = x * y;
                enclosure = ix * iy;
            } else {
                if (iy.contains_zero()) continue;
                exact = x / y;
                enclosure = ix / iy;
            }
            const Interval& e = enclosure.as_interval();
            CHECK(e.lo <= exact);
            CHECK(exact <= e.hi);

            // Outward rounding must preserve the enclosure.
            const Interval& r = outward_round(enclosure, 64).as_interval();
            CHECK(r.lo <= e.lo);
            CHECK(e.hi <= r.hi);
        }
    }
}

TEST_CASE("division by zero is an error in every backend") {
    CHECK_THROWS_AS(Scalar::rational(1, 2) / Scalar::rational(0, 1), bell::domain_error);
    CHECK_THROWS_AS(Scalar::of(1.0) / Scalar::of(0.0), bell::domain_error);
    CHECK_THROWS_AS(iv(1, 1, 2, 1) / iv(-1, 1, 1, 1), bell::domain_error);
    // An interval strictly away from zero divides fine.
    CHECK_NOTHROW(iv(1, 1, 2, 1) / iv(1, 2, 1, 1));
}

TEST_CASE("mixed backends are rejected") {
    CHECK_THROWS_AS(Scalar::of(1.0) + Scalar::rational(1, 1), usage_error);
    CHECK_THROWS_AS(Scalar::rational(1, 1) * iv(1, 1, 1, 1), usage_error);
}

TEST_CASE("outward_round bounds the denominator and the width growth") {
    Scalar x = iv(1, 3, 2, 3);
    const Interval& r = outward_round(x, 16).as_interval();
    CHECK(r.lo <= rat(1, 3));
    CHECK(rat(2, 3) <= r.hi);
    mpz_class two_pow16 = 1_mpz << 16;
    CHECK(mpz_divisible_p(two_pow16.get_mpz_t(), r.lo.get_den().get_mpz_t()));
    CHECK(mpz_divisible_p(two_pow16.get_mpz_t(), r.hi.get_den().get_mpz_t()));
    Rational width = r.hi - r.lo;
    CHECK(width <= rat(1, 3) + rat(2, 65536));
}

TEST_CASE("format_double is shortest round-trip") {
    auto gen = oracles::rng(1005);
    std::uniform_real_distribution<double> dist(-1e6, 1e6);
    for (int trial = 0; trial < 200; ++trial) {
        double v = dist(gen);
        std::string s = format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
    CHECK(format_double(2.1) == "2.1");
    CHECK(format_double(0.0) == "0");
}

TEST_CASE("min/max/abs behave per backend") {
    CHECK(min(Scalar::of(1.0), Scalar::of(2.0)).as_float() == 1.0);
    CHECK(max(Scalar::rational(1, 3), Scalar::rational(1, 2)).as_rational() == rat(1, 2));
    const Interval& m = min(iv(1, 1, 4, 1), iv(2, 1, 3, 1)).as_interval();
    CHECK(m.lo == 1);
    CHECK(m.hi == 3);
    const Interval& a = iv(-2, 1, 1, 1).abs().as_interval();
    CHECK(a.lo == 0);
    CHECK(a.hi == 2);
    CHECK(Scalar::of(-1.5).abs().as_float() == 1.5);
}

TEST_CASE("backend conversions") {
    Scalar q = parse_decimal("2.1");
    CHECK(q.to_backend(Backend::Float64).as_float() == 2.1);
    const Interval& ivv = q.to_backend(Backend::Interval).as_interval();
    CHECK(ivv.lo == rat(21, 10));
    CHECK(ivv.hi == rat(21, 10));
    // Floats convert exactly to their binary rational value.
    CHECK(Scalar::of(0.5).to_backend(Backend::BigRational).as_rational() == rat(1, 2));
    CHECK_THROWS_AS(iv(1, 1, 2, 1).to_backend(Backend::BigRational), usage_error);
}
