// Test-only oracles, independent of the library's computation paths.
#pragma once

#include <gmpxx.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracles {

// Decimal expansion of num/den by long division (num, den > 0), used to check
// nearest-float conversion against strtod.
inline std::string long_division_decimal(long num, long den, int digits) {
    if (den <= 0 || num < 0) throw std::invalid_argument("long_division_decimal");
    std::string s = std::to_string(num / den);
    long rem = num % den;
    if (digits > 0) s.push_back('.');
    for (int i = 0; i < digits; ++i) {
        rem *= 10;
        s.push_back(static_cast<char>('0' + rem / den));
        rem %= den;
    }
    return s;
}

// Ordering of p/q vs r/s by integer cross multiplication (q, s > 0).
inline int cross_mult_compare(const mpz_class& p, const mpz_class& q, const mpz_class& r,
                              const mpz_class& s) {
    mpz_class left = p * s, right = r * q;
    return left < right ? -1 : (left > right ? 1 : 0);
}

// Characteristic polynomial det(T - xI) by the three-term recurrence.
inline double charpoly(const std::vector<double>& diag, const std::vector<double>& off, size_t k,
                       double x) {
    double p_prev = 1.0;
    double p = diag[0] - x;
    for (size_t i = 1; i < k; ++i) {
        double next = (diag[i] - x) * p - off[i - 1] * off[i - 1] * p_prev;
        p_prev = p;
        p = next;
    }
    return p;
}

// All eigenvalues of a symmetric tridiagonal matrix with nonzero off-diagonal,
// by bisection on sign changes of the characteristic polynomial. Brackets come
// from strict interlacing: the roots of the leading (k-1)x(k-1) minor separate
// the roots of the k x k one, built up from k = 1.
inline std::vector<double> charpoly_eigenvalues(const std::vector<double>& diag,
                                                const std::vector<double>& off) {
    const size_t n = diag.size();
    if (n == 0) return {};
    for (double b : off)
        if (b == 0.0) throw std::invalid_argument("charpoly oracle needs nonzero off-diagonals");

    double lo = diag[0], hi = diag[0];
    for (size_t i = 0; i < n; ++i) {
        double radius = (i > 0 ? std::fabs(off[i - 1]) : 0.0) + (i + 1 < n ? std::fabs(off[i]) : 0.0);
        lo = std::min(lo, diag[i] - radius);
        hi = std::max(hi, diag[i] + radius);
    }
    lo -= 1.0;
    hi += 1.0;

    auto bisect = [&](size_t k, double a, double b) {
        double fa = charpoly(diag, off, k, a);
        for (int iter = 0; iter < 200; ++iter) {
            double mid = 0.5 * (a + b);
            if (mid <= a || mid >= b) break;
            double fm = charpoly(diag, off, k, mid);
            if ((fa < 0) == (fm < 0)) {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
            if (b - a < 1e-14 * std::max(1.0, std::fabs(a) + std::fabs(b))) break;
        }
        return 0.5 * (a + b);
    };

    std::vector<double> roots{diag[0]};
    for (size_t k = 2; k <= n; ++k) {
        std::vector<double> next;
        next.reserve(k);
        std::vector<double> ends;
        ends.push_back(lo);
        ends.insert(ends.end(), roots.begin(), roots.end());
        ends.push_back(hi);
        for (size_t i = 0; i + 1 < ends.size(); ++i) next.push_back(bisect(k, ends[i], ends[i + 1]));
        roots = std::move(next);
    }
    return roots;
}

// Deterministic RNG for property tests.
inline std::mt19937_64 rng(unsigned seed) { return std::mt19937_64(seed); }

} // namespace oracles
