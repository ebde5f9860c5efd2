#pragma once

#include <string>
#include <vector>

#include "bell/scalar.hpp"

namespace bell::seq {

// The coupling lambda. regime_ok records whether lambda is certainly > 2, the
// regime in which the sequence's bounds are proved; lambda <= 2 is permitted
// only behind an explicit opt-in and is reported as unproven.
struct LambdaParam {
    Scalar value;
    bool regime_ok = false;

    // Requires lambda > 0 (for intervals: the whole enclosure above 0).
    static LambdaParam make(const Scalar& lambda);
};

struct GenerateOptions {
    bool allow_unproven_regime = false;
    // Fraction bit-length grows superlinearly with n; past this cap the exact
    // generator refuses rather than thrash. Also applies to interval mode when
    // outward rounding is off.
    long exact_max_n = 8192;
    // Interval mode: outward-round endpoints to 2^-bits after each step so
    // denominators stay bounded. 0 = keep exact endpoints.
    int interval_round_bits = 0;
};

// R_0..R_N for a fixed lambda: R_0 = 0, R_{2n} = R_n / R_{2n-1},
// R_{2n+1} = lambda - R_{2n} (R_1 = lambda).
struct RSequence {
    LambdaParam lambda;
    Backend backend = Backend::Float64;
    bool unproven_regime = false; // generated with the lambda <= 2 opt-in
    std::vector<Scalar> values;

    long max_index() const { return static_cast<long>(values.size()) - 1; }
    const Scalar& at(long n) const;
};

RSequence generate(const LambdaParam& lambda, long n_max, const GenerateOptions& opts = {});

// Closed forms for R_0..R_7:
//   R_0 = 0, R_1 = lambda, R_2 = 1, R_3 = lambda-1, R_4 = 1/(lambda-1),
//   R_5 = lambda - 1/(lambda-1), R_6 = (lambda-1)^2/(lambda^2-lambda-1),
//   R_7 = (lambda^3-2*lambda^2+lambda-1)/(lambda^2-lambda-1).
Scalar closed_form(int k, const LambdaParam& lambda);

struct IdentityFamilyResult {
    std::string name;
    long checked = 0;
    Scalar max_residual;     // largest |lhs - rhs| seen (enclosure bound for intervals)
    long argmax_index = -1;  // anchor index of the largest residual
    long first_failing = -1; // anchor index of the first check beyond tolerance, -1 if none
};

struct IdentityReport {
    Backend backend = Backend::Float64;
    double rel_tol = 0.0;
    std::vector<IdentityFamilyResult> families;

    bool all_passed() const;
    long first_failing_index() const; // min over families, -1 if none
};

// Checks the defining recursions and their derived forms as identities over
// the whole sequence:
//   pair-sum             R_{2n} + R_{2n+1} = lambda
//   pair-product         R_{2n} R_{2n-1} = R_n
//   pair-sum-4           R_{4n} + R_{4n+1} = lambda,  R_{4n+2} + R_{4n+3} = lambda
//   pair-product-8       R_{8n} R_{8n-1} = R_{4n}  (and the +2,+4,+6 shifts)
//   transformed-quotient R_{8n} = R_{4n}/(lambda - R_{8n-2}),
//                        1 - R_{8n+2} = R_{4n}(lambda-1-R_{8n-2}) /
//                                       (lambda(lambda-R_{8n-2}) - R_{4n}),
//                        and the +4,+6 counterparts.
// A check fails when |lhs - rhs| > rel_tol * max(1, |rhs|); in exact mode the
// comparison is exact, so untouched sequences report residuals of exactly 0.
IdentityReport verify_recurrences(const RSequence& seq, double rel_tol = 1e-12);

} // namespace bell::seq
