#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bell/scalar.hpp"
#include "bell/sequence.hpp"

namespace bell::analysis {

enum class CheckKind { Theorem, Conjecture, Splitting, Prop1 };

const char* check_kind_label(CheckKind kind);

// One failed inequality. The claim is read "lhs <= rhs" (or strict), so
// margin = rhs - lhs is negative exactly when recorded.
struct Violation {
    long n = 0;         // class / check parameter (e.g. n in R_{4n+2})
    long seq_index = 0; // the sequence index examined
    std::string inequality;
    Scalar lhs;
    Scalar rhs;
    Scalar margin;
};

// Informational: a value sitting exactly on a bound. excluded=true marks the
// forced base values R_0..R_3 attaining their class's open endpoint, which the
// verifier reports instead of flagging as violations.
struct EndpointNote {
    long seq_index = 0;
    std::string inequality;
    bool excluded = false;
};

struct BoundsReport {
    CheckKind kind = CheckKind::Theorem;
    Scalar lambda;
    Backend backend = Backend::Float64;
    long checked_count = 0;
    std::vector<Violation> violations;
    std::vector<EndpointNote> endpoint_notes;
    // Interval backend: comparisons whose enclosures certify neither side.
    long indeterminate_count = 0;
    bool regime_warning = false;
    std::vector<std::string> warnings;

    bool passed() const { return violations.empty(); }
    // Smallest violating parameter n for inequalities whose id starts with
    // `prefix` ("c2", "p1-upper", ...), -1 if none.
    long first_violation(std::string_view prefix) const;
};

struct CheckOptions {
    // Float mode: a bound counts as violated only beyond this absolute margin,
    // so bound-attaining values are not misflagged by rounding. Exact and
    // interval modes ignore it and compare exactly.
    double float_margin_tol = 1e-9;
};

// Residue-class bounds with sigma = 1/(lambda-1), checked strictly for n >= 1:
//   R_{4n}   in (0, sigma]              "p1"
//   R_{4n+1} in [lambda-sigma, lambda)  "p4"
//   R_{4n+2} in [1-sigma, 1)            "p2"
//   R_{4n+3} in (lambda-1, lambda-1+sigma]  "p3"
// The n = 0 values sit exactly on the open endpoints and are reported as
// endpoint notes, not violations. Closed-endpoint attainment (R_4 = sigma,
// R_5 = lambda-sigma) is also noted.
BoundsReport check_theorem(const seq::RSequence& seq, const CheckOptions& opts = {});

// Conjectured splitting against the sequence's own first eight values:
//   R_0 <= R_{4n} <= R_4      "c1"
//   R_5 <= R_{4n+1} <= R_1    "c4"
//   R_6 <= R_{4n+2} <= R_2    "c2"
//   R_3 <= R_{4n+3} <= R_7    "c3"
BoundsReport check_conjecture(const seq::RSequence& seq, const CheckOptions& opts = {});

// Finer splitting at level r: R_{k*2^r+n} between R_n and R_{2^r+n} for every
// offset n < 2^r and k <= max_k. Violation records carry the offset as n and
// the full index as seq_index.
BoundsReport check_splitting(const seq::RSequence& seq, int level_r, long max_k,
                             const CheckOptions& opts = {});

// 0 < R_{2n} < R_n and R_{2n} <= 1 for 1 <= n <= N/2.
BoundsReport check_prop1(const seq::RSequence& seq, const CheckOptions& opts = {});

struct ConvergenceSample {
    int k = 0;
    long seq_index = 0;
    Scalar value;
    Scalar deviation; // |value - limit|
};

struct ConvergenceReport {
    long p = 0;
    long s = 0; // 0 for decay toward 0
    std::vector<ConvergenceSample> samples;
    bool monotone_tail = false; // deviations strictly decreasing over the final half
    // Least-squares slope of ln(deviation) vs k over the final half; absent
    // when a tail deviation is zero or there are too few samples. Advisory.
    std::optional<double> estimated_rate;
};

// Samples R_{p*2^k} for k = 0..k_max (p odd) and measures decay toward 0.
ConvergenceReport proposition_decay(const seq::RSequence& seq, long p, int k_max);

// Samples |R_{p*2^k+s} - R_s| for k = 0..k_max.
ConvergenceReport proposition_limit(const seq::RSequence& seq, long p, long s, int k_max);

struct UniformityRow {
    int k = 0;
    double max_abs_deviation = 0.0;
};

struct LimitBatchReport {
    std::vector<ConvergenceReport> entries; // ordered by (p, s)
    std::vector<UniformityRow> uniformity;  // max deviation at each k across the batch
};

// All pairs p = 1..p_max, s = 1..s_max, each sampled up to the largest k <= k_max
// that fits in the sequence.
LimitBatchReport proposition_limit_batch(const seq::RSequence& seq, long p_max, long s_max,
                                         int k_max);

struct ScanRow {
    Rational lambda;
    long checked_count = 0;
    long violation_count = 0;
    // Smallest violating class parameter per family c1..c4, -1 if none.
    std::array<long, 4> first_violation_n{-1, -1, -1, -1};
};

struct ScanRegion {
    std::string inequality; // "c1".."c4"
    Rational lambda_first;
    Rational lambda_last;
    bool contiguous = false; // no clean grid point between first and last
    long count = 0;
};

struct ScanReport {
    long n_max = 0;
    Backend backend = Backend::Float64;
    std::vector<ScanRow> rows;
    std::vector<ScanRegion> regions;
};

struct ScanOptions {
    Backend backend = Backend::Float64;
    long max_grid_points = 4096;
    seq::GenerateOptions gen;
    CheckOptions check;
};

// Runs check_conjecture on the exact grid lambda_lo, lambda_lo+step, ... <=
// lambda_hi. Rows are computed in parallel and reported in grid order.
ScanReport scan_conjecture(const Rational& lambda_lo, const Rational& lambda_hi,
                           const Rational& step, long n_max, const ScanOptions& opts = {});

} // namespace bell::analysis
