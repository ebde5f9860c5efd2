#include "bell/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

namespace bell::analysis {

const char* check_kind_label(CheckKind kind) {
    switch (kind) {
        case CheckKind::Theorem: return "theorem";
        case CheckKind::Conjecture: return "conjecture";
        case CheckKind::Splitting: return "splitting";
        case CheckKind::Prop1: return "prop1";
    }
    return "?";
}

long BoundsReport::first_violation(std::string_view prefix) const {
    long first = -1;
    for (const auto& v : violations)
        if (v.inequality.rfind(prefix, 0) == 0 && (first < 0 || v.n < first)) first = v.n;
    return first;
}

namespace {

enum class Rel { LE, LT, GE, GT };

constexpr bool is_upper(Rel r) { return r == Rel::LE || r == Rel::LT; }
constexpr bool is_strict(Rel r) { return r == Rel::LT || r == Rel::GT; }

struct Outcome {
    int state = 0; // 0 pass, 1 violation, 2 indeterminate
    bool attained = false;
    Scalar margin;
};

Outcome eval_bound(const Scalar& value, const Scalar& bound, Rel rel, double tol) {
    Scalar margin = is_upper(rel) ? bound - value : value - bound;
    switch (value.backend()) {
        case Backend::Float64: {
            double m = margin.as_float();
            if (m < -tol) return {1, false, margin};
            return {0, std::fabs(m) <= tol, margin};
        }
        case Backend::BigRational: {
            int s = sgn(margin.as_rational());
            bool violated = is_strict(rel) ? s <= 0 : s < 0;
            return {violated ? 1 : 0, s == 0, margin};
        }
        case Backend::Interval: {
            const Interval& m = margin.as_interval();
            bool attained = sgn(m.lo) == 0 && sgn(m.hi) == 0;
            if (is_strict(rel) ? sgn(m.hi) <= 0 : sgn(m.hi) < 0) return {1, attained, margin};
            if (is_strict(rel) ? sgn(m.lo) > 0 : sgn(m.lo) >= 0) return {0, attained, margin};
            return {2, false, margin};
        }
    }
    throw usage_error("unknown backend");
}

// Shared recording logic for the four bound checkers.
struct BoundChecker {
    BoundsReport& report;
    double tol;

    // Returns the outcome state. note_attained: record exact attainment of a
    // closed endpoint as an informational note.
    int apply(long param, long seq_index, const char* id, const Scalar& value,
              const Scalar& bound, Rel rel, bool note_attained = false) {
        Outcome o = eval_bound(value, bound, rel, tol);
        if (o.state == 1) {
            Violation v;
            v.n = param;
            v.seq_index = seq_index;
            v.inequality = id;
            v.lhs = is_upper(rel) ? value : bound;
            v.rhs = is_upper(rel) ? bound : value;
            v.margin = o.margin;
            report.violations.push_back(std::move(v));
        } else if (o.state == 2) {
            ++report.indeterminate_count;
        } else if (o.attained && note_attained) {
            report.endpoint_notes.push_back({seq_index, id, false});
        }
        return o.state;
    }
};

BoundsReport make_report(CheckKind kind, const seq::RSequence& seq) {
    BoundsReport rep;
    rep.kind = kind;
    rep.lambda = seq.lambda.value;
    rep.backend = seq.backend;
    if (!seq.lambda.regime_ok) {
        if (!seq.unproven_regime)
            throw bell::domain_error("lambda <= 2 without the unproven-regime opt-in");
        rep.regime_warning = true;
        rep.warnings.push_back("lambda <= 2: outside the proven regime, results are empirical");
    }
    return rep;
}

bool attains(const Scalar& value, const Scalar& bound, double tol) {
    if (value.backend() == Backend::Float64)
        return std::fabs(value.as_float() - bound.as_float()) <= tol;
    return compare(value, bound) == Ordering::EQ;
}

} // namespace

BoundsReport check_theorem(const seq::RSequence& seq, const CheckOptions& opts) {
    if (seq.values.size() < 4) throw usage_error("check_theorem needs at least R_0..R_3");
    BoundsReport rep = make_report(CheckKind::Theorem, seq);
    BoundChecker chk{rep, opts.float_margin_tol};

    const Backend b = seq.backend;
    const Scalar& lam = seq.lambda.value;
    const Scalar zero = Scalar::zero(b);
    const Scalar one = Scalar::from_long(1, b);
    const Scalar sigma = one / (lam - one);

    // Per residue class: lower/upper bound, strictness, and which side is the
    // open endpoint that the forced n=0 value attains.
    struct ClassSpec {
        Scalar lower, upper;
        Rel lower_rel, upper_rel;
        const char *lower_id, *upper_id;
        bool open_is_lower;
    };
    const ClassSpec spec[4] = {
        {zero, sigma, Rel::GT, Rel::LE, "p1-lower", "p1-upper", true},
        {lam - sigma, lam, Rel::GE, Rel::LT, "p4-lower", "p4-upper", false},
        {one - sigma, one, Rel::GE, Rel::LT, "p2-lower", "p2-upper", false},
        {lam - one, lam - one + sigma, Rel::GT, Rel::LE, "p3-lower", "p3-upper", true},
    };

    const long n_max = seq.max_index();
    for (long m = 0; m <= n_max; ++m) {
        const ClassSpec& c = spec[m % 4];
        const Scalar& v = seq.values[static_cast<size_t>(m)];
        if (m < 4) {
            // Forced base values: membership is checked non-strictly and open
            // endpoint attainment is reported informationally.
            chk.apply(0, m, c.lower_id, v, c.lower, Rel::GE);
            chk.apply(0, m, c.upper_id, v, c.upper, Rel::LE);
            const Scalar& open_bound = c.open_is_lower ? c.lower : c.upper;
            if (attains(v, open_bound, opts.float_margin_tol))
                rep.endpoint_notes.push_back({m, c.open_is_lower ? c.lower_id : c.upper_id, true});
        } else {
            const long n = m / 4;
            chk.apply(n, m, c.lower_id, v, c.lower, c.lower_rel, !c.open_is_lower);
            chk.apply(n, m, c.upper_id, v, c.upper, c.upper_rel, c.open_is_lower);
        }
        ++rep.checked_count;
    }
    return rep;
}

BoundsReport check_conjecture(const seq::RSequence& seq, const CheckOptions& opts) {
    if (seq.values.size() < 8) throw usage_error("check_conjecture needs at least R_0..R_7");
    BoundsReport rep = make_report(CheckKind::Conjecture, seq);
    BoundChecker chk{rep, opts.float_margin_tol};

    const auto& R = seq.values;
    struct ClassSpec {
        const Scalar *lower, *upper;
        const char *lower_id, *upper_id;
    };
    const ClassSpec spec[4] = {
        {&R[0], &R[4], "c1-lower", "c1-upper"},
        {&R[5], &R[1], "c4-lower", "c4-upper"},
        {&R[6], &R[2], "c2-lower", "c2-upper"},
        {&R[3], &R[7], "c3-lower", "c3-upper"},
    };

    const long n_max = seq.max_index();
    for (long m = 0; m <= n_max; ++m) {
        const ClassSpec& c = spec[m % 4];
        const Scalar& v = R[static_cast<size_t>(m)];
        const long n = m / 4;
        chk.apply(n, m, c.lower_id, v, *c.lower, Rel::GE);
        chk.apply(n, m, c.upper_id, v, *c.upper, Rel::LE);
        ++rep.checked_count;
    }
    return rep;
}

BoundsReport check_splitting(const seq::RSequence& seq, int level_r, long max_k,
                             const CheckOptions& opts) {
    if (level_r < 1 || level_r > 40) throw usage_error("splitting level must be in 1..40");
    if (max_k < 0) throw usage_error("max_k must be >= 0");
    const long block = 1L << level_r;
    const long n_max = seq.max_index();
    if (2 * block - 1 > n_max)
        throw usage_error("sequence too short for splitting level " + std::to_string(level_r) +
                          " (needs R_0..R_" + std::to_string(2 * block - 1) + ")");

    BoundsReport rep = make_report(CheckKind::Splitting, seq);
    BoundChecker chk{rep, opts.float_margin_tol};

    for (long offset = 0; offset < block; ++offset) {
        const Scalar& a = seq.values[static_cast<size_t>(offset)];
        const Scalar& b = seq.values[static_cast<size_t>(block + offset)];
        const Scalar lo = min(a, b);
        const Scalar hi = max(a, b);
        for (long k = 0; k <= max_k; ++k) {
            const long idx = k * block + offset;
            if (idx > n_max) break;
            const Scalar& v = seq.values[static_cast<size_t>(idx)];
            chk.apply(offset, idx, "split-lower", v, lo, Rel::GE);
            chk.apply(offset, idx, "split-upper", v, hi, Rel::LE);
            ++rep.checked_count;
        }
    }
    return rep;
}

BoundsReport check_prop1(const seq::RSequence& seq, const CheckOptions& opts) {
    if (seq.max_index() < 2) throw usage_error("check_prop1 needs at least R_0..R_2");
    BoundsReport rep = make_report(CheckKind::Prop1, seq);
    BoundChecker chk{rep, opts.float_margin_tol};

    const Backend b = seq.backend;
    const Scalar zero = Scalar::zero(b);
    const Scalar one = Scalar::from_long(1, b);
    const long n_max = seq.max_index();
    for (long n = 1; 2 * n <= n_max; ++n) {
        const Scalar& v = seq.values[static_cast<size_t>(2 * n)];
        chk.apply(n, 2 * n, "prop1-positive", v, zero, Rel::GT);
        chk.apply(n, 2 * n, "prop1-lt-parent", v, seq.values[static_cast<size_t>(n)], Rel::LT);
        chk.apply(n, 2 * n, "prop1-le-one", v, one, Rel::LE, true);
        ++rep.checked_count;
    }
    return rep;
}

namespace {

// Index p*2^k with overflow/range guard.
long shifted_index(long p, int k, long s, long n_max, const char* what) {
    long idx = p;
    for (int i = 0; i < k; ++i) {
        idx *= 2;
        if (idx + s > n_max)
            throw usage_error(std::string(what) + ": index p*2^k+s exceeds the sequence length");
    }
    if (idx + s > n_max)
        throw usage_error(std::string(what) + ": index p*2^k+s exceeds the sequence length");
    return idx + s;
}

void finish_convergence(ConvergenceReport& rep) {
    const size_t count = rep.samples.size();
    if (count < 2) {
        rep.monotone_tail = false;
        return;
    }
    const size_t tail_len = std::max<size_t>(2, (count + 1) / 2);
    const size_t start = count - tail_len;

    bool monotone = true;
    for (size_t i = start + 1; i < count; ++i)
        if (!(to_float(rep.samples[i].deviation) < to_float(rep.samples[i - 1].deviation)))
            monotone = false;
    rep.monotone_tail = monotone;

    // Least-squares slope of ln(deviation) against k over the tail.
    bool all_positive = true;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = start; i < count; ++i) {
        double d = to_float(rep.samples[i].deviation);
        if (!(d > 0)) {
            all_positive = false;
            break;
        }
        double x = rep.samples[i].k, y = std::log(d);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    if (all_positive) {
        double n = static_cast<double>(tail_len);
        double denom = n * sxx - sx * sx;
        if (denom > 0) rep.estimated_rate = (n * sxy - sx * sy) / denom;
    }
}

} // namespace

ConvergenceReport proposition_decay(const seq::RSequence& seq, long p, int k_max) {
    if (p < 1 || p % 2 == 0) throw usage_error("decay base p must be odd and >= 1");
    if (k_max < 0) throw usage_error("k_max must be >= 0");
    shifted_index(p, k_max, 0, seq.max_index(), "proposition_decay");

    ConvergenceReport rep;
    rep.p = p;
    rep.s = 0;
    for (int k = 0; k <= k_max; ++k) {
        long idx = shifted_index(p, k, 0, seq.max_index(), "proposition_decay");
        const Scalar& v = seq.values[static_cast<size_t>(idx)];
        rep.samples.push_back({k, idx, v, v.abs()});
    }
    finish_convergence(rep);
    return rep;
}

ConvergenceReport proposition_limit(const seq::RSequence& seq, long p, long s, int k_max) {
    if (p < 1) throw usage_error("p must be >= 1");
    if (s < 0 || s > seq.max_index()) throw usage_error("offset s out of range");
    if (k_max < 0) throw usage_error("k_max must be >= 0");
    shifted_index(p, k_max, s, seq.max_index(), "proposition_limit");

    const Scalar& limit = seq.values[static_cast<size_t>(s)];
    ConvergenceReport rep;
    rep.p = p;
    rep.s = s;
    for (int k = 0; k <= k_max; ++k) {
        long idx = shifted_index(p, k, s, seq.max_index(), "proposition_limit");
        const Scalar& v = seq.values[static_cast<size_t>(idx)];
        rep.samples.push_back({k, idx, v, (v - limit).abs()});
    }
    finish_convergence(rep);
    return rep;
}

LimitBatchReport proposition_limit_batch(const seq::RSequence& seq, long p_max, long s_max,
                                         int k_max) {
    if (p_max < 1 || s_max < 1) throw usage_error("batch needs p_max >= 1 and s_max >= 1");
    if (p_max + s_max > seq.max_index())
        throw usage_error("sequence too short for the requested batch");

    LimitBatchReport batch;
    for (long p = 1; p <= p_max; ++p) {
        for (long s = 1; s <= s_max; ++s) {
            int k_fit = 0;
            while (k_fit < k_max) {
                long idx = p;
                bool ok = true;
                for (int i = 0; i < k_fit + 1; ++i) {
                    idx *= 2;
                    if (idx + s > seq.max_index()) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) break;
                ++k_fit;
            }
            batch.entries.push_back(proposition_limit(seq, p, s, k_fit));
        }
    }
    for (int k = 0; k <= k_max; ++k) {
        bool any = false;
        double worst = 0;
        for (const auto& entry : batch.entries)
            for (const auto& sample : entry.samples)
                if (sample.k == k) {
                    any = true;
                    worst = std::max(worst, std::fabs(to_float(sample.deviation)));
                }
        if (!any) break;
        batch.uniformity.push_back({k, worst});
    }
    return batch;
}

ScanReport scan_conjecture(const Rational& lambda_lo, const Rational& lambda_hi,
                           const Rational& step, long n_max, const ScanOptions& opts) {
    if (sgn(step) <= 0) throw usage_error("scan step must be > 0");
    if (lambda_lo <= 2) throw usage_error("scan grid must start above lambda = 2");

    ScanReport report;
    report.n_max = n_max;
    report.backend = opts.backend;
    if (lambda_lo > lambda_hi) return report;

    std::vector<Rational> grid;
    for (Rational x = lambda_lo; x <= lambda_hi; x += step) {
        grid.push_back(x);
        if (static_cast<long>(grid.size()) > opts.max_grid_points)
            throw usage_error("scan grid exceeds the budget of " +
                              std::to_string(opts.max_grid_points) +
                              " points; increase the step or raise the budget");
    }

    report.rows.resize(grid.size());
    auto run_range = [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i) {
            Scalar lam = Scalar::of(grid[i]).to_backend(opts.backend);
            seq::RSequence s = seq::generate(seq::LambdaParam::make(lam), n_max, opts.gen);
            BoundsReport rep = check_conjecture(s, opts.check);
            ScanRow row;
            row.lambda = grid[i];
            row.checked_count = rep.checked_count;
            row.violation_count = static_cast<long>(rep.violations.size());
            row.first_violation_n = {rep.first_violation("c1"), rep.first_violation("c2"),
                                     rep.first_violation("c3"), rep.first_violation("c4")};
            report.rows[i] = std::move(row);
        }
    };

    const size_t n_rows = grid.size();
    size_t n_workers = std::min<size_t>(std::max(1u, std::thread::hardware_concurrency()), n_rows);
    if (n_workers <= 1) {
        run_range(0, n_rows);
    } else {
        std::vector<std::future<void>> futures;
        const size_t chunk = (n_rows + n_workers - 1) / n_workers;
        for (size_t begin = 0; begin < n_rows; begin += chunk)
            futures.push_back(std::async(std::launch::async, run_range, begin,
                                         std::min(begin + chunk, n_rows)));
        for (auto& f : futures) f.get();
    }

    const char* family_ids[4] = {"c1", "c2", "c3", "c4"};
    const int family_col[4] = {0, 1, 2, 3}; // rows store c1,c2,c3,c4 in this order
    for (int f = 0; f < 4; ++f) {
        long first = -1, last = -1, count = 0;
        for (size_t i = 0; i < report.rows.size(); ++i) {
            if (report.rows[i].first_violation_n[static_cast<size_t>(family_col[f])] >= 0) {
                if (first < 0) first = static_cast<long>(i);
                last = static_cast<long>(i);
                ++count;
            }
        }
        if (first >= 0) {
            ScanRegion region;
            region.inequality = family_ids[f];
            region.lambda_first = report.rows[static_cast<size_t>(first)].lambda;
            region.lambda_last = report.rows[static_cast<size_t>(last)].lambda;
            region.contiguous = (last - first + 1 == count);
            region.count = count;
            report.regions.push_back(std::move(region));
        }
    }
    return report;
}

} // namespace bell::analysis
