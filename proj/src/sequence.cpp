#include "bell/sequence.hpp"

#include <algorithm>
#include <cmath>

namespace bell::seq {

namespace {

bool surely_greater(const Scalar& x, long bound) {
    switch (x.backend()) {
        case Backend::Float64: return x.as_float() > static_cast<double>(bound);
        case Backend::BigRational: return x.as_rational() > bound;
        case Backend::Interval: return x.as_interval().lo > bound;
    }
    return false;
}

} // namespace

LambdaParam LambdaParam::make(const Scalar& lambda) {
    if (lambda.backend() == Backend::Float64 && !std::isfinite(lambda.as_float()))
        throw bell::domain_error("lambda must be finite");
    if (!surely_greater(lambda, 0)) throw bell::domain_error("lambda must be > 0");
    LambdaParam p;
    p.value = lambda;
    p.regime_ok = surely_greater(lambda, 2);
    return p;
}

const Scalar& RSequence::at(long n) const {
    if (n < 0 || n > max_index())
        throw usage_error("sequence index " + std::to_string(n) + " out of range (max " +
                          std::to_string(max_index()) + ")");
    return values[static_cast<size_t>(n)];
}

RSequence generate(const LambdaParam& lambda, long n_max, const GenerateOptions& opts) {
    if (n_max < 0) throw usage_error("n_max must be >= 0");
    const Backend backend = lambda.value.backend();
    const bool exact_cost = backend == Backend::BigRational ||
                            (backend == Backend::Interval && opts.interval_round_bits <= 0);
    if (exact_cost && n_max > opts.exact_max_n)
        throw usage_error("exact-mode N=" + std::to_string(n_max) + " exceeds the cap " +
                          std::to_string(opts.exact_max_n) +
                          " (raise the cap explicitly to go further)");
    if (!lambda.regime_ok && !opts.allow_unproven_regime)
        throw bell::domain_error("lambda <= 2 is outside the proven regime; "
                                 "opt in explicitly to explore it");

    RSequence seq;
    seq.lambda = lambda;
    seq.backend = backend;
    seq.unproven_regime = !lambda.regime_ok;
    seq.values.reserve(static_cast<size_t>(n_max) + 1);
    seq.values.push_back(Scalar::zero(backend));
    if (n_max >= 1) seq.values.push_back(lambda.value);

    const bool rounding = backend == Backend::Interval && opts.interval_round_bits > 0;
    // Strictly increasing fill order: R_{2n} consumes R_n and R_{2n-1}, both
    // already present.
    for (long n = 1; 2 * n <= n_max; ++n) {
        const Scalar& divisor = seq.values[static_cast<size_t>(2 * n - 1)];
        if (divisor.contains_zero()) throw degenerate_recursion_error(2 * n - 1);
        Scalar even = seq.values[static_cast<size_t>(n)] / divisor;
        if (rounding) even = outward_round(even, opts.interval_round_bits);
        seq.values.push_back(std::move(even));
        if (2 * n + 1 <= n_max) {
            Scalar odd = lambda.value - seq.values.back();
            if (rounding) odd = outward_round(odd, opts.interval_round_bits);
            seq.values.push_back(std::move(odd));
        }
    }
    return seq;
}

Scalar closed_form(int k, const LambdaParam& lambda) {
    if (k < 0 || k > 7) throw usage_error("closed_form index must be in 0..7");
    if (!lambda.regime_ok) throw bell::domain_error("closed forms require lambda > 2");
    const Backend b = lambda.value.backend();
    const Scalar one = Scalar::from_long(1, b);
    const Scalar two = Scalar::from_long(2, b);
    const Scalar& lam = lambda.value;
    switch (k) {
        case 0: return Scalar::zero(b);
        case 1: return lam;
        case 2: return one;
        case 3: return lam - one;
        case 4: return one / (lam - one);
        case 5: return lam - one / (lam - one);
        case 6: {
            Scalar lm1 = lam - one;
            return lm1 * lm1 / (lam * lam - lam - one);
        }
        case 7: {
            Scalar num = lam * lam * lam - two * lam * lam + lam - one;
            return num / (lam * lam - lam - one);
        }
    }
    throw usage_error("unreachable");
}

namespace {

// One identity family being accumulated: residual = lhs - rhs, failing when
// |residual| > tol * max(1, |rhs|), all computed in the sequence backend.
class FamilyAccumulator {
  public:
    FamilyAccumulator(std::string name, Backend backend, double rel_tol)
        : backend_(backend), tol_scalar_(make_tol(backend, rel_tol)) {
        result_.name = std::move(name);
        result_.max_residual = Scalar::zero(backend);
    }

    void check(long anchor_index, const Scalar& lhs, const Scalar& rhs) {
        ++result_.checked;
        Scalar residual = (lhs - rhs).abs();
        if (exceeds(residual, result_.max_residual)) {
            result_.max_residual = residual;
            result_.argmax_index = anchor_index;
        }
        Scalar scale = max(Scalar::from_long(1, backend_), rhs.abs());
        if (result_.first_failing < 0 && exceeds(residual, tol_scalar_ * scale))
            result_.first_failing = anchor_index;
    }

    IdentityFamilyResult take() { return std::move(result_); }

  private:
    static Scalar make_tol(Backend b, double rel_tol) {
        return Scalar::of(rel_tol).to_backend(b);
    }

    // "residual definitely larger": for intervals compare magnitude bounds.
    bool exceeds(const Scalar& a, const Scalar& b) const {
        if (backend_ != Backend::Interval) return compare(a, b) == Ordering::GT;
        return a.as_interval().hi > b.as_interval().hi;
    }

    Backend backend_;
    Scalar tol_scalar_;
    IdentityFamilyResult result_;
};

} // namespace

IdentityReport verify_recurrences(const RSequence& seq, double rel_tol) {
    const long n_max = seq.max_index();
    const Backend b = seq.backend;
    const Scalar& lam = seq.lambda.value;
    const Scalar one = Scalar::from_long(1, b);
    const auto& R = seq.values;
    auto r = [&](long i) -> const Scalar& { return R[static_cast<size_t>(i)]; };

    IdentityReport report;
    report.backend = b;
    report.rel_tol = rel_tol;

    FamilyAccumulator pair_sum("pair-sum", b, rel_tol);
    for (long n = 0; 2 * n + 1 <= n_max; ++n)
        pair_sum.check(2 * n, r(2 * n) + r(2 * n + 1), lam);
    report.families.push_back(pair_sum.take());

    FamilyAccumulator pair_product("pair-product", b, rel_tol);
    for (long n = 1; 2 * n <= n_max; ++n)
        pair_product.check(2 * n, r(2 * n) * r(2 * n - 1), r(n));
    report.families.push_back(pair_product.take());

    FamilyAccumulator sum4("pair-sum-4", b, rel_tol);
    for (long n = 0; 4 * n + 1 <= n_max; ++n) {
        sum4.check(4 * n, r(4 * n) + r(4 * n + 1), lam);
        if (4 * n + 3 <= n_max) sum4.check(4 * n + 2, r(4 * n + 2) + r(4 * n + 3), lam);
    }
    report.families.push_back(sum4.take());

    FamilyAccumulator product8("pair-product-8", b, rel_tol);
    for (long n = 0; 8 * n <= n_max; ++n) {
        if (n >= 1 && 8 * n <= n_max) product8.check(8 * n, r(8 * n) * r(8 * n - 1), r(4 * n));
        if (8 * n + 2 <= n_max) product8.check(8 * n + 2, r(8 * n + 2) * r(8 * n + 1), r(4 * n + 1));
        if (8 * n + 4 <= n_max) product8.check(8 * n + 4, r(8 * n + 4) * r(8 * n + 3), r(4 * n + 2));
        if (8 * n + 6 <= n_max) product8.check(8 * n + 6, r(8 * n + 6) * r(8 * n + 5), r(4 * n + 3));
    }
    report.families.push_back(product8.take());

    FamilyAccumulator transformed("transformed-quotient", b, rel_tol);
    for (long n = 0; 8 * n <= n_max; ++n) {
        if (n >= 1 && 8 * n <= n_max)
            transformed.check(8 * n, r(8 * n), r(4 * n) / (lam - r(8 * n - 2)));
        if (n >= 1 && 8 * n + 2 <= n_max) {
            Scalar denom = lam * (lam - r(8 * n - 2)) - r(4 * n);
            transformed.check(8 * n + 2, one - r(8 * n + 2),
                              r(4 * n) * (lam - one - r(8 * n - 2)) / denom);
        }
        if (8 * n + 4 <= n_max)
            transformed.check(8 * n + 4, r(8 * n + 4), r(4 * n + 2) / (lam - r(8 * n + 2)));
        if (8 * n + 6 <= n_max) {
            Scalar denom = lam * (lam - r(8 * n + 2)) - r(4 * n + 2);
            transformed.check(8 * n + 6, one - r(8 * n + 6),
                              r(4 * n + 2) * (lam - one - r(8 * n + 2)) / denom);
        }
    }
    report.families.push_back(transformed.take());

    return report;
}

bool IdentityReport::all_passed() const {
    return std::all_of(families.begin(), families.end(),
                       [](const IdentityFamilyResult& f) { return f.first_failing < 0; });
}

long IdentityReport::first_failing_index() const {
    long first = -1;
    for (const auto& f : families)
        if (f.first_failing >= 0 && (first < 0 || f.first_failing < first)) first = f.first_failing;
    return first;
}

} // namespace bell::seq
