#include "bell/operators.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <thread>

namespace bell::ops {

const char* provenance_label(Provenance p) {
    switch (p) {
        case Provenance::bellissard: return "bellissard";
        case Provenance::lambda_seq_T1: return "lambda_seq_T1";
        case Provenance::lambda_seq_T2: return "lambda_seq_T2";
        case Provenance::dyson: return "dyson";
        case Provenance::almost_mathieu: return "almost_mathieu";
    }
    return "?";
}

namespace {

bool strictly_positive(const Scalar& x) {
    switch (x.backend()) {
        case Backend::Float64: return x.as_float() > 0.0;
        case Backend::BigRational: return sgn(x.as_rational()) > 0;
        case Backend::Interval: return sgn(x.as_interval().lo) > 0;
    }
    return false;
}

double positive_sqrt(const Scalar& x, const char* what) {
    double v = to_float(x);
    if (v < 0) throw bell::domain_error(std::string(what) + ": negative value under sqrt");
    return std::sqrt(v);
}

} // namespace

ChainSpec ChainSpec::make(std::vector<Scalar> masses, std::vector<Scalar> springs,
                          ChainBoundary boundary) {
    if (masses.size() < 2) throw usage_error("chain needs at least two masses");
    if (springs.size() != masses.size() - 1)
        throw usage_error("chain needs exactly one spring per adjacent mass pair");
    for (const auto& m : masses)
        if (!strictly_positive(m)) throw bell::domain_error("chain masses must be > 0");
    for (const auto& k : springs)
        if (!strictly_positive(k)) throw bell::domain_error("chain spring constants must be > 0");
    ChainSpec c;
    c.masses = std::move(masses);
    c.springs = std::move(springs);
    c.boundary = boundary;
    return c;
}

std::vector<Scalar> dyson_map(const ChainSpec& chain) {
    const size_t m_count = chain.masses.size();
    std::vector<Scalar> lambdas;
    lambdas.reserve(2 * m_count - 2);
    for (size_t j = 0; j + 1 < m_count; ++j) {
        lambdas.push_back(chain.springs[j] / chain.masses[j]);
        lambdas.push_back(chain.springs[j] / chain.masses[j + 1]);
    }
    return lambdas;
}

JacobiMatrix build_bellissard(const seq::RSequence& seq, long n_sites) {
    if (n_sites < 1) throw usage_error("matrix size must be >= 1");
    if (seq.max_index() < n_sites)
        throw usage_error("sequence too short: need R_0..R_" + std::to_string(n_sites));

    JacobiMatrix m;
    m.provenance = Provenance::bellissard;
    m.boundary_note = "half-line Dirichlet cutoff: u(0) = u(N+1) = 0";
    m.diag.assign(static_cast<size_t>(n_sites), 0.0);
    m.off.reserve(static_cast<size_t>(n_sites) - 1);
    for (long j = 1; j < n_sites; ++j)
        m.off.push_back(positive_sqrt(seq.at(j + 1), "build_bellissard"));
    return m;
}

JacobiMatrix build_from_lambda_seq(const std::vector<Scalar>& lambdas, long n_sites,
                                   OperatorKind kind, Provenance provenance) {
    if (n_sites < 1) throw usage_error("matrix size must be >= 1");
    const long len = static_cast<long>(lambdas.size());
    if (len < 1) throw usage_error("lambda sequence is empty");
    const Backend backend = lambdas.front().backend();
    for (const auto& l : lambdas) {
        if (l.backend() != backend) throw usage_error("lambda sequence mixes backends");
        if (!strictly_positive(l)) throw bell::domain_error("lambda sequence entries must be > 0");
    }
    const Scalar zero = Scalar::zero(backend);
    // 1-based lambda accessor; index 0 is the free-end convention.
    auto lam = [&](long i) -> const Scalar& {
        return i == 0 ? zero : lambdas[static_cast<size_t>(i - 1)];
    };

    long first_site = 0;
    bool clipped_far_end = false;
    if (kind == OperatorKind::T2) {
        // Site j's diagonal needs lambda_{2j-1}; allow exactly one trailing
        // missing lambda (a full free-free chain), otherwise Dirichlet cutoff.
        if (2 * n_sites - 2 > len)
            throw usage_error("lambda sequence too short for N=" + std::to_string(n_sites) +
                              " half-line sites (need at least " + std::to_string(2 * n_sites - 2) +
                              " entries)");
        first_site = 1;
        clipped_far_end = (2 * n_sites - 1 > len);
    } else {
        // Whole-line window: every row interior, centered on the usable range.
        const long max_start = (len - 2 * n_sites + 3) / 2;
        if (max_start < 2)
            throw usage_error("lambda sequence too short for an interior window of " +
                              std::to_string(n_sites) + " sites (need at least " +
                              std::to_string(2 * n_sites + 1) + " entries)");
        first_site = (2 + max_start) / 2;
    }

    JacobiMatrix m;
    m.provenance = provenance;
    m.diag.reserve(static_cast<size_t>(n_sites));
    m.off.reserve(static_cast<size_t>(n_sites) - 1);
    for (long i = 0; i < n_sites; ++i) {
        const long j = first_site + i;
        const bool clip = clipped_far_end && i == n_sites - 1;
        const Scalar& left = lam(2 * j - 2);
        const Scalar& right = clip ? zero : lam(2 * j - 1);
        m.diag.push_back(-(to_float(right) + to_float(left)));
        if (i + 1 < n_sites)
            m.off.push_back(positive_sqrt(lam(2 * j - 1) * lam(2 * j), "build_from_lambda_seq"));
    }
    if (kind == OperatorKind::T2) {
        m.boundary_note = std::string("half-line: lambda_0 = 0 (free end at site 1); far end ") +
                          (clipped_far_end ? "free (lambda list ends at 2N-2)" : "Dirichlet cutoff");
    } else {
        m.boundary_note = "whole-line window at sites " + std::to_string(first_site) + ".." +
                          std::to_string(first_site + n_sites - 1) + ", Dirichlet cutoffs";
    }
    return m;
}

JacobiMatrix build_from_lambda_seq(const std::vector<Scalar>& lambdas, long n_sites,
                                   OperatorKind kind) {
    return build_from_lambda_seq(lambdas, n_sites, kind,
                                 kind == OperatorKind::T1 ? Provenance::lambda_seq_T1
                                                          : Provenance::lambda_seq_T2);
}

JacobiMatrix build_dyson(const ChainSpec& chain, long n_sites, OperatorKind kind) {
    std::vector<Scalar> lambdas = dyson_map(chain);
    if (n_sites == 0) {
        const long len = static_cast<long>(lambdas.size());
        n_sites = kind == OperatorKind::T2 ? len / 2 + 1 : (len - 1) / 2;
    }
    return build_from_lambda_seq(lambdas, n_sites, kind, Provenance::dyson);
}

JacobiMatrix build_almost_mathieu(double coupling, double alpha, double theta, long n_sites) {
    if (n_sites < 1) throw usage_error("matrix size must be >= 1");
    JacobiMatrix m;
    m.provenance = Provenance::almost_mathieu;
    m.boundary_note = "Dirichlet cutoff at both window ends";
    m.diag.reserve(static_cast<size_t>(n_sites));
    constexpr double two_pi = 6.283185307179586476925286766559;
    for (long j = 1; j <= n_sites; ++j)
        m.diag.push_back(coupling * std::cos(two_pi * (theta - alpha * static_cast<double>(j))));
    m.off.assign(static_cast<size_t>(n_sites) - 1, 1.0);
    return m;
}

namespace {

// Eigenvalues of T strictly below x, via the classic pivoted LDL^T sign count.
// The pivot clamp keeps the count monotone in x for degenerate pivots.
long sturm_count(const std::vector<double>& diag, const std::vector<double>& off_sq, double x,
                 double pivmin) {
    long count = 0;
    double d = 1.0;
    const size_t n = diag.size();
    for (size_t i = 0; i < n; ++i) {
        d = diag[i] - x - (i > 0 ? off_sq[i - 1] / d : 0.0);
        if (std::fabs(d) < pivmin) d = -pivmin;
        if (d < 0) ++count;
    }
    return count;
}

struct BisectJob {
    double lo, hi; // count(lo) <= k_lo - 1, count(hi) >= k_hi
    long k_lo, k_hi;
};

void bisect_range(const std::vector<double>& diag, const std::vector<double>& off_sq, double gl,
                  double gu, long k_first, long k_last, double tol, double pivmin,
                  std::vector<double>& out) {
    std::vector<BisectJob> stack{{gl, gu, k_first, k_last}};
    while (!stack.empty()) {
        BisectJob job = stack.back();
        stack.pop_back();
        if (job.k_lo > job.k_hi) continue;
        double mid = 0.5 * (job.lo + job.hi);
        if (job.hi - job.lo <= tol || mid <= job.lo || mid >= job.hi) {
            for (long k = job.k_lo; k <= job.k_hi; ++k)
                out[static_cast<size_t>(k - 1)] = mid;
            continue;
        }
        long below = sturm_count(diag, off_sq, mid, pivmin);
        if (below < job.k_hi) stack.push_back({mid, job.hi, std::max(job.k_lo, below + 1), job.k_hi});
        if (below >= job.k_lo) stack.push_back({job.lo, mid, job.k_lo, std::min(job.k_hi, below)});
    }
}

} // namespace

std::vector<double> eigenvalues(const JacobiMatrix& m, double tol) {
    if (tol <= 0) throw usage_error("eigenvalue tolerance must be > 0");
    const long n = m.size();
    if (n < 1) throw usage_error("matrix size must be >= 1");
    if (n == 1) return {m.diag[0]};

    std::vector<double> off_sq(m.off.size());
    double b_sq_max = 1.0;
    for (size_t i = 0; i < m.off.size(); ++i) {
        off_sq[i] = m.off[i] * m.off[i];
        b_sq_max = std::max(b_sq_max, off_sq[i]);
    }
    const double pivmin = std::numeric_limits<double>::min() * b_sq_max;

    // Gershgorin bounds, widened for rounding in the count recurrence.
    double gl = m.diag[0], gu = m.diag[0];
    for (long i = 0; i < n; ++i) {
        double radius = (i > 0 ? std::fabs(m.off[static_cast<size_t>(i - 1)]) : 0.0) +
                        (i + 1 < n ? std::fabs(m.off[static_cast<size_t>(i)]) : 0.0);
        gl = std::min(gl, m.diag[static_cast<size_t>(i)] - radius);
        gu = std::max(gu, m.diag[static_cast<size_t>(i)] + radius);
    }
    const double norm = std::max(std::fabs(gl), std::fabs(gu));
    const double fudge = 2.0 * std::numeric_limits<double>::epsilon() * norm * n + 2.0 * pivmin;
    gl -= fudge;
    gu += fudge;

    std::vector<double> result(static_cast<size_t>(n));
    const size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const long n_workers = static_cast<long>(std::min<size_t>(hw, static_cast<size_t>((n + 63) / 64)));
    if (n_workers <= 1) {
        bisect_range(m.diag, off_sq, gl, gu, 1, n, tol, pivmin, result);
    } else {
        std::vector<std::future<void>> futures;
        const long chunk = (n + n_workers - 1) / n_workers;
        for (long k_first = 1; k_first <= n; k_first += chunk) {
            const long k_last = std::min(k_first + chunk - 1, n);
            futures.push_back(std::async(std::launch::async, [&, k_first, k_last] {
                bisect_range(m.diag, off_sq, gl, gu, k_first, k_last, tol, pivmin, result);
            }));
        }
        for (auto& f : futures) f.get();
    }
    return result;
}

long eigenvalue_count_below(const JacobiMatrix& m, double x) {
    if (m.size() < 1) throw usage_error("matrix size must be >= 1");
    std::vector<double> off_sq(m.off.size());
    double b_sq_max = 1.0;
    for (size_t i = 0; i < m.off.size(); ++i) {
        off_sq[i] = m.off[i] * m.off[i];
        b_sq_max = std::max(b_sq_max, off_sq[i]);
    }
    return sturm_count(m.diag, off_sq, x, std::numeric_limits<double>::min() * b_sq_max);
}

SpectrumReport spectrum_report(const std::vector<double>& eigs, double gap_threshold,
                               int ids_resolution) {
    if (eigs.empty()) throw usage_error("spectrum report needs at least one eigenvalue");
    if (!std::is_sorted(eigs.begin(), eigs.end()))
        throw usage_error("spectrum report needs sorted eigenvalues");
    if (ids_resolution < 2) throw usage_error("ids resolution must be >= 2");

    SpectrumReport rep;
    rep.eigenvalues = eigs;
    for (size_t i = 0; i + 1 < eigs.size(); ++i)
        if (eigs[i + 1] - eigs[i] > gap_threshold) rep.gaps.push_back({eigs[i], eigs[i + 1]});

    const double e_min = eigs.front(), e_max = eigs.back();
    const double n = static_cast<double>(eigs.size());
    for (int i = 0; i < ids_resolution; ++i) {
        double energy = e_min + (e_max - e_min) * static_cast<double>(i) /
                                    static_cast<double>(ids_resolution - 1);
        auto it = std::upper_bound(eigs.begin(), eigs.end(), energy);
        rep.ids.push_back({energy, static_cast<double>(it - eigs.begin()) / n});
    }
    return rep;
}

std::vector<ModeFrequency> mode_frequencies(const JacobiMatrix& m, double eig_tol,
                                            double unstable_tol) {
    switch (m.provenance) {
        case Provenance::dyson:
        case Provenance::lambda_seq_T1:
        case Provenance::lambda_seq_T2: break;
        default:
            throw usage_error(std::string("mode frequencies need a chain-derived matrix, got "
                                          "provenance ") +
                              provenance_label(m.provenance));
    }
    std::vector<ModeFrequency> modes;
    for (double mu : eigenvalues(m, eig_tol)) {
        ModeFrequency mf;
        mf.raw_eigenvalue = mu;
        if (mu > unstable_tol) {
            mf.unstable = true;
        } else {
            mf.value = std::sqrt(std::max(0.0, -mu));
        }
        modes.push_back(mf);
    }
    return modes;
}

} // namespace bell::ops
