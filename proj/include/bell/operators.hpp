#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bell/scalar.hpp"
#include "bell/sequence.hpp"

namespace bell::ops {

enum class Provenance { bellissard, lambda_seq_T1, lambda_seq_T2, dyson, almost_mathieu };

const char* provenance_label(Provenance p);

enum class OperatorKind { T1, T2 };

// Symmetric tridiagonal truncation. Spectra live in 64-bit float; exact inputs
// are rounded once at build time (documented in boundary_note).
struct JacobiMatrix {
    Provenance provenance = Provenance::bellissard;
    std::vector<double> diag; // a_1..a_N
    std::vector<double> off;  // b_1..b_{N-1}, b_j couples sites j and j+1
    std::string boundary_note;

    long size() const { return static_cast<long>(diag.size()); }
};

enum class ChainBoundary { free_ends, fixed_ends };

// Mass-spring chain: M masses, M-1 springs, all strictly positive.
struct ChainSpec {
    std::vector<Scalar> masses;
    std::vector<Scalar> springs;
    ChainBoundary boundary = ChainBoundary::free_ends;

    static ChainSpec make(std::vector<Scalar> masses, std::vector<Scalar> springs,
                          ChainBoundary boundary = ChainBoundary::free_ends);
};

// lambda_{2j-1} = K_j/m_j, lambda_{2j} = K_j/m_{j+1}; length 2M-2.
std::vector<Scalar> dyson_map(const ChainSpec& chain);

// N-site truncation of the half-line operator with zero diagonal and
// b_j = sqrt(R_{j+1}); the boundary coefficient sqrt(R_1) multiplies the
// Dirichlet zero and drops out.
JacobiMatrix build_bellissard(const seq::RSequence& seq, long n_sites);

// a_j = -(lambda_{2j-1} + lambda_{2j-2}), b_j = sqrt(lambda_{2j-1} lambda_{2j}).
// T2 (half line): sites 1..N with lambda_0 = 0 (free end); the far end is a
// Dirichlet cutoff, or free when the lambda list ends exactly at index 2N-2
// (a full chain). T1 (whole line): an interior window, centered, Dirichlet on
// both sides. All lambdas must be positive and share a backend.
JacobiMatrix build_from_lambda_seq(const std::vector<Scalar>& lambdas, long n_sites,
                                   OperatorKind kind, Provenance provenance);
JacobiMatrix build_from_lambda_seq(const std::vector<Scalar>& lambdas, long n_sites,
                                   OperatorKind kind);

// dyson_map + build_from_lambda_seq with dyson provenance. n_sites = 0 means
// the largest truncation the chain supports (all M sites).
JacobiMatrix build_dyson(const ChainSpec& chain, long n_sites = 0,
                         OperatorKind kind = OperatorKind::T2);

// b_j = 1, a_j = coupling * cos(2*pi*(theta - alpha*j)).
JacobiMatrix build_almost_mathieu(double coupling, double alpha, double theta, long n_sites);

// All N eigenvalues to absolute tolerance tol, by Sturm-sequence counting and
// bisection on Gershgorin-bounded intervals. Deterministic; disjoint index
// ranges are bisected in parallel and merged in order.
std::vector<double> eigenvalues(const JacobiMatrix& m, double tol);

// Number of eigenvalues strictly below x (the Sturm count). Exposed because it
// is the natural IDS query for a chosen energy.
long eigenvalue_count_below(const JacobiMatrix& m, double x);

struct SpectralGap {
    double left = 0, right = 0;
};

struct IdsSample {
    double energy = 0;
    double fraction = 0; // fraction of eigenvalues <= energy
};

struct ModeFrequency {
    double value = 0;            // E = sqrt(-mu) for eigenvalue mu <= 0
    bool unstable = false;       // mu > 0 beyond tolerance: not an oscillatory mode
    double raw_eigenvalue = 0;
};

struct SpectrumReport {
    std::vector<double> eigenvalues;
    std::vector<SpectralGap> gaps;      // consecutive-eigenvalue intervals wider than threshold
    std::vector<IdsSample> ids;         // empirical CDF on a uniform energy grid
    std::optional<std::vector<ModeFrequency>> mode_frequencies;
};

SpectrumReport spectrum_report(const std::vector<double>& eigs, double gap_threshold,
                               int ids_resolution);

// E from mu = -E^2 per eigenvalue; positive eigenvalues beyond unstable_tol are
// flagged rather than dropped. Requires dyson or lambda_seq provenance.
std::vector<ModeFrequency> mode_frequencies(const JacobiMatrix& m, double eig_tol = 1e-12,
                                            double unstable_tol = 1e-9);

} // namespace bell::ops
