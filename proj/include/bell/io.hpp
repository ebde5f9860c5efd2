#pragma once

#include <istream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bell/analysis.hpp"
#include "bell/operators.hpp"
#include "bell/scalar.hpp"
#include "bell/sequence.hpp"

// Plot-ready tables and structured reports. All emitters are deterministic:
// identical inputs yield byte-identical output. Column orders and JSON keys
// are documented in the README.
namespace bell::io {

using json = nlohmann::ordered_json;

// Floats serialize as shortest round-trip decimals, exact rationals as
// "num/den" strings, intervals as {"lo", "hi"}.
json scalar_json(const Scalar& s);
json lambda_json(const Scalar& lambda);

std::string sequence_csv(const seq::RSequence& seq);
json sequence_json(const seq::RSequence& seq);

std::string bounds_csv(const analysis::BoundsReport& report);
json bounds_json(const analysis::BoundsReport& report);

std::string identity_csv(const seq::IdentityReport& report);
json identity_json(const seq::IdentityReport& report, const Scalar& lambda);

std::string convergence_csv(const analysis::ConvergenceReport& report);
json convergence_json(const analysis::ConvergenceReport& report, const Scalar& lambda);

std::string limit_batch_csv(const analysis::LimitBatchReport& report);
json limit_batch_json(const analysis::LimitBatchReport& report, const Scalar& lambda);

std::string scan_csv(const analysis::ScanReport& report);
json scan_json(const analysis::ScanReport& report);

std::string matrix_csv(const ops::JacobiMatrix& m);
std::string spectrum_csv(const std::vector<double>& eigenvalues);
json spectrum_json(const ops::SpectrumReport& report, const ops::JacobiMatrix& m);

std::string chain_csv(const ops::ChainSpec& chain);
// Columns "m,K"; the final row's K is absent (or empty). Values are parsed as
// exact decimals.
ops::ChainSpec parse_chain_csv(std::istream& in);

// Schema-checked readers for the emitted tables (round-trip support).
struct SequenceRow {
    long n = 0;
    double decimal = 0;
    std::string exact;
    int residue_class = 0;
};
std::vector<SequenceRow> parse_sequence_csv(std::istream& in);
std::vector<double> parse_spectrum_csv(std::istream& in);
ops::JacobiMatrix parse_matrix_csv(std::istream& in);

} // namespace bell::io
