#include "bell/io.hpp"

#include <sstream>

namespace bell::io {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

void expect_header(std::istream& in, const std::string& expected, const char* what) {
    std::string line;
    if (!std::getline(in, line)) throw parse_error(std::string(what) + ": empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected)
        throw parse_error(std::string(what) + ": expected header '" + expected + "', got '" + line +
                          "'");
}

long parse_long(const std::string& s, const char* what) {
    try {
        size_t pos = 0;
        long v = std::stol(s, &pos);
        if (pos != s.size()) throw parse_error("");
        return v;
    } catch (...) {
        throw parse_error(std::string(what) + ": bad integer '" + s + "'");
    }
}

double parse_double(const std::string& s, const char* what) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw parse_error("");
        return v;
    } catch (...) {
        throw parse_error(std::string(what) + ": bad number '" + s + "'");
    }
}

std::string exact_cell(const Scalar& s) {
    return s.backend() == Backend::Float64 ? std::string() : to_string(s);
}

} // namespace

json scalar_json(const Scalar& s) {
    switch (s.backend()) {
        case Backend::Float64: return json(s.as_float());
        case Backend::BigRational: return json(s.as_rational().get_str());
        case Backend::Interval: {
            const Interval& iv = s.as_interval();
            json j;
            j["lo"] = iv.lo.get_str();
            j["hi"] = iv.hi.get_str();
            return j;
        }
    }
    throw usage_error("unknown backend");
}

json lambda_json(const Scalar& lambda) {
    json j;
    j["decimal"] = to_float(lambda);
    if (lambda.backend() != Backend::Float64) j["exact"] = to_string(lambda);
    return j;
}

std::string sequence_csv(const seq::RSequence& seq) {
    std::string out = "n,R_n_decimal,R_n_exact,residue_class\n";
    for (long n = 0; n <= seq.max_index(); ++n) {
        const Scalar& v = seq.values[static_cast<size_t>(n)];
        out += std::to_string(n);
        out += ',';
        out += format_double(to_float(v));
        out += ',';
        out += exact_cell(v);
        out += ',';
        out += std::to_string(n % 4);
        out += '\n';
    }
    return out;
}

json sequence_json(const seq::RSequence& seq) {
    json j;
    j["lambda"] = lambda_json(seq.lambda.value);
    j["backend"] = backend_label(seq.backend);
    j["n_max"] = seq.max_index();
    j["unproven_regime"] = seq.unproven_regime;
    json values = json::array();
    for (long n = 0; n <= seq.max_index(); ++n) {
        const Scalar& v = seq.values[static_cast<size_t>(n)];
        json row;
        row["n"] = n;
        row["decimal"] = to_float(v);
        if (seq.backend != Backend::Float64) row["exact"] = to_string(v);
        row["residue_class"] = n % 4;
        values.push_back(std::move(row));
    }
    j["values"] = std::move(values);
    return j;
}

std::string bounds_csv(const analysis::BoundsReport& report) {
    std::string out = "n,seq_index,inequality,lhs,rhs,margin\n";
    for (const auto& v : report.violations) {
        out += std::to_string(v.n);
        out += ',';
        out += std::to_string(v.seq_index);
        out += ',';
        out += v.inequality;
        out += ',';
        out += to_string(v.lhs);
        out += ',';
        out += to_string(v.rhs);
        out += ',';
        out += to_string(v.margin);
        out += '\n';
    }
    return out;
}

json bounds_json(const analysis::BoundsReport& report) {
    json j;
    j["kind"] = analysis::check_kind_label(report.kind);
    j["lambda"] = lambda_json(report.lambda);
    j["backend"] = backend_label(report.backend);
    j["checked_count"] = report.checked_count;
    json violations = json::array();
    for (const auto& v : report.violations) {
        json vj;
        vj["n"] = v.n;
        vj["seq_index"] = v.seq_index;
        vj["inequality"] = v.inequality;
        vj["lhs"] = scalar_json(v.lhs);
        vj["rhs"] = scalar_json(v.rhs);
        vj["margin"] = scalar_json(v.margin);
        violations.push_back(std::move(vj));
    }
    j["violations"] = std::move(violations);
    json notes = json::array();
    for (const auto& n : report.endpoint_notes) {
        json nj;
        nj["seq_index"] = n.seq_index;
        nj["inequality"] = n.inequality;
        nj["excluded_endpoint"] = n.excluded;
        notes.push_back(std::move(nj));
    }
    j["endpoint_notes"] = std::move(notes);
    j["indeterminate_count"] = report.indeterminate_count;
    j["regime_warning"] = report.regime_warning;
    j["warnings"] = report.warnings;
    return j;
}

std::string identity_csv(const seq::IdentityReport& report) {
    std::string out = "family,checked,max_residual,argmax_index,first_failing\n";
    for (const auto& f : report.families) {
        out += f.name;
        out += ',';
        out += std::to_string(f.checked);
        out += ',';
        out += to_string(f.max_residual);
        out += ',';
        out += std::to_string(f.argmax_index);
        out += ',';
        out += std::to_string(f.first_failing);
        out += '\n';
    }
    return out;
}

json identity_json(const seq::IdentityReport& report, const Scalar& lambda) {
    json j;
    j["lambda"] = lambda_json(lambda);
    j["backend"] = backend_label(report.backend);
    j["rel_tol"] = report.rel_tol;
    json families = json::array();
    for (const auto& f : report.families) {
        json fj;
        fj["family"] = f.name;
        fj["checked"] = f.checked;
        fj["max_residual"] = scalar_json(f.max_residual);
        fj["argmax_index"] = f.argmax_index;
        fj["first_failing"] = f.first_failing;
        families.push_back(std::move(fj));
    }
    j["families"] = std::move(families);
    j["all_passed"] = report.all_passed();
    return j;
}

std::string convergence_csv(const analysis::ConvergenceReport& report) {
    std::string out = "k,index,value,deviation\n";
    for (const auto& s : report.samples) {
        out += std::to_string(s.k);
        out += ',';
        out += std::to_string(s.seq_index);
        out += ',';
        out += to_string(s.value);
        out += ',';
        out += to_string(s.deviation);
        out += '\n';
    }
    return out;
}

json convergence_json(const analysis::ConvergenceReport& report, const Scalar& lambda) {
    json j;
    j["lambda"] = lambda_json(lambda);
    j["p"] = report.p;
    j["s"] = report.s;
    json samples = json::array();
    for (const auto& s : report.samples) {
        json sj;
        sj["k"] = s.k;
        sj["index"] = s.seq_index;
        sj["value"] = scalar_json(s.value);
        sj["deviation"] = scalar_json(s.deviation);
        samples.push_back(std::move(sj));
    }
    j["samples"] = std::move(samples);
    j["monotone_tail"] = report.monotone_tail;
    if (report.estimated_rate)
        j["estimated_rate"] = *report.estimated_rate;
    else
        j["estimated_rate"] = nullptr;
    return j;
}

std::string limit_batch_csv(const analysis::LimitBatchReport& report) {
    std::string out = "k,max_abs_deviation\n";
    for (const auto& row : report.uniformity) {
        out += std::to_string(row.k);
        out += ',';
        out += format_double(row.max_abs_deviation);
        out += '\n';
    }
    return out;
}

json limit_batch_json(const analysis::LimitBatchReport& report, const Scalar& lambda) {
    json j;
    j["lambda"] = lambda_json(lambda);
    json entries = json::array();
    for (const auto& entry : report.entries) {
        json ej = convergence_json(entry, lambda);
        ej.erase("lambda");
        entries.push_back(std::move(ej));
    }
    j["entries"] = std::move(entries);
    json uniformity = json::array();
    for (const auto& row : report.uniformity) {
        json rj;
        rj["k"] = row.k;
        rj["max_abs_deviation"] = row.max_abs_deviation;
        uniformity.push_back(std::move(rj));
    }
    j["uniformity"] = std::move(uniformity);
    return j;
}

std::string scan_csv(const analysis::ScanReport& report) {
    std::string out =
        "lambda_decimal,lambda_exact,checked,violations,c1_first_n,c2_first_n,c3_first_n,"
        "c4_first_n\n";
    for (const auto& row : report.rows) {
        Scalar lam = Scalar::of(row.lambda);
        out += format_double(to_float(lam));
        out += ',';
        out += row.lambda.get_str();
        out += ',';
        out += std::to_string(row.checked_count);
        out += ',';
        out += std::to_string(row.violation_count);
        for (long first : row.first_violation_n) {
            out += ',';
            if (first >= 0) out += std::to_string(first);
        }
        out += '\n';
    }
    return out;
}

json scan_json(const analysis::ScanReport& report) {
    json j;
    j["n_max"] = report.n_max;
    j["backend"] = backend_label(report.backend);
    json rows = json::array();
    for (const auto& row : report.rows) {
        json rj;
        rj["lambda"] = lambda_json(Scalar::of(row.lambda));
        rj["checked_count"] = row.checked_count;
        rj["violation_count"] = row.violation_count;
        json firsts;
        const char* ids[4] = {"c1", "c2", "c3", "c4"};
        for (int f = 0; f < 4; ++f) {
            long v = row.first_violation_n[static_cast<size_t>(f)];
            if (v >= 0)
                firsts[ids[f]] = v;
            else
                firsts[ids[f]] = nullptr;
        }
        rj["first_violation_n"] = std::move(firsts);
        rows.push_back(std::move(rj));
    }
    j["rows"] = std::move(rows);
    json regions = json::array();
    for (const auto& region : report.regions) {
        json rj;
        rj["inequality"] = region.inequality;
        rj["lambda_first"] = lambda_json(Scalar::of(region.lambda_first));
        rj["lambda_last"] = lambda_json(Scalar::of(region.lambda_last));
        rj["contiguous"] = region.contiguous;
        rj["count"] = region.count;
        regions.push_back(std::move(rj));
    }
    j["regions"] = std::move(regions);
    return j;
}

std::string matrix_csv(const ops::JacobiMatrix& m) {
    std::string out = "j,a_j,b_j\n";
    for (long j = 1; j <= m.size(); ++j) {
        out += std::to_string(j);
        out += ',';
        out += format_double(m.diag[static_cast<size_t>(j - 1)]);
        out += ',';
        if (j < m.size()) out += format_double(m.off[static_cast<size_t>(j - 1)]);
        out += '\n';
    }
    return out;
}

std::string spectrum_csv(const std::vector<double>& eigenvalues) {
    std::string out = "k,eigenvalue\n";
    for (size_t k = 0; k < eigenvalues.size(); ++k) {
        out += std::to_string(k + 1);
        out += ',';
        out += format_double(eigenvalues[k]);
        out += '\n';
    }
    return out;
}

json spectrum_json(const ops::SpectrumReport& report, const ops::JacobiMatrix& m) {
    json j;
    j["provenance"] = ops::provenance_label(m.provenance);
    j["N"] = m.size();
    j["boundary"] = m.boundary_note;
    j["eigenvalues"] = report.eigenvalues;
    json gaps = json::array();
    for (const auto& g : report.gaps) {
        json gj;
        gj["left"] = g.left;
        gj["right"] = g.right;
        gaps.push_back(std::move(gj));
    }
    j["gaps"] = std::move(gaps);
    json ids = json::array();
    for (const auto& s : report.ids) {
        json sj;
        sj["energy"] = s.energy;
        sj["fraction"] = s.fraction;
        ids.push_back(std::move(sj));
    }
    j["ids"] = std::move(ids);
    if (report.mode_frequencies) {
        json modes = json::array();
        for (const auto& mf : *report.mode_frequencies) {
            json mj;
            mj["E"] = mf.value;
            mj["unstable"] = mf.unstable;
            mj["eigenvalue"] = mf.raw_eigenvalue;
            modes.push_back(std::move(mj));
        }
        j["mode_frequencies"] = std::move(modes);
    }
    return j;
}

std::string chain_csv(const ops::ChainSpec& chain) {
    std::string out = "m,K\n";
    for (size_t j = 0; j < chain.masses.size(); ++j) {
        out += to_string(chain.masses[j]);
        out += ',';
        if (j < chain.springs.size()) out += to_string(chain.springs[j]);
        out += '\n';
    }
    return out;
}

ops::ChainSpec parse_chain_csv(std::istream& in) {
    expect_header(in, "m,K", "chain csv");
    std::vector<Scalar> masses, springs;
    std::string line;
    bool spring_missing = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (spring_missing) throw parse_error("chain csv: only the final row may omit K");
        auto fields = split_csv_line(line);
        if (fields.empty() || fields.size() > 2) throw parse_error("chain csv: bad row '" + line + "'");
        masses.push_back(parse_decimal(fields[0]));
        if (fields.size() == 2 && !fields[1].empty())
            springs.push_back(parse_decimal(fields[1]));
        else
            spring_missing = true;
    }
    if (!spring_missing && !masses.empty())
        throw parse_error("chain csv: the final row must omit K (one spring per mass pair)");
    return ops::ChainSpec::make(std::move(masses), std::move(springs));
}

std::vector<SequenceRow> parse_sequence_csv(std::istream& in) {
    expect_header(in, "n,R_n_decimal,R_n_exact,residue_class", "sequence csv");
    std::vector<SequenceRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 4) throw parse_error("sequence csv: bad row '" + line + "'");
        SequenceRow row;
        row.n = parse_long(fields[0], "sequence csv");
        row.decimal = parse_double(fields[1], "sequence csv");
        row.exact = fields[2];
        row.residue_class = static_cast<int>(parse_long(fields[3], "sequence csv"));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<double> parse_spectrum_csv(std::istream& in) {
    expect_header(in, "k,eigenvalue", "spectrum csv");
    std::vector<double> eigs;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 2) throw parse_error("spectrum csv: bad row '" + line + "'");
        eigs.push_back(parse_double(fields[1], "spectrum csv"));
    }
    return eigs;
}

ops::JacobiMatrix parse_matrix_csv(std::istream& in) {
    expect_header(in, "j,a_j,b_j", "matrix csv");
    ops::JacobiMatrix m;
    std::string line;
    std::vector<std::string> off_cells;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 3) throw parse_error("matrix csv: bad row '" + line + "'");
        m.diag.push_back(parse_double(fields[1], "matrix csv"));
        off_cells.push_back(fields[2]);
    }
    for (size_t i = 0; i + 1 < off_cells.size(); ++i)
        m.off.push_back(parse_double(off_cells[i], "matrix csv"));
    if (!off_cells.empty() && !off_cells.back().empty())
        throw parse_error("matrix csv: the final row must have an empty b_j");
    return m;
}

} // namespace bell::io
