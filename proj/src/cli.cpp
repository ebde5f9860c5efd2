#include "bell/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>

#include "bell/analysis.hpp"
#include "bell/io.hpp"
#include "bell/operators.hpp"
#include "bell/scalar.hpp"
#include "bell/sequence.hpp"

namespace bell::cli {

namespace {

constexpr const char* kExactCapEnv = "BELLISSARD_EXACT_CAP";

struct CommonOpts {
    std::string lambda_text;
    long n_max = 1024;
    std::string backend_name = "float";
    std::string format = "csv";
    std::string out_path;
    bool unproven = false;
    int interval_bits = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_lambda = true) {
    if (with_lambda)
        cmd->add_option("--lambda", o.lambda_text, "coupling lambda as a decimal string")
            ->required();
    cmd->add_option("-N,--n-max", o.n_max, "largest sequence index to compute")
        ->capture_default_str();
    cmd->add_option("--backend", o.backend_name, "arithmetic backend: float, exact, interval")
        ->capture_default_str();
    cmd->add_option("--format", o.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--out", o.out_path, "write the report to this path instead of stdout");
    cmd->add_flag("--unproven-regime", o.unproven,
                  "allow lambda <= 2 (recursion may degenerate; reports carry a warning)");
    cmd->add_option("--interval-bits", o.interval_bits,
                    "interval backend: outward-round endpoints to 2^-bits per step (0 = exact)")
        ->capture_default_str();
}

seq::GenerateOptions gen_options(const CommonOpts& o) {
    seq::GenerateOptions g;
    g.allow_unproven_regime = o.unproven;
    g.interval_round_bits = o.interval_bits;
    if (const char* cap = std::getenv(kExactCapEnv)) {
        try {
            size_t pos = 0;
            long v = std::stol(cap, &pos);
            if (pos != std::string(cap).size() || v < 1) throw std::invalid_argument("");
            g.exact_max_n = v;
        } catch (...) {
            throw usage_error(std::string(kExactCapEnv) + " must be a positive integer, got '" +
                              cap + "'");
        }
    }
    return g;
}

seq::RSequence make_sequence(const CommonOpts& o, long n_max) {
    Scalar lam = parse_decimal(o.lambda_text).to_backend(parse_backend(o.backend_name));
    return seq::generate(seq::LambdaParam::make(lam), n_max, gen_options(o));
}

void emit(const CommonOpts& o, const std::string& payload, std::ostream& out) {
    if (o.out_path.empty()) {
        out << payload;
        return;
    }
    std::ofstream f(o.out_path, std::ios::binary);
    if (!f) throw usage_error("cannot open output path '" + o.out_path + "'");
    f << payload;
}

std::string render_json(const io::json& j) { return j.dump(2) + "\n"; }

int emit_bounds(const CommonOpts& o, const analysis::BoundsReport& rep, std::ostream& out) {
    emit(o, o.format == "json" ? render_json(io::bounds_json(rep)) : io::bounds_csv(rep), out);
    return rep.passed() ? 0 : 2;
}

int largest_fitting_k(long p, long s, long n_max) {
    int k = 0;
    long idx = p;
    while (idx * 2 + s <= n_max) {
        idx *= 2;
        ++k;
    }
    return k;
}

} // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"coefficient sequences and spectra of Jacobi operator truncations"};
    app.name("bellissard");
    app.require_subcommand(1);

    std::function<int()> action;

    // ---- gen ----------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("gen", "generate R_0..R_N and emit the table");
        auto o = std::make_shared<CommonOpts>();
        add_common(cmd, *o);
        cmd->callback([&action, o, &out] {
            action = [o, &out]() -> int {
                seq::RSequence s = make_sequence(*o, o->n_max);
                emit(*o,
                     o->format == "json" ? render_json(io::sequence_json(s)) : io::sequence_csv(s),
                     out);
                return 0;
            };
        });
    }

    // ---- verify (theorem bounds) ---------------------------------------
    {
        auto* cmd = app.add_subcommand("verify", "check the residue-class bounds (proved regime)");
        auto o = std::make_shared<CommonOpts>();
        auto tol = std::make_shared<double>(1e-9);
        add_common(cmd, *o);
        cmd->add_option("--tol", *tol, "float-mode margin tolerance")->capture_default_str();
        cmd->callback([&action, o, tol, &out] {
            action = [o, tol, &out]() -> int {
                seq::RSequence s = make_sequence(*o, o->n_max);
                return emit_bounds(*o, analysis::check_theorem(s, {*tol}), out);
            };
        });
    }

    // ---- conjecture ------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("conjecture",
                                       "check the conjectured per-class bounds R_0..R_7");
        auto o = std::make_shared<CommonOpts>();
        auto tol = std::make_shared<double>(1e-9);
        add_common(cmd, *o);
        cmd->add_option("--tol", *tol, "float-mode margin tolerance")->capture_default_str();
        cmd->callback([&action, o, tol, &out] {
            action = [o, tol, &out]() -> int {
                seq::RSequence s = make_sequence(*o, o->n_max);
                return emit_bounds(*o, analysis::check_conjecture(s, {*tol}), out);
            };
        });
    }

    // ---- splitting -------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("splitting", "check the finer splitting at level r");
        auto o = std::make_shared<CommonOpts>();
        auto tol = std::make_shared<double>(1e-9);
        auto level = std::make_shared<int>(2);
        auto max_k = std::make_shared<long>(-1);
        add_common(cmd, *o);
        cmd->add_option("--tol", *tol, "float-mode margin tolerance")->capture_default_str();
        cmd->add_option("-r,--level", *level, "splitting level r")->capture_default_str();
        cmd->add_option("--max-k", *max_k, "largest block multiple k (default: all that fit)");
        cmd->callback([&action, o, tol, level, max_k, &out] {
            action = [o, tol, level, max_k, &out]() -> int {
                seq::RSequence s = make_sequence(*o, o->n_max);
                long block = 1L << *level;
                long k = *max_k >= 0 ? *max_k : std::max(0L, (o->n_max - (block - 1)) / block);
                return emit_bounds(*o, analysis::check_splitting(s, *level, k, {*tol}), out);
            };
        });
    }

    // ---- prop1 -----------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("prop1", "check 0 < R_{2n} < R_n and R_{2n} <= 1");
        auto o = std::make_shared<CommonOpts>();
        auto tol = std::make_shared<double>(1e-9);
        add_common(cmd, *o);
        cmd->add_option("--tol", *tol, "float-mode margin tolerance")->capture_default_str();
        cmd->callback([&action, o, tol, &out] {
            action = [o, tol, &out]() -> int {
                seq::RSequence s = make_sequence(*o, o->n_max);
                return emit_bounds(*o, analysis::check_prop1(s, {*tol}), out);
            };
        });
    }

    // ---- identities ------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("identities",
                                       "verify the defining recursions and derived identities");
        auto o = std::make_shared<CommonOpts>();
        auto tol = std::make_shared<double>(1e-12);
        add_common(cmd, *o);
        cmd->add_option("--tol", *tol, "relative residual tolerance")->capture_default_str();
        cmd->callback([&action, o, tol, &out] {
            action = [o, tol, &out]() -> int {
                seq::RSequence s = make_sequence(*o, o->n_max);
                seq::IdentityReport rep = seq::verify_recurrences(s, *tol);
                emit(*o,
                     o->format == "json" ? render_json(io::identity_json(rep, s.lambda.value))
                                         : io::identity_csv(rep),
                     out);
                return rep.all_passed() ? 0 : 2;
            };
        });
    }

    // ---- scan ------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("scan", "run the conjecture check over a lambda grid");
        auto o = std::make_shared<CommonOpts>();
        auto lo = std::make_shared<std::string>();
        auto hi = std::make_shared<std::string>();
        auto step = std::make_shared<std::string>("0.05");
        auto max_grid = std::make_shared<long>(4096);
        auto tol = std::make_shared<double>(1e-9);
        add_common(cmd, *o, /*with_lambda=*/false);
        cmd->add_option("--lambda-min", *lo, "grid start (decimal, > 2)")->required();
        cmd->add_option("--lambda-max", *hi, "grid end (decimal)")->required();
        cmd->add_option("--step", *step, "grid step (decimal)")->capture_default_str();
        cmd->add_option("--max-grid", *max_grid, "grid budget")->capture_default_str();
        cmd->add_option("--tol", *tol, "float-mode margin tolerance")->capture_default_str();
        cmd->callback([&action, o, lo, hi, step, max_grid, tol, &out] {
            action = [o, lo, hi, step, max_grid, tol, &out]() -> int {
                analysis::ScanOptions so;
                so.backend = parse_backend(o->backend_name);
                so.max_grid_points = *max_grid;
                so.gen = gen_options(*o);
                so.check = {*tol};
                analysis::ScanReport rep = analysis::scan_conjecture(
                    parse_decimal(*lo).as_rational(), parse_decimal(*hi).as_rational(),
                    parse_decimal(*step).as_rational(), o->n_max, so);
                emit(*o, o->format == "json" ? render_json(io::scan_json(rep)) : io::scan_csv(rep),
                     out);
                bool any = std::any_of(rep.rows.begin(), rep.rows.end(),
                                       [](const analysis::ScanRow& r) { return r.violation_count > 0; });
                return any ? 2 : 0;
            };
        });
    }

    // ---- decay -----------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("decay", "sample R_{p*2^k} toward 0 (p odd)");
        auto o = std::make_shared<CommonOpts>();
        auto p = std::make_shared<long>(1);
        auto k_max = std::make_shared<int>(-1);
        add_common(cmd, *o);
        cmd->add_option("--p", *p, "odd base index")->capture_default_str();
        cmd->add_option("--k-max", *k_max, "largest doubling exponent (default: all that fit)");
        cmd->callback([&action, o, p, k_max, &out] {
            action = [o, p, k_max, &out]() -> int {
                seq::RSequence s = make_sequence(*o, o->n_max);
                int k = *k_max >= 0 ? *k_max : largest_fitting_k(*p, 0, o->n_max);
                analysis::ConvergenceReport rep = analysis::proposition_decay(s, *p, k);
                emit(*o,
                     o->format == "json" ? render_json(io::convergence_json(rep, s.lambda.value))
                                         : io::convergence_csv(rep),
                     out);
                return 0;
            };
        });
    }

    // ---- limits ----------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("limits", "sample |R_{p*2^k+s} - R_s| (single pair or batch)");
        auto o = std::make_shared<CommonOpts>();
        auto p = std::make_shared<long>(1);
        auto s_off = std::make_shared<long>(1);
        auto p_max = std::make_shared<long>(0);
        auto s_max = std::make_shared<long>(0);
        auto k_max = std::make_shared<int>(-1);
        add_common(cmd, *o);
        cmd->add_option("--p", *p, "doubling base")->capture_default_str();
        cmd->add_option("--s", *s_off, "offset s")->capture_default_str();
        cmd->add_option("--p-max", *p_max, "batch mode: all p in 1..p-max");
        cmd->add_option("--s-max", *s_max, "batch mode: all s in 1..s-max");
        cmd->add_option("--k-max", *k_max, "largest doubling exponent (default: all that fit)");
        cmd->callback([&action, o, p, s_off, p_max, s_max, k_max, &out] {
            action = [o, p, s_off, p_max, s_max, k_max, &out]() -> int {
                seq::RSequence s = make_sequence(*o, o->n_max);
                const bool batch = *p_max > 0 || *s_max > 0;
                if (batch) {
                    long pm = *p_max > 0 ? *p_max : 4;
                    long sm = *s_max > 0 ? *s_max : 4;
                    int k = *k_max >= 0 ? *k_max : largest_fitting_k(pm, sm, o->n_max);
                    analysis::LimitBatchReport rep =
                        analysis::proposition_limit_batch(s, pm, sm, k);
                    emit(*o,
                         o->format == "json"
                             ? render_json(io::limit_batch_json(rep, s.lambda.value))
                             : io::limit_batch_csv(rep),
                         out);
                } else {
                    int k = *k_max >= 0 ? *k_max : largest_fitting_k(*p, *s_off, o->n_max);
                    analysis::ConvergenceReport rep =
                        analysis::proposition_limit(s, *p, *s_off, k);
                    emit(*o,
                         o->format == "json"
                             ? render_json(io::convergence_json(rep, s.lambda.value))
                             : io::convergence_csv(rep),
                         out);
                }
                return 0;
            };
        });
    }

    // ---- spectrum (bellissard operator) ------------------------------------
    {
        auto* cmd = app.add_subcommand("spectrum",
                                       "eigenvalues, gaps and IDS of the truncated operator");
        auto o = std::make_shared<CommonOpts>();
        auto tol = std::make_shared<double>(1e-12);
        auto gap = std::make_shared<double>(0.01);
        auto ids_res = std::make_shared<int>(101);
        auto matrix_out = std::make_shared<std::string>();
        add_common(cmd, *o);
        cmd->add_option("--tol", *tol, "absolute eigenvalue tolerance")->capture_default_str();
        cmd->add_option("--gap-threshold", *gap, "report gaps wider than this")
            ->capture_default_str();
        cmd->add_option("--ids-resolution", *ids_res, "IDS grid points")->capture_default_str();
        cmd->add_option("--matrix-out", *matrix_out, "also write the matrix CSV to this path");
        cmd->callback([&action, o, tol, gap, ids_res, matrix_out, &out] {
            action = [o, tol, gap, ids_res, matrix_out, &out]() -> int {
                seq::RSequence s = make_sequence(*o, o->n_max);
                ops::JacobiMatrix m = ops::build_bellissard(s, o->n_max);
                if (!matrix_out->empty()) {
                    std::ofstream f(*matrix_out, std::ios::binary);
                    if (!f) throw usage_error("cannot open '" + *matrix_out + "'");
                    f << io::matrix_csv(m);
                }
                std::vector<double> eigs = ops::eigenvalues(m, *tol);
                ops::SpectrumReport rep = ops::spectrum_report(eigs, *gap, *ids_res);
                emit(*o,
                     o->format == "json" ? render_json(io::spectrum_json(rep, m))
                                         : io::spectrum_csv(eigs),
                     out);
                return 0;
            };
        });
    }

    // ---- dyson -------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("dyson", "mass-spring chain: lambda map, spectrum, modes");
        auto o = std::make_shared<CommonOpts>();
        auto chain_path = std::make_shared<std::string>();
        auto kind = std::make_shared<std::string>("T2");
        auto modes = std::make_shared<bool>(false);
        auto lambdas_only = std::make_shared<bool>(false);
        auto tol = std::make_shared<double>(1e-12);
        auto gap = std::make_shared<double>(0.01);
        auto ids_res = std::make_shared<int>(101);
        auto matrix_out = std::make_shared<std::string>();
        add_common(cmd, *o, /*with_lambda=*/false);
        cmd->add_option("--chain", *chain_path, "chain CSV (columns m,K; final row omits K)")
            ->required();
        cmd->add_option("--kind", *kind, "operator type: T1 (whole line) or T2 (half line)")
            ->check(CLI::IsMember({"T1", "T2"}))
            ->capture_default_str();
        cmd->add_flag("--modes", *modes, "include mode frequencies E (mu = -E^2)");
        cmd->add_flag("--lambdas-only", *lambdas_only, "emit the mapped lambda sequence and stop");
        cmd->add_option("--tol", *tol, "absolute eigenvalue tolerance")->capture_default_str();
        cmd->add_option("--gap-threshold", *gap, "report gaps wider than this")
            ->capture_default_str();
        cmd->add_option("--ids-resolution", *ids_res, "IDS grid points")->capture_default_str();
        cmd->add_option("--matrix-out", *matrix_out, "also write the matrix CSV to this path");
        // -N retains its meaning but 0 = largest truncation the chain supports.
        o->n_max = 0;
        cmd->callback([&action, o, chain_path, kind, modes, lambdas_only, tol, gap, ids_res,
                       matrix_out, &out] {
            action = [o, chain_path, kind, modes, lambdas_only, tol, gap, ids_res, matrix_out,
                      &out]() -> int {
                std::ifstream f(*chain_path);
                if (!f) throw usage_error("cannot read chain file '" + *chain_path + "'");
                ops::ChainSpec chain = io::parse_chain_csv(f);
                if (*lambdas_only) {
                    std::vector<Scalar> lams = ops::dyson_map(chain);
                    if (o->format == "json") {
                        io::json j;
                        io::json arr = io::json::array();
                        for (const auto& l : lams) arr.push_back(io::scalar_json(l));
                        j["lambdas"] = std::move(arr);
                        emit(*o, render_json(j), out);
                    } else {
                        std::string csv = "i,lambda_decimal,lambda_exact\n";
                        for (size_t i = 0; i < lams.size(); ++i) {
                            csv += std::to_string(i + 1);
                            csv += ',';
                            csv += format_double(to_float(lams[i]));
                            csv += ',';
                            csv += lams[i].backend() == Backend::Float64 ? "" : to_string(lams[i]);
                            csv += '\n';
                        }
                        emit(*o, csv, out);
                    }
                    return 0;
                }
                ops::OperatorKind k =
                    *kind == "T1" ? ops::OperatorKind::T1 : ops::OperatorKind::T2;
                ops::JacobiMatrix m = ops::build_dyson(chain, o->n_max, k);
                if (!matrix_out->empty()) {
                    std::ofstream mf(*matrix_out, std::ios::binary);
                    if (!mf) throw usage_error("cannot open '" + *matrix_out + "'");
                    mf << io::matrix_csv(m);
                }
                std::vector<double> eigs = ops::eigenvalues(m, *tol);
                ops::SpectrumReport rep = ops::spectrum_report(eigs, *gap, *ids_res);
                if (*modes) rep.mode_frequencies = ops::mode_frequencies(m, *tol);
                emit(*o,
                     o->format == "json" ? render_json(io::spectrum_json(rep, m))
                                         : io::spectrum_csv(eigs),
                     out);
                return 0;
            };
        });
    }

    // ---- mathieu -----------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("mathieu", "almost Mathieu truncation spectrum");
        auto o = std::make_shared<CommonOpts>();
        auto coupling = std::make_shared<double>(0.0);
        auto alpha = std::make_shared<double>(0.61803398874989484820);
        auto theta = std::make_shared<double>(0.0);
        auto tol = std::make_shared<double>(1e-12);
        auto gap = std::make_shared<double>(0.01);
        auto ids_res = std::make_shared<int>(101);
        auto matrix_out = std::make_shared<std::string>();
        add_common(cmd, *o, /*with_lambda=*/false);
        cmd->add_option("--coupling", *coupling, "diagonal coupling strength")->required();
        cmd->add_option("--alpha", *alpha, "frequency alpha")->capture_default_str();
        cmd->add_option("--theta", *theta, "phase theta")->capture_default_str();
        cmd->add_option("--tol", *tol, "absolute eigenvalue tolerance")->capture_default_str();
        cmd->add_option("--gap-threshold", *gap, "report gaps wider than this")
            ->capture_default_str();
        cmd->add_option("--ids-resolution", *ids_res, "IDS grid points")->capture_default_str();
        cmd->add_option("--matrix-out", *matrix_out, "also write the matrix CSV to this path");
        cmd->callback([&action, o, coupling, alpha, theta, tol, gap, ids_res, matrix_out, &out] {
            action = [o, coupling, alpha, theta, tol, gap, ids_res, matrix_out, &out]() -> int {
                ops::JacobiMatrix m =
                    ops::build_almost_mathieu(*coupling, *alpha, *theta, o->n_max);
                if (!matrix_out->empty()) {
                    std::ofstream f(*matrix_out, std::ios::binary);
                    if (!f) throw usage_error("cannot open '" + *matrix_out + "'");
                    f << io::matrix_csv(m);
                }
                std::vector<double> eigs = ops::eigenvalues(m, *tol);
                ops::SpectrumReport rep = ops::spectrum_report(eigs, *gap, *ids_res);
                emit(*o,
                     o->format == "json" ? render_json(io::spectrum_json(rep, m))
                                         : io::spectrum_csv(eigs),
                     out);
                return 0;
            };
        });
    }

    try {
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        return action ? action() : 0;
    } catch (const bell::parse_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const bell::usage_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const bell::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace bell::cli
