// SPDX-License-Identifier: Apache-2.0
#include "palinverse/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <optional>

#include <CLI11.hpp>

#include "palinverse/analysis.hpp"
#include "palinverse/error.hpp"
#include "palinverse/forward.hpp"
#include "palinverse/iep.hpp"
#include "palinverse/io.hpp"
#include "palinverse/mup.hpp"
#include "palinverse/paramspace.hpp"

namespace palinverse::cli {

namespace {

using io::Json;

struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
    const char* env = std::getenv("PALINVERSE_SEED");
    if (!env || !*env) return 0;
    std::uint64_t v = 0;
    const std::string_view s(env);
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size())
        throw Usage("PALINVERSE_SEED must be a non-negative integer");
    return v;
}

SymmetryClass parse_class(const std::string& code) {
    if (code == "tp" || code == "ta" || code == "hp" || code == "ha") return SymmetryClass::from_code(code);
    throw Usage("--class must be one of tp, ta, hp, ha");
}

Matrix diag(const std::vector<Complex>& v) {
    Matrix t = Matrix::Zero(Index(v.size()), Index(v.size()));
    for (size_t i = 0; i < v.size(); ++i) t(Index(i), Index(i)) = v[i];
    return t;
}

double symmetry_defect_2(const PalindromicSystem& sys) {
    return norm2(sys.a0() - double(sys.epsilon()) * star(sys.a0(), sys.star()));
}

// Report fields are printed as "key: value", one per line.
void print_report(std::ostream& out, const Json& report) {
    for (const auto& [key, value] : report.items()) {
        out << key << ": ";
        if (value.is_number_float())
            out << io::format_double(value.get<double>());
        else if (value.is_string())
            out << value.get<std::string>();
        else
            out << value.dump();
        out << "\n";
    }
}

struct Output {
    std::string out_path;
    bool report = false;
    bool json = false;
};

// --json: one document on stdout. --report: text report. Otherwise the payload
// goes to --out, or to stdout when --out is absent.
void finish(std::ostream& out, const Output& o, const Json& payload, const Json& report, const char* payload_key) {
    if (!o.out_path.empty()) io::write_file(o.out_path, payload);
    if (o.json) {
        Json doc{{"report", report}};
        if (o.out_path.empty()) doc[payload_key] = payload;
        out << io::to_text(doc);
        return;
    }
    if (o.report)
        print_report(out, report);
    else if (o.out_path.empty())
        out << io::to_text(payload);
}

Json residual_fields(const PalindromicSystem& sys, const Matrix& x, const Matrix& t, const char* prefix) {
    Json j;
    j[std::string(prefix) + "_residual_abs"] = norm2(pair_residual_matrix(sys, x, t));
    j[std::string(prefix) + "_residual_rel"] = pair_residual(sys, x, t);
    return j;
}

void add_output_flags(CLI::App* cmd, Output& o) {
    cmd->add_option("--out", o.out_path, "Write the resulting file here");
    cmd->add_flag("--report", o.report, "Print residual report lines");
    cmd->add_flag("--json", o.json, "Print one machine-readable JSON document");
}

int cmd_solve(std::ostream& out, const std::string& cls_code, const std::string& pairs_path,
              const std::string& remaining_path, std::uint64_t seed, int attempts, const Output& o) {
    io::PairFile pf = io::pair_from_json(io::read_file(pairs_path));
    std::optional<SymmetryClass> cls = pf.cls;
    if (!cls_code.empty()) cls = parse_class(cls_code);
    if (!cls) throw Usage("--class is required when the pair file has no class");
    if (!pf.t) throw Error(ErrorCode::Parse, "pair file needs field 'T'");
    IepProblem prob{*cls, pf.x.rows(), pf.x, *pf.t, {}};
    prob.options.seed = seed;
    prob.options.attempts = attempts;
    if (!remaining_path.empty()) prob.options.remaining = io::eigenvalues_from_json(io::read_file(remaining_path));
    IepResult r = solve_iep_partial(prob);

    Json report{{"class", cls->name()}, {"n", prob.n}, {"k", prob.t1.rows()}, {"attempts", r.attempts}};
    report.update(residual_fields(r.system, prob.x1, prob.t1, "pair"));
    report["symmetry_defect"] = symmetry_defect_2(r.system);
    report["cond_Y"] = r.cond_y;
    if (r.system.near_singular_leading()) report["warning"] = "A1 is nearly singular";
    finish(out, o, io::system_to_json(r.system), report, "system");
    return 0;
}

int cmd_update(std::ostream& out, const std::string& system_path, const std::string& replace,
               const std::string& with, const std::string& vectors_path, std::uint64_t seed, int attempts,
               const Output& o) {
    PalindromicSystem sys = io::system_from_json(io::read_file(system_path));
    EigenPairSet e = eig_full(sys);
    PairSelection sel = select_pairs(e, io::parse_complex_list(replace));
    MupProblem prob{sys, sel.x1, sel.t1, diag(io::parse_complex_list(with)), {}, seed, attempts};
    if (prob.t1_new.rows() != prob.t1.rows())
        throw Error(ErrorCode::DimensionMismatch, "--with must list as many values as --replace selects");
    if (!vectors_path.empty()) prob.x1_new = io::pair_from_json(io::read_file(vectors_path)).x;
    MupResult r = prob.x1_new ? update_model_prescribed(prob) : update_model(prob);

    Json report{{"class", sys.cls().name()}, {"n", sys.n()}, {"k", prob.t1.rows()}, {"rank", r.rank},
                {"attempts", r.attempts}};
    report["symmetry_defect"] = symmetry_defect_2(r.system);
    report.update(residual_fields(r.system, r.x1_new, prob.t1_new, "new_pair"));
    if (sel.x2.cols() > 0) report.update(residual_fields(r.system, sel.x2, sel.t2, "kept_pair"));
    report["smw_residual"] = r.smw_residual;
    report["constraint_residual"] = r.constraint_residual;
    finish(out, o, io::system_to_json(r.system), report, "system");
    return 0;
}

Json eig_json(const EigenPairSet& e) {
    Json pairs = Json::array(), unmatched = Json::array(), values = Json::array(), res = Json::array(),
         cond = Json::array();
    for (auto [i, j] : e.pairs) pairs.push_back(Json::array({i, j}));
    for (Index i : e.unmatched) unmatched.push_back(i);
    for (size_t i = 0; i < e.values.size(); ++i) {
        values.push_back(io::complex_to_json(e.values[i]));
        res.push_back(e.residuals[i]);
        cond.push_back(e.conditions[i]);
    }
    return Json{{"format", io::kFormat}, {"class", io::class_to_json(e.cls)}, {"eigenvalues", values},
                {"pairs", pairs}, {"unmatched", unmatched}, {"residuals", res}, {"conditions", cond},
                {"vectors", io::matrix_to_json(e.vectors)}};
}

int cmd_eig(std::ostream& out, const std::string& system_path, double pairing_tol, bool json) {
    PalindromicSystem sys = io::system_from_json(io::read_file(system_path));
    EigenPairSet e = eig_full(sys, pairing_tol);
    if (json) {
        out << io::to_text(eig_json(e));
        return 0;
    }
    auto line = [&](Index i) {
        out << "  " << io::format_complex(e.values[size_t(i)]) << "  residual "
            << io::format_double(e.residuals[size_t(i)]) << "  cond " << io::format_double(e.conditions[size_t(i)])
            << "\n";
    };
    for (auto [i, j] : e.pairs) {
        out << (i == j ? "self-paired\n" : "pair\n");
        line(i);
        if (j != i) line(j);
    }
    for (Index i : e.unmatched) {
        out << "unmatched\n";
        line(i);
    }
    return 0;
}

int cmd_verify(std::ostream& out, const std::string& system_path, const std::string& pairs_path, double tol,
               bool json) {
    PalindromicSystem sys = io::system_from_json(io::read_file(system_path));
    EigenPairSet e = eig_full(sys);
    Json report{{"class", sys.cls().name()}, {"n", sys.n()}};
    report["symmetry_defect"] = symmetry_defect_2(sys);
    const RealVector sv = singular_values(sys.a1());
    report["cond_A1"] = sv(0) / sv(sv.size() - 1);
    report["pairing_complete"] = e.complete();
    report["max_eigen_residual"] = *std::max_element(e.residuals.begin(), e.residuals.end());
    double worst = 0.0;
    if (!pairs_path.empty()) {
        io::PairFile pf = io::pair_from_json(io::read_file(pairs_path));
        if (!pf.t) throw Error(ErrorCode::Parse, "pair file needs field 'T'");
        report.update(residual_fields(sys, pf.x, *pf.t, "pair"));
        worst = report["pair_residual_rel"].get<double>();
    }
    if (json)
        out << io::to_text(report);
    else
        print_report(out, report);
    if (!e.complete()) throw Error(ErrorCode::PairingFailure, "eigenvalues are not closed under the pairing");
    if (worst > tol)
        throw Error(ErrorCode::ResidualTooLarge, "pair residual " + io::format_double(worst) + " exceeds " +
                                                     io::format_double(tol));
    return 0;
}

int cmd_analyze(std::ostream& out, const std::string& cls_code, const std::string& pairs_path, int draws,
                std::uint64_t seed, bool json) {
    io::PairFile pf = io::pair_from_json(io::read_file(pairs_path));
    std::optional<SymmetryClass> cls = pf.cls;
    if (!cls_code.empty()) cls = parse_class(cls_code);
    if (!cls) throw Usage("--class is required when the pair file has no class");
    if (!pf.t) throw Error(ErrorCode::Parse, "pair file needs field 'T'");
    if (pf.x.cols() != 2 * pf.x.rows())
        throw Error(ErrorCode::DimensionMismatch, "analyze needs a full pair with X of size n x 2n");
    SBasis basis = s_basis_constrained(pf.x, *pf.t, *cls);
    Json report{{"class", cls->name()}, {"n", pf.x.rows()}, {"dimension_real", basis.dim()}};
    if (basis.dim() > 0 && !basis.structurally_singular) {
        std::mt19937_64 rng(seed);
        const Matrix s0 = sample_nonsingular(basis, rng);
        ZetaPartition best;
        for (int d = 0; d < draws; ++d) {
            ZetaPartition z = zeta_partition(s0, sample_nonsingular(basis, rng), *cls);
            if (z.cardinality() > best.cardinality()) best = z;
        }
        Json parts = Json::array();
        for (Index p : best.parts) parts.push_back(p);
        report["zeta_cardinality_observed"] = best.cardinality();
        report["zeta_parts"] = parts;
    }
    if (json)
        out << io::to_text(report);
    else
        print_report(out, report);
    return 0;
}

void fail(std::ostream& err, const std::string& kind, const std::string& detail) {
    err << Json{{"error", kind}, {"detail", detail}}.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Structured inverse eigenvalue problems and model updating for palindromic quadratics",
                 "palinverse"};
    app.require_subcommand(1);

    std::string cls, pairs, remaining, system, replace, with, vectors;
    std::optional<std::uint64_t> seed;
    int attempts = 20, draws = 50;
    double pairing_tol = kPairingTol, verify_tol = 1e-8;
    Output o;

    auto* solve = app.add_subcommand("solve", "Build a system from prescribed eigenpairs");
    solve->add_option("--class", cls, "tp, ta, hp or ha");
    solve->add_option("--pairs", pairs, "Pair file with X and T")->required();
    solve->add_option("--remaining", remaining, "Eigenvalue file for the unprescribed spectrum");
    solve->add_option("--seed", seed);
    solve->add_option("--attempts", attempts);
    add_output_flags(solve, o);

    auto* update = app.add_subcommand("update", "Replace eigenvalues without spillover");
    update->add_option("--system", system)->required();
    update->add_option("--replace", replace, "Comma separated a+bi values to remove")->required();
    update->add_option("--with", with, "Comma separated a+bi replacement values")->required();
    update->add_option("--vectors", vectors, "Pair file whose X prescribes the new eigenvectors");
    update->add_option("--seed", seed);
    update->add_option("--attempts", attempts);
    add_output_flags(update, o);

    auto* eig = app.add_subcommand("eig", "Eigenvalues with pairing");
    eig->add_option("--system", system)->required();
    eig->add_option("--pairing-tol", pairing_tol);
    eig->add_flag("--json", o.json);

    auto* verify = app.add_subcommand("verify", "Check a system file and optionally a pair against it");
    verify->add_option("--system", system)->required();
    verify->add_option("--pairs", pairs);
    verify->add_option("--tol", verify_tol, "Relative pair residual bound");
    verify->add_flag("--json", o.json);

    auto* analyze = app.add_subcommand("analyze", "Parameter space dimension and observed zeta partition");
    analyze->add_option("--class", cls);
    analyze->add_option("--pairs", pairs)->required();
    analyze->add_option("--draws", draws);
    analyze->add_option("--seed", seed);
    analyze->add_flag("--json", o.json);

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        try {
            app.parse(argv);
        } catch (const CLI::CallForHelp&) {
            out << app.help();
            return 0;
        } catch (const CLI::ParseError& e) {
            throw Usage(e.what());
        }
        const std::uint64_t s = seed ? *seed : default_seed();
        if (*solve) return cmd_solve(out, cls, pairs, remaining, s, attempts, o);
        if (*update) return cmd_update(out, system, replace, with, vectors, s, attempts, o);
        if (*eig) return cmd_eig(out, system, pairing_tol, o.json);
        if (*verify) return cmd_verify(out, system, pairs, verify_tol, o.json);
        if (*analyze) return cmd_analyze(out, cls, pairs, draws, s, o.json);
        throw Usage("no subcommand");
    } catch (const Usage& e) {
        fail(err, "usage", e.what());
        return 2;
    } catch (const Error& e) {
        fail(err, error_name(e.code()), e.detail());
        return 2;
    } catch (const std::exception& e) {
        fail(err, "internal", e.what());
        return 1;
    }
}

}  // namespace palinverse::cli
