#pragma once

// Command-line front end. Exit status: 0 all checks pass, 1 a bound check
// failed, 2 input or usage error.

#include "torusflow/io.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace torusflow::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitBoundFailure = 1;
inline constexpr int kExitUsage = 2;

struct CommandConfig {
    std::string subcommand;
    std::string input;
    std::string output;
    std::string summary;
    bool check = false;
    bool lemma = false;
    bool json = false;
    double tolerance = -1.0;  // < 0: module default
    std::size_t grid = 0;     // 0: smallest unaliased grid
    std::vector<std::string> generators;
    int dim = 0;
    std::int64_t lambda = 0;
    std::string rule = "equal";
    std::uint64_t seed = 0;
    std::int64_t window_l = 5;
    std::int64_t window_s = 5;
    std::vector<double> qs;
    std::vector<double> deltas{0.5, 0.25, 0.1};
    std::vector<double> radii{2.0, 4.0, 8.0};
    double rhs_scale = 1.0;  // test hook: corrupts every report's rhs
    unsigned threads = 1;
};

namespace detail {

inline void emit(std::ostream& out, const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        out << text;
    } else {
        io::write_file_atomic(path, text);
    }
}

inline void print_reports(std::ostream& out, const std::vector<BoundReport>& reports) {
    std::size_t w = 7;
    for (const auto& r : reports) w = std::max(w, r.context.size());
    out << std::left << std::setw(static_cast<int>(w)) << "context" << "  " << std::right << std::setw(24) << "lhs"
        << std::setw(24) << "rhs" << std::setw(24) << "ratio" << "  pass\n";
    for (const auto& r : reports) {
        out << std::left << std::setw(static_cast<int>(w)) << r.context << "  " << std::right << std::setw(24)
            << io::format_double(r.lhs) << std::setw(24) << io::format_double(r.rhs) << std::setw(24)
            << io::format_double(r.ratio) << "  " << (r.pass ? "yes" : "NO") << "\n";
    }
}

inline int finish_reports(std::ostream& out, std::vector<BoundReport> reports, const CommandConfig& cfg) {
    if (cfg.rhs_scale != 1.0) {
        for (auto& r : reports) r = BoundReport::make(r.context, r.lhs, r.rhs * cfg.rhs_scale);
    }
    const bool ok = std::all_of(reports.begin(), reports.end(), [](const BoundReport& r) { return r.pass; });
    if (cfg.json || !ok) {
        io::Json arr = io::Json::array();
        for (const auto& r : reports) {
            if (cfg.json || !r.pass) arr.push_back(io::report_to_json(r));
        }
        out << (arr.size() == 1 && !cfg.json ? arr.front() : arr).dump(2) << "\n";
    } else {
        print_reports(out, reports);
    }
    return ok ? kExitOk : kExitBoundFailure;
}

inline Frequency parse_generator(const std::string& text, int d) {
    std::vector<std::int64_t> c;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto next = text.find(',', pos);
        const auto cell = text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        try {
            std::size_t used = 0;
            c.push_back(std::stoll(cell, &used));
            if (used != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
            throw Error("bad generator \"" + text + "\"");
        }
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    if (static_cast<int>(c.size()) != d) throw Error("generator \"" + text + "\" does not have " + std::to_string(d) + " coordinates");
    return Frequency(c);
}

inline int run_coeffs(const CommandConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto u = io::read_state(cfg.input);
    const auto table = density_table_hyperplane(u, cfg.threads);
    emit(out, io::table_to_csv(table), cfg.output);
    if (cfg.check) {
        const double gap = max_abs_difference(table, density_table_bruteforce(u));
        const double tol = cfg.tolerance >= 0 ? cfg.tolerance : 1e-12;
        err << "max discrepancy vs brute force: " << io::format_double(gap) << "\n";
        if (!(gap <= tol)) return kExitBoundFailure;
    }
    return kExitOk;
}

inline int run_verify(const CommandConfig& cfg, std::ostream& out) {
    const auto u = io::read_state(cfg.input);
    std::vector<BoundReport> reports{verify_thm1(u), verify_thm1_decomposition(u)};
    if (cfg.lemma) {
        for (int delta = 1; delta <= u.dim(); ++delta) {
            for (auto& r : compute_T_all(u, delta)) reports.push_back(std::move(r));
        }
    }
    return finish_reports(out, std::move(reports), cfg);
}

inline int run_dm_verify(const CommandConfig& cfg, std::ostream& out) {
    const auto rho = io::density_matrix_from_json(io::parse_json_text(io::read_file(cfg.input)));
    std::vector<Frequency> gens;
    for (const auto& g : cfg.generators) gens.push_back(parse_generator(g, rho.dim()));
    const auto lattice = submodule_from_generators(rho.dim(), std::move(gens));
    return finish_reports(out, {verify_dm_bound(rho, lattice)}, cfg);
}

inline int run_strichartz(const CommandConfig& cfg, std::ostream& out) {
    const auto u = io::read_state(cfg.input);
    const std::size_t n = cfg.grid ? cfg.grid : 4 * static_cast<std::size_t>(u.max_abs_coord()) + 1;
    const auto r = parseval_L4_check(u, n);
    const double tol = cfg.tolerance >= 0 ? cfg.tolerance : 1e-8;
    const bool ok = r.relative_gap() <= tol;
    const io::Json j{{"quadrature", r.quadrature}, {"tableSum", r.table_sum}, {"relativeGap", r.relative_gap()}, {"pass", ok}};
    out << j.dump(2) << "\n";
    return ok ? kExitOk : kExitBoundFailure;
}

inline int run_sequence(const CommandConfig& cfg, std::ostream& out) {
    const auto spec = io::sequence_spec_from_json(io::parse_json_text(io::read_file(cfg.input)));
    const auto s_report = condition_S_check(spec, cfg.deltas, cfg.radii);
    int d = spec.kind == SequenceKind::sphere_eigenfunctions ? spec.dim
            : spec.kind == SequenceKind::modulated_wave     ? spec.profile.dim()
                                                             : spec.states.front().dim();
    auto qs = cfg.qs;
    if (qs.empty()) qs.push_back(static_cast<double>(d));
    const auto trend = weak_star_trend(spec, cfg.window_l, cfg.window_s, qs, cfg.threads);
    if (!cfg.output.empty()) io::write_file_atomic(cfg.output, io::trend_to_csv(trend, d));
    auto summary = io::trend_summary_json(trend);
    summary["conditionS"] = io::condition_s_json(s_report);
    if (cfg.summary.empty()) {
        out << summary.dump(2) << "\n";
    } else {
        io::write_file_atomic(cfg.summary, summary.dump(2) + "\n");
        out << "condition (S) " << (s_report.consistent ? "consistent" : "not consistent") << "; max convergence gap "
            << io::format_double(trend.max_convergence_gap()) << "\n";
    }
    return kExitOk;
}

inline int run_sphere(const CommandConfig& cfg, std::ostream& out) {
    SphereAmplitudes amps;
    if (cfg.rule == "equal") {
        amps.rule = AmplitudeRule::equal;
    } else if (cfg.rule == "random_phase") {
        amps.rule = AmplitudeRule::random_phase;
    } else {
        throw Error("unknown amplitude rule \"" + cfg.rule + "\"");
    }
    amps.seed = cfg.seed;
    const auto u = gen_sphere_state(cfg.dim, cfg.lambda, amps);
    emit(out, io::state_to_json(u).dump(2) + "\n", cfg.output);
    return kExitOk;
}

}  // namespace detail

inline int run(const CommandConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (cfg.tolerance < 0 && cfg.tolerance != -1.0) throw Error("tolerance must be >= 0");
        if (cfg.subcommand == "coeffs") return detail::run_coeffs(cfg, out, err);
        if (cfg.subcommand == "verify") return detail::run_verify(cfg, out);
        if (cfg.subcommand == "dm-verify") return detail::run_dm_verify(cfg, out);
        if (cfg.subcommand == "strichartz") return detail::run_strichartz(cfg, out);
        if (cfg.subcommand == "sequence") return detail::run_sequence(cfg, out);
        if (cfg.subcommand == "sphere") return detail::run_sphere(cfg, out);
        err << "unknown subcommand \"" << cfg.subcommand << "\"\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

/// Parses argv-style arguments (without the program name) and runs.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Space-time Fourier coefficients of Schrodinger densities on the torus"};
    app.require_subcommand(1);
    CommandConfig cfg;
    cfg.threads = thread_count_from_env();

    auto add_in = [&](CLI::App* sub) { sub->add_option("--in", cfg.input, "input file")->required()->check(CLI::ExistingFile); };
    auto add_hidden = [&](CLI::App* sub) { sub->add_option("--inject-rhs-scale", cfg.rhs_scale)->group(""); };

    auto* coeffs = app.add_subcommand("coeffs", "write the coefficient table b(l,s) of a state as CSV");
    add_in(coeffs);
    coeffs->add_option("--out", cfg.output, "output CSV (default stdout)");
    coeffs->add_flag("--check", cfg.check, "cross-check against the brute-force pair sum");
    coeffs->add_option("--tol", cfg.tolerance, "discrepancy tolerance for --check")->check(CLI::NonNegativeNumber);

    auto* verify = app.add_subcommand("verify", "check the l^{d+1} bound and its stratified decomposition");
    add_in(verify);
    verify->add_flag("--lemma", cfg.lemma, "also report every T_{r,delta}");
    verify->add_flag("--json", cfg.json, "print reports as JSON");
    add_hidden(verify);

    auto* dm = app.add_subcommand("dm-verify", "check the density-matrix bound on a submodule");
    add_in(dm);
    dm->add_option("--gen", cfg.generators, "submodule generator, comma separated (repeatable)")->required();
    dm->add_flag("--json", cfg.json, "print reports as JSON");
    add_hidden(dm);

    auto* str = app.add_subcommand("strichartz", "compare the L^4 space-time integral with sum |b|^2 (d = 1)");
    add_in(str);
    str->add_option("--grid", cfg.grid, "grid points in x")->check(CLI::PositiveNumber);
    str->add_option("--tol", cfg.tolerance, "relative tolerance")->check(CLI::NonNegativeNumber);

    auto* seq = app.add_subcommand("sequence", "condition (S) diagnostics and windowed coefficient trends");
    add_in(seq);
    seq->add_option("--out", cfg.output, "trend CSV");
    seq->add_option("--summary", cfg.summary, "summary JSON (default stdout)");
    seq->add_option("--L", cfg.window_l, "window bound on |l|_inf")->check(CLI::PositiveNumber);
    seq->add_option("--S", cfg.window_s, "window bound on |s|")->check(CLI::PositiveNumber);
    seq->add_option("--q", cfg.qs, "partial-sum exponent (repeatable; default d)");
    seq->add_option("--delta", cfg.deltas, "low-frequency thresholds")->check(CLI::PositiveNumber);
    seq->add_option("--R", cfg.radii, "high-frequency thresholds")->check(CLI::PositiveNumber);

    auto* sphere = app.add_subcommand("sphere", "write a normalized eigenfunction supported on |k|^2 = lambda");
    sphere->add_option("--d", cfg.dim, "dimension")->required()->check(CLI::Range(1, kMaxDim));
    sphere->add_option("--lambda", cfg.lambda, "eigenvalue")->required()->check(CLI::NonNegativeNumber);
    sphere->add_option("--rule", cfg.rule, "equal | random_phase");
    sphere->add_option("--seed", cfg.seed, "seed for random_phase");
    sphere->add_option("--out", cfg.output, "output JSON (default stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    for (auto* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();
    return run(cfg, out, err);
}

}  // namespace torusflow::cli
