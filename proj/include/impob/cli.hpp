#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "impob/criteria.hpp"
#include "impob/descriptor.hpp"
#include "impob/errors.hpp"
#include "impob/float_rank.hpp"
#include "impob/frequency.hpp"
#include "impob/json_io.hpp"
#include "impob/selftest.hpp"
#include "impob/weierstrass.hpp"

namespace impob::cli {

// Exit codes, used consistently by every subcommand:
//   0  success (check: observable; witness: found)
//   1  negative result (check: not observable; witness: none; selftest: fail)
//   2  bad input, bad usage, or I/O failure
inline constexpr int exit_ok = 0;
inline constexpr int exit_negative = 1;
inline constexpr int exit_error = 2;

namespace detail_cli {

inline std::string format_vector(const RationalVector& v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            out += ", ";
        out += to_string(v[i]);
    }
    return out + ")";
}

inline RationalVector parse_vector_csv(const std::string& text) {
    RationalVector out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        if (comma == std::string::npos)
            comma = text.size();
        std::string item = text.substr(start, comma - start);
        const auto a = item.find_first_not_of(" \t");
        const auto b = item.find_last_not_of(" \t");
        if (a == std::string::npos)
            throw parse_error("empty entry in vector \"" + text + "\"");
        out.push_back(rational_from_string(item.substr(a, b - a + 1)));
        start = comma + 1;
    }
    return out;
}

inline DescriptorSystem load_system(const std::string& path, bool approx) {
    const SystemFile f = system_file_from_json(json_from_file(path), approx);
    return DescriptorSystem::validate(f.E, f.A, f.C);
}

inline void print_witness(std::ostream& out, const ImpulseWitness& w) {
    out << "order " << w.order() << " unobservable impulse\n";
    out << "  v  = " << format_vector(w.initial_state()) << "\n";
    for (std::size_t i = 0; i <= w.order(); ++i)
        out << "  p" << i << " = " << format_vector(w.coeff(i)) << "\n";
    const PolynomialVector p = w.polynomial();
    out << "  x(s) = (";
    for (std::size_t c = 0; c < p.size(); ++c)
        out << (c ? ", " : "") << p[c].str();
    out << ")\n";
}

inline int cmd_check(std::ostream& out, const std::string& file, const std::string& strategy_text,
                     const std::string& out_path, bool compare_float, bool approx) {
    const DescriptorSystem sys = load_system(file, approx);
    const Strategy strategy = strategy_from_string(strategy_text);
    const ObservabilityReport report = is_impulse_observable(sys, strategy);
    json doc = report_document_to_json(make_report_document(sys, report));
    if (compare_float) {
        json comparisons = json::array();
        for (const OrderCheck& row : report.rank_table) {
            const std::size_t fr = float_rank(build_obs_matrix(sys, row.r + 2).matrix);
            comparisons.push_back({{"r", row.r},
                                   {"exact", row.rank_found},
                                   {"float", fr},
                                   {"agree", fr == row.rank_found}});
        }
        doc["float_ranks"] = std::move(comparisons);
    }
    const std::string text = doc.dump(2) + "\n";
    if (out_path.empty()) {
        out << text;
    } else {
        atomic_write_text(out_path, text);
        out << "verdict: " << (report.verdict ? "impulse observable" : "NOT impulse observable")
            << " (strategy " << strategy_to_string(strategy) << ")\n";
        out << "rank(E) = " << sys.rank_E() << ", det(sE - A) = " << sys.det_pencil().str()
            << "\n";
        for (const OrderCheck& row : report.rank_table)
            out << "  r=" << row.r << ": rank " << row.rank_found << ", required "
                << row.rank_required << (row.holds ? "" : "  <- fails") << "\n";
        if (compare_float)
            for (const json& c : doc["float_ranks"])
                out << "  r=" << c["r"] << ": float rank " << c["float"]
                    << (c["agree"].get<bool>() ? " (agrees)" : " (DISAGREES)") << "\n";
        if (report.witness)
            print_witness(out, *report.witness);
        out << "report written to " << out_path << "\n";
    }
    return report.verdict ? exit_ok : exit_negative;
}

inline int cmd_witness(std::ostream& out, const std::string& file, long long max_order,
                       bool approx) {
    const DescriptorSystem sys = load_system(file, approx);
    std::size_t r = sys.n() > 0 ? sys.n() - 1 : 0;
    if (max_order >= 0)
        r = std::min<std::size_t>(static_cast<std::size_t>(max_order), sys.n());
    const std::optional<ImpulseWitness> w = find_witness(sys, r);
    if (!w) {
        out << "no unobservable impulse up to order " << r << "\n";
        return exit_negative;
    }
    print_witness(out, *w);
    return exit_ok;
}

inline int cmd_solve(std::ostream& out, const std::string& file, const std::string& w_text,
                     bool approx) {
    const DescriptorSystem sys = load_system(file, approx);
    const RationalVector w = parse_vector_csv(w_text);
    const FrequencySolution sol = solve_frequency(sys, w);
    out << "w = " << format_vector(w) << "\n";
    out << "denominator (monic): " << sol.denominator().str() << "\n";
    out << "X_P = (";
    for (std::size_t i = 0; i < sys.n(); ++i)
        out << (i ? ", " : "") << sol.polynomial_part()[i].str();
    out << ")\n";
    const std::optional<std::size_t> order = impulse_order(sol.polynomial_part());
    if (order)
        out << "impulse order: " << *order << "\n";
    else
        out << "impulse order: none (X_P = 0)\n";
    out << "X_A = (";
    for (std::size_t i = 0; i < sys.n(); ++i) {
        const auto [num, den] = sol.proper_component_reduced(i);
        out << (i ? ", " : "");
        if (num.is_zero())
            out << "0";
        else
            out << "(" << num.str() << ")/(" << den.str() << ")";
    }
    out << ")\n";
    out << "q = " << format_vector(sol.q()) << "\n";
    const PolynomialVector cx_poly = matrix_apply(sys.C(), sol.polynomial_part());
    const PolynomialVector cx_prop = matrix_apply(sys.C(), sol.proper_numerators());
    const bool cx_zero = poly_vector_is_zero(cx_poly) && poly_vector_is_zero(cx_prop);
    out << "C X(s) " << (cx_zero ? "= 0" : "!= 0") << "\n";
    if (const std::optional<ImpulseWitness> wit = polynomial_witness_from_solution(sys, sol)) {
        out << "witness extracted from (w - q, X_P):\n";
        print_witness(out, *wit);
    } else if (cx_zero) {
        out << "no witness: X_P = 0 (impulse-free solution)\n";
    } else {
        out << "no witness: the output sees this solution\n";
    }
    return exit_ok;
}

inline int cmd_gen(std::ostream& out, std::uint64_t seed, std::size_t n1, std::size_t n2,
                   std::size_t m, long bound, const std::string& out_path) {
    const WeierstrassData wd = random_canonical(seed, n1, n2, m, bound);
    const DescriptorSystem sys = assemble(wd);
    SystemFile f;
    f.name = "gen-seed" + std::to_string(seed) + "-n" + std::to_string(n1) + "+" +
             std::to_string(n2) + "-m" + std::to_string(m);
    f.E = sys.E();
    f.A = sys.A();
    f.C = sys.C();
    atomic_write_text(out_path, system_file_to_json(f).dump(2) + "\n");
    json canon;
    canon["seed"] = seed;
    canon["bound"] = bound;
    canon["n1"] = wd.n1;
    canon["n2"] = wd.n2;
    canon["m"] = wd.m;
    canon["h"] = wd.h;
    canon["A1"] = matrix_to_json(wd.A1);
    canon["N"] = matrix_to_json(wd.N);
    canon["C1"] = matrix_to_json(wd.C1);
    canon["C2"] = matrix_to_json(wd.C2);
    canon["T"] = matrix_to_json(wd.T);
    canon["S"] = matrix_to_json(wd.S);
    const std::string canon_path = out_path + ".canonical.json";
    atomic_write_text(canon_path, canon.dump(2) + "\n");
    out << "system written to " << out_path << "\n";
    out << "canonical data written to " << canon_path << "\n";
    return exit_ok;
}

inline int cmd_selftest(std::ostream& out, const selftest::Options& opt,
                        const std::string& artifact) {
    const selftest::RunResult res = selftest::run_all(opt);
    for (const selftest::SuiteStats& st : res.suites) {
        out << (st.passed() ? "  ok   " : "  FAIL ") << st.name << ": " << st.cases << " cases, "
            << st.checks << " checks";
        if (!st.passed())
            out << ", " << st.failures << " failures (" << st.first_failure << ")";
        out << "\n";
    }
    if (res.float_stats.total > 0)
        out << "float-vs-exact rank agreement: " << res.float_stats.agree << "/"
            << res.float_stats.total << "\n";
    if (res.ok) {
        out << "selftest: PASS\n";
        return exit_ok;
    }
    if (res.counterexample) {
        atomic_write_text(artifact, res.counterexample->dump(2) + "\n");
        out << "counterexample written to " << artifact << "\n";
    }
    out << "selftest: FAIL\n";
    return exit_negative;
}

} // namespace detail_cli

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"impulse observability of descriptor systems E x' = A x, y = C x"};
    app.name("impob");
    app.require_subcommand(1);

    std::string check_file, check_strategy = "all", check_out;
    bool check_float = false, check_approx = false;
    CLI::App* check = app.add_subcommand("check", "decide impulse observability from E, A, C");
    check->add_option("file", check_file, "system JSON file")->required();
    check->add_option("--strategy", check_strategy, "first | all | r=K");
    check->add_option("--out", check_out, "write the JSON report to this path");
    check->add_flag("--compare-float", check_float, "annotate with SVD ranks");
    check->add_flag("--approx-ingest", check_approx, "accept float entries (converted exactly)");

    std::string wit_file;
    long long wit_max_order = -1;
    bool wit_approx = false;
    CLI::App* witness = app.add_subcommand("witness", "search for an unobservable impulse");
    witness->add_option("file", wit_file, "system JSON file")->required();
    witness->add_option("--max-order", wit_max_order, "search depth R (default n-1)");
    witness->add_flag("--approx-ingest", wit_approx, "accept float entries (converted exactly)");

    std::string solve_file, solve_w;
    bool solve_approx = false;
    CLI::App* solve = app.add_subcommand("solve", "frequency-domain solution for initial value w");
    solve->add_option("file", solve_file, "system JSON file")->required();
    solve->add_option("--w", solve_w, "comma-separated rational entries")->required();
    solve->add_flag("--approx-ingest", solve_approx, "accept float entries (converted exactly)");

    std::uint64_t gen_seed = 0;
    std::size_t gen_n1 = 0, gen_n2 = 0, gen_m = 0;
    long gen_bound = 3;
    std::string gen_out;
    CLI::App* gen = app.add_subcommand("gen", "generate a random system with known canonical form");
    gen->add_option("--seed", gen_seed, "RNG seed")->required();
    gen->add_option("--n1", gen_n1, "slow subsystem dimension")->required();
    gen->add_option("--n2", gen_n2, "fast subsystem dimension")->required();
    gen->add_option("--m", gen_m, "output dimension")->required();
    gen->add_option("--bound", gen_bound, "canonical entry bound");
    gen->add_option("--out", gen_out, "system file path (canonical sidecar derives from it)")
        ->required();

    selftest::Options st_opt;
    std::string st_artifact = "impob_counterexample.json";
    CLI::App* st = app.add_subcommand("selftest", "randomized cross-validation of the library");
    st->add_option("--trials", st_opt.trials, "trial budget for the main suite");
    st->add_option("--max-n", st_opt.max_n, "largest state dimension drawn");
    st->add_option("--seed", st_opt.seed, "RNG seed");
    st->add_option("--artifact", st_artifact, "counterexample output path");
    st->add_flag("--inject-failure", st_opt.inject_failure,
                 "force a failure to exercise the artifact path");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_error;
    }

    try {
        if (*check)
            return detail_cli::cmd_check(out, check_file, check_strategy, check_out, check_float,
                                         check_approx);
        if (*witness)
            return detail_cli::cmd_witness(out, wit_file, wit_max_order, wit_approx);
        if (*solve)
            return detail_cli::cmd_solve(out, solve_file, solve_w, solve_approx);
        if (*gen)
            return detail_cli::cmd_gen(out, gen_seed, gen_n1, gen_n2, gen_m, gen_bound, gen_out);
        if (*st)
            return detail_cli::cmd_selftest(out, st_opt, st_artifact);
    } catch (const impob::error& e) {
        err << "error: " << e.what() << "\n";
        return exit_error;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_error;
    } catch (const internal_defect& e) {
        err << "internal defect: " << e.what() << "\n";
        return exit_error;
    }
    err << "error: no subcommand\n";
    return exit_error;
}

} // namespace impob::cli
