// Command-line front end: evaluate family members, run verification suites,
// tabulate limit gaps, and probe the operator algebra relations.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "qwilson/harness.hpp"

using namespace qwilson;

namespace {

struct EvalOptions {
    std::string family = "W";
    long n = 0;
    long x = 0;
    std::string params_file;
};

int run_eval(const EvalOptions& opt) {
    const Params<Rational> p = parse_params_file(opt.params_file);
    try {
        const Rational v = eval_family(family_from_string(opt.family), p, opt.n, opt.x);
        std::cout << v.str() << "\n";
        return 0;
    } catch (const DegenerateParameter& e) {
        std::cout << "degenerate: " << e.what() << "\n";
        return 1;
    } catch (const ZeroDenominatorTerm& e) {
        std::cout << "degenerate: " << e.what() << "\n";
        return 1;
    }
}

struct VerifyOptions {
    std::string config_file;
    std::string suite;
    std::string mode;
    long closure_N = -1;
    long samples = -1;
    long n_max = -1;
    long x_max = -1;
    std::string seed;
    std::string report;
    std::string format;
};

int run_verify(const VerifyOptions& opt) {
    Config cfg;
    if (!opt.config_file.empty()) cfg = parse_config_file(opt.config_file);
    if (!opt.suite.empty()) {
        if (opt.suite == "all") cfg.suites = {"functions", "algebra", "limits"};
        else cfg.suites = {opt.suite};
    }
    if (!opt.mode.empty()) {
        if (opt.mode == "generic") cfg.mode = RunMode::generic;
        else if (opt.mode == "closure") cfg.mode = RunMode::closure;
        else throw ConfigError("mode must be 'generic' or 'closure'");
    }
    if (opt.closure_N >= 0) cfg.closure_N = opt.closure_N;
    if (opt.samples >= 0) cfg.sample_count = opt.samples;
    if (opt.n_max >= 0) cfg.n_max = opt.n_max;
    if (opt.x_max >= 0) cfg.x_max = opt.x_max;
    if (!opt.seed.empty()) cfg.seed = std::stoull(opt.seed);
    if (!opt.report.empty()) cfg.output = opt.report;
    if (!opt.format.empty()) cfg.format = opt.format;
    cfg.validate();

    const SuiteReport rep = run_suite(cfg);
    std::cout << render_text(rep);
    if (!cfg.output.empty()) {
        std::ofstream out(cfg.output);
        if (!out) throw ConfigError("cannot open report file: " + cfg.output);
        emit_report(rep, cfg.format, out);
    }
    return suite_exit_code(rep);
}

struct LimitsOptions {
    std::string pair = "all";
    std::string grid = "100,1000,10000";
    std::string params_file;
    std::string seed = "1";
    long n_max = 2;
    long x_max = 2;
};

int run_limits(const LimitsOptions& opt) {
    std::vector<Rational> grid;
    for (const std::string& item : detail::split_list(opt.grid))
        grid.push_back(Rational::parse(item));
    if (grid.empty()) throw ConfigError("empty grid");
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        if (!(grid[i] < grid[i + 1])) throw ConfigError("grid must be strictly increasing");

    std::vector<FamPair> pairs;
    if (opt.pair == "all") pairs.assign(all_fam_pairs.begin(), all_fam_pairs.end());
    else pairs.push_back(fam_pair_from_string(opt.pair));

    Config cfg;
    cfg.limit_grid = grid;
    cfg.n_max = opt.n_max;
    cfg.x_max = opt.x_max;
    const Params<Rational> base =
        opt.params_file.empty()
            ? detail::sample_limit_base(detail::mix_seed(std::stoull(opt.seed), 3000), cfg,
                                        std::max(opt.n_max, opt.x_max))
            : parse_params_file(opt.params_file);

    std::cout << "base " << params_str(base) << "\n";
    for (FamPair fp : pairs) {
        std::cout << "pair " << fam_pair_name(fp) << "\n";
        for (long n = 0; n <= opt.n_max; ++n)
            for (long x = 0; x <= opt.x_max; ++x) {
                std::cout << "  n=" << n << " x=" << x << "  gaps";
                try {
                    for (const Rational& t : grid) {
                        const Rational g = limit_gap(fp, n, x, base, t);
                        std::cout << " " << detail::approx_str(g);
                    }
                    const Rational lv = limit_side_value(fp, n, x, base);
                    std::cout << "  (limit value approx " << detail::approx_str(lv) << ")\n";
                } catch (const Error& e) {
                    std::cout << "  skipped: " << e.what() << "\n";
                }
            }
    }
    return 0;
}

struct AlgebraOptions {
    std::string triplet = "both";
    std::string rho_variant = "shift";
    std::string mode = "generic";
    long closure_N = 8;
    long size = 12;
    long margin = 3;
    std::string seed = "1";
    std::string params_file;
};

int run_algebra(const AlgebraOptions& opt) {
    const bool closure = opt.mode == "closure";
    if (!closure && opt.mode != "generic")
        throw ConfigError("mode must be 'generic' or 'closure'");
    const long size = closure ? opt.closure_N + 1 : opt.size;
    const long margin = closure ? 0 : opt.margin;
    const Params<Rational> p =
        opt.params_file.empty()
            ? sample_params(detail::mix_seed(std::stoull(opt.seed), closure ? 1000 : 2000),
                            closure ? RunMode::closure : RunMode::generic, opt.closure_N,
                            size - 1)
            : parse_params_file(opt.params_file);
    std::cout << "point " << params_str(p) << "\n";
    if (closure)
        std::cout << "size " << size << " (full matrix)\n";
    else
        std::cout << "size " << size << ", interior margin " << margin << "\n";

    std::vector<TripletKind> kinds;
    if (opt.triplet == "XZ") kinds = {TripletKind::plain};
    else if (opt.triplet == "XbarZbar") kinds = {TripletKind::barred};
    else if (opt.triplet == "both") kinds = {TripletKind::plain, TripletKind::barred};
    else throw ConfigError("triplet must be XZ, XbarZbar, or both");

    std::vector<std::string> variants;
    if (opt.rho_variant == "both") variants = {"shift", "0"};
    else if (opt.rho_variant == "shift" || opt.rho_variant == "0")
        variants = {opt.rho_variant};
    else throw ConfigError("rho-variant must be 0, shift, or both");

    int failures = 0;
    for (TripletKind t : kinds) {
        const char* tname = t == TripletKind::plain ? "XZ" : "XbarZbar";
        for (const std::string& variant : variants) {
            const bool shifted = variant == "shift";
            auto triplet = detail::build_triplet(t, p, size);
            if (!shifted) {
                // Control run: rebuild the pencil generator without the
                // diagonal shift.  The relations are expected to fail here.
                triplet.X = t == TripletKind::plain
                                ? mat_X(p, p.b, p.c, size, Rational(0))
                                : mat_Xbar(p, p.b, p.c, size, Rational(0));
            }
            const auto k = wilson_constants(p);
            for (WilsonRelation r : all_wilson_relations) {
                const auto res = detail::triplet_relation_residual(r, t, triplet, k, p);
                const auto w = res.first_nonzero_interior(margin);
                std::cout << "  " << tname << "  rho=" << variant << "  "
                          << wilson_relation_name(r) << ": ";
                if (!w) {
                    std::cout << "exact zero\n";
                } else {
                    std::cout << "nonzero at (" << w->row << "," << w->col << ") approx "
                              << detail::approx_str(w->value)
                              << (shifted ? "" : "  [expected: closure needs the shift]") << "\n";
                    if (shifted) ++failures;
                }
            }
        }
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact-arithmetic verification toolkit for biorthogonal rational families"};
    app.require_subcommand(1);

    EvalOptions eval_opt;
    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate one family member exactly");
    eval_cmd->add_option("--family", eval_opt.family, "family name (W, Wbar, P, R, R1, ...)");
    eval_cmd->add_option("--n", eval_opt.n, "degree index")->required();
    eval_cmd->add_option("--x", eval_opt.x, "argument index")->required();
    eval_cmd->add_option("--params-file", eval_opt.params_file, "parameter point file")
        ->required();

    VerifyOptions verify_opt;
    CLI::App* verify_cmd = app.add_subcommand("verify", "run verification suites");
    verify_cmd->add_option("--config", verify_opt.config_file, "config file (key = value)");
    verify_cmd->add_option("--suite", verify_opt.suite, "functions|algebra|limits|all")
        ->check(CLI::IsMember({"functions", "algebra", "limits", "all"}));
    verify_cmd->add_option("--mode", verify_opt.mode, "generic|closure");
    verify_cmd->add_option("--N", verify_opt.closure_N, "closure truncation exponent");
    verify_cmd->add_option("--samples", verify_opt.samples, "parameter samples per check family");
    verify_cmd->add_option("--n-max", verify_opt.n_max, "largest degree index");
    verify_cmd->add_option("--x-max", verify_opt.x_max, "largest argument index");
    verify_cmd->add_option("--seed", verify_opt.seed, "sampling seed");
    verify_cmd->add_option("--report", verify_opt.report, "write the report to this path");
    verify_cmd->add_option("--format", verify_opt.format, "report file format: text|records");

    LimitsOptions limits_opt;
    CLI::App* limits_cmd =
        app.add_subcommand("limits", "tabulate exact limit gaps along parameter curves");
    limits_cmd->add_option("--pair", limits_opt.pair, "family pair name or 'all'");
    limits_cmd->add_option("--grid", limits_opt.grid, "comma-separated curve parameter values");
    limits_cmd->add_option("--params-file", limits_opt.params_file, "base point file");
    limits_cmd->add_option("--seed", limits_opt.seed, "sampling seed when no file is given");
    limits_cmd->add_option("--n-max", limits_opt.n_max, "largest degree index");
    limits_cmd->add_option("--x-max", limits_opt.x_max, "largest argument index");

    AlgebraOptions algebra_opt;
    CLI::App* algebra_cmd =
        app.add_subcommand("algebra", "check the operator algebra relations for one triplet");
    algebra_cmd->add_option("--triplet", algebra_opt.triplet, "XZ|XbarZbar|both");
    algebra_cmd->add_option("--rho-variant", algebra_opt.rho_variant,
                            "0|shift|both (0 is a control expected to fail)");
    algebra_cmd->add_option("--mode", algebra_opt.mode, "generic|closure");
    algebra_cmd->add_option("--N", algebra_opt.closure_N, "closure truncation exponent");
    algebra_cmd->add_option("--size", algebra_opt.size, "matrix size in generic mode");
    algebra_cmd->add_option("--margin", algebra_opt.margin, "interior margin in generic mode");
    algebra_cmd->add_option("--seed", algebra_opt.seed, "sampling seed when no file is given");
    algebra_cmd->add_option("--params-file", algebra_opt.params_file, "parameter point file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (eval_cmd->parsed()) return run_eval(eval_opt);
        if (verify_cmd->parsed()) return run_verify(verify_opt);
        if (limits_cmd->parsed()) return run_limits(limits_opt);
        if (algebra_cmd->parsed()) return run_algebra(algebra_opt);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const SamplingExhausted& e) {
        std::cerr << "sampling error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
