#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "specalg.hpp"
#include "wilson.hpp"

namespace qwilson {

inline constexpr const char* tool_version = "0.1.0";

// ---------------------------------------------------------------------------
// Configuration
//
// Plain-text config files use one `key = value` pair per line; `#` starts a
// comment, blank lines are ignored, rationals are written `p/q`, and lists
// are comma-separated.  Unknown keys and malformed values raise ConfigError.
// ---------------------------------------------------------------------------

enum class RunMode { generic, closure };

inline std::string run_mode_name(RunMode m, long closure_N) {
    return m == RunMode::generic ? std::string("generic")
                                 : "closure(N=" + std::to_string(closure_N) + ")";
}

struct Config {
    RunMode mode = RunMode::generic;
    long closure_N = 8;  // closure truncation: f = q^{N+1}
    long N_max = 11;     // matrix checks run at size N_max + 1
    long n_max = 4;
    long x_max = 4;
    std::uint64_t seed = 1;
    long sample_count = 5;
    std::vector<Rational> limit_grid{Rational(100), Rational(1000), Rational(10000)};
    std::vector<std::string> suites{"functions", "algebra", "limits"};
    std::string output;           // report file path; empty means stdout only
    std::string format = "text";  // "text" | "records"

    void validate() const {
        if (N_max < 2) throw ConfigError("N_max must be at least 2");
        if (closure_N < 1) throw ConfigError("closure_N must be at least 1");
        if (n_max < 0 || x_max < 0) throw ConfigError("n_max and x_max must be nonnegative");
        if (sample_count < 1) throw ConfigError("samples must be at least 1");
        if (limit_grid.empty()) throw ConfigError("limit_grid must not be empty");
        for (std::size_t i = 0; i + 1 < limit_grid.size(); ++i)
            if (!(limit_grid[i] < limit_grid[i + 1]))
                throw ConfigError("limit_grid must be strictly increasing");
        for (const std::string& s : suites) {
            if (s != "functions" && s != "algebra" && s != "limits")
                throw ConfigError("unknown suite: " + s);
            if (std::count(suites.begin(), suites.end(), s) != 1)
                throw ConfigError("duplicate suite: " + s);
        }
        if (format != "text" && format != "records")
            throw ConfigError("format must be 'text' or 'records'");
    }

    std::string echo() const {
        std::ostringstream os;
        os << "mode = " << (mode == RunMode::generic ? "generic" : "closure") << "\n"
           << "closure_N = " << closure_N << "\n"
           << "N_max = " << N_max << "\n"
           << "n_max = " << n_max << "\n"
           << "x_max = " << x_max << "\n"
           << "seed = " << seed << "\n"
           << "samples = " << sample_count << "\n";
        os << "limit_grid = ";
        for (std::size_t i = 0; i < limit_grid.size(); ++i)
            os << (i ? ", " : "") << limit_grid[i].str();
        os << "\nsuites = ";
        for (std::size_t i = 0; i < suites.size(); ++i) os << (i ? ", " : "") << suites[i];
        os << "\noutput = " << output << "\nformat = " << format << "\n";
        return os.str();
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline long parse_long(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad integer for " + key + ": '" + value + "'");
    }
}

inline std::uint64_t parse_seed(const std::string& value) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
        throw ConfigError("bad seed: '" + value + "'");
    }
}

inline Rational parse_rational_value(const std::string& key, const std::string& value) {
    try {
        return Rational::parse(value);
    } catch (const Error&) {
        throw ConfigError("bad rational for " + key + ": '" + value + "'");
    }
}

}  // namespace detail

inline Config parse_config(std::istream& in) {
    Config cfg;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key == "mode") {
            if (value == "generic") cfg.mode = RunMode::generic;
            else if (value == "closure") cfg.mode = RunMode::closure;
            else throw ConfigError("mode must be 'generic' or 'closure', got '" + value + "'");
        } else if (key == "closure_N") {
            cfg.closure_N = detail::parse_long(key, value);
        } else if (key == "N_max") {
            cfg.N_max = detail::parse_long(key, value);
        } else if (key == "n_max") {
            cfg.n_max = detail::parse_long(key, value);
        } else if (key == "x_max") {
            cfg.x_max = detail::parse_long(key, value);
        } else if (key == "seed") {
            cfg.seed = detail::parse_seed(value);
        } else if (key == "samples") {
            cfg.sample_count = detail::parse_long(key, value);
        } else if (key == "limit_grid") {
            cfg.limit_grid.clear();
            for (const std::string& item : detail::split_list(value))
                cfg.limit_grid.push_back(detail::parse_rational_value(key, item));
        } else if (key == "suites") {
            cfg.suites = detail::split_list(value);
        } else if (key == "output") {
            cfg.output = value;
        } else if (key == "format") {
            cfg.format = value;
        } else {
            throw ConfigError("unknown config key: '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

inline Config parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_config(in);
}

// ---------------------------------------------------------------------------
// Parameter serialization
// ---------------------------------------------------------------------------

inline std::string params_str(const Params<Rational>& p) {
    return "q=" + p.q.str() + " a=" + p.a.str() + " b=" + p.b.str() + " c=" + p.c.str() +
           " d=" + p.d.str() + " e=" + p.e.str() + " f=" + p.f.str();
}

// Parameter files reuse the config syntax with keys q, a, b, c, d, e and an
// optional f (solved from the constraint when absent).
inline Params<Rational> parse_params_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open params file: " + path);
    std::optional<Rational> q, a, b, c, d, e, f;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const Rational v = detail::parse_rational_value(key, detail::trim(line.substr(eq + 1)));
        if (key == "q") q = v;
        else if (key == "a") a = v;
        else if (key == "b") b = v;
        else if (key == "c") c = v;
        else if (key == "d") d = v;
        else if (key == "e") e = v;
        else if (key == "f") f = v;
        else throw ConfigError("unknown parameter key: '" + key + "'");
    }
    for (const auto& [name, slot] :
         {std::pair<const char*, const std::optional<Rational>*>{"q", &q}, {"a", &a}, {"b", &b},
          {"c", &c}, {"d", &d}, {"e", &e}}) {
        if (!slot->has_value()) throw ConfigError(std::string("missing parameter ") + name);
    }
    try {
        if (f) return Params<Rational>(*q, *a, *b, *c, *d, *e, *f);
        return Params<Rational>::with_dependent_f(*q, *a, *b, *c, *d, *e);
    } catch (const InvalidInput& err) {
        throw ConfigError(std::string("invalid parameter point: ") + err.what());
    }
}

// ---------------------------------------------------------------------------
// Admissibility scan
//
// A parameter point is admissible for index range N when no denominator that
// the evaluators can form over 0 <= n, x <= N vanishes.  Structural zeros in
// numerators (for instance a_n = 0 at b = a) are allowed; only denominators
// are flagged.  The closed-form coefficient denominators are scanned as named
// factors in both slot orders; every family is then evaluated across the grid
// so that series and prefactor denominators are caught on the exact code
// paths the checks will use.
// ---------------------------------------------------------------------------

inline std::vector<std::string> validate_params(const Params<Rational>& p, long N) {
    std::vector<std::string> issues;
    const Rational one(1);
    const auto note = [&issues](std::string factor, long idx) {
        issues.push_back(std::move(factor) + " vanishes at index " + std::to_string(idx));
    };
    struct Slot {
        Rational beta, gamma;
        const char* bn;
        const char* gn;
    };
    const std::array<Slot, 2> slots{Slot{p.b, p.c, "b", "c"}, Slot{p.c, p.b, "c", "b"}};
    for (long n = 0; n <= N; ++n) {
        if ((one - p.a * qw_pow(p.q, n + 1)).is_zero()) note("1 - a q^{n+1}", n);
        if ((p.a - p.b * p.c * qw_pow(p.q, n + 2)).is_zero()) note("a - b c q^{n+2}", n);
        for (const Slot& sl : slots) {
            // At n = 0 the factors a - beta and gamma - a/q are removable
            // (they cancel against structural numerator factors), so the scan
            // starts where they are genuine denominators.
            if (n >= 1 && (p.a - sl.beta * qw_pow(p.q, n)).is_zero())
                note(std::string("a - ") + sl.bn + " q^n", n);
            if (n >= 1 && (sl.gamma - p.a * qw_pow(p.q, n - 1)).is_zero())
                note(std::string(sl.gn) + " - a q^{n-1}", n);
            if ((one - sl.beta * qw_pow(p.q, 2 * n + 1)).is_zero())
                note(std::string("1 - ") + sl.bn + " q^{2n+1}", n);
            if ((one - sl.beta * qw_pow(p.q, 2 * n + 2)).is_zero())
                note(std::string("1 - ") + sl.bn + " q^{2n+2}", n);
        }
    }
    // Coincident spectral abscissae break the interpolation-based degree
    // profile: lambda(q^{x1}; c) = lambda(q^{x2}; c) iff c q^{x1+x2+1} = 1.
    for (long s = 2; s <= 2 * N + 4; ++s)
        if ((one - p.c * qw_pow(p.q, s)).is_zero())
            note("1 - c q^{x1+x2+1} (coincident spectral abscissae)", s);

    const auto scan_family = [&](Family fam, const Params<Rational>& pp, const std::string& label) {
        for (long n = 0; n <= N; ++n)
            for (long x = 0; x <= N; ++x) {
                try {
                    (void)eval_family(fam, pp, n, x);
                } catch (const Error& err) {
                    issues.push_back("family " + label + " at (n=" + std::to_string(n) +
                                     ", x=" + std::to_string(x) + "): " + err.what());
                    return;
                }
            }
    };
    for (Family fam : all_families) scan_family(fam, p, family_name(fam));
    const Params<Rational> swapped = p.swap_bc();
    scan_family(Family::W, swapped, "W[b<->c]");
    scan_family(Family::Wbar, swapped, "Wbar[b<->c]");
    return issues;
}

// ---------------------------------------------------------------------------
// Deterministic sampling
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr int kMaxDraws = 256;

// splitmix64 step; used to derive independent per-check seed streams from the
// single configured seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t k) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (k + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline long draw_int(std::mt19937_64& rng, long lo, long hi) {
    return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

// Small-height rational: numerator and denominator magnitudes at most 20.
inline Rational draw_small_rational(std::mt19937_64& rng) {
    const Rational r = Rational(draw_int(rng, 1, 20)) / Rational(draw_int(rng, 1, 20));
    return draw_int(rng, 0, 1) ? r : -r;
}

inline Rational draw_q(std::mt19937_64& rng) {
    for (;;) {
        const Rational q = draw_small_rational(rng);
        if (q != Rational(1) && q != Rational(-1)) return q;
    }
}

}  // namespace detail

// Draws a parameter point with small-height entries, resampling until the
// admissibility scan over 0 <= n, x <= scan_N comes back clean.  In generic
// mode f is solved from the constraint; in closure mode f = q^{closure_N + 1}
// and e is solved instead.  The result is a pure function of the arguments.
inline Params<Rational> sample_params(std::uint64_t seed, RunMode mode, long closure_N,
                                      long scan_N) {
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < detail::kMaxDraws; ++attempt) {
        try {
            const Rational q = detail::draw_q(rng);
            const Rational a = detail::draw_small_rational(rng);
            const Rational b = detail::draw_small_rational(rng);
            const Rational c = detail::draw_small_rational(rng);
            const Rational d = detail::draw_small_rational(rng);
            Params<Rational> p = [&] {
                if (mode == RunMode::generic) {
                    const Rational e = detail::draw_small_rational(rng);
                    return Params<Rational>::with_dependent_f(q, a, b, c, d, e);
                }
                const Rational f = qw_pow(q, closure_N + 1);
                const Rational e = (b * c * d * f).inv();
                return Params<Rational>(q, a, b, c, d, e, f);
            }();
            if (validate_params(p, scan_N).empty()) return p;
        } catch (const Error&) {
            // Degenerate draw (for example a = 1, rejected by the series
            // evaluators); fall through and redraw.
        }
    }
    throw SamplingExhausted("no admissible parameter point after " +
                            std::to_string(detail::kMaxDraws) + " draws (seed " +
                            std::to_string(seed) + ")");
}

// ---------------------------------------------------------------------------
// Check reports
// ---------------------------------------------------------------------------

enum class CheckStatus { exact_zero, nonzero, skipped };

inline const char* check_status_name(CheckStatus s) {
    switch (s) {
        case CheckStatus::exact_zero: return "exact_zero";
        case CheckStatus::nonzero: return "nonzero";
        case CheckStatus::skipped: return "skipped";
    }
    throw InvalidInput("unknown check status");
}

struct CheckReport {
    std::string check_id;
    std::string mode;
    std::string params;
    std::string indices;  // human summary of the index ranges covered
    CheckStatus status = CheckStatus::exact_zero;
    // For nonzero: failing indices plus a decimal approximation of the
    // residual.  For skipped: the named degenerate factor or error.
    std::string witness;
    long wall_time_ms = 0;
};

struct SuiteReport {
    std::vector<CheckReport> checks;
    long n_exact = 0;
    long n_nonzero = 0;
    long n_skipped = 0;
    std::string config_echo;
    std::string version;

    bool all_green() const { return n_nonzero == 0; }
};

inline int suite_exit_code(const SuiteReport& r) { return r.all_green() ? 0 : 1; }

namespace detail {

struct Outcome {
    CheckStatus status = CheckStatus::exact_zero;
    std::string witness;
};

inline std::string approx_str(const Rational& r) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", r.approx());
    return buf;
}

template <class Body>
CheckReport timed_check(std::string id, std::string mode, std::string params, std::string indices,
                        Body&& body) {
    CheckReport rep;
    rep.check_id = std::move(id);
    rep.mode = std::move(mode);
    rep.params = std::move(params);
    rep.indices = std::move(indices);
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const Outcome out = body();
        rep.status = out.status;
        rep.witness = out.witness;
    } catch (const Error& err) {
        rep.status = CheckStatus::skipped;
        rep.witness = err.what();
    }
    const auto t1 = std::chrono::steady_clock::now();
    rep.wall_time_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    return rep;
}

inline Outcome grid_outcome(Identity id, const Params<Rational>& p, long n_max, long x_max) {
    for (long n = 0; n <= n_max; ++n)
        for (long x = 0; x <= x_max; ++x) {
            const Rational r = residual(id, n, x, p);
            if (!r.is_zero())
                return {CheckStatus::nonzero, "n=" + std::to_string(n) + " x=" +
                                                  std::to_string(x) + " residual approx " +
                                                  approx_str(r)};
        }
    return {};
}

inline Outcome matrix_outcome(const BandMatrix<Rational>& m, long margin) {
    if (const auto w = m.first_nonzero_interior(margin))
        return {CheckStatus::nonzero, "entry (" + std::to_string(w->row) + "," +
                                          std::to_string(w->col) + ") approx " +
                                          approx_str(w->value)};
    return {};
}

inline Outcome vector_outcome(const std::vector<Rational>& v, long x) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!v[i].is_zero())
            return {CheckStatus::nonzero, "x=" + std::to_string(x) + " slot " +
                                              std::to_string(i) + " approx " +
                                              approx_str(v[i])};
    return {};
}

inline std::string sample_tag(long s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "s%02ld", s);
    return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Suite construction
// ---------------------------------------------------------------------------

namespace detail {

// Identities verified pointwise by the functions suite (the q-Racah
// eigenvalue problem belongs to the limits suite).
inline std::vector<Identity> functions_identities() {
    std::vector<Identity> ids;
    for (Identity id : all_identities)
        if (id != Identity::EVP_qRacah) ids.push_back(id);
    return ids;
}

inline void add_functions_checks(const Config& cfg, std::vector<CheckReport>& out) {
    const long scan_N = std::max(cfg.n_max, cfg.x_max);
    const std::string mode = run_mode_name(cfg.mode, cfg.closure_N);
    const std::string indices =
        "n<=" + std::to_string(cfg.n_max) + " x<=" + std::to_string(cfg.x_max);
    for (long s = 0; s < cfg.sample_count; ++s) {
        const Params<Rational> p =
            sample_params(mix_seed(cfg.seed, 100 + static_cast<std::uint64_t>(s)), cfg.mode,
                          cfg.closure_N, scan_N);
        const std::string ps = params_str(p);
        for (Identity id : functions_identities()) {
            out.push_back(timed_check("functions/" + identity_name(id) + "/" + sample_tag(s),
                                      mode, ps, indices,
                                      [&] { return grid_outcome(id, p, cfg.n_max, cfg.x_max); }));
        }
        out.push_back(timed_check(
            "functions/P_degree/" + sample_tag(s), mode, ps, "n<=" + std::to_string(cfg.n_max),
            [&]() -> Outcome {
                for (long n = 0; n <= cfg.n_max; ++n) {
                    std::vector<long> nodes;
                    for (long x = 0; x <= n + 2; ++x) nodes.push_back(x);
                    const auto prof = p_degree_profile(n, p, nodes);
                    if (prof.degree != n)
                        return {CheckStatus::nonzero,
                                "n=" + std::to_string(n) + " interpolated degree " +
                                    std::to_string(prof.degree) + " != n"};
                }
                return {};
            }));
    }
}

inline void add_algebra_checks(const Config& cfg, std::vector<CheckReport>& out) {
    const long closure_size = cfg.closure_N + 1;
    const long generic_size = cfg.N_max + 1;
    const long margin = std::min<long>(3, cfg.N_max);
    const std::string closure_mode = run_mode_name(RunMode::closure, cfg.closure_N);
    for (long s = 0; s < cfg.sample_count; ++s) {
        const Params<Rational> pc =
            sample_params(mix_seed(cfg.seed, 1000 + static_cast<std::uint64_t>(s)),
                          RunMode::closure, cfg.closure_N, cfg.closure_N);
        const Params<Rational> pg =
            sample_params(mix_seed(cfg.seed, 2000 + static_cast<std::uint64_t>(s)),
                          RunMode::generic, cfg.closure_N, cfg.N_max);
        for (TripletKind t : {TripletKind::plain, TripletKind::barred}) {
            const std::string tname = t == TripletKind::plain ? "plain" : "barred";
            for (WilsonRelation r : all_wilson_relations) {
                const std::string rel = wilson_relation_name(r);
                out.push_back(timed_check(
                    "algebra/" + rel + "/" + tname + "/closure/" + sample_tag(s), closure_mode,
                    params_str(pc), "size=" + std::to_string(closure_size) + " full",
                    [&] { return matrix_outcome(wilson_relation_residual(r, t, pc, closure_size),
                                                0); }));
                out.push_back(timed_check(
                    "algebra/" + rel + "/" + tname + "/generic/" + sample_tag(s), "generic",
                    params_str(pg),
                    "size=" + std::to_string(generic_size) + " margin=" + std::to_string(margin),
                    [&] { return matrix_outcome(wilson_relation_residual(r, t, pg, generic_size),
                                                margin); }));
            }
            out.push_back(timed_check(
                "algebra/GEVP_op/" + tname + "/closure/" + sample_tag(s), closure_mode,
                params_str(pc),
                "size=" + std::to_string(closure_size) + " x<=" + std::to_string(cfg.x_max),
                [&]() -> Outcome {
                    for (long x = 0; x <= cfg.x_max; ++x) {
                        const Outcome o =
                            vector_outcome(gevp_operator_residual(pc, closure_size, x, t), x);
                        if (o.status != CheckStatus::exact_zero) return o;
                    }
                    return {};
                }));
        }
    }
}

// Base point for the limit-gap checks: every curve point of every family pair
// across the whole grid must evaluate cleanly for the family it feeds.
inline Params<Rational> sample_limit_base(std::uint64_t seed, const Config& cfg, long scan_N) {
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
        try {
            const Rational q = draw_q(rng);
            const Rational a = draw_small_rational(rng);
            const Rational b = draw_small_rational(rng);
            const Rational c = draw_small_rational(rng);
            const Rational d = draw_small_rational(rng);
            const Rational e = draw_small_rational(rng);
            const Params<Rational> base = Params<Rational>::with_dependent_f(q, a, b, c, d, e);
            if (!validate_params(base, scan_N).empty()) continue;
            bool clean = true;
            for (FamPair fp : all_fam_pairs) {
                const bool barred = fp == FamPair::Wbar_R1bar_c || fp == FamPair::Wbar_R2bar_c;
                for (const Rational& t : cfg.limit_grid) {
                    const Params<Rational> pt = limit_curve_point(fp, base, t);
                    for (long n = 0; n <= cfg.n_max && clean; ++n)
                        for (long x = 0; x <= cfg.x_max && clean; ++x) {
                            try {
                                if (barred) (void)eval_Wbar(pt, n, x);
                                else (void)eval_W(pt, n, x);
                            } catch (const Error&) {
                                clean = false;
                            }
                        }
                    if (!clean) break;
                }
                if (!clean) break;
            }
            if (clean) return base;
        } catch (const Error&) {
        }
    }
    throw SamplingExhausted("no admissible limit base point after " + std::to_string(kMaxDraws) +
                            " draws (seed " + std::to_string(seed) + ")");
}

struct MetaBase {
    Rational q, a, b, d, e;
    std::string str() const {
        return "q=" + q.str() + " a=" + a.str() + " b=" + b.str() + " d=" + d.str() +
               " e=" + e.str();
    }
};

inline MetaBase sample_meta_base(std::uint64_t seed, long size) {
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
        const MetaBase mb{draw_q(rng), draw_small_rational(rng), draw_small_rational(rng),
                          draw_small_rational(rng), draw_small_rational(rng)};
        try {
            (void)meta_constants(mb.q, mb.a, mb.b, mb.d, mb.e);
            (void)meta_generators(mb.q, mb.a, mb.b, mb.d, mb.e, size, MetaTriplet::plain);
            (void)meta_generators(mb.q, mb.a, mb.b, mb.d, mb.e, size, MetaTriplet::barred);
            return mb;
        } catch (const Error&) {
        }
    }
    throw SamplingExhausted("no admissible meta base point after " + std::to_string(kMaxDraws) +
                            " draws (seed " + std::to_string(seed) + ")");
}

struct WatsonTuple {
    Rational q, a, b, c, d, e;
    std::string str() const {
        return "q=" + q.str() + " a=" + a.str() + " b=" + b.str() + " c=" + c.str() +
               " d=" + d.str() + " e=" + e.str();
    }
};

inline WatsonTuple sample_watson_tuple(std::uint64_t seed, long n_cap) {
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
        const WatsonTuple wt{draw_q(rng),          draw_small_rational(rng),
                             draw_small_rational(rng), draw_small_rational(rng),
                             draw_small_rational(rng), draw_small_rational(rng)};
        try {
            for (long n = 0; n <= n_cap; ++n)
                (void)watson_residual(wt.a, wt.b, wt.c, wt.d, wt.e, n, wt.q);
            return wt;
        } catch (const Error&) {
        }
    }
    throw SamplingExhausted("no admissible transformation tuple after " +
                            std::to_string(kMaxDraws) + " draws (seed " + std::to_string(seed) +
                            ")");
}

inline void add_limits_checks(const Config& cfg, std::vector<CheckReport>& out) {
    const long scan_N = std::max(cfg.n_max, cfg.x_max);
    const Rational tol = Rational(1) / Rational(1000);
    const std::string grid_str = [&] {
        std::string s = "t in {";
        for (std::size_t i = 0; i < cfg.limit_grid.size(); ++i)
            s += (i ? "," : "") + cfg.limit_grid[i].str();
        return s + "}";
    }();
    for (long s = 0; s < cfg.sample_count; ++s) {
        const Params<Rational> base =
            sample_limit_base(mix_seed(cfg.seed, 3000 + static_cast<std::uint64_t>(s)), cfg,
                              scan_N);
        const std::string ps = params_str(base);
        const std::string indices =
            "n<=" + std::to_string(cfg.n_max) + " x<=" + std::to_string(cfg.x_max);
        out.push_back(timed_check(
            "limits/EVP_qRacah/" + sample_tag(s), "generic", ps, indices,
            [&] { return grid_outcome(Identity::EVP_qRacah, base, cfg.n_max, cfg.x_max); }));
        for (FamPair fp : all_fam_pairs) {
            out.push_back(timed_check(
                "limits/gap/" + fam_pair_name(fp) + "/" + sample_tag(s), "generic", ps,
                grid_str + " " + indices, [&]() -> Outcome {
                    for (long n = 0; n <= cfg.n_max; ++n)
                        for (long x = 0; x <= cfg.x_max; ++x) {
                            std::vector<Rational> gaps;
                            for (const Rational& t : cfg.limit_grid)
                                gaps.push_back(limit_gap(fp, n, x, base, t));
                            bool all_zero = true;
                            for (const Rational& g : gaps) all_zero = all_zero && g.is_zero();
                            if (all_zero) continue;  // converged identically
                            for (std::size_t i = 0; i + 1 < gaps.size(); ++i)
                                if (!(gaps[i + 1] < gaps[i]))
                                    return {CheckStatus::nonzero,
                                            "n=" + std::to_string(n) + " x=" + std::to_string(x) +
                                                " gap not strictly decreasing at t=" +
                                                cfg.limit_grid[i + 1].str()};
                            const Rational limit = limit_side_value(fp, n, x, base);
                            Rational bound = limit.abs();
                            if (bound < Rational(1)) bound = Rational(1);
                            bound = bound * tol;
                            if (!(gaps.back() < bound)) {
                                std::string ratios;
                                for (std::size_t i = 0; i + 1 < gaps.size(); ++i) {
                                    if (gaps[i + 1].is_zero()) break;
                                    ratios += (i ? ", " : "") + approx_str(gaps[i] / gaps[i + 1]);
                                }
                                return {CheckStatus::nonzero,
                                        "n=" + std::to_string(n) + " x=" + std::to_string(x) +
                                            " final gap approx " + approx_str(gaps.back()) +
                                            " >= tolerance approx " + approx_str(bound) +
                                            "; successive gap ratios {" + ratios +
                                            "} track the grid ratios (first-order 1/t decay), so"
                                            " the grid stops before the tolerance is reached"};
                            }
                        }
                    return {};
                }));
        }
    }
    for (long s = 0; s < cfg.sample_count; ++s) {
        const WatsonTuple wt =
            sample_watson_tuple(mix_seed(cfg.seed, 4000 + static_cast<std::uint64_t>(s)), 6);
        out.push_back(timed_check("limits/Watson/" + sample_tag(s), "generic", wt.str(), "n<=6",
                                  [&]() -> Outcome {
                                      for (long n = 0; n <= 6; ++n) {
                                          const Rational r = watson_residual(wt.a, wt.b, wt.c,
                                                                             wt.d, wt.e, n, wt.q);
                                          if (!r.is_zero())
                                              return {CheckStatus::nonzero,
                                                      "n=" + std::to_string(n) +
                                                          " residual approx " + approx_str(r)};
                                      }
                                      return {};
                                  }));
    }
    const long meta_size = 10;
    const long meta_margin = 2;
    for (long s = 0; s < cfg.sample_count; ++s) {
        const MetaBase mb =
            sample_meta_base(mix_seed(cfg.seed, 5000 + static_cast<std::uint64_t>(s)), meta_size);
        const auto mk = meta_constants(mb.q, mb.a, mb.b, mb.d, mb.e);
        for (MetaTriplet t : {MetaTriplet::plain, MetaTriplet::barred}) {
            const auto gens = meta_generators(mb.q, mb.a, mb.b, mb.d, mb.e, meta_size, t);
            for (MetaRelation r : all_meta_relations) {
                out.push_back(timed_check(
                    std::string("limits/") + meta_relation_name(r, t) + "/" + sample_tag(s),
                    "generic", mb.str(),
                    "size=" + std::to_string(meta_size) + " margin=" + std::to_string(meta_margin),
                    [&]() -> Outcome {
                        if (t == MetaTriplet::plain && r == MetaRelation::XZ) {
                            // The stated leading-order scalings: X carries one
                            // power of the curve parameter, Z none.
                            if (gens.x_power != 1 || gens.z_power != 0)
                                return {CheckStatus::nonzero,
                                        "leading powers (" + std::to_string(gens.x_power) + "," +
                                            std::to_string(gens.z_power) + ") != (1,0)"};
                        }
                        return matrix_outcome(meta_relation_residual(r, gens, mk, mb.q),
                                              meta_margin);
                    }));
            }
        }
    }
    for (long s = 0; s < cfg.sample_count; ++s) {
        std::mt19937_64 rng(mix_seed(cfg.seed, 7000 + static_cast<std::uint64_t>(s)));
        bool emitted = false;
        for (int attempt = 0; attempt < kMaxDraws && !emitted; ++attempt) {
            const Rational q = draw_q(rng);
            const Rational b = draw_small_rational(rng);
            const Rational c = draw_small_rational(rng);
            const Rational d = draw_small_rational(rng);
            const Rational e = draw_small_rational(rng);
            try {
                (void)a_scaling_profile(q, b, c, d, e, 6, 2, 1);  // reject degenerate draws
            } catch (const Error&) {
                continue;
            }
            const std::string ps = "q=" + q.str() + " b=" + b.str() + " c=" + c.str() +
                                   " d=" + d.str() + " e=" + e.str();
            out.push_back(timed_check(
                "limits/a_scaling/" + sample_tag(s), "generic", ps, "size=6 n=2 x=1",
                [&]() -> Outcome {
                    const ScalingProfile sp = a_scaling_profile(q, b, c, d, e, 6, 2, 1);
                    const bool diag_ok = sp.z_diag_min == 1 && sp.z_diag_max == 1;
                    const bool off_ok = sp.z_off_min == 0 && sp.z_off_max == 0;
                    const bool x_ok = sp.x_min == 1 && sp.x_max == 1;
                    const bool up_ok = sp.gap_up_degree && *sp.gap_up_degree < 0;
                    const bool down_ok = sp.gap_down_degree && *sp.gap_down_degree < 0;
                    if (diag_ok && off_ok && x_ok && up_ok && down_ok) return {};
                    std::ostringstream w;
                    w << "Z diag degrees [" << sp.z_diag_min << "," << sp.z_diag_max << "] off ["
                      << sp.z_off_min << "," << sp.z_off_max << "] X [" << sp.x_min << ","
                      << sp.x_max << "] expected diag=1 off=0 X=1";
                    if (sp.gap_up_degree) w << "; gap(a=t) degree " << *sp.gap_up_degree;
                    if (sp.gap_down_degree) w << "; gap(a=1/t) degree " << *sp.gap_down_degree;
                    return {CheckStatus::nonzero, w.str()};
                }));
            emitted = true;
        }
        if (!emitted)
            throw SamplingExhausted("no admissible scaling base point (seed tag " +
                                    std::to_string(s) + ")");
    }
    {
        std::mt19937_64 rng(mix_seed(cfg.seed, 6000));
        bool emitted = false;
        for (int attempt = 0; attempt < kMaxDraws && !emitted; ++attempt) {
            const Rational q = draw_q(rng);
            const Rational a = draw_small_rational(rng);
            const Rational b = draw_small_rational(rng);
            const Rational c = draw_small_rational(rng);
            const Rational d = draw_small_rational(rng);
            try {
                (void)vanishing_profile(q, a, b, c, d);  // reject degenerate draws
            } catch (const Error&) {
                continue;
            }
            const std::string ps = "q=" + q.str() + " a=" + a.str() + " b=" + b.str() +
                                   " c=" + c.str() + " d=" + d.str();
            out.push_back(timed_check(
                "limits/vanishing_profile", "generic", ps, "curve e=t, size=6",
                [&]() -> Outcome {
                    const VanishingProfile vp = vanishing_profile(q, a, b, c, d);
                    if (vp.matches_stated && vp.unresolved_entry.empty()) return {};
                    std::string w = "computed vanishing set {";
                    for (std::size_t i = 0; i < vp.vanishing.size(); ++i)
                        w += (i ? "," : "") + vp.vanishing[i];
                    w += "} != tabulated {";
                    for (std::size_t i = 0; i < vp.stated.size(); ++i)
                        w += (i ? "," : "") + vp.stated[i];
                    w += "}";
                    if (!vp.unresolved_entry.empty())
                        w += "; tabulated name " + vp.unresolved_entry +
                             " has no referent among the structure constants";
                    return {CheckStatus::nonzero, w};
                }));
            emitted = true;
        }
        if (!emitted) throw SamplingExhausted("no admissible vanishing-profile base point");
    }
}

}  // namespace detail

inline SuiteReport run_suite(const Config& cfg) {
    cfg.validate();
    SuiteReport rep;
    rep.version = tool_version;
    rep.config_echo = cfg.echo();
    for (const std::string& suite : cfg.suites) {
        if (suite == "functions") detail::add_functions_checks(cfg, rep.checks);
        else if (suite == "algebra") detail::add_algebra_checks(cfg, rep.checks);
        else if (suite == "limits") detail::add_limits_checks(cfg, rep.checks);
    }
    std::sort(rep.checks.begin(), rep.checks.end(),
              [](const CheckReport& a, const CheckReport& b) { return a.check_id < b.check_id; });
    for (const CheckReport& c : rep.checks) {
        switch (c.status) {
            case CheckStatus::exact_zero: ++rep.n_exact; break;
            case CheckStatus::nonzero: ++rep.n_nonzero; break;
            case CheckStatus::skipped: ++rep.n_skipped; break;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Report emission
// ---------------------------------------------------------------------------

// One object per line with a fixed key order, so identical runs are
// byte-identical apart from the wall_time_ms values.
inline std::string render_records(const SuiteReport& rep) {
    std::ostringstream os;
    for (const CheckReport& c : rep.checks) {
        nlohmann::ordered_json j;
        j["check_id"] = c.check_id;
        j["mode"] = c.mode;
        j["params"] = c.params;
        j["status"] = check_status_name(c.status);
        if (!c.witness.empty()) j["witness"] = c.witness;
        j["wall_time_ms"] = c.wall_time_ms;
        os << j.dump() << '\n';
    }
    return os.str();
}

inline std::string render_text(const SuiteReport& rep) {
    std::ostringstream os;
    os << "# verification report (version " << rep.version << ")\n";
    std::istringstream echo(rep.config_echo);
    std::string line;
    while (std::getline(echo, line)) os << "# " << line << "\n";
    std::size_t width = 8;
    for (const CheckReport& c : rep.checks) width = std::max(width, c.check_id.size());
    for (const CheckReport& c : rep.checks) {
        os << check_status_name(c.status);
        for (std::size_t i = std::string(check_status_name(c.status)).size(); i < 11; ++i)
            os << ' ';
        os << c.check_id;
        for (std::size_t i = c.check_id.size(); i < width + 2; ++i) os << ' ';
        os << "[" << c.mode << ", " << c.indices << ", " << c.wall_time_ms << " ms] "
           << c.params << "\n";
        if (!c.witness.empty())
            os << "           " << (c.status == CheckStatus::skipped ? "reason: " : "witness: ")
               << c.witness << "\n";
    }
    os << "summary: " << rep.checks.size() << " checks, " << rep.n_exact << " exact_zero, "
       << rep.n_nonzero << " nonzero, " << rep.n_skipped << " skipped\n";
    return os.str();
}

inline void emit_report(const SuiteReport& rep, const std::string& format, std::ostream& out) {
    if (format == "records") out << render_records(rep);
    else if (format == "text") out << render_text(rep);
    else throw ConfigError("format must be 'text' or 'records'");
}

// Normalizes the one nondeterministic field so that record streams from
// separate runs of the same config can be compared bytewise.
inline std::string records_modulo_wall(const std::string& records) {
    static const std::string key = "\"wall_time_ms\":";
    std::string out = records;
    std::size_t pos = 0;
    while ((pos = out.find(key, pos)) != std::string::npos) {
        std::size_t v = pos + key.size();
        std::size_t end = v;
        while (end < out.size() && (std::isdigit(static_cast<unsigned char>(out[end])) ||
                                    out[end] == '-'))
            ++end;
        out.replace(v, end - v, "0");
        pos = v;
    }
    return out;
}

}  // namespace qwilson
