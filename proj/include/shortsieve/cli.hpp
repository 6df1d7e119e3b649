// Command-line front end: argument parsing, dispatch, report emission and
// the bundled verification suites.
#pragma once

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "shortsieve/identities.hpp"
#include "shortsieve/report.hpp"

namespace shortsieve::cli {

// ---------------------------------------------------------------------------
// Helpers
// ---------------------------------------------------------------------------

inline ArithmeticFunctionId parse_function(const std::string& name, double k, u64 P, u64 Q) {
    if (name == "mobius") return ArithmeticFunctionId::mobius();
    if (name == "divisor") return ArithmeticFunctionId::divisor(k);
    if (name == "omega") return ArithmeticFunctionId::omega_distinct();
    if (name == "omega-total") return ArithmeticFunctionId::omega_total();
    if (name == "omega-range") return ArithmeticFunctionId::omega_range(P, Q);
    if (name == "two-squares") return ArithmeticFunctionId::two_squares();
    if (name == "e2") return ArithmeticFunctionId::e2();
    if (name == "von-mangoldt") return ArithmeticFunctionId::von_mangoldt();
    throw invalid_argument_error("--f: unknown function '" + name + "'");
}

// Resolve --H / --theta (exactly one must be given).
inline u64 resolve_H(u64 x, u64 H, double theta) {
    if (H != 0 && theta != 0)
        throw invalid_argument_error("--H and --theta are mutually exclusive");
    if (H != 0) return H;
    if (theta != 0) return resolve_window_length(x, theta);
    throw invalid_argument_error("one of --H or --theta is required");
}

// Cache file resolution: the explicit flag wins, then the directory named
// by SHORTSIEVE_CACHE_DIR, then no cache.
inline std::string resolve_cache_path(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* dir = std::getenv("SHORTSIEVE_CACHE_DIR"); dir && *dir)
        return (std::filesystem::path(dir) / "primes.bin").string();
    return {};
}

// Load (or build and save) base primes covering sqrt(limit).
inline std::vector<u64> primes_with_cache(const std::string& cache_path, u64 limit) {
    u64 root = detail::isqrt_u64(limit);
    if (!cache_path.empty() && std::filesystem::exists(cache_path)) {
        std::vector<u64> primes = load_prime_cache(cache_path);
        if (!primes.empty() && primes.back() >= root) return primes;
    }
    std::vector<u64> primes = base_primes(root);
    if (!cache_path.empty()) save_prime_cache(cache_path, primes);
    return primes;
}

inline std::vector<double> parse_alpha_list(const std::string& csv) {
    std::vector<double> alphas;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        alphas.push_back(std::stod(item));
    }
    if (alphas.empty()) throw invalid_argument_error("--alphas: empty list");
    return alphas;
}

inline DirichletPolynomial parse_polynomial(const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.empty()) throw invalid_argument_error("--poly: empty spec");
    auto need = [&](size_t n) {
        if (parts.size() != n)
            throw invalid_argument_error("--poly: bad arity for '" + spec + "'");
    };
    if (parts[0] == "zeta") {
        need(2);
        return DirichletPolynomial::zeta_partial(std::stoull(parts[1]));
    }
    if (parts[0] == "zeta-log") {
        need(2);
        return DirichletPolynomial::zeta_log_partial(std::stoull(parts[1]));
    }
    if (parts[0] == "primes") {
        if (parts.size() == 2) return DirichletPolynomial::primes(std::stoull(parts[1]));
        need(3);
        return DirichletPolynomial::primes(std::stoull(parts[1]), std::stoull(parts[2]));
    }
    if (parts[0] == "mu") {
        need(3);
        return DirichletPolynomial::mu_truncated(std::stoull(parts[1]), std::stod(parts[2]));
    }
    throw invalid_argument_error("--poly: unknown polynomial kind '" + parts[0] + "'");
}

// Window starts drawn uniformly from [x, 2x - H], reproducible per seed.
inline std::vector<u64> seeded_window_starts(u64 x, u64 H, unsigned windows, u64 seed) {
    if (2 * x < H + x) throw invalid_argument_error("window longer than the sampling range");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<u64> pick(x, 2 * x - H);
    std::vector<u64> starts(windows);
    for (auto& s : starts) s = pick(rng);
    return starts;
}

// ---------------------------------------------------------------------------
// Exact verification suites (also used by `verify-all`)
// ---------------------------------------------------------------------------

struct SuiteResult {
    std::string name;
    bool pass = false;
    bool skipped = false;
    std::string detail;
};

inline SuiteResult verify_heath_brown(u64 n_max) {
    SuiteResult r{"heath_brown_identity"};
    std::vector<i64> mu = mobius_table(n_max);
    u64 bad = 0;
    for (int k : {2, 3, 4}) {
        double X = std::ceil(std::pow(static_cast<double>(n_max), 1.0 / k)) + 1;
        std::vector<i64> values = heath_brown_table(n_max, k, X);
        for (u64 n = 1; n <= n_max; ++n)
            if (values[n] != mu[n]) ++bad;
    }
    r.pass = bad == 0;
    r.detail = "n <= " + std::to_string(n_max) + ", k in {2,3,4}, mismatches: " +
               std::to_string(bad);
    return r;
}

inline SuiteResult verify_ramare(u64 n_max, double P, double Q) {
    SuiteResult r{"ramare_identity"};
    u64 bad = 0, checked = 0;
    for_each_factorization({1, n_max - 1}, [&](const FactorView& v) {
        RamareIdentityResult res = ramare_identity_eval(v, P, Q);
        if (!res.exact_expected) return;
        ++checked;
        if (!(res.lhs == res.rhs)) ++bad;
    });
    r.pass = bad == 0;
    r.detail = std::to_string(checked) + " eligible n <= " + std::to_string(n_max) +
               ", mismatches: " + std::to_string(bad);
    return r;
}

inline SuiteResult verify_sandwich(u64 m_max, double P, double Q,
                                   const std::vector<double>& levels) {
    SuiteResult r{"sieve_sandwich"};
    u64 bad = 0;
    for (double y : levels) {
        for_each_factorization({1, m_max - 1}, [&](const FactorView& v) {
            std::vector<u64> wp;
            v.for_each_prime_power([&](u64 p, u32) {
                if (static_cast<double>(p) > P && static_cast<double>(p) <= Q)
                    wp.push_back(p);
            });
            int lower = sieve_divisor_sum(wp, y, SieveSign::Lower);
            int upper = sieve_divisor_sum(wp, y, SieveSign::Upper);
            int indicator = wp.empty() ? 1 : 0;
            if (!(lower <= indicator && indicator <= upper)) ++bad;
        });
    }
    r.pass = bad == 0;
    r.detail = "m <= " + std::to_string(m_max) + ", levels: " + std::to_string(levels.size()) +
               ", violations: " + std::to_string(bad);
    return r;
}

inline SuiteResult verify_ar_bounds(u64 x, double eps, double P, double Q, double level) {
    SuiteResult r{"ramare_coefficient_bounds"};
    try {
        RamareDecomposition dec = ramare_coefficients_mobius(x, eps, P, Q, level);
        r.pass = true;  // construction verifies |a_r| <= tau(r) and the support bound
        r.detail = "support size " + std::to_string(dec.exact.size());
    } catch (const consistency_error& err) {
        r.pass = false;
        r.detail = err.what();
    }
    return r;
}

inline SuiteResult verify_lemma(unsigned tuples, unsigned max_K, u64 seed) {
    SuiteResult r{"combinatorial_lemma"};
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<unsigned> pick_K(1, max_K);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    u64 bad = 0, oracle_bad = 0;
    for (unsigned i = 0; i < tuples; ++i) {
        ExponentTuple t;
        t.epsilon = 0.01;
        unsigned K = pick_K(rng);
        double target = 1.0 - t.epsilon * unit(rng);
        std::vector<double> w(K);
        double total = 0;
        for (auto& v : w) {
            v = unit(rng) + 1e-9;
            total += v;
        }
        t.alphas.resize(K);
        for (unsigned j = 0; j < K; ++j) t.alphas[j] = w[j] / total * target;
        ClassifiedCase c = classify_exponents(t);
        if (!case_invariant_holds(c, t)) ++bad;
        if (i % 10 == 0) {  // oracle pass on a tenth of the tuples
            auto oracle = brute_force_classify(t);
            if (!oracle || !case_invariant_holds(*oracle, t)) ++oracle_bad;
        }
    }
    r.pass = bad == 0 && oracle_bad == 0;
    r.detail = std::to_string(tuples) + " tuples, invariant failures: " + std::to_string(bad) +
               ", oracle failures: " + std::to_string(oracle_bad);
    return r;
}

inline std::vector<SuiteResult> verify_all(double budget_seconds, std::ostream& out) {
    if (budget_seconds < 60)
        throw invalid_argument_error("--budget must be at least 60 seconds");
    std::vector<SuiteResult> results;
    results.push_back(verify_heath_brown(10000));
    results.push_back(verify_ramare(10000, 2, 1000));
    results.push_back(verify_sandwich(10000, 3, 300, {100.0, 10000.0}));
    results.push_back(verify_ar_bounds(1000000, 0.4, 20, 100, 10000.0));
    results.push_back(verify_lemma(10000, 12, 20250101));

    bool run_stats = budget_seconds >= 600;
    {
        SuiteResult r{"landau_dual_method"};
        if (run_stats) {
            try {
                LandauResult c = landau_ramanujan_constant(8, 10000000ull);
                r.pass = true;
                r.detail = "agreement digits: " + std::to_string(c.agreement_digits);
            } catch (const consistency_error& err) {
                r.pass = false;
                r.detail = err.what();
            }
        } else {
            r.skipped = true;
        }
        results.push_back(r);
    }
    {
        SuiteResult r{"mobius_short_windows"};
        if (run_stats) {
            MobiusBoundReport rep = mobius_bound_report(1000000000ull, 0.56, 0.0, 10, 7);
            r.pass = rep.max_abs <= rep.bound && rep.mean_abs_over_H <= 0.01;
            r.detail = "max |S| = " + std::to_string(rep.max_abs) +
                       ", bound = " + std::to_string(rep.bound);
        } else {
            r.skipped = true;
        }
        results.push_back(r);
    }

    for (const SuiteResult& r : results) {
        out << (r.skipped ? "[SKIPPED] " : (r.pass ? "[PASS] " : "[FAIL] ")) << r.name
            << (r.detail.empty() ? "" : " — " + r.detail) << "\n";
    }
    return results;
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    CLI::App app{"short-interval sieve toolkit"};
    app.require_subcommand(1);

    RunConfig cfg;
    u64 x = 0, H = 0, y1 = 0, n_max = 100000;
    double theta = 0, eps = 0.01, P = 2, Q = 1000, level = 0, k = 2;
    double alpha = 0, B = 2, T0 = 10, T1 = 100, step = 0, T = 1000, threshold = 1;
    double sigma = 0.5, digits = 8, x_scale = 1e6;
    u64 seed = 1, cutoff = 100000000ull, big_P = 0, big_Q = 0, segment = 0;
    unsigned windows = 0;
    double budget = 60;
    int hb_k = 3;
    std::string fname = "mobius", which = "ramare", alphas_csv, output, cache, format = "json";
    std::vector<std::string> poly_specs;
    unsigned threads = 1;
    bool coverage = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--output", output, "write the report to this path");
        sub->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--prime-cache", cache, "prime cache file (PRIM format)");
        sub->add_option("--threads", threads)->check(CLI::Range(1u, 64u));
    };

    CLI::App* sieve = app.add_subcommand("sieve", "factor a window (x, x+H]");
    sieve->add_option("--x", x)->required();
    sieve->add_option("--H", H);
    sieve->add_option("--theta", theta);
    sieve->add_option("--segment", segment, "segment length override");
    add_common(sieve);

    CLI::App* sum = app.add_subcommand("sum", "window sums of an arithmetic function");
    sum->add_option("--f", fname)->required();
    sum->add_option("--x", x)->required();
    sum->add_option("--H", H);
    sum->add_option("--theta", theta);
    sum->add_option("--k", k);
    sum->add_option("--P", big_P);
    sum->add_option("--Q", big_Q);
    sum->add_option("--windows", windows, "sample this many seeded windows near x");
    sum->add_option("--seed", seed);
    sum->add_option("--eps", eps);
    add_common(sum);

    CLI::App* compare = app.add_subcommand("compare", "short window vs main term and proxy");
    compare->add_option("--f", fname)->required();
    compare->add_option("--x", x)->required();
    compare->add_option("--H", H);
    compare->add_option("--theta", theta);
    compare->add_option("--y1", y1)->required();
    compare->add_option("--k", k);
    compare->add_option("--eps", eps);
    add_common(compare);

    CLI::App* identity = app.add_subcommand("identity", "exact identity verifiers");
    identity->add_option("--which", which)
        ->check(CLI::IsMember({"ramare", "heath-brown", "extraction"}));
    identity->add_option("--n-max", n_max);
    identity->add_option("--P", P);
    identity->add_option("--Q", Q);
    identity->add_option("--x", x);
    identity->add_option("--H", H);
    identity->add_option("--theta", theta);
    identity->add_option("--eps", eps);
    identity->add_option("--level", level, "sieve level y (0: x^{eps/4})");
    add_common(identity);

    CLI::App* lemma = app.add_subcommand("lemma", "exponent classification");
    lemma->add_option("--alphas", alphas_csv, "comma-separated exponents");
    lemma->add_option("--eps", eps);
    lemma->add_flag("--coverage", coverage, "emit the dyadic coverage table");
    lemma->add_option("--k", hb_k);
    lemma->add_option("--x", x_scale);
    lemma->add_option("--grid", step, "coverage grid step (default 0.01)");
    add_common(lemma);

    CLI::App* dirichlet = app.add_subcommand("dirichlet", "Dirichlet polynomial numerics");
    std::string op = "mvt";
    dirichlet->add_option("--op", op)
        ->check(CLI::IsMember({"eval", "integral", "mvt", "large-values", "sup", "prime-decay"}));
    dirichlet->add_option("--poly", poly_specs, "zeta:N | zeta-log:N | primes:P1[:cap] | mu:N:X");
    dirichlet->add_option("--T0", T0);
    dirichlet->add_option("--T1", T1);
    dirichlet->add_option("--step", step);
    dirichlet->add_option("--T", T);
    dirichlet->add_option("--t", alpha, "evaluation point t for --op eval");
    dirichlet->add_option("--threshold", threshold);
    dirichlet->add_option("--sigma", sigma, "real part for --op eval (default 1/2)");
    double sigma_vk = 0.05;
    dirichlet->add_option("--sigma-vk", sigma_vk, "reference decay exponent for prime-decay");
    dirichlet->add_option("--x", x_scale);
    dirichlet->add_option("--N", n_max);
    dirichlet->add_option("--P", big_P);
    dirichlet->add_option("--Q", big_Q);
    add_common(dirichlet);

    CLI::App* constant = app.add_subcommand("constant", "Landau-Ramanujan constant");
    constant->add_option("--digits", digits)->check(CLI::Range(1.0, 12.0));
    constant->add_option("--cutoff", cutoff);
    add_common(constant);

    CLI::App* twisted = app.add_subcommand("twisted", "twisted Mobius window sums");
    twisted->add_option("--x", x)->required();
    twisted->add_option("--H", H);
    twisted->add_option("--theta", theta);
    twisted->add_option("--alpha", alpha)->required();
    twisted->add_option("--B", B);
    twisted->add_option("--eps", eps);
    twisted->add_option("--windows", windows, "sample this many seeded windows near x");
    twisted->add_option("--seed", seed);
    add_common(twisted);

    CLI::App* e2 = app.add_subcommand("e2", "E2 window count and decomposition split");
    e2->add_option("--x", x)->required();
    e2->add_option("--H", H);
    e2->add_option("--theta", theta);
    e2->add_option("--eps", eps);
    e2->add_option("--y1", y1);
    add_common(e2);

    CLI::App* counterexample =
        app.add_subcommand("counterexample", "short-vs-long average separation");
    counterexample->add_option("--x", x)->required();
    counterexample->add_option("--theta", theta)->required();
    add_common(counterexample);

    CLI::App* verify = app.add_subcommand("verify-all", "run the bundled suites");
    verify->add_option("--budget", budget, "seconds; >= 600 adds statistical suites");

    std::vector<char*> argv;
    std::string prog = "shortsieve";
    argv.push_back(prog.data());
    std::vector<std::string> args_copy = args;
    for (auto& a : args_copy) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    cfg.format = format;
    cfg.output_path = output;
    cfg.prime_cache_path = resolve_cache_path(cache);
    cfg.threads = threads;
    FactorOptions fopt;
    fopt.threads = threads;
    std::vector<u64> primes;  // shared cache-backed table, when requested

    auto attach_primes = [&](u64 limit) {
        if (cfg.prime_cache_path.empty()) return;
        primes = primes_with_cache(cfg.prime_cache_path, limit);
        fopt.primes = &primes;
    };

    try {
        if (app.got_subcommand(sieve)) {
            cfg.subcommand = "sieve";
            H = resolve_H(x, H, theta);
            cfg.params = {{"x", x}, {"H", H}};
            attach_primes(x + H);
            if (segment > 0) fopt.segment_len = segment;
            FactorTable table = factor_interval({x, H}, fopt);
            if (format == "csv") {
                std::vector<std::string> rows;
                for (const FactorEntry& e : table.entries) {
                    std::ostringstream row;
                    row << e.n << ",\"";
                    bool first = true;
                    for (const PrimePower& pp : e.complete()) {
                        if (!first) row << " ";
                        row << pp.p << "^" << pp.e;
                        first = false;
                    }
                    row << "\"";
                    rows.push_back(row.str());
                }
                emit_csv(cfg, "n,factorization", rows, &out);
            } else {
                json entries = json::array();
                for (const FactorEntry& e : table.entries) {
                    json je;
                    je["n"] = e.n;
                    json fs = json::array();
                    for (const PrimePower& pp : e.prime_powers)
                        fs.push_back({pp.p, pp.e});
                    je["prime_powers"] = fs;
                    je["cofactor"] = e.cofactor;
                    entries.push_back(je);
                }
                emit_report(cfg, json{{"entries", entries}}, &out);
            }
            return 0;
        }

        if (app.got_subcommand(sum)) {
            cfg.subcommand = "sum";
            H = resolve_H(x, H, theta);
            ArithmeticFunctionId f = parse_function(fname, k, big_P, big_Q);
            cfg.params = {{"f", f.name()}, {"x", x}, {"H", H}};
            attach_primes(2 * x + H);
            if (windows == 0) {
                cplx value = short_sum(f, {x, H}, fopt);
                emit_report(cfg, json{{"short_sum", to_json(value)}}, &out);
                return 0;
            }
            // seeded multi-window experiment
            cfg.params["windows"] = windows;
            if (fopt.primes == nullptr) {
                primes = base_primes(detail::isqrt_u64(2 * x));
                fopt.primes = &primes;
            }
            std::vector<u64> starts = seeded_window_starts(x, H, windows, seed);
            json rows = json::array();
            std::vector<std::string> csv_rows;
            double max_abs = 0, abs_total = 0;
            double sqrt_H = std::sqrt(static_cast<double>(H));
            for (u64 start : starts) {
                cplx s = short_sum(f, {start, H}, fopt);
                rows.push_back({{"start", start},
                                {"sum", to_json(s)},
                                {"abs_over_sqrt_H", std::abs(s) / sqrt_H}});
                csv_rows.push_back(std::to_string(start) + "," + std::to_string(s.real()) +
                                   "," + std::to_string(s.imag()));
                max_abs = std::max(max_abs, std::abs(s));
                abs_total += std::abs(s);
            }
            double logx = std::log(static_cast<double>(x));
            json summary;
            summary["max_abs"] = max_abs;
            summary["mean_abs_over_H"] = abs_total / (windows * static_cast<double>(H));
            if (f.kind == ArithmeticFunctionId::Kind::Mobius)
                summary["bound"] =
                    static_cast<double>(H) / std::pow(logx, 1.0 / 3.0 - eps);
            if (format == "csv")
                emit_csv(cfg, "start,sum_re,sum_im", csv_rows, &out);
            else
                emit_report(cfg, summary, &out, seed, rows);
            return 0;
        }

        if (app.got_subcommand(compare)) {
            cfg.subcommand = "compare";
            H = resolve_H(x, H, theta);
            ArithmeticFunctionId f = parse_function(fname, k, big_P, big_Q);
            cfg.params = {{"f", f.name()}, {"x", x}, {"H", H}, {"y1", y1}};
            attach_primes(x + std::max<u64>(y1, H));
            json summary;
            if (f.kind == ArithmeticFunctionId::Kind::Divisor) {
                DivisorWindowReport r = divisor_window_report(x, H, k, {y1}, fopt);
                summary = to_json(r.report);
                summary["long_window_density"] = r.main.long_window_density;
            } else if (f.kind == ArithmeticFunctionId::Kind::E2) {
                E2Report r = e2_window_report(x, H, eps, {y1}, fopt);
                summary = to_json(r);
            } else if (f.kind == ArithmeticFunctionId::Kind::TwoSquares) {
                WindowReport r = two_squares_window_report(x, H, fopt);
                WindowReport proxy = comparison_defect(f, x, H, y1, fopt);
                set_proxy_term(r, *proxy.proxy_term);
                summary = to_json(r);
            } else {
                summary = to_json(comparison_defect(f, x, H, y1, fopt));
            }
            emit_report(cfg, summary, &out);
            return 0;
        }

        if (app.got_subcommand(identity)) {
            cfg.subcommand = "identity";
            cfg.params = {{"which", which}};
            if (which == "ramare") {
                cfg.params["n_max"] = n_max;
                cfg.params["P"] = P;
                cfg.params["Q"] = Q;
                SuiteResult r = verify_ramare(n_max, P, Q);
                emit_report(cfg, json{{"suite", r.name}, {"pass", r.pass}, {"detail", r.detail}},
                            &out);
                return r.pass ? 0 : 1;
            }
            if (which == "heath-brown") {
                cfg.params["n_max"] = n_max;
                SuiteResult r = verify_heath_brown(n_max);
                emit_report(cfg, json{{"suite", r.name}, {"pass", r.pass}, {"detail", r.detail}},
                            &out);
                return r.pass ? 0 : 1;
            }
            // extraction: defect is a diagnostic, not an assertion
            H = resolve_H(x, H, theta);
            cfg.params["x"] = x;
            cfg.params["H"] = H;
            cfg.params["P"] = P;
            cfg.params["Q"] = Q;
            cfg.params["eps"] = eps;
            std::optional<double> lvl;
            if (level > 0) lvl = level;
            ExtractionDefect d = extraction_defect_mobius(x, H, P, Q, eps, lvl);
            json summary;
            summary["lhs"] = to_json(d.lhs);
            summary["rhs"] = to_json(d.rhs);
            summary["defect"] = to_json(d.defect);
            emit_report(cfg, summary, &out);
            return 0;
        }

        if (app.got_subcommand(lemma)) {
            cfg.subcommand = "lemma";
            if (coverage) {
                double grid = step > 0 ? step : 0.01;
                cfg.params = {{"k", hb_k}, {"x", x_scale}, {"grid", grid}, {"eps", eps}};
                std::vector<DyadicCase> cases =
                    enumerate_dyadic_cases(hb_k, x_scale, eps, grid, 5);
                std::vector<std::string> rows;
                json jrows = json::array();
                for (const DyadicCase& c : cases) {
                    LemmaTag tag = map_case_to_lemma(c);
                    std::ostringstream exps;
                    bool first = true;
                    for (size_t i = 0; i < c.N.size(); ++i) {
                        if (c.N[i] <= 1.0) continue;
                        if (!first) exps << " ";
                        exps << std::log(c.N[i]) / std::log(c.x);
                        first = false;
                    }
                    rows.push_back("\"" + exps.str() + "\"," + tag.name());
                    json jrow = to_json(tag);
                    jrow["exponents"] = exps.str();
                    jrows.push_back(jrow);
                }
                if (format == "csv")
                    emit_csv(cfg, "exponents,lemma", rows, &out);
                else
                    emit_report(cfg, json{{"cases", jrows}, {"count", cases.size()}}, &out);
                return 0;
            }
            ExponentTuple t;
            t.alphas = parse_alpha_list(alphas_csv);
            t.epsilon = eps;
            cfg.params = {{"alphas", t.alphas}, {"eps", eps}};
            ClassifiedCase c = classify_exponents(t);
            json summary = to_json(c);
            if (c.kind == ClassifiedCase::Kind::Case2) {
                double s1 = 0, s2 = 0;
                for (int i : c.I1) s1 += t.alphas[i];
                for (int i : c.I2) s2 += t.alphas[i];
                summary["sum_I1"] = s1;
                summary["sum_I2"] = s2;
            }
            emit_report(cfg, summary, &out);
            return 0;
        }

        if (app.got_subcommand(dirichlet)) {
            cfg.subcommand = "dirichlet";
            cfg.params = {{"op", op}};
            std::vector<DirichletPolynomial> polys;
            for (const std::string& s : poly_specs) polys.push_back(parse_polynomial(s));
            MeanValueConfig mcfg;
            mcfg.T0 = T0;
            mcfg.T1 = T1;
            mcfg.step = step;
            json summary;
            json spec_list = json::array();
            for (const auto& p : polys) spec_list.push_back(p.spec_string());
            summary["polynomial_spec"] = spec_list;
            summary["cfg"] = to_json(mcfg);
            if (op == "eval") {
                if (polys.empty()) throw invalid_argument_error("--poly is required");
                summary["result"] = to_json(eval(polys[0], sigma, alpha));
                summary["grid_step"] = 0.0;
                summary["converged"] = true;
            } else if (op == "integral") {
                IntegralResult r = mean_value_integral(polys, mcfg);
                summary["result"] = r.value;
                summary["grid_step"] = r.grid_step;
                summary["converged"] = r.converged;
            } else if (op == "mvt") {
                if (polys.empty()) throw invalid_argument_error("--poly is required");
                summary["result"] = mvt_ratio(polys[0], T);
                summary["grid_step"] = 0.0;
                summary["converged"] = true;
            } else if (op == "large-values") {
                if (polys.empty()) throw invalid_argument_error("--poly is required");
                LargeValueReport r = large_value_measure(polys[0], threshold, mcfg);
                summary["result"] = to_json(r);
                summary["grid_step"] = r.grid_step;
                summary["converged"] = r.converged;
            } else if (op == "sup") {
                SupResult r = zeta_partial_sup(n_max, mcfg);
                summary["result"] = json{{"sup", r.sup},
                                         {"attained_t", r.attained_t},
                                         {"implied_exponent", r.implied_exponent}};
                summary["grid_step"] = r.grid_step;
                summary["converged"] = true;
            } else if (op == "prime-decay") {
                u64 P1 = big_P != 0 ? big_P : 1000;
                std::vector<double> samples;
                for (double t = T0; t <= T1; t += (step > 0 ? step : (T1 - T0) / 16.0))
                    samples.push_back(t);
                json rows = json::array();
                for (const PrimeDecayRow& row :
                     pointwise_prime_decay(P1, big_Q, x_scale, sigma_vk, samples))
                    rows.push_back({{"t", row.t},
                                    {"measured", row.measured},
                                    {"reference", row.reference}});
                summary["result"] = rows;
                summary["grid_step"] = step;
                summary["converged"] = true;
            }
            emit_report(cfg, summary, &out);
            return 0;
        }

        if (app.got_subcommand(constant)) {
            cfg.subcommand = "constant";
            cfg.params = {{"digits", digits}, {"cutoff", cutoff}};
            LandauResult r = landau_ramanujan_constant(static_cast<int>(digits), cutoff);
            emit_report(cfg, to_json(r), &out);
            return 0;
        }

        if (app.got_subcommand(twisted)) {
            cfg.subcommand = "twisted";
            H = resolve_H(x, H, theta);
            cfg.params = {{"x", x}, {"H", H}, {"alpha", alpha}, {"B", B}, {"eps", eps}};
            attach_primes(2 * x + H);
            if (windows == 0) {
                TwistedSumReport r = twisted_sum_report(x, H, alpha, B, eps, fopt);
                emit_report(cfg, to_json(r), &out);
                return 0;
            }
            cfg.params["windows"] = windows;
            if (fopt.primes == nullptr) {
                primes = base_primes(detail::isqrt_u64(2 * x));
                fopt.primes = &primes;
            }
            std::vector<u64> starts = seeded_window_starts(x, H, windows, seed);
            json rows = json::array();
            std::vector<std::string> csv_rows;
            double max_abs = 0;
            double bound = 0;
            for (u64 start : starts) {
                TwistedSumReport r = twisted_sum_report(start, H, alpha, B, eps, fopt);
                rows.push_back({{"start", start},
                                {"abs_S", r.abs_S},
                                {"arc", r.arc_name()},
                                {"tau", r.tau}});
                csv_rows.push_back(std::to_string(start) + "," + std::to_string(r.abs_S) +
                                   "," + r.arc_name());
                max_abs = std::max(max_abs, r.abs_S);
                bound = r.bound;
            }
            json summary{{"max_abs", max_abs}, {"bound", bound}};
            if (format == "csv")
                emit_csv(cfg, "start,abs_S,arc", csv_rows, &out);
            else
                emit_report(cfg, summary, &out, seed, rows);
            return 0;
        }

        if (app.got_subcommand(e2)) {
            cfg.subcommand = "e2";
            H = resolve_H(x, H, theta);
            cfg.params = {{"x", x}, {"H", H}, {"eps", eps}};
            attach_primes(x + std::max<u64>(y1, H));
            std::optional<u64> proxy;
            if (y1 != 0) {
                proxy = y1;
                cfg.params["y1"] = y1;
            }
            E2Report r = e2_window_report(x, H, eps, proxy, fopt);
            emit_report(cfg, to_json(r), &out);
            return 0;
        }

        if (app.got_subcommand(counterexample)) {
            cfg.subcommand = "counterexample";
            cfg.params = {{"x", x}, {"theta", theta}};
            attach_primes(2 * x);
            CounterexampleReport r = counterexample_pair_report(x, theta, fopt);
            emit_report(cfg, to_json(r), &out);
            return 0;
        }

        if (app.got_subcommand(verify)) {
            cfg.subcommand = "verify-all";
            std::vector<SuiteResult> results = verify_all(budget, out);
            for (const SuiteResult& r : results)
                if (!r.skipped && !r.pass) return 1;
            return 0;
        }
    } catch (const invalid_argument_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const consistency_error& e) {
        err << "internal check failed: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

inline int run_main(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace shortsieve::cli
