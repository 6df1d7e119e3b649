#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "shortsieve/cli.hpp"
#include "shortsieve/stats.hpp"

using namespace shortsieve;

namespace {

struct CliRun {
    int exit_code;
    std::string out;
    std::string err;
};

CliRun run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("sum subcommand emits the window sum") {
    CliRun r = run_cli({"sum", "--f", "mobius", "--x", "1000000", "--H", "10000",
                        "--format", "json"});
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    i64 expected = short_sum_int(ArithmeticFunctionId::mobius(), {1000000, 10000});
    CHECK(j["experiment"] == "sum");
    CHECK(j["summary"]["short_sum"].get<double>() == static_cast<double>(expected));
    CHECK(j["config"]["subcommand"] == "sum");
    CHECK(j["params"]["H"] == 10000);
}

TEST_CASE("seeded multi-window sums carry per_window rows and a summary") {
    CliRun r = run_cli({"sum", "--f", "mobius", "--x", "3000000", "--H", "20000",
                        "--windows", "4", "--seed", "99"});
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["seed"] == 99);
    REQUIRE(j["per_window"].size() == 4);
    CHECK(j["summary"].contains("max_abs"));
    CHECK(j["summary"].contains("bound"));
    // reproducible
    CliRun again = run_cli({"sum", "--f", "mobius", "--x", "3000000", "--H", "20000",
                            "--windows", "4", "--seed", "99"});
    CHECK(again.out == r.out);
    // CSV export: one row per window plus the header
    CliRun csv = run_cli({"sum", "--f", "mobius", "--x", "3000000", "--H", "20000",
                          "--windows", "4", "--seed", "99", "--format", "csv"});
    REQUIRE(csv.exit_code == 0);
    CHECK(csv.out.find("start,sum_re,sum_im") == 0);
    CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 5);
}

TEST_CASE("theta resolves to H and is echoed") {
    CliRun r = run_cli({"sum", "--f", "mobius", "--x", "1000000", "--theta", "0.5"});
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["params"]["H"] == 1000);
}

TEST_CASE("H and theta conflict is a validation error") {
    CliRun r = run_cli({"sum", "--f", "mobius", "--x", "1000", "--H", "10", "--theta", "0.5"});
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("theta") != std::string::npos);
}

TEST_CASE("missing required flag exits 2 and names it") {
    CliRun r = run_cli({"sum", "--f", "mobius", "--H", "100"});
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("--x") != std::string::npos);
}

TEST_CASE("unknown subcommand exits 2") {
    CliRun r = run_cli({"frobnicate"});
    CHECK(r.exit_code == 2);
}

TEST_CASE("lemma subcommand classifies the five-fifths tuple") {
    CliRun r = run_cli({"lemma", "--alphas", "0.2,0.2,0.2,0.2,0.2", "--eps", "0.01"});
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["summary"]["case"] == 2);
    CHECK(j["summary"]["sum_I1"].get<double>() == Catch::Approx(0.4));
    CHECK(j["summary"]["sum_I2"].get<double>() == Catch::Approx(0.4));
}

TEST_CASE("lemma coverage table emits CSV") {
    CliRun r = run_cli({"lemma", "--coverage", "--k", "4", "--x", "1e6", "--grid", "0.05",
                        "--format", "csv"});
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("exponents,lemma") == 0);
    CHECK(r.out.find("unhandled") == std::string::npos);
}

TEST_CASE("identity verifiers exit nonzero only on defect") {
    CliRun hb = run_cli({"identity", "--which", "heath-brown", "--n-max", "2000"});
    CHECK(hb.exit_code == 0);
    CliRun ram = run_cli({"identity", "--which", "ramare", "--n-max", "2000",
                          "--P", "2", "--Q", "100"});
    CHECK(ram.exit_code == 0);
}

TEST_CASE("extraction defect subcommand reports a diagnostic") {
    CliRun r = run_cli({"identity", "--which", "extraction", "--x", "100000", "--H", "2000",
                        "--P", "50", "--Q", "500", "--eps", "0.4"});
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["summary"].contains("defect"));
}

TEST_CASE("sieve subcommand writes factorizations") {
    CliRun r = run_cli({"sieve", "--x", "10", "--H", "4"});
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    REQUIRE(j["summary"]["entries"].size() == 4);
    CHECK(j["summary"]["entries"][1]["n"] == 12);
    CHECK(j["summary"]["entries"][1]["prime_powers"].size() == 2);
}

TEST_CASE("compare dispatches to the divisor and e2 window reports") {
    CliRun d = run_cli({"compare", "--f", "divisor", "--k", "2", "--x", "1000000",
                        "--H", "10000", "--y1", "100000"});
    REQUIRE(d.exit_code == 0);
    json jd = json::parse(d.out);
    CHECK_FALSE(jd["summary"]["main_term"].is_null());
    CHECK_FALSE(jd["summary"]["proxy_term"].is_null());
    CHECK(jd["summary"]["relative_defect_main"].get<double>() < 0.01);

    CliRun e = run_cli({"compare", "--f", "e2", "--x", "1000000", "--H", "20000",
                        "--y1", "100000", "--eps", "0.3"});
    REQUIRE(e.exit_code == 0);
    json je = json::parse(e.out);
    CHECK(je["summary"]["total"] ==
          je["summary"]["included"].get<i64>() + je["summary"]["excluded"].get<i64>());

    CliRun s = run_cli({"compare", "--f", "two-squares", "--x", "1000000", "--H", "20000",
                        "--y1", "100000"});
    REQUIRE(s.exit_code == 0);
    json js = json::parse(s.out);
    CHECK_FALSE(js["summary"]["main_term"].is_null());
    CHECK_FALSE(js["summary"]["proxy_term"].is_null());
}

TEST_CASE("output lands in the requested file") {
    std::string path =
        (std::filesystem::temp_directory_path() / "shortsieve_cli_out.json").string();
    CliRun r = run_cli({"constant", "--digits", "6", "--cutoff", "100000",
                        "--output", path});
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.empty());
    std::ifstream is(path);
    REQUIRE(is.good());
    json j = json::parse(is);
    CHECK(j["summary"]["value"].get<double>() == Catch::Approx(0.76422365).epsilon(1e-6));
    std::filesystem::remove(path);
}

TEST_CASE("byte-identical output for identical invocations") {
    std::vector<std::string> args = {"twisted", "--x", "100000", "--H", "5000",
                                     "--alpha", "0.61803398875", "--B", "2"};
    CliRun a = run_cli(args);
    CliRun b = run_cli(args);
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("seeded twisted windows report the arc tag per window") {
    CliRun r = run_cli({"twisted", "--x", "200000", "--theta", "0.8", "--alpha",
                        "1.6180339887498949", "--B", "2", "--windows", "3", "--seed", "5"});
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    REQUIRE(j["per_window"].size() == 3);
    for (const auto& row : j["per_window"]) CHECK(row.contains("arc"));
    CHECK(j["summary"]["max_abs"].get<double>() <= j["summary"]["bound"].get<double>());
}

TEST_CASE("threaded runs produce identical reports") {
    std::vector<std::string> base = {"sum", "--f", "e2", "--x", "2000000", "--H", "300000"};
    CliRun single = run_cli(base);
    std::vector<std::string> threaded = base;
    threaded.push_back("--threads");
    threaded.push_back("2");
    CliRun dual = run_cli(threaded);
    REQUIRE(single.exit_code == 0);
    REQUIRE(dual.exit_code == 0);
    CHECK(json::parse(single.out)["summary"]["short_sum"] ==
          json::parse(dual.out)["summary"]["short_sum"]);
}

TEST_CASE("prime cache is created and reused") {
    std::string path =
        (std::filesystem::temp_directory_path() / "shortsieve_cli_cache.bin").string();
    std::filesystem::remove(path);
    CliRun first = run_cli({"sieve", "--x", "100000", "--H", "10", "--prime-cache", path});
    REQUIRE(first.exit_code == 0);
    REQUIRE(std::filesystem::exists(path));
    std::vector<u64> primes = load_prime_cache(path);
    CHECK(primes.back() == 313);  // largest prime below sqrt(100010)
    CliRun second = run_cli({"sieve", "--x", "100000", "--H", "10", "--prime-cache", path});
    CHECK(second.exit_code == 0);
    CHECK(second.out == first.out);
    std::filesystem::remove(path);
}

TEST_CASE("cache directory environment variable supplies a default path") {
    std::string dir =
        (std::filesystem::temp_directory_path() / "shortsieve_cache_dir").string();
    std::filesystem::create_directories(dir);
    setenv("SHORTSIEVE_CACHE_DIR", dir.c_str(), 1);
    CliRun r = run_cli({"sieve", "--x", "50000", "--H", "5"});
    unsetenv("SHORTSIEVE_CACHE_DIR");
    REQUIRE(r.exit_code == 0);
    CHECK(std::filesystem::exists(std::filesystem::path(dir) / "primes.bin"));
    json j = json::parse(r.out);
    CHECK(j["config"]["prime_cache_path"].get<std::string>().find("primes.bin") !=
          std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("verify-all rejects budgets under a minute") {
    CliRun r = run_cli({"verify-all", "--budget", "10"});
    CHECK(r.exit_code == 2);
}

TEST_CASE("verify-all at the minimum budget runs exact suites and skips statistics") {
    CliRun r = run_cli({"verify-all", "--budget", "60"});
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("[PASS] heath_brown_identity") != std::string::npos);
    CHECK(r.out.find("[PASS] ramare_identity") != std::string::npos);
    CHECK(r.out.find("[PASS] sieve_sandwich") != std::string::npos);
    CHECK(r.out.find("[PASS] ramare_coefficient_bounds") != std::string::npos);
    CHECK(r.out.find("[PASS] combinatorial_lemma") != std::string::npos);
    CHECK(r.out.find("[SKIPPED] landau_dual_method") != std::string::npos);
    CHECK(r.out.find("[SKIPPED] mobius_short_windows") != std::string::npos);
    CHECK(r.out.find("[FAIL]") == std::string::npos);
}

TEST_CASE("dirichlet subcommand emits the report schema") {
    CliRun r = run_cli({"dirichlet", "--op", "mvt", "--poly", "zeta:100", "--T", "100"});
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["summary"].contains("polynomial_spec"));
    CHECK(j["summary"].contains("cfg"));
    CHECK(j["summary"].contains("result"));
    CHECK(j["summary"].contains("grid_step"));
    CHECK(j["summary"].contains("converged"));
}

TEST_CASE("e2 and counterexample subcommands run end to end") {
    CliRun e2 = run_cli({"e2", "--x", "100000", "--H", "5000", "--eps", "0.3"});
    REQUIRE(e2.exit_code == 0);
    json je = json::parse(e2.out);
    CHECK(je["summary"]["total"] ==
          je["summary"]["included"].get<i64>() + je["summary"]["excluded"].get<i64>());

    CliRun ce = run_cli({"counterexample", "--x", "1000000", "--theta", "0.6"});
    REQUIRE(ce.exit_code == 0);
    json jc = json::parse(ce.out);
    CHECK(jc["summary"]["D"].get<i64>() >= 2 * jc["summary"]["window_primes"].get<i64>());
}
