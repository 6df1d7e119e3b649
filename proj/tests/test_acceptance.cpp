// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line with the measured quantities.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <random>

#include "shortsieve/shortsieve.hpp"

using namespace shortsieve;

namespace {

void report_line(int criterion, bool pass, const std::string& detail) {
    std::printf("[criterion %02d] %s — %s\n", criterion, pass ? "PASS" : "FAIL",
                detail.c_str());
    std::fflush(stdout);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

constexpr double kGoldenRatio = 1.6180339887498948;

}  // namespace

TEST_CASE("criterion 1: Heath-Brown identity is exact up to 10^4") {
    const u64 N = 10000;
    std::vector<i64> mu = mobius_table(N);
    u64 mismatches = 0;
    for (int k : {2, 3, 4}) {
        double X = std::ceil(std::pow(static_cast<double>(N), 1.0 / k)) + 1;
        std::vector<i64> values = heath_brown_table(N, k, X);
        for (u64 n = 1; n <= N; ++n)
            if (values[n] != mu[n]) ++mismatches;
    }
    bool pass = mismatches == 0;
    report_line(1, pass, "n <= 10^4, k in {2,3,4}, mismatches: " + std::to_string(mismatches));
    REQUIRE(pass);
}

TEST_CASE("criterion 2: Ramare identity is exact up to 10^5") {
    const u64 N = 100000;
    u64 mismatches = 0, checked = 0;
    for_each_factorization({1, N - 1}, [&](const FactorView& v) {
        RamareIdentityResult r = ramare_identity_eval(v, 2, 1000);
        if (!r.exact_expected) return;
        ++checked;
        if (!(r.lhs == r.rhs)) ++mismatches;
    });
    bool pass = mismatches == 0;
    report_line(2, pass,
                std::to_string(checked) + " eligible n, mismatches: " +
                    std::to_string(mismatches));
    REQUIRE(pass);
}

TEST_CASE("criterion 3: sieve sandwich for all m <= 10^5") {
    u64 violations = 0;
    for (double y : {100.0, 10000.0}) {
        for_each_factorization({1, 99999}, [&](const FactorView& v) {
            std::vector<u64> wp;
            v.for_each_prime_power([&](u64 p, u32) {
                if (p > 3 && p <= 300) wp.push_back(p);
            });
            int lower = sieve_divisor_sum(wp, y, SieveSign::Lower);
            int upper = sieve_divisor_sum(wp, y, SieveSign::Upper);
            int indicator = wp.empty() ? 1 : 0;
            if (!(lower <= indicator && indicator <= upper)) ++violations;
        });
    }
    bool pass = violations == 0;
    report_line(3, pass,
                "m <= 10^5, (P,Q] = (3,300], y in {100, 10^4}, violations: " +
                    std::to_string(violations));
    REQUIRE(pass);
}

TEST_CASE("criterion 4: |a_r| <= tau(r) over the full support") {
    // Level y = Q^2 per the worked example for these desk parameters; the
    // construction itself verifies the bound and throws on violation.
    bool pass = true;
    std::string detail;
    try {
        RamareDecomposition dec = ramare_coefficients_mobius(1000000, 0.4, 20, 100, 10000.0);
        detail = "support size " + std::to_string(dec.exact.size()) + ", bound r <= " +
                 fmt(dec.support_bound);
    } catch (const consistency_error& e) {
        pass = false;
        detail = e.what();
    }
    report_line(4, pass, detail);
    REQUIRE(pass);
}

TEST_CASE("criterion 5: combinatorial lemma on 10^5 seeded tuples") {
    std::mt19937_64 rng(20240925);
    std::uniform_int_distribution<unsigned> pick_K(1, 12);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    u64 invariant_failures = 0, oracle_disagreements = 0;
    for (int i = 0; i < 100000; ++i) {
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
        if (!case_invariant_holds(c, t)) ++invariant_failures;
        auto oracle = brute_force_classify(t);
        if (!oracle || !case_invariant_holds(*oracle, t)) ++invariant_failures;
        // when the exhaustive search finds case 1, the classifier does too
        if (oracle && oracle->kind == ClassifiedCase::Kind::Case1 &&
            c.kind != ClassifiedCase::Kind::Case1)
            ++oracle_disagreements;
    }
    bool pass = invariant_failures == 0 && oracle_disagreements == 0;
    report_line(5, pass,
                "invariant failures: " + std::to_string(invariant_failures) +
                    ", oracle disagreements: " + std::to_string(oracle_disagreements));
    REQUIRE(pass);
}

TEST_CASE("criterion 6: Mobius cancellation in 20 windows at x = 10^10") {
    MobiusBoundReport r = mobius_bound_report(10000000000ull, 0.56, 0.0, 20, 1857);
    double bound_13 = static_cast<double>(r.H) / std::pow(std::log(1e10), 1.0 / 3.0);
    bool pass = r.max_abs <= bound_13 && r.mean_abs_over_H <= 0.01;
    report_line(6, pass,
                "H = " + std::to_string(r.H) + ", max |S| = " + fmt(r.max_abs) +
                    " (bound " + fmt(bound_13) + "), mean |S|/H = " +
                    fmt(r.mean_abs_over_H) + " (bound 0.01)");
    REQUIRE(pass);
}

TEST_CASE("criterion 7: Landau-Ramanujan constant and two-squares window") {
    LandauResult c = landau_ramanujan_constant(8, 100000000ull);
    bool digits_ok = c.agreement_digits >= 8 &&
                     std::abs(c.value - 0.76422365) < 5e-9;
    WindowReport w = two_squares_window_report(10000000000ull, 10000000ull);
    bool window_ok = w.relative_defect_main <= 0.05;
    bool pass = digits_ok && window_ok;
    report_line(7, pass,
                "C = " + fmt(c.value) + " (agreement " + fmt(c.agreement_digits) +
                    " digits), window defect = " + fmt(w.relative_defect_main) +
                    " (bound 0.05)");
    REQUIRE(pass);
}

TEST_CASE("criterion 8: divisor windows at k = 2 and k = 3") {
    // k = 2: window polynomial log x + 2 gamma, cross-checked by the exact
    // hyperbola count at both endpoints.
    const u64 x2 = 1000000, H2 = 10000;
    DivisorWindowReport d2 = divisor_window_report(x2, H2, 2.0);
    auto hyperbola = [](u64 N) {
        i64 total = 0;
        for (u64 d = 1; d <= N; ++d) total += static_cast<i64>(N / d);
        return total;
    };
    i64 oracle = hyperbola(x2 + H2) - hyperbola(x2);
    bool cross_ok = d2.report.short_sum.real() == static_cast<double>(oracle);
    bool k2_ok = d2.report.relative_defect_main <= 0.01;

    DivisorWindowReport d3 = divisor_window_report(10000000000ull, 1000000ull, 3.0,
                                                   {100000000ull});
    bool k3_ok = d3.report.relative_defect_proxy <= 0.02;
    bool pass = cross_ok && k2_ok && k3_ok;
    report_line(8, pass,
                "k=2 defect " + fmt(d2.report.relative_defect_main) +
                    " (bound 0.01, hyperbola cross-check " +
                    (cross_ok ? "exact" : "FAILED") + "), k=3 proxy defect " +
                    fmt(d3.report.relative_defect_proxy) + " (bound 0.02)");
    REQUIRE(pass);
}

TEST_CASE("criterion 9: E2 window at x = 10^10") {
    E2Report r = e2_window_report(10000000000ull, 10000000ull, 0.2, {100000000ull});
    bool main_ok = r.report.relative_defect_main <= 0.15;
    bool proxy_ok = r.report.relative_defect_proxy <= 0.05;
    bool pass = main_ok && proxy_ok;
    report_line(9, pass,
                "count " + std::to_string(r.total) + ", main defect " +
                    fmt(r.report.relative_defect_main) + " (bound 0.15), proxy defect " +
                    fmt(r.report.relative_defect_proxy) + " (bound 0.05)");
    REQUIRE(pass);
}

TEST_CASE("criterion 10: rational approximation and twisted sums") {
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> alphas(-100.0, 100.0);
    std::uniform_real_distribution<double> taus(1.0, 1e9);
    u64 bound_failures = 0;
    for (int i = 0; i < 1000; ++i) {
        double alpha = alphas(rng);
        double tau = taus(rng);
        RationalApproximation r = rational_approx(alpha, tau);
        long double lhs = fabsl(static_cast<long double>(r.lambda)) *
                          static_cast<long double>(r.q) * static_cast<long double>(tau);
        if (lhs > 1.0L + 1e-9L) ++bound_failures;
        if (std::gcd(static_cast<u64>(std::llabs(r.a)), r.q) != 1) ++bound_failures;
    }

    const u64 x = 10000000000ull;
    const u64 H = resolve_window_length(x, 0.61);
    double bound = static_cast<double>(H) / std::pow(std::log(1e10), 1.0 / 3.0);
    std::mt19937_64 wrng(7171);
    std::uniform_int_distribution<u64> pick(x, 2 * x - H);
    std::vector<u64> primes = base_primes(detail::isqrt_u64(2 * x));
    FactorOptions opt;
    opt.primes = &primes;
    double max_abs = 0;
    for (int i = 0; i < 10; ++i) {
        u64 start = pick(wrng);
        TwistedSumReport t = twisted_sum_report(start, H, kGoldenRatio, 2.0, 0.0, opt);
        max_abs = std::max(max_abs, t.abs_S);
    }
    bool pass = bound_failures == 0 && max_abs <= bound;
    report_line(10, pass,
                "Dirichlet-bound failures: " + std::to_string(bound_failures) +
                    ", twisted max |S| = " + fmt(max_abs) + " (bound " + fmt(bound) + ")");
    REQUIRE(pass);
}

TEST_CASE("criterion 11: mean value theorem shape") {
    double zeta_ratio = mvt_ratio(DirichletPolynomial::zeta_partial(1000), 1000.0);
    bool zeta_ok = zeta_ratio >= 1.0 / 3.0 && zeta_ratio <= 3.0;

    // Random +-1 ensemble at T = 10^4 (T >> N keeps the diagonal dominant;
    // at T = N the ratio concentrates at T/(T+2N) = 0.2 by construction).
    std::mt19937_64 rng(5150);
    std::uniform_int_distribution<int> coin(0, 1);
    const u64 N = 1000;
    const double T = 10000.0;
    int in_band = 0;
    const int trials = 100;
    for (int i = 0; i < trials; ++i) {
        std::vector<double> a(N);
        for (auto& v : a) v = coin(rng) ? 1.0 : -1.0;
        double r = mvt_ratio(DirichletPolynomial::coeffs(N, a), T);
        if (r >= 1.0 / 3.0 && r <= 3.0) ++in_band;
    }
    bool random_ok = in_band >= 95;
    bool pass = zeta_ok && random_ok;
    report_line(11, pass,
                "zeta ratio = " + fmt(zeta_ratio) + " (band [1/3, 3]), random in-band " +
                    std::to_string(in_band) + "/100 at T = 10^4 (need >= 95)");
    REQUIRE(pass);
}

TEST_CASE("criterion 12: large-value fraction of the prime polynomial") {
    DirichletPolynomial p = DirichletPolynomial::primes(1000, 0);
    double rms2 = 0;
    for (size_t i = 0; i < p.a.size(); ++i)
        if (p.a[i] != 0) rms2 += 1.0 / static_cast<double>(p.first + i);
    double threshold = 10.0 * std::sqrt(rms2);
    MeanValueConfig cfg{10.0, 10000.0, 0.02, 0.0};
    LargeValueReport r = large_value_measure(p, threshold, cfg, 4);
    bool pass = r.fraction <= 0.02;
    report_line(12, pass,
                "threshold " + fmt(threshold) + ", fraction " + fmt(r.fraction) +
                    " (bound 0.02), sup " + fmt(r.sup_observed) +
                    (r.converged ? "" : " [grid not converged]"));
    REQUIRE(pass);
}

TEST_CASE("criterion 13: counterexample pair at x = 10^8") {
    CounterexampleReport r = counterexample_pair_report(100000000ull, 0.6);
    bool pass = static_cast<double>(r.D) >= r.threshold && r.sum_outside == 0;
    report_line(13, pass,
                "D = " + std::to_string(r.D) + " (threshold " + fmt(r.threshold) +
                    "), window primes " + std::to_string(r.window_primes));
    REQUIRE(pass);
}
