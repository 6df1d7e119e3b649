#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "shortsieve/identities.hpp"

using namespace shortsieve;

TEST_CASE("rational arithmetic basics") {
    CHECK(Rat64(1, 2) + Rat64(1, 3) == Rat64(5, 6));
    CHECK(Rat64(1, 2) - Rat64(1, 2) == Rat64(0));
    CHECK(Rat64(2, 4) == Rat64(1, 2));
    CHECK(Rat64(-3, -6) == Rat64(1, 2));
    CHECK(Rat64(1, -2) == Rat64(-1, 2));
    CHECK((Rat64(2, 3) * Rat64(3, 4)) == Rat64(1, 2));
    CHECK((Rat64(1, 3) / Rat64(2, 3)) == Rat64(1, 2));
    CHECK(Rat64(-5, 7).abs() == Rat64(5, 7));
    CHECK(Rat64(1, 3) < Rat64(1, 2));
    CHECK_THROWS_AS(Rat64(1, 0), invalid_argument_error);
    CHECK_THROWS_AS(Rat64(1, 2) / Rat64(0), invalid_argument_error);
}

TEST_CASE("ramare identity point examples") {
    SECTION("n = 15 over (2, 10]") {
        RamareIdentityResult r = ramare_identity_eval(15, 2, 10);
        CHECK(r.rhs == Rat64(1));  // 1/2 + 1/2
        CHECK(r.lhs == Rat64(1));
        CHECK(r.exact_expected);
    }
    SECTION("n = 7: single window prime") {
        RamareIdentityResult r = ramare_identity_eval(7, 2, 10);
        CHECK(r.lhs == Rat64(-1));
        CHECK(r.rhs == Rat64(-1));
    }
    SECTION("n = 11: no window prime") {
        RamareIdentityResult r = ramare_identity_eval(11, 2, 10);
        CHECK(r.lhs == Rat64(0));
        CHECK(r.rhs == Rat64(0));
    }
    SECTION("n = 9 = 3^2: squared window prime flagged") {
        RamareIdentityResult r = ramare_identity_eval(9, 2, 10);
        CHECK_FALSE(r.exact_expected);
    }
}

TEST_CASE("ramare identity is exact for eligible n <= 20000") {
    FactorTable t = factor_interval({1, 19999});
    u64 checked = 0;
    for (const FactorEntry& e : t.entries) {
        RamareIdentityResult r = ramare_identity_eval(e.view(), 2, 1000);
        if (!r.exact_expected) continue;
        ++checked;
        REQUIRE(r.lhs == r.rhs);
    }
    CHECK(checked > 15000);
}

TEST_CASE("ramare coefficients: a_1 = 1") {
    RamareDecomposition dec = ramare_coefficients_mobius(1000000, 0.4, 20, 100, 10000.0);
    REQUIRE(dec.exact.count(1) == 1);
    CHECK(dec.exact.at(1) == Rat64(1));
}

TEST_CASE("ramare coefficients: hand convolution at small support points") {
    // Parameters with x^{eps/4} ~ 63 and level high enough that every
    // window prime (and prime pair) is in the upper support. With
    // lambda_d = mu(d) on the support:
    //   a_p     = lambda_p mu(p) w(1) + lambda_1 w(p) mu(p) = 1 - 1/2 = 1/2
    //   a_{p^2} = lambda_p mu(p) w(p) mu(p)                 = -1/2
    //   a_{pq}  = 1 - 1/2 - 1/2                             = 0
    RamareDecomposition dec = ramare_coefficients_mobius(1000000, 1.2, 20, 100, 1000000.0);
    REQUIRE(dec.exact.count(23) == 1);
    CHECK(dec.exact.at(23) == Rat64(1, 2));
    REQUIRE(dec.exact.count(29) == 1);
    CHECK(dec.exact.at(29) == Rat64(1, 2));
    REQUIRE(dec.exact.count(23 * 23) == 1);
    CHECK(dec.exact.at(23 * 23) == Rat64(-1, 2));
    CHECK(dec.exact.count(23 * 29) == 0);  // exact cancellation
}

TEST_CASE("ramare coefficients at desk parameters hold the tau bound") {
    // At x = 10^6, eps = 0.4 the w-support is m = 1 only and the level
    // y = Q^2 admits no single prime (p^3 > y for p > 20), so the
    // coefficient list degenerates to a_1 = 1. Construction verifies
    // |a_r| <= tau(r) and the support bound; a throw would mean failure.
    RamareDecomposition dec = ramare_coefficients_mobius(1000000, 0.4, 20, 100, 10000.0);
    CHECK(dec.exact.size() == 1);
    CHECK(dec.exact.at(1) == Rat64(1));
    double x_eps4 = std::pow(1e6, 0.1);
    CHECK(dec.support_bound == Catch::Approx(10000.0 * x_eps4));

    // A non-degenerate parameter set exercises the bound across hundreds
    // of support points.
    RamareDecomposition big = ramare_coefficients_mobius(1000000, 1.6, 10, 200, 100000.0);
    CHECK(big.exact.size() > 100);
}

TEST_CASE("ramare coefficients support stays below x^{eps/2} at the default level") {
    u64 x = 1000000;
    double eps = 1.2;
    RamareDecomposition dec = ramare_coefficients_mobius(x, eps, 20, 100);
    double bound = std::pow(static_cast<double>(x), eps / 2);
    for (const auto& [r, a] : dec.exact) {
        (void)a;
        CHECK(static_cast<double>(r) <= bound * (1 + 1e-9));
    }
}

TEST_CASE("general-f coefficients match the mobius path for f = mu") {
    PeriodicMultiplicativeFunction mu_like;
    mu_like.modulus = 1;
    mu_like.residue_values = {{0, -1.0}};
    mu_like.rule = PeriodicMultiplicativeFunction::PowerRule::Explicit;
    mu_like.kappa = 1;
    // squarefree d, m only: Explicit powers are never consulted
    RamareDecomposition general = ramare_coefficients(1000000, 1.2, 20, 100, mu_like, 1e6);
    RamareDecomposition exact = ramare_coefficients_mobius(1000000, 1.2, 20, 100, 1e6);
    REQUIRE(general.coeff.size() == exact.exact.size());
    for (const auto& [r, a] : exact.exact) {
        REQUIRE(general.coeff.count(r) == 1);
        CHECK(general.coeff.at(r).real() == Catch::Approx(a.to_double()).margin(1e-12));
    }
}

TEST_CASE("general-f coefficients include prime-power support points") {
    // f = tau_2, window (2, 10], x^{eps/4} = 100, y = 100: the upper sieve
    // support is {1, 3} and the w-support includes m = 9 with f(9) = 3.
    // Hand convolution: a_3 = w(3)f(3) + lambda_3 f(3) = 1 - 2 = -1,
    //                   a_9 = w(9)f(9) + lambda_3 f(3) w(3) f(3) = 3/2 - 2 = -1/2.
    PeriodicMultiplicativeFunction tau2;
    tau2.modulus = 1;
    tau2.residue_values = {{0, 2.0}};
    tau2.rule = PeriodicMultiplicativeFunction::PowerRule::DivisorLike;
    tau2.divisor_k = 2.0;
    tau2.kappa = 2;
    RamareDecomposition dec = ramare_coefficients(10000, 2.0, 2, 10, tau2, 100.0);
    REQUIRE(dec.coeff.count(3) == 1);
    CHECK(dec.coeff.at(3).real() == Catch::Approx(-1.0));
    REQUIRE(dec.coeff.count(9) == 1);
    CHECK(dec.coeff.at(9).real() == Catch::Approx(-0.5));
}

TEST_CASE("pre-sieve split is an exact partition") {
    // sum mu = sum mu 1_{(n, P) > 1} + sum mu 1_{(n, P) = 1}, exactly.
    Interval iv{100000, 5000};
    double P = 50, Q = 1000;
    i64 total = 0, with_factor = 0, without_factor = 0;
    for_each_factorization(iv, [&](const FactorView& v) {
        i64 mu = evaluate_int(v, ArithmeticFunctionId::mobius());
        bool has = false;
        v.for_each_prime_power([&](u64 p, u32) {
            if (static_cast<double>(p) > P && static_cast<double>(p) <= Q) has = true;
        });
        total += mu;
        (has ? with_factor : without_factor) += mu;
    });
    CHECK(total == with_factor + without_factor);
}

TEST_CASE("extraction defect: empty rhs when the window has no eligible product") {
    // The window contains a single prime beyond Q, so the triple sum is empty.
    ExtractionDefect d = extraction_defect_mobius(100, 1, 2, 10, 0.4);
    CHECK(d.exact_rhs == Rat64(0));
    CHECK(d.exact_defect == d.exact_lhs);
    CHECK(d.exact_lhs == Rat64(-1));  // mu(101)
}

TEST_CASE("extraction defect at desk parameters is diagnostically small") {
    ExtractionDefect d = extraction_defect_mobius(1000000, 10000, 50, 1000, 0.4);
    double bound = 10.0 * 10000 * std::log(50.0) / std::log(1000.0);
    CHECK(std::abs(d.defect) <= bound);
    CHECK(d.exact);
}

TEST_CASE("general extraction matches a divisor-enumeration oracle") {
    PeriodicMultiplicativeFunction tau2;
    tau2.modulus = 1;
    tau2.residue_values = {{0, 2.0}};
    tau2.rule = PeriodicMultiplicativeFunction::PowerRule::DivisorLike;
    tau2.divisor_k = 2.0;
    tau2.kappa = 2;

    const u64 x = 1000, H = 100;
    const double P = 2, Q = 10, eps = 2.0, y = 100.0;
    ExtractionDefect d = extraction_defect(x, H, P, Q, eps, tau2, y);

    // oracle: enumerate every representation k = p * r * n directly,
    // using the same coefficients (same x, so same w-support bound)
    RamareDecomposition dec = ramare_coefficients(x, eps, P, Q, tau2, y);
    auto f_of = [&](u64 n) { return evaluate(factor_single(n).view(), tau2); };
    cplx rhs_oracle = 0;
    for (u64 k = x + 1; k <= x + H; ++k) {
        for (u64 p : {3ull, 5ull, 7ull}) {
            if (k % p != 0) continue;
            u64 rest = k / p;
            for (u64 r = 1; r <= rest; ++r) {
                if (rest % r != 0) continue;
                auto it = dec.coeff.find(r);
                if (it == dec.coeff.end()) continue;
                rhs_oracle += it->second * f_of(p) * f_of(rest / r);
            }
        }
    }
    CHECK(std::abs(d.rhs - rhs_oracle) < 1e-9 * std::max(1.0, std::abs(rhs_oracle)));

    cplx lhs_oracle = 0;
    for (u64 k = x + 1; k <= x + H; ++k) lhs_oracle += f_of(k);
    CHECK(std::abs(d.lhs - lhs_oracle) < 1e-9 * std::abs(lhs_oracle));
}

TEST_CASE("heath-brown decomposition shape") {
    HeathBrownDecomposition dec = heath_brown_decomposition(4, 10.0);
    REQUIRE(dec.terms.size() == 4);
    CHECK(dec.terms[0].coefficient == 4);
    CHECK(dec.terms[1].coefficient == -6);
    CHECK(dec.terms[2].coefficient == 4);
    CHECK(dec.terms[3].coefficient == -1);
    for (int j = 1; j <= 4; ++j) {
        CHECK(dec.terms[j - 1].smooth_factors == j - 1);
        CHECK(dec.terms[j - 1].mu_factors == j);
    }
}

TEST_CASE("heath-brown identity point examples") {
    CHECK(heath_brown_eval(1, 2, 10) == 1);
    CHECK(heath_brown_eval(1, 5, 3) == 1);
    CHECK(heath_brown_eval(7, 2, 10) == -1);   // prime below X
    CHECK(heath_brown_eval(97, 2, 10) == -1);  // prime above X, below X^2
    CHECK(heath_brown_eval(60, 2, 8) == 0);
}

TEST_CASE("heath-brown identity equals mu on its validity range") {
    const u64 N = 3000;
    std::vector<i64> mu = mobius_table(N);
    for (int k : {2, 3}) {
        double X = std::ceil(std::pow(static_cast<double>(N), 1.0 / k)) + 1;
        std::vector<i64> values = heath_brown_table(N, k, X);
        for (u64 n = 1; n <= N; ++n) REQUIRE(values[n] == mu[n]);
    }
}

TEST_CASE("heath-brown eval rejects n beyond X^k") {
    CHECK_THROWS_AS(heath_brown_eval(101, 2, 10), invalid_argument_error);
    CHECK_NOTHROW(heath_brown_eval(100, 2, 10));
}
