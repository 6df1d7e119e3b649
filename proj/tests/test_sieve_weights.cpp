#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "shortsieve/factor.hpp"
#include "shortsieve/sieve_weights.hpp"

using namespace shortsieve;

namespace {

// Distinct primes of m inside (P, Q], ascending.
std::vector<u64> window_primes_of(u64 m, double P, double Q) {
    std::vector<u64> out;
    for (const PrimePower& pp : factor_single(m).complete())
        if (static_cast<double>(pp.p) > P && static_cast<double>(pp.p) <= Q)
            out.push_back(pp.p);
    return out;
}

}  // namespace

TEST_CASE("empty prime window leaves only the unit weight") {
    for (double y : {1.0, 100.0, 1e6}) {
        for (SieveSign sign : {SieveSign::Upper, SieveSign::Lower}) {
            SieveCoefficients c = beta_sieve_coefficients(8, 10, y, sign);
            CHECK(c.weights == std::map<u64, int>{{1, 1}});
        }
    }
}

TEST_CASE("level validation") {
    CHECK_THROWS_AS(beta_sieve_coefficients(3, 30, 0.5, SieveSign::Upper),
                    invalid_argument_error);
    CHECK_THROWS_AS(beta_sieve_coefficients(30, 3, 10, SieveSign::Upper),
                    invalid_argument_error);
}

TEST_CASE("weights carry the Mobius sign and lambda_1 = 1") {
    SieveCoefficients c = beta_sieve_coefficients(3, 30, 1e4, SieveSign::Upper);
    CHECK(c.weight(1) == 1);
    for (const auto& [d, w] : c.weights) {
        int omega = static_cast<int>(factor_single(d).complete().size());
        CHECK(std::abs(w) == 1);
        CHECK(w == ((omega % 2 == 0) ? 1 : -1));
    }
}

TEST_CASE("upper-sieve support respects the level") {
    SieveCoefficients c = beta_sieve_coefficients(3, 300, 1e4, SieveSign::Upper);
    for (const auto& [d, w] : c.weights) {
        (void)w;
        CHECK(static_cast<double>(d) <= 1e4);
    }
}

TEST_CASE("membership predicate agrees with the enumerated map") {
    for (SieveSign sign : {SieveSign::Upper, SieveSign::Lower}) {
        double y = 5000;
        SieveCoefficients c = beta_sieve_coefficients(3, 100, y, sign);
        // enumerate all squarefree products of window primes up to 10^6
        std::vector<u64> window;
        for_each_prime(3, 100, [&](u64 p) { window.push_back(p); });
        std::vector<std::vector<u64>> stack{{}};
        std::vector<u64> values{1};
        for (size_t i = 0; i < values.size(); ++i) {
            u64 v = values[i];
            std::vector<u64> primes = stack[i];
            for (u64 p : window) {
                if (!primes.empty() && p <= primes.back()) continue;
                if (v > 1000000 / p) continue;
                std::vector<u64> np = primes;
                np.push_back(p);
                values.push_back(v * p);
                stack.push_back(np);
            }
        }
        for (size_t i = 0; i < values.size(); ++i) {
            std::vector<u64> desc(stack[i].rbegin(), stack[i].rend());
            int predicate = beta_sieve_weight(desc, y, sign);
            CHECK(predicate == c.weight(values[i]));
        }
    }
}

TEST_CASE("the upper sum at m = 1 is exactly the indicator") {
    CHECK(sieve_divisor_sum({}, 123.0, SieveSign::Upper) == 1);
    CHECK(sieve_divisor_sum({}, 123.0, SieveSign::Lower) == 1);
}

TEST_CASE("sandwich for squarefree m from primes in (3, 30]") {
    double y = 1e4;
    // all squarefree m <= 10^5 composed of primes in (3, 30]
    std::vector<u64> window;
    for_each_prime(3, 30, [&](u64 p) { window.push_back(p); });
    std::vector<u64> values{1};
    std::vector<std::vector<u64>> stack{{}};
    for (size_t i = 0; i < values.size(); ++i) {
        for (u64 p : window) {
            if (!stack[i].empty() && p <= stack[i].back()) continue;
            if (values[i] > 100000 / p) continue;
            values.push_back(values[i] * p);
            auto np = stack[i];
            np.push_back(p);
            stack.push_back(np);
        }
    }
    for (size_t i = 0; i < values.size(); ++i) {
        std::vector<u64> asc = stack[i];
        int lower = sieve_divisor_sum(asc, y, SieveSign::Lower);
        int upper = sieve_divisor_sum(asc, y, SieveSign::Upper);
        int indicator = asc.empty() ? 1 : 0;
        CHECK(lower <= indicator);
        CHECK(indicator <= upper);
    }
}

TEST_CASE("sandwich for every m <= 30000 across windows and levels") {
    FactorTable t = factor_interval({1, 29999});
    struct Config {
        double P, Q, y;
    };
    for (Config c : {Config{3, 300, 100}, Config{3, 300, 10000}, Config{10, 80, 2000}}) {
        for (const FactorEntry& e : t.entries) {
            std::vector<u64> wp;
            for (const PrimePower& pp : e.complete())
                if (static_cast<double>(pp.p) > c.P && static_cast<double>(pp.p) <= c.Q)
                    wp.push_back(pp.p);
            int lower = sieve_divisor_sum(wp, c.y, SieveSign::Lower);
            int upper = sieve_divisor_sum(wp, c.y, SieveSign::Upper);
            int indicator = wp.empty() ? 1 : 0;
            REQUIRE(lower <= indicator);
            REQUIRE(indicator <= upper);
        }
    }
}

TEST_CASE("window primes helper used by the sandwich checks") {
    CHECK(window_primes_of(105, 3, 30) == std::vector<u64>{5, 7});
    CHECK(window_primes_of(105, 2, 30) == std::vector<u64>{3, 5, 7});
    CHECK(window_primes_of(64, 3, 30).empty());
}
