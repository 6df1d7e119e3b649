// Rosser-Iwaniec linear sieve weights (beta = 2) over a prime window
// (P, Q] with level y.
//
// lambda_d = mu(d) on the support sets
//   D+ : p1 > ... > pr in (P, Q],  p1...pm * pm^2 <= y at every odd m <= r
//   D- : same with the condition at every even m <= r
// and 0 otherwise; d = 1 always carries weight +1. The divisor sums of
// these weights sandwich the indicator of having no prime factor in the
// window.
#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "shortsieve/common.hpp"
#include "shortsieve/primes.hpp"

namespace shortsieve {

enum class SieveSign { Upper, Lower };

struct SieveCoefficients {
    double P = 2, Q = 3;
    double level = 1;  // y
    SieveSign sign = SieveSign::Upper;
    std::map<u64, int> weights;  // d -> lambda_d in {-1, +1}; absent means 0

    int weight(u64 d) const {
        auto it = weights.find(d);
        return it == weights.end() ? 0 : it->second;
    }
};

// Membership test for a squarefree d given its primes in descending order.
// Returns mu(d) if d is in the support for this sign, else 0.
inline int beta_sieve_weight(std::span<const u64> primes_desc, double y, SieveSign sign) {
    if (y < 1) throw invalid_argument_error("sieve level y must be >= 1");
    double product = 1.0;
    for (size_t m = 1; m <= primes_desc.size(); ++m) {
        double p = static_cast<double>(primes_desc[m - 1]);
        if (m >= 2 && p >= static_cast<double>(primes_desc[m - 2]))
            throw invalid_argument_error("sieve weight expects strictly descending primes");
        product *= p;
        bool checkpoint = (sign == SieveSign::Upper) ? (m % 2 == 1) : (m % 2 == 0);
        if (checkpoint && product * p * p > y) return 0;
    }
    return primes_desc.size() % 2 == 0 ? 1 : -1;
}

inline SieveCoefficients beta_sieve_coefficients(double P, double Q, double y,
                                                 SieveSign sign) {
    if (!(2 <= P && P < Q)) throw invalid_argument_error("sieve window requires 2 <= P < Q");
    if (y < 1) throw invalid_argument_error("sieve level y must be >= 1");

    SieveCoefficients coeffs;
    coeffs.P = P;
    coeffs.Q = Q;
    coeffs.level = y;
    coeffs.sign = sign;
    coeffs.weights[1] = 1;

    std::vector<u64> window;  // descending
    for_each_prime(static_cast<u64>(P), static_cast<u64>(Q),
                   [&](u64 p) { window.push_back(p); });
    std::reverse(window.begin(), window.end());

    // DFS over descending prime products; a prefix that fails its own
    // checkpoint cannot be completed, a prefix past y cannot pass any
    // later checkpoint.
    struct Walker {
        const std::vector<u64>& window;
        double y;
        SieveSign sign;
        std::map<u64, int>& weights;

        void extend(size_t next_idx, u64 d, double product, size_t len) {
            for (size_t i = next_idx; i < window.size(); ++i) {
                u64 p = window[i];
                double np = product * static_cast<double>(p);
                size_t m = len + 1;
                bool checkpoint = (sign == SieveSign::Upper) ? (m % 2 == 1) : (m % 2 == 0);
                if (checkpoint &&
                    np * static_cast<double>(p) * static_cast<double>(p) > y)
                    continue;  // smaller primes may still pass this checkpoint
                u64 nd = d * p;
                if (weights.size() >= 5000000)
                    throw invalid_argument_error("sieve support too large; lower y or Q");
                weights[nd] = (m % 2 == 0) ? 1 : -1;
                // Once the product exceeds y no extension can pass its next
                // checkpoint (the parity alternates), so recursion stops.
                if (np <= y) extend(i + 1, nd, np, m);
            }
        }
    };

    Walker walker{window, y, sign, coeffs.weights};
    walker.extend(0, 1, 1.0, 0);
    return coeffs;
}

// Divisor sum of the sieve weights over d | (m, P(P,Q)), given the distinct
// window primes of m in ascending order.
inline int sieve_divisor_sum(std::span<const u64> window_primes_asc, double y,
                             SieveSign sign) {
    const size_t w = window_primes_asc.size();
    if (w > 25) throw invalid_argument_error("too many window primes for divisor sum");
    int total = 0;
    std::vector<u64> desc;
    for (u64 mask = 0; mask < (u64{1} << w); ++mask) {
        desc.clear();
        for (size_t i = w; i-- > 0;)
            if (mask & (u64{1} << i)) desc.push_back(window_primes_asc[i]);
        total += beta_sieve_weight(desc, y, sign);
    }
    return total;
}

}  // namespace shortsieve
