// Arithmetic functions evaluated from factorizations: mu, tau_k, omega
// variants, the two-squares and E2 indicators, von Mangoldt, and
// user-specified multiplicative functions that are eventually periodic on
// the primes.
#pragma once

#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "shortsieve/factor.hpp"

namespace shortsieve {

// C(k+e-1, e) for real k: the value of the k-fold divisor function at p^e.
inline double generalized_binomial(double k, u32 e) {
    double v = 1.0;
    for (u32 j = 0; j < e; ++j) v *= (k + j) / (j + 1);
    return v;
}

struct ArithmeticFunctionId {
    enum class Kind {
        Mobius,
        Divisor,        // tau_k, real k >= 1
        OmegaDistinct,  // omega(n)
        OmegaTotal,     // Omega(n)
        OmegaRange,     // distinct primes in (P, Q]
        TwoSquares,     // 1 iff n = a^2 + b^2
        E2,             // 1 iff Omega(n) = 2
        VonMangoldt,
    };

    Kind kind = Kind::Mobius;
    double k = 2.0;       // Divisor
    u64 P = 0, Q = 0;     // OmegaRange

    static ArithmeticFunctionId mobius() { return {Kind::Mobius}; }
    static ArithmeticFunctionId divisor(double k) {
        ArithmeticFunctionId f{Kind::Divisor};
        f.k = k;
        return f;
    }
    static ArithmeticFunctionId omega_distinct() { return {Kind::OmegaDistinct}; }
    static ArithmeticFunctionId omega_total() { return {Kind::OmegaTotal}; }
    static ArithmeticFunctionId omega_range(u64 P, u64 Q) {
        ArithmeticFunctionId f{Kind::OmegaRange};
        f.P = P;
        f.Q = Q;
        return f;
    }
    static ArithmeticFunctionId two_squares() { return {Kind::TwoSquares}; }
    static ArithmeticFunctionId e2() { return {Kind::E2}; }
    static ArithmeticFunctionId von_mangoldt() { return {Kind::VonMangoldt}; }

    void validate() const {
        if (kind == Kind::Divisor && !(k >= 1.0 && std::isfinite(k)))
            throw invalid_argument_error("DIVISOR requires finite real k >= 1");
        if (kind == Kind::OmegaRange && !(2 <= P && P < Q))
            throw invalid_argument_error("OMEGA_RANGE requires 2 <= P < Q");
    }

    // Integer-valued functions can be summed exactly in 64-bit arithmetic.
    bool integer_valued() const {
        switch (kind) {
            case Kind::Divisor:
                return k == std::floor(k);
            case Kind::VonMangoldt:
                return false;
            default:
                return true;
        }
    }

    std::string name() const {
        switch (kind) {
            case Kind::Mobius: return "mobius";
            case Kind::Divisor: {
                std::ostringstream os;
                os << "divisor(" << k << ")";
                return os.str();
            }
            case Kind::OmegaDistinct: return "omega";
            case Kind::OmegaTotal: return "omega_total";
            case Kind::OmegaRange: {
                std::ostringstream os;
                os << "omega(" << P << "," << Q << "]";
                return os.str();
            }
            case Kind::TwoSquares: return "two_squares";
            case Kind::E2: return "e2";
            case Kind::VonMangoldt: return "von_mangoldt";
        }
        return "?";
    }
};

inline double evaluate(const FactorView& v, const ArithmeticFunctionId& f) {
    using Kind = ArithmeticFunctionId::Kind;
    switch (f.kind) {
        case Kind::Mobius: {
            int count = 0;
            bool squarefree = true;
            v.for_each_prime_power([&](u64, u32 e) {
                if (e > 1) squarefree = false;
                ++count;
            });
            if (!squarefree) return 0.0;
            return (count % 2 == 0) ? 1.0 : -1.0;
        }
        case Kind::Divisor: {
            double value = 1.0;
            v.for_each_prime_power([&](u64, u32 e) { value *= generalized_binomial(f.k, e); });
            return value;
        }
        case Kind::OmegaDistinct: {
            int count = 0;
            v.for_each_prime_power([&](u64, u32) { ++count; });
            return count;
        }
        case Kind::OmegaTotal: {
            u64 total = 0;
            v.for_each_prime_power([&](u64, u32 e) { total += e; });
            return static_cast<double>(total);
        }
        case Kind::OmegaRange: {
            int count = 0;
            v.for_each_prime_power([&](u64 p, u32) {
                if (f.P < p && p <= f.Q) ++count;
            });
            return count;
        }
        case Kind::TwoSquares: {
            bool ok = true;
            v.for_each_prime_power([&](u64 p, u32 e) {
                if (p % 4 == 3 && e % 2 == 1) ok = false;
            });
            return ok ? 1.0 : 0.0;
        }
        case Kind::E2: {
            u64 total = 0;
            v.for_each_prime_power([&](u64, u32 e) { total += e; });
            return total == 2 ? 1.0 : 0.0;
        }
        case Kind::VonMangoldt: {
            u64 base = 0;
            int distinct = 0;
            v.for_each_prime_power([&](u64 p, u32) {
                base = p;
                ++distinct;
            });
            return distinct == 1 ? std::log(static_cast<double>(base)) : 0.0;
        }
    }
    return 0.0;
}

// Exact value for integer-valued function ids.
inline i64 evaluate_int(const FactorView& v, const ArithmeticFunctionId& f) {
    if (!f.integer_valued())
        throw invalid_argument_error("function is not integer-valued: " + f.name());
    double value = evaluate(v, f);
    return static_cast<i64>(std::llround(value));
}

inline std::vector<double> evaluate_function(const FactorTable& table,
                                             const ArithmeticFunctionId& f) {
    f.validate();
    std::vector<double> values;
    values.reserve(table.entries.size());
    for (const FactorEntry& entry : table.entries) values.push_back(evaluate(entry.view(), f));
    return values;
}

// Multiplicative function eventually periodic on the primes: f(p) depends
// only on p mod D once p >= max(n0, D); smaller primes carry explicit
// values. Prime powers follow one of three extension rules.
struct PeriodicMultiplicativeFunction {
    enum class PowerRule { CompletelyMultiplicative, Explicit, DivisorLike };

    u64 modulus = 1;    // D
    u64 threshold = 1;  // n0
    std::map<u64, cplx> residue_values;            // b mod D (gcd(b, D) = 1) -> f(p)
    std::map<u64, cplx> small_prime_values;        // p -> f(p) for p < max(n0, D)
    PowerRule rule = PowerRule::CompletelyMultiplicative;
    std::map<std::pair<u64, u32>, cplx> explicit_powers;  // (p, e) -> f(p^e)
    double divisor_k = 2.0;                        // DivisorLike parameter
    double kappa = 2.0;                            // |f(n)| <= tau_kappa(n)
    std::string label = "periodic";

    void validate() const {
        if (modulus < 1) throw invalid_argument_error("periodic spec requires D >= 1");
        if (kappa < 1) throw invalid_argument_error("periodic spec requires kappa >= 1");
        for (const auto& [b, v] : residue_values) {
            if (std::gcd(b % modulus, modulus) != 1)
                throw invalid_argument_error("residue class not coprime to D");
            if (std::abs(v) > kappa + 1e-12)
                throw invalid_argument_error("|f(p)| exceeds kappa on a residue class");
        }
        for (const auto& [p, v] : small_prime_values) {
            (void)p;
            if (std::abs(v) > kappa + 1e-12)
                throw invalid_argument_error("|f(p)| exceeds kappa on a small prime");
        }
    }

    cplx prime_value(u64 p) const {
        auto it = small_prime_values.find(p);
        if (it != small_prime_values.end()) return it->second;
        if (std::gcd(p % modulus, modulus) != 1) {
            throw invalid_argument_error("prime " + std::to_string(p) +
                                         " divides D and has no explicit value");
        }
        auto rit = residue_values.find(p % modulus);
        if (rit == residue_values.end()) {
            throw invalid_argument_error("no value for residue class " +
                                         std::to_string(p % modulus) + " (prime " +
                                         std::to_string(p) + ")");
        }
        return rit->second;
    }

    cplx prime_power_value(u64 p, u32 e) const {
        if (e == 1) return prime_value(p);
        switch (rule) {
            case PowerRule::CompletelyMultiplicative: {
                cplx base = prime_value(p);
                cplx v = 1.0;
                for (u32 i = 0; i < e; ++i) v *= base;
                return v;
            }
            case PowerRule::Explicit: {
                auto it = explicit_powers.find({p, e});
                if (it == explicit_powers.end()) {
                    throw invalid_argument_error(
                        "no explicit value for prime power (" + std::to_string(p) + "," +
                        std::to_string(e) + ")");
                }
                return it->second;
            }
            case PowerRule::DivisorLike:
                return generalized_binomial(divisor_k, e);
        }
        return 0.0;
    }
};

inline cplx evaluate(const FactorView& v, const PeriodicMultiplicativeFunction& f) {
    cplx value = 1.0;
    v.for_each_prime_power([&](u64 p, u32 e) { value *= f.prime_power_value(p, e); });
    return value;
}

inline std::vector<cplx> evaluate_periodic_multiplicative(
    const FactorTable& table, const PeriodicMultiplicativeFunction& f) {
    f.validate();
    std::vector<cplx> values;
    values.reserve(table.entries.size());
    for (const FactorEntry& entry : table.entries) values.push_back(evaluate(entry.view(), f));
    return values;
}

// Mobius values for 1..N via a smallest-prime-factor sieve.
inline std::vector<i64> mobius_table(u64 N) {
    if (N > (u64{1} << 31))
        throw invalid_argument_error("mobius_table limited to N <= 2^31");
    std::vector<i64> mu(N + 1, 0);
    if (N >= 1) mu[1] = 1;
    std::vector<u32> spf(N + 1, 0);
    std::vector<u64> primes;
    for (u64 i = 2; i <= N; ++i) {
        if (spf[i] == 0) {
            spf[i] = static_cast<u32>(i);
            primes.push_back(i);
            mu[i] = -1;
        }
        for (u64 p : primes) {
            if (p > spf[i] || i * p > N) break;
            spf[i * p] = static_cast<u32>(p);
            mu[i * p] = (p == spf[i]) ? 0 : -mu[i];
        }
    }
    return mu;
}

}  // namespace shortsieve
