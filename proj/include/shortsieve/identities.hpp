// Exact combinatorial identities: Ramare's identity, the coefficient
// sequence it produces after sieving away the coprimality condition, and
// Heath-Brown's identity for the Mobius function. Everything here runs in
// integer or rational arithmetic; the floating point type never appears in
// a verifier.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "shortsieve/arith.hpp"
#include "shortsieve/factor.hpp"
#include "shortsieve/rational.hpp"
#include "shortsieve/sieve_weights.hpp"

namespace shortsieve {

// ---------------------------------------------------------------------------
// Ramare's identity
//
//   mu(n) 1_{(n, P(P,Q)) > 1}
//     = sum_{P < p <= Q, p | n} mu(p) mu(n/p) / (omega_(P,Q](n/p) + 1)
//
// exactly whenever no p in (P, Q] has p^2 | n.
// ---------------------------------------------------------------------------

struct RamareIdentityResult {
    Rat64 lhs;
    Rat64 rhs;
    bool exact_expected = true;  // false iff some window prime divides n twice
};

inline RamareIdentityResult ramare_identity_eval(const FactorView& v, double P, double Q) {
    if (v.n < 2) throw invalid_argument_error("ramare identity requires n >= 2");
    std::vector<PrimePower> factors;
    v.for_each_prime_power([&](u64 p, u32 e) { factors.push_back({p, e}); });

    bool squarefree = true;
    int omega_all = 0;
    int omega_window = 0;
    bool window_square = false;
    auto in_window = [&](u64 p) {
        return static_cast<double>(p) > P && static_cast<double>(p) <= Q;
    };
    for (const PrimePower& pp : factors) {
        if (pp.e > 1) squarefree = false;
        ++omega_all;
        if (in_window(pp.p)) {
            ++omega_window;
            if (pp.e > 1) window_square = true;
        }
    }

    RamareIdentityResult result;
    result.exact_expected = !window_square;

    i64 mu_n = squarefree ? (omega_all % 2 == 0 ? 1 : -1) : 0;
    result.lhs = Rat64(omega_window > 0 ? mu_n : 0);

    // rhs: each distinct window prime p | n contributes
    //   mu(p) mu(n/p) / (omega_window(n/p) + 1).
    Rat64 rhs(0);
    for (const PrimePower& pp : factors) {
        if (!in_window(pp.p)) continue;
        // mu(n/p) from the factorization of n with p's exponent reduced.
        bool sf = true;
        int omega_q = 0;      // distinct primes of n/p
        int omega_q_win = 0;  // distinct window primes of n/p
        for (const PrimePower& qq : factors) {
            u32 e = qq.e - (qq.p == pp.p ? 1 : 0);
            if (e == 0) continue;
            if (e > 1) sf = false;
            ++omega_q;
            if (in_window(qq.p)) ++omega_q_win;
        }
        if (!sf) continue;  // mu(n/p) = 0
        i64 mu_q = (omega_q % 2 == 0) ? 1 : -1;
        rhs += Rat64(-mu_q, omega_q_win + 1);  // mu(p) = -1
    }
    result.rhs = rhs;
    return result;
}

inline RamareIdentityResult ramare_identity_eval(u64 n, double P, double Q) {
    FactorEntry entry = factor_single(n);
    return ramare_identity_eval(entry.view(), P, Q);
}

// ---------------------------------------------------------------------------
// The coefficient sequence a_r = (lambda+ f * w f)(r) with
//   w(r) = 1_{r <= x^{eps/4}} 1_{p | r => p in (P,Q]} / (omega_(P,Q](r) + 1).
//
// With the level y of the upper sieve, nonzero coefficients live on
// r <= y * x^{eps/4}; when y <= x^{eps/4} this is the classical bound
// x^{eps/2}.
// ---------------------------------------------------------------------------

struct RamareDecomposition {
    u64 x = 0;
    double eps = 0;
    double P = 0, Q = 0;
    double level = 0;            // sieve level y used for lambda+
    double support_bound = 0;    // y * x^{eps/4}
    std::string function = "mobius";  // the underlying f
    std::map<u64, Rat64> exact;  // f = mu: exact rational coefficients
    std::map<u64, cplx> coeff;   // general f (mirrors `exact` when f = mu)
};

namespace detail {

// Squarefree products of window primes up to `bound`, ascending primes,
// with their prime count. Includes r = 1.
inline void window_smooth_numbers(const std::vector<u64>& window_primes, double bound,
                                  std::vector<std::pair<u64, int>>& out) {
    out.clear();
    out.push_back({1, 0});
    struct Rec {
        const std::vector<u64>& primes;
        double bound;
        std::vector<std::pair<u64, int>>& out;
        void go(size_t idx, u64 value, int count) {
            for (size_t i = idx; i < primes.size(); ++i) {
                double nv = static_cast<double>(value) * static_cast<double>(primes[i]);
                if (nv > bound) break;  // primes ascend, so all later ones overflow too
                u64 next = value * primes[i];
                out.push_back({next, count + 1});
                go(i + 1, next, count + 1);
            }
        }
    };
    Rec rec{window_primes, bound, out};
    rec.go(0, 1, 0);
}

inline u64 tau_of(u64 r, const std::vector<u64>& primes) {
    u64 tau = 1;
    u64 rest = r;
    for (u64 p : primes) {
        if (p * p > rest) break;
        u32 e = 0;
        while (rest % p == 0) {
            rest /= p;
            ++e;
        }
        tau *= (e + 1);
    }
    if (rest > 1) tau *= 2;
    return tau;
}

// All window-smooth m <= bound with arbitrary exponents, visited as
// (m, distinct window primes of m, f(m)). Used for the w-side of the
// convolution with a general multiplicative f, where prime powers carry
// f's full values.
template <typename Fn>
inline void enumerate_w_support(const std::vector<u64>& window_primes,
                                const PeriodicMultiplicativeFunction& f, double bound,
                                Fn&& fn) {
    struct Rec {
        const std::vector<u64>& primes;
        const PeriodicMultiplicativeFunction& f;
        double bound;
        Fn& fn;
        void go(size_t idx, u64 value, int omega, cplx f_value) {
            fn(value, omega, f_value);
            for (size_t i = idx; i < primes.size(); ++i) {
                u64 p = primes[i];
                if (static_cast<double>(value) * static_cast<double>(p) > bound) break;
                u64 next = value;
                for (u32 e = 1;; ++e) {
                    if (static_cast<double>(next) * static_cast<double>(p) > bound) break;
                    next *= p;
                    go(i + 1, next, omega + 1, f_value * f.prime_power_value(p, e));
                }
            }
        }
    };
    Rec rec{window_primes, f, bound, fn};
    rec.go(0, 1, 0, cplx{1.0, 0.0});
}

}  // namespace detail

// Exact construction for f = mu. `level` defaults to x^{eps/4}, the largest
// level that keeps the support inside x^{eps/2}.
inline RamareDecomposition ramare_coefficients_mobius(u64 x, double eps, double P, double Q,
                                                      std::optional<double> level = {}) {
    if (x < 2 || eps <= 0) throw invalid_argument_error("ramare coefficients require x >= 2, eps > 0");
    const double x_eps4 = std::pow(static_cast<double>(x), eps / 4.0);
    const double y = level.value_or(x_eps4);
    if (y < 1) throw invalid_argument_error("sieve level y must be >= 1");

    RamareDecomposition dec;
    dec.x = x;
    dec.eps = eps;
    dec.P = P;
    dec.Q = Q;
    dec.level = y;
    dec.support_bound = y * x_eps4;

    SieveCoefficients upper = beta_sieve_coefficients(P, Q, y, SieveSign::Upper);

    std::vector<u64> window_primes;
    for_each_prime(static_cast<u64>(P), static_cast<u64>(Q),
                   [&](u64 p) { window_primes.push_back(p); });

    // w mu support: squarefree window-smooth m <= x^{eps/4} with weight
    // mu(m)/(omega(m)+1).
    std::vector<std::pair<u64, int>> w_support;
    detail::window_smooth_numbers(window_primes, x_eps4, w_support);

    // Full Dirichlet convolution over r = d*m, non-coprime pairs included.
    // lambda_d = mu(d) on the support, so lambda_d * mu(d) = 1.
    for (const auto& [d, lam] : upper.weights) {
        (void)lam;
        for (const auto& [m, omega_m] : w_support) {
            u64 r = checked_mul(d, m);
            i64 mu_m = (omega_m % 2 == 0) ? 1 : -1;
            Rat64 term = Rat64(mu_m, omega_m + 1);  // lambda_d mu(d) w(m) mu(m)
            auto [it, inserted] = dec.exact.try_emplace(r, term);
            if (!inserted) it->second += term;
        }
    }

    // Drop exact zeros, mirror into the complex map, verify invariants.
    for (auto it = dec.exact.begin(); it != dec.exact.end();) {
        if (it->second.is_zero()) {
            it = dec.exact.erase(it);
            continue;
        }
        u64 r = it->first;
        if (static_cast<double>(r) > dec.support_bound * (1 + 1e-12))
            throw consistency_error("ramare coefficient support overflow at r = " +
                                    std::to_string(r));
        Rat64 abs = it->second.abs();
        u64 tau = detail::tau_of(r, window_primes);
        if (Rat64(static_cast<i64>(tau)) < abs)
            throw consistency_error("|a_r| <= tau(r) violated at r = " + std::to_string(r));
        dec.coeff[r] = cplx(it->second.to_double(), 0.0);
        ++it;
    }
    return dec;
}

// General multiplicative f per the same convolution, a_r = (lambda+ f * w f)(r).
inline RamareDecomposition ramare_coefficients(u64 x, double eps, double P, double Q,
                                               const PeriodicMultiplicativeFunction& f,
                                               std::optional<double> level = {}) {
    const double x_eps4 = std::pow(static_cast<double>(x), eps / 4.0);
    const double y = level.value_or(x_eps4);
    RamareDecomposition dec;
    dec.x = x;
    dec.eps = eps;
    dec.P = P;
    dec.Q = Q;
    dec.level = y;
    dec.support_bound = y * x_eps4;
    dec.function = f.label;

    SieveCoefficients upper = beta_sieve_coefficients(P, Q, y, SieveSign::Upper);
    std::vector<u64> window_primes;
    for_each_prime(static_cast<u64>(P), static_cast<u64>(Q),
                   [&](u64 p) { window_primes.push_back(p); });

    // w-side support: every window-smooth m <= x^{eps/4}, prime powers
    // included, with f's full multiplicative values.
    std::vector<std::tuple<u64, int, cplx>> w_support;
    detail::enumerate_w_support(window_primes, f, x_eps4,
                                [&](u64 m, int omega, cplx fm) {
                                    w_support.emplace_back(m, omega, fm);
                                });

    auto f_squarefree = [&](u64 value) {
        cplx out = 1.0;
        u64 rest = value;
        for (u64 p : window_primes) {
            if (rest % p == 0) {
                out *= f.prime_value(p);
                rest /= p;
            }
            if (rest == 1) break;
        }
        return out;
    };

    for (const auto& [d, lam] : upper.weights) {
        cplx fd = f_squarefree(d);  // the sieve support is squarefree
        for (const auto& [m, omega_m, fm] : w_support) {
            u64 r = checked_mul(d, m);
            cplx term = static_cast<double>(lam) * fd * fm /
                        static_cast<double>(omega_m + 1);
            dec.coeff[r] += term;
        }
    }
    for (auto it = dec.coeff.begin(); it != dec.coeff.end();) {
        if (std::abs(it->second) == 0.0)
            it = dec.coeff.erase(it);
        else
            ++it;
    }
    return dec;
}

// ---------------------------------------------------------------------------
// The pre-sieve extraction step: compare the window sum of f with the
// sieved double sum over p, r, n. The defect is reported, never asserted.
// ---------------------------------------------------------------------------

struct ExtractionDefect {
    cplx lhs = 0, rhs = 0, defect = 0;
    Rat64 exact_lhs, exact_rhs, exact_defect;  // populated for f = mu
    bool exact = false;
};

namespace detail {

template <typename Value>
struct PrefixSums {
    std::vector<Value> prefix;  // prefix[n] = sum_{2 <= m <= n} value(m)
    Value range(u64 lo, u64 hi) const {  // sum over (lo, hi]
        if (hi >= prefix.size()) throw invalid_argument_error("prefix sum range overflow");
        if (hi <= lo) return Value{};
        return prefix[hi] - prefix[lo];
    }
};

}  // namespace detail

// f = mu path (exact).
inline ExtractionDefect extraction_defect_mobius(u64 x, u64 H, double P, double Q,
                                                 double eps,
                                                 std::optional<double> level = {}) {
    Interval window{x, H};
    window.validate();
    RamareDecomposition dec = ramare_coefficients_mobius(x, eps, P, Q, level);

    i64 lhs = 0;
    ArithmeticFunctionId mu = ArithmeticFunctionId::mobius();
    for_each_factorization(window, [&](const FactorView& v) { lhs += evaluate_int(v, mu); });

    // Inner n runs up to (x+H)/p for the smallest window prime p.
    u64 p_min = 0;
    for_each_prime(static_cast<u64>(P), static_cast<u64>(Q), [&](u64 p) {
        if (p_min == 0) p_min = p;
    });
    ExtractionDefect out;
    out.exact = true;
    out.exact_lhs = Rat64(lhs);
    if (p_min == 0) {  // empty prime window: rhs is the empty sum
        out.exact_rhs = Rat64(0);
    } else {
        u64 inner_max = (x + H) / p_min;
        if (inner_max > (u64{1} << 27))
            throw invalid_argument_error(
                "extraction inner range too large; raise P or shrink the window");
        std::vector<i64> mu_table = mobius_table(inner_max);
        detail::PrefixSums<i64> mertens;
        mertens.prefix.assign(inner_max + 1, 0);
        for (u64 n = 1; n <= inner_max; ++n)
            mertens.prefix[n] = mertens.prefix[n - 1] + mu_table[n];

        Rat64 rhs(0);
        for_each_prime(static_cast<u64>(P), static_cast<u64>(Q), [&](u64 p) {
            for (const auto& [r, a_r] : dec.exact) {
                u64 pr = checked_mul(p, r);
                if (pr > x + H) continue;
                u64 lo = x / pr;
                u64 hi = (x + H) / pr;
                if (hi <= lo) continue;
                i64 inner = mertens.range(lo, hi);
                if (inner == 0) continue;
                // f(p) = mu(p) = -1 at the extracted prime.
                rhs += Rat64(-inner) * a_r;
            }
        });
        out.exact_rhs = rhs;
    }
    out.exact_defect = out.exact_lhs - out.exact_rhs;
    out.lhs = cplx(out.exact_lhs.to_double(), 0);
    out.rhs = cplx(out.exact_rhs.to_double(), 0);
    out.defect = cplx(out.exact_defect.to_double(), 0);
    return out;
}

// General multiplicative f per the Remark's signed analogue.
inline ExtractionDefect extraction_defect(u64 x, u64 H, double P, double Q, double eps,
                                          const PeriodicMultiplicativeFunction& f,
                                          std::optional<double> level = {}) {
    Interval window{x, H};
    window.validate();
    RamareDecomposition dec = ramare_coefficients(x, eps, P, Q, f, level);

    cplx lhs = 0;
    for_each_factorization(window, [&](const FactorView& v) { lhs += evaluate(v, f); });

    u64 p_min = 0;
    for_each_prime(static_cast<u64>(P), static_cast<u64>(Q), [&](u64 p) {
        if (p_min == 0) p_min = p;
    });
    cplx rhs = 0;
    if (p_min != 0 && (x + H) / p_min >= 1) {
        u64 inner_max = (x + H) / p_min;
        std::vector<cplx> values(inner_max + 1, cplx{});
        values[1] = 1.0;
        if (inner_max >= 2) {
            FactorTable inner = factor_interval({1, inner_max - 1});
            for (const FactorEntry& e : inner.entries) values[e.n] = evaluate(e.view(), f);
        }
        std::vector<cplx> prefix(inner_max + 1, cplx{});
        for (u64 n = 1; n <= inner_max; ++n) prefix[n] = prefix[n - 1] + values[n];

        for_each_prime(static_cast<u64>(P), static_cast<u64>(Q), [&](u64 p) {
            cplx fp = f.prime_value(p);
            for (const auto& [r, a_r] : dec.coeff) {
                u64 pr = checked_mul(p, r);
                if (pr > x + H) continue;
                u64 lo = x / pr;
                u64 hi = (x + H) / pr;
                if (hi <= lo) continue;
                rhs += a_r * fp * (prefix[hi] - prefix[lo]);
            }
        });
    }
    ExtractionDefect out;
    out.lhs = lhs;
    out.rhs = rhs;
    out.defect = lhs - rhs;
    return out;
}

// ---------------------------------------------------------------------------
// Heath-Brown's identity:
//   mu(n) = sum_{1 <= j <= k} (-1)^{j-1} C(k,j)
//             (1^{*(j-1)} * (mu 1_{[1,X]})^{*j})(n)   for n <= X^k.
// ---------------------------------------------------------------------------

struct HeathBrownTerm {
    int j = 1;
    i64 coefficient = 1;  // (-1)^{j-1} C(k, j)
    int smooth_factors = 0;
    int mu_factors = 1;
};

struct HeathBrownDecomposition {
    int k = 1;
    double X = 1;
    std::vector<HeathBrownTerm> terms;
};

inline i64 binomial_i64(int n, int r) {
    if (r < 0 || r > n) return 0;
    i64 value = 1;
    for (int i = 0; i < r; ++i) value = value * (n - i) / (i + 1);
    return value;
}

inline HeathBrownDecomposition heath_brown_decomposition(int k, double X) {
    if (k < 1) throw invalid_argument_error("heath-brown identity requires k >= 1");
    if (X < 1) throw invalid_argument_error("heath-brown identity requires X >= 1");
    HeathBrownDecomposition dec;
    dec.k = k;
    dec.X = X;
    for (int j = 1; j <= k; ++j) {
        i64 c = binomial_i64(k, j);
        dec.terms.push_back({j, (j % 2 == 1) ? c : -c, j - 1, j});
    }
    return dec;
}

// Values of the identity's right-hand side for all n <= N (index 0 unused).
inline std::vector<i64> heath_brown_table(u64 N, int k, double X) {
    if (k < 1) throw invalid_argument_error("heath-brown identity requires k >= 1");
    if (X < 1) throw invalid_argument_error("heath-brown identity requires X >= 1");
    if (N > (u64{1} << 24))
        throw invalid_argument_error("heath-brown table limited to N <= 2^24");

    std::vector<i64> mu = mobius_table(N);
    std::vector<i64> g(N + 1, 0);  // mu(n) 1_{n <= X}
    for (u64 n = 1; n <= N; ++n)
        if (static_cast<double>(n) <= X) g[n] = mu[n];

    auto convolve = [N](const std::vector<i64>& a, const std::vector<i64>& b) {
        std::vector<i64> c(N + 1, 0);
        for (u64 d = 1; d <= N; ++d) {
            if (a[d] == 0) continue;
            for (u64 q = 1; d * q <= N; ++q)
                if (b[q] != 0) c[d * q] += a[d] * b[q];
        }
        return c;
    };
    auto convolve_ones = [N](const std::vector<i64>& a) {
        std::vector<i64> c(N + 1, 0);
        for (u64 d = 1; d <= N; ++d) {
            if (a[d] == 0) continue;
            for (u64 m = d; m <= N; m += d) c[m] += a[d];
        }
        return c;
    };

    std::vector<i64> result(N + 1, 0);
    std::vector<i64> g_power = g;  // g^{*j}
    for (int j = 1; j <= k; ++j) {
        if (j > 1) g_power = convolve(g_power, g);
        std::vector<i64> term = g_power;
        for (int s = 0; s < j - 1; ++s) term = convolve_ones(term);
        i64 coeff = binomial_i64(k, j);
        if (j % 2 == 0) coeff = -coeff;
        for (u64 n = 1; n <= N; ++n) result[n] += coeff * term[n];
    }
    return result;
}

inline i64 heath_brown_eval(u64 n, int k, double X) {
    if (n < 1) throw invalid_argument_error("heath-brown eval requires n >= 1");
    if (static_cast<double>(n) > std::pow(X, k) * (1 + 1e-12))
        throw invalid_argument_error("n > X^k: outside the identity's validity range");
    return heath_brown_table(n, k, X)[n];
}

}  // namespace shortsieve
