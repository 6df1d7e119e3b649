// Short-interval experiments: window sums of arithmetic functions against
// their predicted main terms and long-window proxies, the Landau-Ramanujan
// constant, rational approximation, twisted Mobius sums, and the
// counterexample pair that separates short from long averages.
#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "shortsieve/arith.hpp"
#include "shortsieve/common.hpp"
#include "shortsieve/factor.hpp"
#include "shortsieve/rational.hpp"

namespace shortsieve {

// ---------------------------------------------------------------------------
// Window sums
// ---------------------------------------------------------------------------

inline i64 short_sum_int(const ArithmeticFunctionId& f, const Interval& iv,
                         const FactorOptions& opt = {}) {
    f.validate();
    if (!f.integer_valued())
        throw invalid_argument_error("short_sum_int needs an integer-valued function");
    struct Acc {
        i64 value = 0;
    };
    Acc total = factor_reduce<Acc>(
        iv, [&](Acc& acc, const FactorView& v) { acc.value += evaluate_int(v, f); },
        [](Acc& a, const Acc& b) { a.value += b.value; }, opt);
    return total.value;
}

inline double short_sum_real(const ArithmeticFunctionId& f, const Interval& iv,
                             const FactorOptions& opt = {}) {
    f.validate();
    if (f.integer_valued()) return static_cast<double>(short_sum_int(f, iv, opt));
    struct Acc {
        KahanSum<double> sum;
    };
    Acc total = factor_reduce<Acc>(
        iv, [&](Acc& acc, const FactorView& v) { acc.sum.add(evaluate(v, f)); },
        [](Acc& a, const Acc& b) { a.sum.add(b.sum.value()); }, opt);
    return total.sum.value();
}

inline cplx short_sum(const ArithmeticFunctionId& f, const Interval& iv,
                      const FactorOptions& opt = {}) {
    return {short_sum_real(f, iv, opt), 0.0};
}

inline cplx short_sum(const PeriodicMultiplicativeFunction& f, const Interval& iv,
                      const FactorOptions& opt = {}) {
    f.validate();
    struct Acc {
        KahanSum<double> re, im;
    };
    Acc total = factor_reduce<Acc>(
        iv,
        [&](Acc& acc, const FactorView& v) {
            cplx value = evaluate(v, f);
            acc.re.add(value.real());
            acc.im.add(value.imag());
        },
        [](Acc& a, const Acc& b) {
            a.re.add(b.re.value());
            a.im.add(b.im.value());
        },
        opt);
    return {total.re.value(), total.im.value()};
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct WindowReport {
    Interval interval;
    std::string function;
    cplx short_sum{};
    std::optional<cplx> main_term;
    std::optional<cplx> proxy_term;  // long-window density * H
    double relative_defect_main = 0;
    double relative_defect_proxy = 0;
};

namespace detail {

inline double defect_against(cplx value, cplx term) {
    double scale = std::abs(term);
    if (scale > 0) return std::abs(value - term) / scale;
    return std::abs(value - term);
}

}  // namespace detail

inline void set_main_term(WindowReport& r, cplx term) {
    r.main_term = term;
    r.relative_defect_main = detail::defect_against(r.short_sum, term);
}

inline void set_proxy_term(WindowReport& r, cplx term) {
    r.proxy_term = term;
    r.relative_defect_proxy = detail::defect_against(r.short_sum, term);
}

// Short window against the (x, x+y1] proxy of the same function.
inline WindowReport comparison_defect(const ArithmeticFunctionId& f, u64 x, u64 H, u64 y1,
                                      const FactorOptions& opt = {}) {
    if (y1 < H) throw invalid_argument_error("comparison window requires y1 >= H");
    WindowReport report;
    report.interval = {x, H};
    report.function = f.name();
    report.short_sum = short_sum(f, {x, H}, opt);
    cplx long_sum = short_sum(f, {x, y1}, opt);
    set_proxy_term(report, long_sum * (static_cast<double>(H) / static_cast<double>(y1)));
    return report;
}

// ---------------------------------------------------------------------------
// Mobius in short windows
// ---------------------------------------------------------------------------

struct MobiusWindow {
    u64 start = 0;
    i64 sum = 0;
    double abs_over_sqrt_H = 0;  // |S| / sqrt(H), the random-model scale
};

struct MobiusBoundReport {
    u64 x = 0;
    double theta = 0, eps = 0;
    u64 H = 0;
    u64 seed = 0;
    double bound = 0;  // H / (log x)^{1/3 - eps}
    std::vector<MobiusWindow> windows;
    double max_abs = 0;
    double mean_abs_over_H = 0;
};

inline MobiusBoundReport mobius_bound_report(u64 x, double theta, double eps,
                                             unsigned n_windows, u64 seed,
                                             const FactorOptions& opt = {}) {
    MobiusBoundReport report;
    report.x = x;
    report.theta = theta;
    report.eps = eps;
    report.H = resolve_window_length(x, theta);
    report.seed = seed;
    report.bound = static_cast<double>(report.H) /
                   std::pow(std::log(static_cast<double>(x)), 1.0 / 3.0 - eps);

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<u64> pick(x, 2 * x - report.H);
    ArithmeticFunctionId mu = ArithmeticFunctionId::mobius();
    // One shared prime table covers every window start below 2x.
    std::vector<u64> primes = base_primes(detail::isqrt_u64(2 * x));
    FactorOptions shared = opt;
    shared.primes = &primes;
    double abs_total = 0;
    for (unsigned i = 0; i < n_windows; ++i) {
        MobiusWindow w;
        w.start = pick(rng);
        w.sum = short_sum_int(mu, {w.start, report.H}, shared);
        w.abs_over_sqrt_H = std::abs(static_cast<double>(w.sum)) /
                            std::sqrt(static_cast<double>(report.H));
        report.windows.push_back(w);
        report.max_abs = std::max(report.max_abs, std::abs(static_cast<double>(w.sum)));
        abs_total += std::abs(static_cast<double>(w.sum));
    }
    report.mean_abs_over_H =
        abs_total / (static_cast<double>(n_windows) * static_cast<double>(report.H));
    return report;
}

// ---------------------------------------------------------------------------
// Landau-Ramanujan constant
// ---------------------------------------------------------------------------

namespace detail {

// Euler-Maclaurin Hurwitz zeta for real s >= 2, a in (0, 1].
inline long double hurwitz_zeta_em(long double s, long double a, int K = 4096) {
    KahanSum<long double> head;
    for (int n = 0; n < K; ++n) head.add(powl(n + a, -s));
    long double Ka = K + a;
    long double tail = powl(Ka, 1 - s) / (s - 1) + powl(Ka, -s) / 2;
    // Bit of Euler-Maclaurin: B2/2! s, B4/4! s(s+1)(s+2), B6/6! ... terms.
    long double s1 = s, s3 = s * (s + 1) * (s + 2),
                s5 = s3 * (s + 3) * (s + 4);
    tail += s1 / 12.0L * powl(Ka, -s - 1);
    tail -= s3 / 720.0L * powl(Ka, -s - 3);
    tail += s5 / 30240.0L * powl(Ka, -s - 5);
    return head.value() + tail;
}

inline long double zeta_em(long double s) { return hurwitz_zeta_em(s, 1.0L); }

// L(s, chi_4) = 4^{-s} (zeta(s, 1/4) - zeta(s, 3/4)).
inline long double l_chi4_em(long double s) {
    return powl(4.0L, -s) * (hurwitz_zeta_em(s, 0.25L) - hurwitz_zeta_em(s, 0.75L));
}

}  // namespace detail

// Truncated direct product (1/sqrt2) prod_{p = 3 mod 4, p <= cutoff}
// (1 - p^{-2})^{-1/2}, optionally with the prime-tail estimate folded in.
inline double landau_truncated_product(u64 cutoff, bool tail_correction = false) {
    KahanSum<long double> log_sum;  // sum of log(1 - p^{-2}) over p = 3 mod 4
    for_each_prime(2, cutoff, [&](u64 p) {
        if (p % 4 == 3) {
            long double ip = 1.0L / static_cast<long double>(p);
            log_sum.add(log1pl(-ip * ip));
        }
    });
    long double log_c = -0.5L * logl(2.0L) - 0.5L * log_sum.value();
    if (tail_correction) {
        // sum_{p > X, p = 3 mod 4} p^{-2} ~ (1/2) int_X^inf dt / (t^2 log t).
        long double X = static_cast<long double>(cutoff);
        long double lx = logl(X);
        long double integral =
            (1.0L / (X * lx)) * (1.0L - 1.0L / lx + 2.0L / (lx * lx) - 6.0L / (lx * lx * lx));
        log_c += 0.25L * integral;
    }
    return static_cast<double>(expl(log_c));
}

// Doubly-exponentially convergent product over zeta and L values at powers
// of two:
//   C = (1/sqrt2) prod_{n>=1} [zeta(2^n)(1 - 2^{-2^n}) / L(2^n)]^{1/2^{n+1}}.
inline double landau_accelerated() {
    KahanSum<long double> log_c;
    log_c.add(-0.5L * logl(2.0L));
    for (int n = 1; n <= 6; ++n) {
        long double s = powl(2.0L, n);
        long double A =
            detail::zeta_em(s) * (1.0L - powl(2.0L, -s)) / detail::l_chi4_em(s);
        log_c.add(logl(A) / powl(2.0L, n + 1));
    }
    return static_cast<double>(expl(log_c.value()));
}

struct LandauResult {
    double value = 0;  // the accelerated value, returned as the constant
    double direct_value = 0;
    double accelerated_value = 0;
    double agreement_digits = 0;
    u64 direct_cutoff = 0;
};

inline LandauResult landau_ramanujan_constant(int target_digits,
                                              u64 direct_cutoff = 100000000ull) {
    if (target_digits < 1 || target_digits > 12)
        throw invalid_argument_error("landau constant supports 1..12 digits");
    LandauResult result;
    result.direct_cutoff = direct_cutoff;
    result.direct_value = landau_truncated_product(direct_cutoff, true);
    result.accelerated_value = landau_accelerated();
    double diff = std::abs(result.direct_value - result.accelerated_value);
    result.agreement_digits =
        diff == 0 ? 18.0 : -std::log10(diff / result.accelerated_value);
    result.value = result.accelerated_value;
    if (result.agreement_digits < target_digits) {
        throw consistency_error(
            "landau constant methods disagree: direct=" + std::to_string(result.direct_value) +
            " accelerated=" + std::to_string(result.accelerated_value));
    }
    return result;
}

inline WindowReport two_squares_window_report(u64 x, u64 H, const FactorOptions& opt = {}) {
    if (x < 2) throw invalid_argument_error("two-squares main term needs x >= 2");
    WindowReport report;
    report.interval = {x, H};
    report.function = "two_squares";
    report.short_sum =
        static_cast<double>(short_sum_int(ArithmeticFunctionId::two_squares(), {x, H}, opt));
    double C = landau_accelerated();
    set_main_term(report, C * static_cast<double>(H) /
                              std::sqrt(std::log(static_cast<double>(x))));
    return report;
}

// ---------------------------------------------------------------------------
// Divisor windows
// ---------------------------------------------------------------------------

struct DivisorMainTerm {
    double k = 2;
    enum class Kind { ExplicitPoly, Proxy } kind = Kind::Proxy;
    // ExplicitPoly: coefficients of the window density polynomial in
    // u = log x, constant term first. Only k = 1 and k = 2 are explicit.
    std::vector<double> poly;
    double long_window_density = 0;
};

struct DivisorWindowReport {
    WindowReport report;
    DivisorMainTerm main;
};

// Window sum of tau_k. For k = 2 the main term is H (log x + 2 gamma): the
// density polynomial obtained by differentiating x (log x + 2 gamma - 1).
inline DivisorWindowReport divisor_window_report(u64 x, u64 H, double k,
                                                 std::optional<u64> y1 = {},
                                                 const FactorOptions& opt = {}) {
    ArithmeticFunctionId f = ArithmeticFunctionId::divisor(k);
    f.validate();
    DivisorWindowReport out;
    out.report.interval = {x, H};
    out.report.function = f.name();
    out.report.short_sum = short_sum(f, {x, H}, opt);
    out.main.k = k;

    double logx = std::log(static_cast<double>(x));
    if (k == 1.0) {
        out.main.kind = DivisorMainTerm::Kind::ExplicitPoly;
        out.main.poly = {1.0};
        set_main_term(out.report, static_cast<double>(H));
    } else if (k == 2.0) {
        out.main.kind = DivisorMainTerm::Kind::ExplicitPoly;
        out.main.poly = {2.0 * kEulerGamma, 1.0};
        set_main_term(out.report, (logx + 2.0 * kEulerGamma) * static_cast<double>(H));
    }
    if (y1) {
        if (*y1 < H) throw invalid_argument_error("divisor proxy requires y1 >= H");
        cplx long_sum = short_sum(f, {x, *y1}, opt);
        double density = long_sum.real() / static_cast<double>(*y1);
        out.main.long_window_density = density;
        if (out.main.kind != DivisorMainTerm::Kind::ExplicitPoly)
            out.main.kind = DivisorMainTerm::Kind::Proxy;
        set_proxy_term(out.report, density * static_cast<double>(H));
    }
    return out;
}

// ---------------------------------------------------------------------------
// E2 numbers
// ---------------------------------------------------------------------------

struct E2Report {
    WindowReport report;
    double split_lo = 0;  // exp((loglog x)^2)
    double split_hi = 0;  // x^eps
    i64 total = 0;
    i64 included = 0;  // smallest prime factor in [split_lo, split_hi]
    i64 excluded = 0;
    double excluded_fraction = 0;
};

inline E2Report e2_window_report(u64 x, u64 H, double eps, std::optional<u64> y1 = {},
                                 const FactorOptions& opt = {}) {
    E2Report out;
    out.report.interval = {x, H};
    out.report.function = "e2";
    // loglog degenerates below x = 3; the count and split still make sense.
    const bool main_defined = x >= 3;
    double loglogx = main_defined ? std::log(std::log(static_cast<double>(x))) : 0.0;
    out.split_lo = main_defined ? std::exp(loglogx * loglogx) : 2.0;
    out.split_hi = std::pow(static_cast<double>(x), eps);

    struct Acc {
        i64 total = 0;
        i64 included = 0;
    };
    double lo = out.split_lo, hi = out.split_hi;
    Acc acc = factor_reduce<Acc>(
        {x, H},
        [&](Acc& a, const FactorView& v) {
            u64 omega_total = 0;
            u64 spf = v.cofactor;  // overwritten below if a sieved prime exists
            bool first = true;
            v.for_each_prime_power([&](u64 p, u32 e) {
                omega_total += e;
                if (first) {
                    spf = p;
                    first = false;
                }
            });
            if (omega_total == 2) {
                ++a.total;
                double p1 = static_cast<double>(spf);
                if (p1 >= lo && p1 <= hi) ++a.included;
            }
        },
        [](Acc& a, const Acc& b) {
            a.total += b.total;
            a.included += b.included;
        },
        opt);

    out.total = acc.total;
    out.included = acc.included;
    out.excluded = acc.total - acc.included;
    out.excluded_fraction =
        acc.total > 0 ? static_cast<double>(out.excluded) / static_cast<double>(acc.total) : 0;
    out.report.short_sum = static_cast<double>(acc.total);
    if (main_defined) {
        double logx = std::log(static_cast<double>(x));
        set_main_term(out.report, static_cast<double>(H) * loglogx / logx);
    }
    if (y1) {
        if (*y1 < H) throw invalid_argument_error("e2 proxy requires y1 >= H");
        i64 long_count = short_sum_int(ArithmeticFunctionId::e2(), {x, *y1}, opt);
        set_proxy_term(out.report, static_cast<double>(long_count) *
                                       static_cast<double>(H) / static_cast<double>(*y1));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Rational approximation (continued fractions, exact on the double's value)
// ---------------------------------------------------------------------------

struct RationalApproximation {
    double alpha = 0;
    i64 a = 0;
    u64 q = 1;
    double lambda = 0;  // alpha - a/q
    double tau = 1;
};

inline RationalApproximation rational_approx(double alpha, double tau) {
    if (!(tau >= 1)) throw invalid_argument_error("rational approximation requires tau >= 1");
    if (!(std::abs(alpha) <= 1e6) || tau > 1e12)
        throw invalid_argument_error("rational approximation guard: |alpha| <= 1e6, tau <= 1e12");

    RationalApproximation out;
    out.alpha = alpha;
    out.tau = tau;

    // Exact representation of the double: alpha = num / den with den = 2^m.
    int exp2 = 0;
    double mant = std::frexp(alpha, &exp2);
    i128 num = static_cast<i128>(std::llround(std::ldexp(mant, 53)));
    int shift = exp2 - 53;
    i128 den = 1;
    if (shift >= 0) {
        num <<= shift;
    } else {
        if (shift < -120) {  // subnormal-scale alpha: 0/1 satisfies the bound
            out.a = 0;
            out.q = 1;
            out.lambda = alpha;
            return out;
        }
        den <<= -shift;
    }

    // Continued fraction by Euclid; convergents p/q with q <= tau.
    auto floor_div = [](i128 a, i128 b) {
        i128 q = a / b;
        if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
        return q;
    };
    i128 a0 = floor_div(num, den);
    i128 rem = num - a0 * den;
    i128 pk1 = 1, qk1 = 0;  // p_{-1}, q_{-1}
    i128 pk = a0, qk = 1;   // p_0, q_0
    i128 nd = den, nr = rem;
    while (nr != 0) {
        i128 digit = nd / nr;
        i128 pn = digit * pk + pk1;
        i128 qn = digit * qk + qk1;
        if (static_cast<long double>(qn) > static_cast<long double>(tau)) break;
        pk1 = pk;
        qk1 = qk;
        pk = pn;
        qk = qn;
        i128 t = nd % nr;
        nd = nr;
        nr = t;
    }
    out.a = static_cast<i64>(pk);
    out.q = static_cast<u64>(qk);
    // lambda = alpha - a/q exactly: (num q - a den) / (den q).
    i128 delta = num * qk - pk * den;
    out.lambda = static_cast<double>(static_cast<long double>(delta) /
                                     (static_cast<long double>(den) * static_cast<long double>(qk)));
    return out;
}

// ---------------------------------------------------------------------------
// Twisted Mobius sums
// ---------------------------------------------------------------------------

struct TwistedSumReport {
    Interval interval;
    double alpha = 0;
    double B = 1;
    cplx S{};
    double abs_S = 0;
    double bound = 0;  // H / (log x)^{1/3 - eps}
    double tau = 0;    // H^2 x^{-1} (log x)^{-B}
    bool tau_valid = true;
    std::optional<RationalApproximation> approx;
    enum class Arc { Major, Minor, Unknown } arc = Arc::Unknown;

    std::string arc_name() const {
        switch (arc) {
            case Arc::Major: return "major";
            case Arc::Minor: return "minor";
            case Arc::Unknown: return "unknown";
        }
        return "?";
    }
};

inline TwistedSumReport twisted_sum_report(u64 x, u64 H, double alpha, double B,
                                           double eps = 0.0, const FactorOptions& opt = {}) {
    TwistedSumReport report;
    report.interval = {x, H};
    report.alpha = alpha;
    report.B = B;
    double logx = std::log(static_cast<double>(x));
    report.bound = static_cast<double>(H) / std::pow(logx, 1.0 / 3.0 - eps);
    report.tau = static_cast<double>(H) * static_cast<double>(H) /
                 static_cast<double>(x) * std::pow(logx, -B);
    report.tau_valid = report.tau >= 1.0;
    if (report.tau_valid) {
        report.approx = rational_approx(alpha, report.tau);
        report.arc = (static_cast<double>(report.approx->q) <= std::pow(logx, B))
                         ? TwistedSumReport::Arc::Major
                         : TwistedSumReport::Arc::Minor;
    }

    // e(alpha n) with alpha reduced mod 1 (exact for doubles) and the
    // product alpha * n reduced in long double before exponentiation.
    double alpha_red = alpha - std::floor(alpha);
    ArithmeticFunctionId mu = ArithmeticFunctionId::mobius();
    struct Acc {
        KahanSum<double> re, im;
    };
    Acc acc = factor_reduce<Acc>(
        {x, H},
        [&](Acc& a, const FactorView& v) {
            i64 m = evaluate_int(v, mu);
            if (m == 0) return;
            long double prod = static_cast<long double>(alpha_red) * v.n;
            long double frac = prod - floorl(prod);
            double angle = 2.0 * kPi * static_cast<double>(frac);
            a.re.add(m * std::cos(angle));
            a.im.add(m * std::sin(angle));
        },
        [](Acc& a, const Acc& b) {
            a.re.add(b.re.value());
            a.im.add(b.im.value());
        },
        opt);
    report.S = {acc.re.value(), acc.im.value()};
    report.abs_S = std::abs(report.S);
    return report;
}

// ---------------------------------------------------------------------------
// The Remark's counterexample pair f_1, f_2
// ---------------------------------------------------------------------------

struct CounterexampleReport {
    u64 x = 0;
    double theta = 0;
    u64 H = 0;
    i64 D = 0;              // sum over the window of f2 - f1
    u64 window_primes = 0;  // number of primes in (x, x+H]
    i64 sum_outside = 0;    // contribution of n with no prime power >= H (always 0)
    double threshold = 0;   // H / (2 log x)
};

inline CounterexampleReport counterexample_pair_report(u64 x, double theta,
                                                       const FactorOptions& opt = {}) {
    CounterexampleReport out;
    out.x = x;
    out.theta = theta;
    out.H = resolve_window_length(x, theta);
    out.threshold = static_cast<double>(out.H) / (2.0 * std::log(static_cast<double>(x)));
    const u64 H = out.H;
    if (H < 2 || checked_mul(H, H) <= x + H)
        throw invalid_argument_error("window too short: large prime-power factors would not "
                                     "determine a unique complement");

    // mu(m) for the complements m = n / p^k <= (x+H)/H.
    const u64 m_max = (x + H) / H + 1;
    std::vector<i64> mu = mobius_table(m_max);

    struct Acc {
        i64 D = 0;
        u64 primes = 0;
        i64 outside = 0;
    };
    Acc acc = factor_reduce<Acc>(
        {x, H},
        [&](Acc& a, const FactorView& v) {
            i64 f1 = 1, f2 = 1;
            int big_factors = 0;
            v.for_each_prime_power([&](u64 p, u32 e) {
                u64 pe = p;
                for (u32 i = 1; i < e; ++i) pe *= p;
                if (pe >= H) {
                    ++big_factors;
                    u64 m = v.n / pe;
                    // The complement is unique: (x/pe, (x+H)/pe] has length <= 1.
                    i64 muv = mu[m];
                    f1 *= -muv;
                    f2 *= muv;
                } else {
                    i64 muv = (e == 1) ? -1 : 0;
                    f1 *= muv;
                    f2 *= muv;
                }
            });
            if (big_factors > 1)
                throw consistency_error("two prime-power factors >= H in one integer");
            if (big_factors == 0) a.outside += f2 - f1;  // f1 == f2 == mu(n) here
            a.D += f2 - f1;
            bool is_prime = (v.prime_powers.empty() && v.cofactor == v.n) ||
                            (v.prime_powers.size() == 1 && v.cofactor == 1 &&
                             v.prime_powers[0].e == 1 && v.prime_powers[0].p == v.n);
            if (is_prime) ++a.primes;
        },
        [](Acc& a, const Acc& b) {
            a.D += b.D;
            a.primes += b.primes;
            a.outside += b.outside;
        },
        opt);
    out.D = acc.D;
    out.window_primes = acc.primes;
    out.sum_outside = acc.outside;
    return out;
}

// ---------------------------------------------------------------------------
// Eventually periodic multiplicative functions: short window vs proxy
// ---------------------------------------------------------------------------

struct PeriodicReport {
    WindowReport report;
    double error_shape = 0;  // (H/log x) prod_{p not in [P,Q]} (1 + |f(p)|/p)
    double shape_P = 0;      // exp((log x)^{2/3 + eps/2})
    double shape_Q = 0;      // x^{1/(loglog x)^2}
};

inline PeriodicReport periodic_multiplicative_report(const PeriodicMultiplicativeFunction& f,
                                                     u64 x, u64 H, u64 y1,
                                                     double shape_eps = 0.05,
                                                     const FactorOptions& opt = {}) {
    f.validate();
    if (y1 < H) throw invalid_argument_error("periodic proxy requires y1 >= H");
    PeriodicReport out;
    out.report.interval = {x, H};
    out.report.function = f.label;
    out.report.short_sum = short_sum(f, {x, H}, opt);
    cplx long_sum = short_sum(f, {x, y1}, opt);
    set_proxy_term(out.report, long_sum * (static_cast<double>(H) / static_cast<double>(y1)));

    double logx = std::log(static_cast<double>(x));
    double loglogx = std::log(logx);
    out.shape_P = std::exp(std::pow(logx, 2.0 / 3.0 + shape_eps / 2.0));
    out.shape_Q = std::pow(static_cast<double>(x), 1.0 / (loglogx * loglogx));

    // Product over actual primes to a desk cutoff, kappa-tail beyond it.
    const u64 cutoff = 100000;
    KahanSum<double> log_prod;
    for_each_prime(1, cutoff, [&](u64 p) {
        double pd = static_cast<double>(p);
        if (pd >= out.shape_P && pd <= out.shape_Q) return;
        log_prod.add(std::log1p(std::abs(f.prime_value(p)) / pd));
    });
    double tail = f.kappa * std::max(0.0, loglogx - std::log(std::log(static_cast<double>(cutoff))));
    out.error_shape = static_cast<double>(H) / logx * std::exp(log_prod.value() + tail);
    return out;
}

}  // namespace shortsieve
