// Dirichlet polynomials on vertical lines: evaluation, mean-value
// integrals, the Montgomery mean-value ratio, large-value measurements and
// pointwise decay diagnostics for prime-supported polynomials.
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "shortsieve/arith.hpp"
#include "shortsieve/common.hpp"
#include "shortsieve/primes.hpp"

namespace shortsieve {

struct DirichletPolynomial {
    enum class Support { ZetaPartial, ZetaLogPartial, Primes, MuTruncated, Coeffs };

    Support support = Support::ZetaPartial;
    u64 N = 1;          // coefficient range (N, 2N] except for Primes
    u64 P1 = 0;         // Primes: range (P1, min(2 P1, Q_cap)]
    u64 Q_cap = 0;      // 0 means no cap
    double X = 0;       // MuTruncated cutoff
    u64 first = 2;      // smallest n with a coefficient
    std::vector<double> a;  // coefficients for n = first .. first + a.size() - 1

    static DirichletPolynomial zeta_partial(u64 N) {
        DirichletPolynomial p;
        p.support = Support::ZetaPartial;
        p.N = N;
        p.first = N + 1;
        p.a.assign(N, 1.0);
        return p;
    }
    static DirichletPolynomial zeta_log_partial(u64 N) {
        DirichletPolynomial p;
        p.support = Support::ZetaLogPartial;
        p.N = N;
        p.first = N + 1;
        p.a.resize(N);
        for (u64 i = 0; i < N; ++i) p.a[i] = std::log(static_cast<double>(N + 1 + i));
        return p;
    }
    static DirichletPolynomial primes(u64 P1, u64 Q_cap = 0) {
        if (P1 < 1) throw invalid_argument_error("prime polynomial requires P1 >= 1");
        DirichletPolynomial p;
        p.support = Support::Primes;
        p.P1 = P1;
        p.Q_cap = Q_cap;
        p.N = P1;
        u64 hi = 2 * P1;
        if (Q_cap != 0) hi = std::min(hi, Q_cap);
        p.first = P1 + 1;
        if (hi >= p.first) {
            p.a.assign(hi - P1, 0.0);
            for_each_prime(P1, hi, [&](u64 q) { p.a[q - p.first] = 1.0; });
        }
        return p;
    }
    static DirichletPolynomial mu_truncated(u64 N, double X) {
        DirichletPolynomial p;
        p.support = Support::MuTruncated;
        p.N = N;
        p.X = X;
        p.first = N + 1;
        p.a.assign(N, 0.0);
        std::vector<i64> mu = mobius_table(2 * N);
        for (u64 i = 0; i < N; ++i)
            if (static_cast<double>(N + 1 + i) <= X) p.a[i] = static_cast<double>(mu[N + 1 + i]);
        return p;
    }
    static DirichletPolynomial coeffs(u64 N, std::vector<double> values) {
        if (values.size() != N)
            throw invalid_argument_error("COEFFS polynomial needs one value per n in (N, 2N]");
        DirichletPolynomial p;
        p.support = Support::Coeffs;
        p.N = N;
        p.first = N + 1;
        p.a = std::move(values);
        return p;
    }

    size_t terms() const { return a.size(); }
    u64 last() const { return first + a.size() - 1; }

    void validate() const {
        if (support != Support::Coeffs) {
            double cap = std::log(2.0 * static_cast<double>(std::max<u64>(N, 2)));
            for (double v : a)
                if (std::abs(v) > cap + 1e-9)
                    throw consistency_error("built-in coefficient exceeds log(2N)");
        }
    }

    std::string spec_string() const {
        switch (support) {
            case Support::ZetaPartial: return "zeta_partial(N=" + std::to_string(N) + ")";
            case Support::ZetaLogPartial: return "zeta_log_partial(N=" + std::to_string(N) + ")";
            case Support::Primes:
                return "primes(P1=" + std::to_string(P1) + ",cap=" + std::to_string(Q_cap) + ")";
            case Support::MuTruncated:
                return "mu_truncated(N=" + std::to_string(N) + ",X=" + std::to_string(X) + ")";
            case Support::Coeffs: return "coeffs(N=" + std::to_string(N) + ")";
        }
        return "?";
    }
};

// Direct summation of sum a(n) n^{-sigma} e^{-i t log n}, compensated.
inline cplx eval(const DirichletPolynomial& poly, double sigma, double t) {
    KahanSum<double> re, im;
    for (size_t i = 0; i < poly.a.size(); ++i) {
        if (poly.a[i] == 0.0) continue;
        double n = static_cast<double>(poly.first + i);
        double logn = std::log(n);
        double mag = poly.a[i] * std::exp(-sigma * logn);
        double phase = -t * logn;
        re.add(mag * std::cos(phase));
        im.add(mag * std::sin(phase));
    }
    return {re.value(), im.value()};
}

// Values on the uniform grid t_j = T0 + j*step, j = 0..count-1, using a
// per-term phase recurrence with periodic resync against drift.
inline std::vector<cplx> eval_grid(const DirichletPolynomial& poly, double sigma, double T0,
                                   double step, size_t count) {
    std::vector<cplx> out(count, cplx{});
    if (count == 0) return out;
    constexpr size_t kBlock = 4096;
    std::vector<size_t> active;
    active.reserve(poly.a.size());
    for (size_t i = 0; i < poly.a.size(); ++i)
        if (poly.a[i] != 0.0) active.push_back(i);

    for (size_t block = 0; block < count; block += kBlock) {
        size_t len = std::min(kBlock, count - block);
        double t0 = T0 + static_cast<double>(block) * step;
        for (size_t i : active) {
            double n = static_cast<double>(poly.first + i);
            double logn = std::log(n);
            double mag = poly.a[i] * std::exp(-sigma * logn);
            cplx z = std::polar(mag, -t0 * logn);
            cplx w = std::polar(1.0, -step * logn);
            for (size_t j = 0; j < len; ++j) {
                out[block + j] += z;
                z *= w;
            }
        }
    }
    return out;
}

struct MeanValueConfig {
    double T0 = 1;
    double T1 = 10;
    double step = 0;  // <= 0 picks the default 0.05 / log(2 N_max)
    double y1 = 0;    // comparison length, recorded in reports

    void validate() const {
        if (!(0 < T0 && T0 < T1)) throw invalid_argument_error("need 0 < T0 < T1");
    }
};

inline double default_grid_step(const std::vector<DirichletPolynomial>& polys) {
    u64 n_max = 2;
    for (const auto& p : polys) n_max = std::max(n_max, p.last());
    return 0.05 / std::log(static_cast<double>(std::max<u64>(n_max, 3)));
}

struct IntegralResult {
    double value = 0;
    double grid_step = 0;
    bool converged = false;
};

namespace detail {

inline std::vector<double> product_abs_on_grid(const std::vector<DirichletPolynomial>& polys,
                                               double T0, double step, size_t count) {
    std::vector<double> abs_prod(count, 1.0);
    for (const auto& poly : polys) {
        std::vector<cplx> values = eval_grid(poly, 0.5, T0, step, count);
        for (size_t j = 0; j < count; ++j) abs_prod[j] *= std::abs(values[j]);
    }
    return abs_prod;
}

}  // namespace detail

// Trapezoid estimate of int_{T0}^{T1} |prod_j poly_j(1/2 + it)| dt with
// grid-halving until the value moves by < 1%.
inline IntegralResult mean_value_integral(const std::vector<DirichletPolynomial>& polys,
                                          const MeanValueConfig& cfg,
                                          int max_halvings = 8) {
    if (polys.empty()) throw invalid_argument_error("mean_value_integral needs polynomials");
    cfg.validate();
    double step = cfg.step > 0 ? cfg.step : default_grid_step(polys);

    auto integral_at = [&](double s) {
        size_t count = static_cast<size_t>(std::ceil((cfg.T1 - cfg.T0) / s)) + 1;
        if (count < 2) count = 2;
        if (count > 50000000)
            throw invalid_argument_error("integration grid too fine; raise the step");
        double h = (cfg.T1 - cfg.T0) / static_cast<double>(count - 1);
        std::vector<double> vals = detail::product_abs_on_grid(polys, cfg.T0, h, count);
        KahanSum<double> acc;
        for (size_t j = 0; j < count; ++j)
            acc.add((j == 0 || j == count - 1 ? 0.5 : 1.0) * vals[j]);
        return acc.value() * h;
    };

    double prev = integral_at(step);
    for (int i = 0; i < max_halvings; ++i) {
        step /= 2;
        double next = integral_at(step);
        double scale = std::max(std::abs(next), 1e-300);
        if (std::abs(next - prev) < 0.01 * scale) return {next, step, true};
        prev = next;
    }
    return {prev, step, false};
}

// int_0^T |poly(1/2+it)|^2 dt by exact termwise integration:
//   T sum |a_n|^2 / n + 2 sum_{m<n} a_m a_n (mn)^{-1/2} sin(T log(n/m)) / log(n/m).
// The Montgomery mean-value shape predicts this is comparable with
// (T + 2N) sum |a_n|^2 / n; the returned value is that ratio.
inline double mvt_ratio(const DirichletPolynomial& poly, double T) {
    if (T <= 0) throw invalid_argument_error("mvt_ratio requires T > 0");
    if (poly.terms() > 200000)
        throw invalid_argument_error("polynomial too long for the pairwise integral");
    std::vector<size_t> active;
    for (size_t i = 0; i < poly.a.size(); ++i)
        if (poly.a[i] != 0.0) active.push_back(i);
    if (active.empty()) throw invalid_argument_error("mvt_ratio of an empty polynomial");

    double diag = 0;
    std::vector<double> logn(active.size()), coef(active.size());
    for (size_t i = 0; i < active.size(); ++i) {
        double n = static_cast<double>(poly.first + active[i]);
        logn[i] = std::log(n);
        coef[i] = poly.a[active[i]] / std::sqrt(n);
        diag += coef[i] * coef[i];
    }
    KahanSum<double> cross;
    for (size_t i = 0; i < active.size(); ++i) {
        for (size_t j = i + 1; j < active.size(); ++j) {
            double delta = logn[j] - logn[i];
            cross.add(2.0 * coef[i] * coef[j] * std::sin(T * delta) / delta);
        }
    }
    double integral = T * diag + cross.value();
    double denom = (T + 2.0 * static_cast<double>(poly.N)) * diag;
    return integral / denom;
}

struct LargeValueReport {
    double threshold = 0;
    double measure_estimate = 0;  // fraction * (T1 - T0)
    double fraction = 0;
    double sup_observed = 0;
    double grid_step = 0;
    bool converged = false;
};

inline LargeValueReport large_value_measure(const DirichletPolynomial& poly, double threshold,
                                            const MeanValueConfig& cfg,
                                            int max_halvings = 6) {
    if (threshold <= 0) throw invalid_argument_error("threshold must be positive");
    cfg.validate();
    double step = cfg.step > 0 ? cfg.step : default_grid_step({poly});

    auto measure_at = [&](double s, double& sup) {
        size_t count = static_cast<size_t>(std::ceil((cfg.T1 - cfg.T0) / s)) + 1;
        if (count < 2) count = 2;
        if (count > 50000000)
            throw invalid_argument_error("sampling grid too fine; raise the step");
        double h = (cfg.T1 - cfg.T0) / static_cast<double>(count - 1);
        std::vector<cplx> values = eval_grid(poly, 0.5, cfg.T0, h, count);
        size_t exceed = 0;
        sup = 0;
        for (const cplx& v : values) {
            double m = std::abs(v);
            sup = std::max(sup, m);
            if (m > threshold) ++exceed;
        }
        return static_cast<double>(exceed) / static_cast<double>(count);
    };

    LargeValueReport report;
    report.threshold = threshold;
    double sup = 0;
    double prev = measure_at(step, sup);
    bool converged = false;
    for (int i = 0; i < max_halvings; ++i) {
        step /= 2;
        double next = measure_at(step, sup);
        if (std::abs(next - prev) <= std::max(0.01 * next, 1e-6)) {
            prev = next;
            converged = true;
            break;
        }
        prev = next;
    }
    report.fraction = prev;
    report.measure_estimate = prev * (cfg.T1 - cfg.T0);
    report.sup_observed = sup;
    report.grid_step = step;
    report.converged = converged;
    return report;
}

struct PrimeDecayRow {
    double t = 0;
    double measured = 0;   // |P(1 + it)|
    double reference = 0;  // P1^{-sigma} log^3 x + log x / (|t| + 1)
};

// Diagnostic table only; nothing here is provable at desk scale.
inline std::vector<PrimeDecayRow> pointwise_prime_decay(u64 P1, u64 Q_cap, double x,
                                                        double sigma,
                                                        const std::vector<double>& t_samples) {
    DirichletPolynomial poly = DirichletPolynomial::primes(P1, Q_cap);
    std::vector<PrimeDecayRow> rows;
    rows.reserve(t_samples.size());
    double logx = std::log(x);
    for (double t : t_samples) {
        PrimeDecayRow row;
        row.t = t;
        row.measured = std::abs(eval(poly, 1.0, t));
        row.reference = std::pow(static_cast<double>(P1), -sigma) * logx * logx * logx +
                        logx / (std::abs(t) + 1.0);
        rows.push_back(row);
    }
    return rows;
}

struct SupResult {
    double sup = 0;
    double attained_t = 0;
    double implied_exponent = 0;  // log(sup) / log(N)
    double grid_step = 0;
};

inline SupResult zeta_partial_sup(u64 N, const MeanValueConfig& cfg) {
    if (N < 2) throw invalid_argument_error("zeta_partial_sup requires N >= 2");
    // A degenerate range [T0, T0] is allowed here: the sup of one point.
    if (!(0 < cfg.T0 && cfg.T0 <= cfg.T1))
        throw invalid_argument_error("need 0 < T0 <= T1");
    DirichletPolynomial poly = DirichletPolynomial::zeta_partial(N);
    double step = cfg.step > 0 ? cfg.step : default_grid_step({poly});
    size_t count = static_cast<size_t>(std::ceil((cfg.T1 - cfg.T0) / step)) + 1;
    if (count < 1) count = 1;
    double h = count > 1 ? (cfg.T1 - cfg.T0) / static_cast<double>(count - 1) : 0.0;
    std::vector<cplx> values = eval_grid(poly, 0.5, cfg.T0, h == 0 ? 1.0 : h, count);
    SupResult result;
    result.grid_step = h;
    for (size_t j = 0; j < count; ++j) {
        double m = std::abs(values[j]);
        if (m > result.sup) {
            result.sup = m;
            result.attained_t = cfg.T0 + static_cast<double>(j) * h;
        }
    }
    result.implied_exponent = std::log(result.sup) / std::log(static_cast<double>(N));
    return result;
}

}  // namespace shortsieve
