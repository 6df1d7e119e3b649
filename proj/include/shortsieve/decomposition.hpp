// Classification of exponent tuples and of dyadic factorization cases.
//
// The classification lemma: for alphas in (0,1] with sum in [1-eps, 1],
// either some subset sums into [0.45, 0.55] (case 1) or the indices split
// as I1 u I2 u {r} with both block sums <= 0.46 (case 2). The greedy
// classifier realizes the lemma's proof; the brute-force oracle below it
// exists for cross-checking.
#pragma once

#include <algorithm>
#include <bit>
#include <optional>
#include <string>
#include <vector>

#include "shortsieve/common.hpp"

namespace shortsieve {

inline constexpr double kCase1Lo = 0.45;
inline constexpr double kCase1Hi = 0.55;
inline constexpr double kCase2Cap = 0.46;
inline constexpr int kMaxClassifyK = 20;

struct ExponentTuple {
    std::vector<double> alphas;
    double epsilon = 0.01;

    void validate() const {
        if (alphas.empty()) throw invalid_argument_error("exponent tuple requires K >= 1");
        if (!(epsilon > 0)) throw invalid_argument_error("exponent tuple requires eps > 0");
        double total = 0;
        for (double a : alphas) {
            if (!(a > 0.0 && a <= 1.0))
                throw invalid_argument_error("exponents must lie in (0, 1]");
            total += a;
        }
        if (total < 1.0 - epsilon - 1e-12 || total > 1.0 + 1e-12)
            throw invalid_argument_error("exponent sum must lie in [1 - eps, 1]");
    }
};

struct ClassifiedCase {
    enum class Kind { Case1, Case2 };
    Kind kind = Kind::Case1;
    std::vector<int> I;   // case 1 subset (0-based indices)
    std::vector<int> I1;  // case 2 blocks
    std::vector<int> I2;
    int r = -1;           // case 2 leftover index
};

namespace detail {

inline std::vector<double> subset_sums(const std::vector<double>& alphas) {
    const size_t K = alphas.size();
    std::vector<double> sum(size_t{1} << K, 0.0);
    for (u64 mask = 1; mask < (u64{1} << K); ++mask) {
        u64 low = mask & (mask - 1);
        sum[mask] = sum[low] + alphas[std::countr_zero(mask)];
    }
    return sum;
}

inline std::vector<int> mask_to_indices(u64 mask) {
    std::vector<int> out;
    while (mask) {
        out.push_back(std::countr_zero(mask));
        mask &= mask - 1;
    }
    return out;
}

// Lexicographic order on the ascending index sequences of two sets.
inline bool lex_less(u64 a, u64 b) {
    while (a || b) {
        if (!a) return true;   // prefix
        if (!b) return false;
        int ia = std::countr_zero(a);
        int ib = std::countr_zero(b);
        if (ia != ib) return ia < ib;
        a &= a - 1;
        b &= b - 1;
    }
    return false;
}

}  // namespace detail

inline bool case_invariant_holds(const ClassifiedCase& c, const ExponentTuple& t) {
    const int K = static_cast<int>(t.alphas.size());
    auto block_sum = [&](const std::vector<int>& idx) {
        double s = 0;
        for (int i : idx) s += t.alphas[i];
        return s;
    };
    if (c.kind == ClassifiedCase::Kind::Case1) {
        double s = block_sum(c.I);
        return s >= kCase1Lo && s <= kCase1Hi;
    }
    // Partition check for case 2.
    std::vector<int> seen(K, 0);
    for (int i : c.I1) ++seen[i];
    for (int i : c.I2) ++seen[i];
    if (c.r < 0 || c.r >= K) return false;
    ++seen[c.r];
    for (int s : seen)
        if (s != 1) return false;
    return block_sum(c.I1) <= kCase2Cap && block_sum(c.I2) <= kCase2Cap;
}

// Greedy classifier from the lemma's proof. Case-1 subsets are searched in
// increasing size then lexicographic order; the case-2 block is the subset
// with the largest sum <= 0.55 (ties: lexicographically smallest set), and
// the leftover r is the largest index outside it.
inline ClassifiedCase classify_exponents(const ExponentTuple& t) {
    t.validate();
    const int K = static_cast<int>(t.alphas.size());
    if (K > kMaxClassifyK)
        throw invalid_argument_error("classify_exponents supports K <= 20");
    std::vector<double> sum = detail::subset_sums(t.alphas);

    // Case 1: first subset (by size, then lex) with sum in [0.45, 0.55].
    for (int size = 1; size <= K; ++size) {
        std::vector<int> idx(size);
        for (int i = 0; i < size; ++i) idx[i] = i;
        while (true) {
            u64 mask = 0;
            for (int i : idx) mask |= u64{1} << i;
            if (sum[mask] >= kCase1Lo && sum[mask] <= kCase1Hi) {
                ClassifiedCase c;
                c.kind = ClassifiedCase::Kind::Case1;
                c.I = idx;
                return c;
            }
            int pos = size - 1;
            while (pos >= 0 && idx[pos] == K - size + pos) --pos;
            if (pos < 0) break;
            ++idx[pos];
            for (int i = pos + 1; i < size; ++i) idx[i] = idx[i - 1] + 1;
        }
    }

    // Case 2: maximal subset with sum <= 0.55.
    u64 best = 0;
    for (u64 mask = 0; mask < (u64{1} << K); ++mask) {
        if (sum[mask] > kCase1Hi) continue;
        if (sum[mask] > sum[best] ||
            (sum[mask] == sum[best] && detail::lex_less(mask, best)))
            best = mask;
    }
    ClassifiedCase c;
    c.kind = ClassifiedCase::Kind::Case2;
    c.I1 = detail::mask_to_indices(best);
    for (int i = K - 1; i >= 0; --i) {
        if (!(best & (u64{1} << i))) {
            c.r = i;
            break;
        }
    }
    for (int i = 0; i < K; ++i)
        if (i != c.r && !(best & (u64{1} << i))) c.I2.push_back(i);
    return c;
}

// Exhaustive oracle: scans all subsets for case 1, then all (I1, r) splits
// for case 2. Independent of the greedy path; returns nullopt only if
// neither case exists (the lemma says this cannot happen on valid input).
inline std::optional<ClassifiedCase> brute_force_classify(const ExponentTuple& t) {
    t.validate();
    const int K = static_cast<int>(t.alphas.size());
    if (K > 20) throw invalid_argument_error("brute_force_classify supports K <= 20");
    auto subset_sum = [&](u64 mask) {
        double s = 0;
        for (int i = 0; i < K; ++i)
            if (mask & (u64{1} << i)) s += t.alphas[i];
        return s;
    };
    for (u64 mask = 1; mask < (u64{1} << K); ++mask) {
        double s = subset_sum(mask);
        if (s >= kCase1Lo && s <= kCase1Hi) {
            ClassifiedCase c;
            c.kind = ClassifiedCase::Kind::Case1;
            c.I = detail::mask_to_indices(mask);
            return c;
        }
    }
    for (int r = 0; r < K; ++r) {
        u64 rest = ((u64{1} << K) - 1) & ~(u64{1} << r);
        for (u64 m1 = rest;; m1 = (m1 - 1) & rest) {
            u64 m2 = rest & ~m1;
            if (subset_sum(m1) <= kCase2Cap && subset_sum(m2) <= kCase2Cap) {
                ClassifiedCase c;
                c.kind = ClassifiedCase::Kind::Case2;
                c.I1 = detail::mask_to_indices(m1);
                c.I2 = detail::mask_to_indices(m2);
                c.r = r;
                return c;
            }
            if (m1 == 0) break;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Dyadic factorization cases and the lemma that handles each of them.
// ---------------------------------------------------------------------------

struct DyadicCase {
    double x = 1;                 // target scale: P1 * R * prod N_i ~ x
    double P1 = 1, R = 1;
    std::vector<double> N;        // sizes N_1..N_{2k-1}; inactive slots are <= 1
    int k = 1;
    double theta = 0.55, epsilon = 0.01;
    std::vector<bool> smooth;     // true: coefficients 1 or log; false: mu-truncated

    void validate() const {
        if (k < 1) throw invalid_argument_error("dyadic case requires k >= 1");
        if (N.size() != static_cast<size_t>(2 * k - 1))
            throw invalid_argument_error("dyadic case requires 2k-1 sizes");
        if (smooth.size() != N.size())
            throw invalid_argument_error("dyadic case requires one smooth flag per size");
        double mu_cap = std::pow(2.0 * x, 1.0 / k) * (1 + 1e-9);
        double product = P1 * R;
        for (size_t i = 0; i < N.size(); ++i) {
            if (N[i] < 0.5) throw invalid_argument_error("dyadic sizes must be >= 1/2");
            if (!smooth[i] && N[i] > mu_cap)
                throw invalid_argument_error("mu-truncated factor exceeds (2x)^{1/k}");
            product *= N[i];
        }
        double slack = std::pow(2.0, 2.0 * k + 2.0);
        if (product > x * slack || product < x / slack)
            throw invalid_argument_error("dyadic sizes do not multiply to ~x");
    }
};

struct LemmaTag {
    enum class Kind { TypeI, TypeII, TypeI_II, Unhandled };
    Kind kind = Kind::Unhandled;
    std::vector<int> I;       // TypeII subset
    std::vector<int> I1, I2;  // TypeI_II partition
    int index = -1;           // TypeI index or TypeI_II leftover r

    std::string name() const {
        switch (kind) {
            case Kind::TypeI: return "type_I";
            case Kind::TypeII: return "type_II";
            case Kind::TypeI_II: return "type_I_II";
            case Kind::Unhandled: return "unhandled";
        }
        return "?";
    }
};

// Maps a dyadic case to the first applicable estimate at theta = 0.55 + eps:
// a balanced subset (type II), then one long smooth factor (type I), then a
// two-block split around a smooth leftover (type I/II). Unhandled otherwise.
inline LemmaTag map_case_to_lemma(const DyadicCase& c) {
    c.validate();
    const double logx = std::log(c.x);
    const double eps = c.epsilon;
    std::vector<int> active;  // indices with N_i > 1
    for (size_t i = 0; i < c.N.size(); ++i)
        if (c.N[i] > 1.0) active.push_back(static_cast<int>(i));
    if (active.size() > 24)
        throw invalid_argument_error("too many active factors for subset search");
    std::vector<double> u(active.size());
    for (size_t i = 0; i < active.size(); ++i) u[i] = std::log(c.N[active[i]]) / logx;

    // Type II: subset with product in [x^{0.45-eps/2}, x^{0.55+eps/2}].
    const double lo2 = 0.45 - eps / 2, hi2 = 0.55 + eps / 2;
    for (u64 mask = 1; mask < (u64{1} << active.size()); ++mask) {
        double s = 0;
        for (size_t i = 0; i < active.size(); ++i)
            if (mask & (u64{1} << i)) s += u[i];
        if (s >= lo2 && s <= hi2) {
            LemmaTag tag;
            tag.kind = LemmaTag::Kind::TypeII;
            for (size_t i = 0; i < active.size(); ++i)
                if (mask & (u64{1} << i)) tag.I.push_back(active[i]);
            return tag;
        }
    }

    // Type I: one smooth factor of size >= x^{0.45+2eps}.
    const double lo1 = 0.45 + 2 * eps;
    for (size_t i = 0; i < active.size(); ++i) {
        if (c.smooth[active[i]] && u[i] >= lo1) {
            LemmaTag tag;
            tag.kind = LemmaTag::Kind::TypeI;
            tag.index = active[i];
            return tag;
        }
    }

    // Type I/II: remove one smooth index r, split the rest into two blocks
    // of product <= x^{0.46+eps/8} each.
    const double cap = 0.46 + eps / 8;
    for (size_t ri = 0; ri < active.size(); ++ri) {
        if (!c.smooth[active[ri]]) continue;
        double rest_total = 0;
        for (size_t i = 0; i < active.size(); ++i)
            if (i != ri) rest_total += u[i];
        std::vector<int> rest;
        for (size_t i = 0; i < active.size(); ++i)
            if (i != ri) rest.push_back(static_cast<int>(i));
        for (u64 mask = 0; mask < (u64{1} << rest.size()); ++mask) {
            double s1 = 0;
            for (size_t i = 0; i < rest.size(); ++i)
                if (mask & (u64{1} << i)) s1 += u[rest[i]];
            double s2 = rest_total - s1;
            if (s1 <= cap && s2 <= cap) {
                LemmaTag tag;
                tag.kind = LemmaTag::Kind::TypeI_II;
                tag.index = active[ri];
                for (size_t i = 0; i < rest.size(); ++i) {
                    if (mask & (u64{1} << i))
                        tag.I1.push_back(active[rest[i]]);
                    else
                        tag.I2.push_back(active[rest[i]]);
                }
                // Inactive slots ride along in I2 to complete the partition.
                for (size_t i = 0; i < c.N.size(); ++i) {
                    if (c.N[i] <= 1.0 && static_cast<int>(i) != active[ri])
                        tag.I2.push_back(static_cast<int>(i));
                }
                std::sort(tag.I2.begin(), tag.I2.end());
                return tag;
            }
        }
    }
    return LemmaTag{};
}

// Enumerates dyadic cases reachable from the signed-convolution identity at
// a given k: exponent multisets on a grid with at most max_active nontrivial
// factors, mu-truncated slots filled first (they cap at (2x)^{1/k}).
inline std::vector<DyadicCase> enumerate_dyadic_cases(int k, double x, double eps,
                                                      double grid_step, int max_active) {
    if (k < 1 || grid_step <= 0 || max_active < 1)
        throw invalid_argument_error("bad dyadic enumeration parameters");
    if (grid_step < 0.005 || max_active > 6)
        throw invalid_argument_error("dyadic enumeration too large: grid >= 0.005, "
                                     "max_active <= 6");
    const double p1r_mass = 0.02;  // exponent mass reserved for P1 and R
    const int total_units = static_cast<int>(std::round((1.0 - p1r_mass) / grid_step));
    const double mu_cap_u = (1.0 / k) + 1e-9;

    std::vector<DyadicCase> cases;
    std::vector<int> parts;
    auto emit = [&]() {
        DyadicCase c;
        c.x = x;
        c.k = k;
        c.theta = 0.55 + eps;
        c.epsilon = eps;
        c.P1 = std::pow(x, 0.015);
        c.R = std::pow(x, 0.005);
        c.N.assign(2 * k - 1, 1.0);
        c.smooth.assign(2 * k - 1, false);
        for (int i = 0; i < k - 1; ++i) c.smooth[i] = true;
        int smooth_slot = 0;        // indices 0..k-2
        int mu_slot = k - 1;        // indices k-1..2k-2
        for (int units : parts) {
            double u = units * grid_step;
            bool can_mu = (u <= mu_cap_u) && (mu_slot <= 2 * k - 2);
            if (can_mu) {
                c.N[mu_slot++] = std::pow(x, u);
            } else {
                if (smooth_slot > k - 2) return;  // not realizable, skip
                c.N[smooth_slot++] = std::pow(x, u);
            }
        }
        cases.push_back(std::move(c));
    };
    // Nonincreasing partitions of total_units into at most max_active parts.
    struct Rec {
        int max_active;
        std::vector<int>& parts;
        std::function<void()> emit;
        void go(int remaining, int max_part) {
            if (remaining == 0) {
                emit();
                return;
            }
            if (static_cast<int>(parts.size()) == max_active) return;
            for (int part = std::min(remaining, max_part); part >= 1; --part) {
                parts.push_back(part);
                go(remaining - part, part);
                parts.pop_back();
            }
        }
    };
    Rec rec{max_active, parts, emit};
    rec.go(total_units, total_units);
    return cases;
}

}  // namespace shortsieve
