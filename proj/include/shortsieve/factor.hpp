// Segmented factorization sieve over half-open windows (x, x+H].
//
// Every integer in the window is decomposed as (prime powers up to
// sqrt(x+H)) times a cofactor that is 1 or a single prime above the root.
// Evaluation of arithmetic functions, window statistics and the identity
// verifiers all sit on top of this.
#pragma once

#include <atomic>
#include <cmath>
#include <span>
#include <thread>
#include <vector>

#include "shortsieve/common.hpp"
#include "shortsieve/primes.hpp"

namespace shortsieve {

struct Interval {
    u64 x = 1;  // left endpoint, exclusive
    u64 H = 1;  // number of integers in the window

    void validate() const {
        if (x < 1) throw invalid_argument_error("interval requires x >= 1");
        if (H < 1) throw invalid_argument_error("interval requires H >= 1");
        if (checked_add(x, H) >= kMaxWindowEnd)
            throw invalid_argument_error("interval end exceeds 2^62 headroom");
    }
    u64 first() const { return x + 1; }
    u64 last() const { return x + H; }
};

struct PrimePower {
    u64 p = 0;
    u32 e = 0;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// Lightweight per-integer view handed to streaming callbacks. The
// prime_powers span covers the sieved primes (ascending); cofactor is 1 or
// a prime above the sieving root.
struct FactorView {
    u64 n = 0;
    std::span<const PrimePower> prime_powers;
    u64 cofactor = 1;

    // Visits the complete factorization, cofactor included.
    template <typename Fn>
    void for_each_prime_power(Fn&& fn) const {
        for (const PrimePower& pp : prime_powers) fn(pp.p, pp.e);
        if (cofactor > 1) fn(cofactor, u32{1});
    }
};

struct FactorEntry {
    u64 n = 0;
    std::vector<PrimePower> prime_powers;
    u64 cofactor = 1;

    FactorView view() const { return {n, prime_powers, cofactor}; }

    // Complete factorization with the cofactor folded in.
    std::vector<PrimePower> complete() const {
        std::vector<PrimePower> out = prime_powers;
        if (cofactor > 1) out.push_back({cofactor, 1});
        return out;
    }
};

struct FactorTable {
    Interval interval;
    std::vector<FactorEntry> entries;  // entries[i].n == x + 1 + i
};

struct FactorOptions {
    u64 segment_len = u64{1} << 20;  // tunable; results must not depend on it
    const std::vector<u64>* primes = nullptr;  // optional shared base primes
    unsigned threads = 1;
};

namespace detail {

inline u64 isqrt_u64(u64 n) {
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// One sieved segment [lo, lo+len). Buffers are reusable across segments.
class FactorSegment {
public:
    void build(u64 lo, u64 len, std::span<const u64> primes) {
        lo_ = lo;
        len_ = len;
        remaining_.assign(len, 0);
        counts_.assign(len, 0);
        for (u64 i = 0; i < len; ++i) remaining_[i] = lo + i;
        const u64 hi = lo + len - 1;

        for (u64 p : primes) {
            for (u64 m = first_multiple(p, lo); m <= hi && m >= lo; m += p)
                ++counts_[m - lo];
        }
        offsets_.assign(len + 1, 0);
        for (u64 i = 0; i < len; ++i) offsets_[i + 1] = offsets_[i] + counts_[i];
        flat_.resize(offsets_[len]);
        cursor_.assign(offsets_.begin(), offsets_.end() - 1);

        for (u64 p : primes) {
            for (u64 m = first_multiple(p, lo); m <= hi && m >= lo; m += p) {
                u64 i = m - lo;
                u64 r = remaining_[i];
                u32 e = 0;
                do {
                    r /= p;
                    ++e;
                } while (r % p == 0);
                remaining_[i] = r;
                flat_[cursor_[i]++] = {p, e};
            }
        }
    }

    u64 size() const { return len_; }

    FactorView view(u64 i) const {
        return {lo_ + i,
                std::span<const PrimePower>(flat_.data() + offsets_[i],
                                            offsets_[i + 1] - offsets_[i]),
                remaining_[i]};
    }

private:
    static u64 first_multiple(u64 p, u64 lo) { return ((lo + p - 1) / p) * p; }

    u64 lo_ = 0, len_ = 0;
    std::vector<u64> remaining_;
    std::vector<u32> counts_;
    std::vector<u32> offsets_;
    std::vector<u32> cursor_;
    std::vector<PrimePower> flat_;
};

inline std::vector<u64> base_primes_for(const Interval& iv) {
    return base_primes(isqrt_u64(iv.last()));
}

// A caller-supplied prime table must contain every prime up to the
// sieving root, or cofactors would silently come out composite.
inline void check_prime_coverage(std::span<const u64> primes, u64 root) {
    if (root < 2) return;
    u64 back = primes.empty() ? 0 : primes.back();
    if (back >= root) return;
    if (back * back < root)
        throw invalid_argument_error("prime table too short for this window");
    for (u64 n = back + 1; n <= root; ++n) {
        bool prime = n >= 2;
        for (u64 p : primes) {
            if (p * p > n) break;
            if (n % p == 0) {
                prime = false;
                break;
            }
        }
        if (prime)
            throw invalid_argument_error("prime table misses " + std::to_string(n) +
                                         " needed for this window");
    }
}

}  // namespace detail

// Streams fn(const FactorView&) over the window in ascending n order.
template <typename Fn>
inline void for_each_factorization(const Interval& iv, Fn&& fn,
                                   const FactorOptions& opt = {}) {
    iv.validate();
    if (opt.segment_len < 1) throw invalid_argument_error("segment_len must be >= 1");
    std::vector<u64> owned;
    if (!opt.primes) owned = detail::base_primes_for(iv);
    std::span<const u64> primes = opt.primes ? std::span<const u64>(*opt.primes)
                                             : std::span<const u64>(owned);
    if (opt.primes) detail::check_prime_coverage(primes, detail::isqrt_u64(iv.last()));
    detail::FactorSegment seg;
    for (u64 lo = iv.first(); lo <= iv.last();) {
        u64 len = std::min<u64>(opt.segment_len, iv.last() - lo + 1);
        seg.build(lo, len, primes);
        for (u64 i = 0; i < len; ++i) fn(seg.view(i));
        lo += len;
    }
}

// Segment-parallel reduction. Each segment is folded into an Acc with
// per_entry, and segment partials are combined in ascending segment order,
// so the result is identical for any thread count.
template <typename Acc, typename PerEntry, typename Combine>
inline Acc factor_reduce(const Interval& iv, PerEntry per_entry, Combine combine,
                         const FactorOptions& opt = {}) {
    iv.validate();
    if (opt.segment_len < 1) throw invalid_argument_error("segment_len must be >= 1");
    std::vector<u64> owned;
    if (!opt.primes) owned = detail::base_primes_for(iv);
    std::span<const u64> primes = opt.primes ? std::span<const u64>(*opt.primes)
                                             : std::span<const u64>(owned);
    if (opt.primes) detail::check_prime_coverage(primes, detail::isqrt_u64(iv.last()));

    const u64 n_segments = (iv.H + opt.segment_len - 1) / opt.segment_len;
    std::vector<Acc> partials(n_segments);
    unsigned threads = std::max(1u, opt.threads);
    threads = static_cast<unsigned>(std::min<u64>(threads, n_segments));

    auto run_segment = [&](u64 s, detail::FactorSegment& seg) {
        u64 lo = iv.first() + s * opt.segment_len;
        u64 len = std::min<u64>(opt.segment_len, iv.last() - lo + 1);
        seg.build(lo, len, primes);
        Acc acc{};
        for (u64 i = 0; i < len; ++i) per_entry(acc, seg.view(i));
        partials[s] = std::move(acc);
    };

    if (threads <= 1) {
        detail::FactorSegment seg;
        for (u64 s = 0; s < n_segments; ++s) run_segment(s, seg);
    } else {
        std::atomic<u64> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                detail::FactorSegment seg;
                for (u64 s = next.fetch_add(1); s < n_segments; s = next.fetch_add(1))
                    run_segment(s, seg);
            });
        }
        for (auto& th : pool) th.join();
    }

    Acc total{};
    for (u64 s = 0; s < n_segments; ++s) combine(total, partials[s]);
    return total;
}

// Materialized table for windows small enough to hold in memory.
inline FactorTable factor_interval(const Interval& iv, const FactorOptions& opt = {}) {
    FactorTable table;
    table.interval = iv;
    table.entries.reserve(iv.H);
    for_each_factorization(
        iv,
        [&](const FactorView& v) {
            table.entries.push_back(
                {v.n,
                 std::vector<PrimePower>(v.prime_powers.begin(), v.prime_powers.end()),
                 v.cofactor});
        },
        opt);
    return table;
}

// Trial-division factorization of a single integer (outside any window).
inline FactorEntry factor_single(u64 n) {
    if (n < 1) throw invalid_argument_error("factor_single requires n >= 1");
    FactorEntry entry;
    entry.n = n;
    u64 r = n;
    for (u64 p : base_primes(detail::isqrt_u64(n))) {
        if (p * p > r) break;
        if (r % p != 0) continue;
        u32 e = 0;
        do {
            r /= p;
            ++e;
        } while (r % p == 0);
        entry.prime_powers.push_back({p, e});
    }
    entry.cofactor = 1;
    if (r > 1) {
        // r is prime here; keep it in the listed factorization.
        entry.prime_powers.push_back({r, 1});
    }
    return entry;
}

}  // namespace shortsieve
