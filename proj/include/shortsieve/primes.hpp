// Prime generation and the binary prime-cache file format.
#pragma once

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

#include "shortsieve/common.hpp"

namespace shortsieve {

// All primes in [2, limit], ascending. Simple odd-only sieve of
// Eratosthenes; limits up to a few times 10^8 are fine.
inline std::vector<u64> base_primes(u64 limit) {
    std::vector<u64> primes;
    if (limit < 2) return primes;
    primes.push_back(2);
    if (limit < 3) return primes;
    // composite[i] marks the odd number 2i+3.
    const u64 n_odd = (limit - 1) / 2;
    std::vector<bool> composite(n_odd, false);
    for (u64 i = 0;; ++i) {
        u64 p = 2 * i + 3;
        if (p * p > limit) break;
        if (composite[i]) continue;
        for (u64 j = (p * p - 3) / 2; j < n_odd; j += p) composite[j] = true;
    }
    for (u64 i = 0; i < n_odd; ++i)
        if (!composite[i]) primes.push_back(2 * i + 3);
    return primes;
}

// Calls fn(p) for every prime p in (lo, hi], ascending, without
// materializing the whole list. Uses a segmented sieve over odd numbers.
template <typename Fn>
inline void for_each_prime(u64 lo, u64 hi, Fn&& fn) {
    if (hi < 2 || hi <= lo) return;
    if (lo < 2 && 2 <= hi) fn(u64{2});
    u64 root = static_cast<u64>(std::sqrt(static_cast<double>(hi))) + 2;
    std::vector<u64> small = base_primes(root);
    const u64 seg = 1u << 20;
    u64 start = std::max<u64>(lo + 1, 3);
    if (start % 2 == 0) ++start;
    std::vector<bool> comp;
    for (u64 base = start; base <= hi; base += 2 * seg) {
        u64 count = std::min<u64>(seg, (hi - base) / 2 + 1);
        comp.assign(count, false);
        for (u64 p : small) {
            if (p == 2) continue;
            if (p * p > base + 2 * (count - 1)) break;
            u64 first = std::max(p * p, ((base + p - 1) / p) * p);
            if (first % 2 == 0) first += p;
            for (u64 m = first; m <= base + 2 * (count - 1); m += 2 * p)
                comp[(m - base) / 2] = true;
        }
        for (u64 i = 0; i < count; ++i)
            if (!comp[i]) fn(base + 2 * i);
    }
}

inline constexpr char kPrimeCacheMagic[4] = {'P', 'R', 'I', 'M'};
inline constexpr u32 kPrimeCacheVersion = 1;

namespace detail {
inline void put_le(std::ostream& os, u64 v, int bytes) {
    for (int i = 0; i < bytes; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline bool get_le(std::istream& is, u64& v, int bytes) {
    v = 0;
    for (int i = 0; i < bytes; ++i) {
        int c = is.get();
        if (c == EOF) return false;
        v |= (u64{static_cast<u8>(c)} << (8 * i));
    }
    return true;
}
}  // namespace detail

// Cache layout: "PRIM", u32 version (=1), u64 count, then count u64 primes
// ascending. All integers little-endian.
inline void save_prime_cache(const std::string& path, const std::vector<u64>& primes) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw invalid_argument_error("cannot open prime cache for writing: " + path);
    os.write(kPrimeCacheMagic, 4);
    detail::put_le(os, kPrimeCacheVersion, 4);
    detail::put_le(os, primes.size(), 8);
    for (u64 p : primes) detail::put_le(os, p, 8);
    if (!os) throw consistency_error("short write to prime cache: " + path);
}

inline std::vector<u64> load_prime_cache(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw invalid_argument_error("cannot open prime cache: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kPrimeCacheMagic, 4) != 0)
        throw invalid_argument_error("prime cache has wrong magic: " + path);
    u64 version = 0, count = 0;
    if (!detail::get_le(is, version, 4) || version != kPrimeCacheVersion)
        throw invalid_argument_error("prime cache has unsupported version: " + path);
    if (!detail::get_le(is, count, 8))
        throw invalid_argument_error("prime cache truncated: " + path);
    std::vector<u64> primes;
    primes.reserve(count);
    u64 prev = 0;
    for (u64 i = 0; i < count; ++i) {
        u64 p = 0;
        if (!detail::get_le(is, p, 8))
            throw invalid_argument_error("prime cache truncated: " + path);
        if (p <= prev)
            throw invalid_argument_error("prime cache is not strictly increasing: " + path);
        prev = p;
        primes.push_back(p);
    }
    return primes;
}

}  // namespace shortsieve
