// Shared scalar types, constants and small numeric helpers.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace shortsieve {

using u8  = std::uint8_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using i128 = __int128;
using cplx = std::complex<double>;

// Euler-Mascheroni constant and pi, 18+ digits.
inline constexpr double kEulerGamma = 0.577215664901532861;
inline constexpr double kPi         = 3.141592653589793238;

// Windows must leave headroom for intermediate products.
inline constexpr u64 kMaxWindowEnd = (u64{1} << 62);

struct invalid_argument_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct consistency_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline u64 checked_add(u64 a, u64 b) {
    u64 s = a + b;
    if (s < a) throw invalid_argument_error("u64 overflow in addition");
    return s;
}

inline u64 checked_mul(u64 a, u64 b) {
    if (a != 0 && b > std::numeric_limits<u64>::max() / a)
        throw invalid_argument_error("u64 overflow in multiplication");
    return a * b;
}

// Kahan-compensated accumulator; used for long floating sums where naive
// accumulation would lose digits.
template <typename T>
class KahanSum {
public:
    void add(T value) {
        T y = value - carry_;
        T t = sum_ + y;
        carry_ = (t - sum_) - y;
        sum_ = t;
    }
    T value() const { return sum_; }

private:
    T sum_{};
    T carry_{};
};

// ceil(x^theta) as an integer. Values within one part in 10^12 of an
// integer snap to it first, so exact powers do not round up spuriously.
inline u64 resolve_window_length(u64 x, double theta) {
    long double h = std::pow(static_cast<long double>(x), static_cast<long double>(theta));
    if (!(h >= 1.0L) || h > 9.0e18L)
        throw invalid_argument_error("x^theta out of range for a window length");
    long double nearest = std::floor(h + 0.5L);
    if (fabsl(h - nearest) <= 1e-12L * h) h = nearest;
    return static_cast<u64>(std::ceil(h));
}

}  // namespace shortsieve
