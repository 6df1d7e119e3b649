// Exact rational arithmetic on 64-bit numerator/denominator.
//
// The identity verifiers are required to run in exact arithmetic, so this
// type throws instead of silently wrapping: all products go through
// __int128 and are range-checked on normalization.
#pragma once

#include <numeric>
#include <ostream>

#include "shortsieve/common.hpp"

namespace shortsieve {

class Rat64 {
public:
    constexpr Rat64() = default;
    Rat64(i64 numerator, i64 denominator = 1) { assign(numerator, denominator); }

    i64 num() const { return num_; }
    i64 den() const { return den_; }

    bool is_zero() const { return num_ == 0; }

    friend Rat64 operator+(const Rat64& a, const Rat64& b) {
        return from_i128(i128{a.num_} * b.den_ + i128{b.num_} * a.den_,
                         i128{a.den_} * b.den_);
    }
    friend Rat64 operator-(const Rat64& a, const Rat64& b) {
        return from_i128(i128{a.num_} * b.den_ - i128{b.num_} * a.den_,
                         i128{a.den_} * b.den_);
    }
    friend Rat64 operator*(const Rat64& a, const Rat64& b) {
        return from_i128(i128{a.num_} * b.num_, i128{a.den_} * b.den_);
    }
    friend Rat64 operator/(const Rat64& a, const Rat64& b) {
        if (b.num_ == 0) throw invalid_argument_error("rational division by zero");
        return from_i128(i128{a.num_} * b.den_, i128{a.den_} * b.num_);
    }
    Rat64 operator-() const {
        Rat64 r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    Rat64& operator+=(const Rat64& b) { return *this = *this + b; }
    Rat64& operator-=(const Rat64& b) { return *this = *this - b; }
    Rat64& operator*=(const Rat64& b) { return *this = *this * b; }

    friend bool operator==(const Rat64& a, const Rat64& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rat64& a, const Rat64& b) { return !(a == b); }
    friend bool operator<(const Rat64& a, const Rat64& b) {
        return i128{a.num_} * b.den_ < i128{b.num_} * a.den_;
    }
    friend bool operator<=(const Rat64& a, const Rat64& b) { return !(b < a); }

    Rat64 abs() const { return num_ < 0 ? -*this : *this; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    friend std::ostream& operator<<(std::ostream& os, const Rat64& r) {
        os << r.num_;
        if (r.den_ != 1) os << '/' << r.den_;
        return os;
    }

private:
    void assign(i64 n, i64 d) { *this = from_i128(n, d); }

    static Rat64 from_i128(i128 n, i128 d) {
        if (d == 0) throw invalid_argument_error("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        i128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        constexpr i128 lo = std::numeric_limits<i64>::min();
        constexpr i128 hi = std::numeric_limits<i64>::max();
        if (n < lo || n > hi || d > hi)
            throw consistency_error("rational overflow after normalization");
        Rat64 r;
        r.num_ = static_cast<i64>(n);
        r.den_ = static_cast<i64>(d);
        return r;
    }

    static i128 gcd128(i128 a, i128 b) {
        while (b != 0) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }

    i64 num_ = 0;
    i64 den_ = 1;
};

}  // namespace shortsieve
