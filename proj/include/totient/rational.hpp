#pragma once

#include <compare>
#include <stdexcept>
#include <string>

#include "totient/int128.hpp"

namespace totient {

// Exact fraction over signed 128-bit integers, always reduced with a
// positive denominator. Arithmetic throws std::overflow_error rather than wrap.
class Rational {
public:
    Rational() = default;
    Rational(i128 num) : num_(num) {}  // NOLINT(google-explicit-constructor)
    Rational(i128 num, i128 den) : num_(num), den_(den) {
        if (den_ == 0) throw std::domain_error("zero denominator");
        normalize();
    }

    i128 num() const { return num_; }
    i128 den() const { return den_; }
    int sign() const { return (num_ > 0) - (num_ < 0); }
    long double to_long_double() const { return static_cast<long double>(num_) / static_cast<long double>(den_); }
    std::string to_string() const { return totient::to_string(num_) + "/" + totient::to_string(den_); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        i128 g = gcd_abs(a.den_, b.den_);
        i128 da = a.den_ / g;
        i128 db = b.den_ / g;
        return Rational(add(mul(a.num_, db), mul(b.num_, da)), mul(da, b.den_));
    }
    friend Rational operator-(const Rational& a) { return Rational(-a.num_, a.den_); }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        i128 g1 = gcd_abs(a.num_, b.den_);
        i128 g2 = gcd_abs(b.num_, a.den_);
        if (g1 == 0) g1 = 1;
        if (g2 == 0) g2 = 1;
        return Rational(mul(a.num_ / g1, b.num_ / g2), mul(a.den_ / g2, b.den_ / g1));
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        return (a - b).sign() <=> 0;
    }

private:
    static i128 abs(i128 v) { return v < 0 ? -v : v; }
    static i128 gcd_abs(i128 a, i128 b) { return static_cast<i128>(gcd(static_cast<u128>(abs(a)), static_cast<u128>(abs(b)))); }
    static i128 mul(i128 a, i128 b) {
        i128 r;
        if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("rational overflow");
        return r;
    }
    static i128 add(i128 a, i128 b) {
        i128 r;
        if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("rational overflow");
        return r;
    }
    void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        i128 g = gcd_abs(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    i128 num_ = 0;
    i128 den_ = 1;
};

}  // namespace totient
