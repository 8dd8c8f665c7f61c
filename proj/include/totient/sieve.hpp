#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "totient/int128.hpp"

namespace totient {

// Largest integer any window may reach.
inline constexpr u64 kMaxValue = u64{1} << 40;
inline constexpr u64 kDefaultWindowSize = u64{1} << 22;
inline constexpr u64 kMaxBaseLimit = u64{1} << 21;

// Inclusive integer interval [lo, hi].
struct Window {
    u64 lo = 1;
    u64 hi = 1;

    u64 size() const { return hi - lo + 1; }
    bool contains(u64 n) const { return lo <= n && n <= hi; }
    bool operator==(const Window&) const = default;
};

// Validated constructor; throws ConfigError on empty, out-of-range or
// oversized intervals.
Window make_window(u64 lo, u64 hi, u64 max_size = kDefaultWindowSize);

class BasePrimes {
public:
    u64 limit() const { return limit_; }
    std::span<const u64> primes() const { return primes_; }

    // True when every composite n <= hi has a prime factor in this table.
    bool covers(u64 hi) const { return limit_ >= isqrt(hi); }

private:
    friend BasePrimes base_primes(u64 limit);
    u64 limit_ = 0;
    std::vector<u64> primes_;
};

// All primes <= limit, 2 <= limit <= 2^21.
BasePrimes base_primes(u64 limit);

// Base primes sufficient for any window ending at or below hi.
BasePrimes base_primes_for(u64 hi);

// One prime-power factor. Packed to 8 bytes; primes stay below 2^40.
struct PrimePower {
    u64 prime : 48;
    u64 exponent : 16;
};

class FactoredWindow {
public:
    const Window& window() const { return window_; }
    std::span<const u64> phi() const { return phi_; }

    u64 phi_of(u64 n) const { return phi_[n - window_.lo]; }

    // Prime factorization of n, primes ascending. Empty for n = 1.
    std::span<const PrimePower> factors_of(u64 n) const {
        std::size_t i = n - window_.lo;
        return std::span<const PrimePower>(factors_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
    }

private:
    friend FactoredWindow factor_window(const Window& w, const BasePrimes& base);
    Window window_;
    std::vector<u64> phi_;
    std::vector<std::uint32_t> offsets_;
    std::vector<PrimePower> factors_;
};

// Full factorization and exact totient of every n in w.
// Throws PreconditionError if base does not cover w.hi.
FactoredWindow factor_window(const Window& w, const BasePrimes& base);

// Totient values only; the census hot path. phi[i] = phi(w.lo + i).
std::vector<u64> totient_window(const Window& w, const BasePrimes& base);

// Primes in w, ascending, by a segmented sieve of Eratosthenes.
std::vector<u64> primes_in(const Window& w, const BasePrimes& base);

// Number of primes <= x, streaming windows of the given size.
u64 prime_count(u64 x, u64 window_size = kDefaultWindowSize);

// Trial-division totient; the reference oracle. Throws DomainError for n = 0.
u64 phi_naive(u64 n);

// Trial-division factorization, primes ascending.
std::vector<PrimePower> factor_naive(u64 n);

}  // namespace totient
