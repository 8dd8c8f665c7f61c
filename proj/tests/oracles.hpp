#pragma once

// Independent reference implementations. Deliberately naive: none of these
// share code with the library under test.

#include <cstdint>
#include <numeric>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;

// phi by counting units; O(n log n).
inline u64 phi_count(u64 n) {
    u64 c = 0;
    for (u64 k = 1; k <= n; ++k) c += std::gcd(k, n) == 1;
    return c;
}

inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

// Plain sieve of Eratosthenes; flags[n] for 0 <= n <= limit.
inline std::vector<bool> prime_flags(u64 limit) {
    std::vector<bool> f(limit + 1, true);
    f[0] = false;
    if (limit >= 1) f[1] = false;
    for (u64 i = 2; i * i <= limit; ++i) {
        if (!f[i]) continue;
        for (u64 j = i * i; j <= limit; j += i) f[j] = false;
    }
    return f;
}

// (prime, exponent) by trial division.
inline std::vector<std::pair<u64, u64>> factor(u64 n) {
    std::vector<std::pair<u64, u64>> out;
    for (u64 d = 2; d * d <= n; ++d) {
        if (n % d) continue;
        u64 e = 0;
        while (n % d == 0) n /= d, ++e;
        out.emplace_back(d, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline u64 phi_trial(u64 n) {
    u64 r = n;
    for (auto [p, e] : factor(n)) r = r / p * (p - 1);
    return r;
}

// Linear (Euler) sieve table phi[0..n], phi[0] = 0.
inline std::vector<u64> phi_table(u64 n) {
    std::vector<u64> phi(n + 1, 0);
    std::vector<u64> primes;
    if (n >= 1) phi[1] = 1;
    for (u64 i = 2; i <= n; ++i) {
        if (phi[i] == 0) {
            phi[i] = i - 1;
            primes.push_back(i);
        }
        for (u64 p : primes) {
            if (i * p > n) break;
            if (i % p == 0) {
                phi[i * p] = phi[i] * p;
                break;
            }
            phi[i * p] = phi[i] * (p - 1);
        }
    }
    return phi;
}

struct Counts {
    u64 gt = 0, lt = 0, eq = 0, considered = 0;
    std::vector<u64> eq_primes;
};

// Census over odd primes ell < p <= x, from a phi table covering x + ell.
inline Counts census(const std::vector<u64>& phi, u64 ell, u64 x) {
    Counts c;
    for (u64 p = ell + 1; p <= x; ++p) {
        if (p % 2 == 0 || phi[p] != p - 1) continue;
        ++c.considered;
        const u64 a = phi[p - ell], b = phi[p + ell];
        if (a > b) ++c.gt;
        if (a < b) ++c.lt;
        if (a == b) ++c.eq, c.eq_primes.push_back(p);
    }
    return c;
}

// Census over all primes p <= x comparing phi(|p - ell|) with phi(p + ell).
inline Counts census_all_abs(const std::vector<u64>& phi, u64 ell, u64 x) {
    Counts c;
    for (u64 p = 2; p <= x; ++p) {
        if (phi[p] != p - 1) continue;
        ++c.considered;
        const u64 a = phi[p > ell ? p - ell : ell - p], b = phi[p + ell];
        if (a > b) ++c.gt;
        if (a < b) ++c.lt;
        if (a == b) ++c.eq, c.eq_primes.push_back(p);
    }
    return c;
}

// Ordered (m1, m2) with m1 m2 = d and gcd = 2, by scanning every m1 <= d.
inline u64 pair_count(u64 d) {
    u64 c = 0;
    for (u64 m1 = 1; m1 <= d; ++m1) {
        if (d % m1 == 0 && std::gcd(m1, d / m1) == 2) ++c;
    }
    return c;
}

}  // namespace oracle
