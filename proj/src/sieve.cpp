#include "totient/sieve.hpp"

#include <algorithm>
#include <string>

#include "totient/errors.hpp"

namespace totient {
namespace {

void require_covered(const Window& w, const BasePrimes& base) {
    if (!base.covers(w.hi)) {
        throw PreconditionError("base primes up to " + std::to_string(base.limit()) +
                                " cannot sieve window ending at " + std::to_string(w.hi));
    }
}

u64 first_multiple_at_least(u64 q, u64 lo) { return (lo + q - 1) / q * q; }

// Inverse of odd q modulo 2^64 (Newton iteration).
u64 inverse_mod_2_64(u64 q) {
    u64 inv = q;
    for (int i = 0; i < 5; ++i) inv *= 2 - q * inv;
    return inv;
}

}  // namespace

Window make_window(u64 lo, u64 hi, u64 max_size) {
    if (lo < 1) throw ConfigError("window lower bound must be >= 1");
    if (hi < lo) throw ConfigError("window upper bound below lower bound");
    if (hi > kMaxValue) throw ConfigError("window upper bound exceeds 2^40");
    if (hi - lo + 1 > max_size) throw ConfigError("window larger than configured size " + std::to_string(max_size));
    return Window{lo, hi};
}

BasePrimes base_primes(u64 limit) {
    if (limit < 2 || limit > kMaxBaseLimit) {
        throw ConfigError("base prime limit " + std::to_string(limit) + " outside [2, 2^21]");
    }
    std::vector<bool> composite(limit + 1, false);
    BasePrimes out;
    out.limit_ = limit;
    for (u64 i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.primes_.push_back(i);
        for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return out;
}

BasePrimes base_primes_for(u64 hi) { return base_primes(std::max<u64>(2, isqrt(hi))); }

FactoredWindow factor_window(const Window& w, const BasePrimes& base) {
    require_covered(w, base);
    const std::size_t len = w.size();
    const u64 root = isqrt(w.hi);

    // Pass 1: count distinct prime factors, including a surviving cofactor.
    std::vector<u64> rem(len);
    std::vector<std::uint32_t> count(len, 0);
    for (std::size_t i = 0; i < len; ++i) rem[i] = w.lo + i;
    for (u64 q : base.primes()) {
        if (q > root) break;
        for (u64 m = first_multiple_at_least(q, w.lo); m <= w.hi; m += q) {
            std::size_t i = m - w.lo;
            ++count[i];
            do rem[i] /= q;
            while (rem[i] % q == 0);
        }
    }

    FactoredWindow out;
    out.window_ = w;
    out.offsets_.assign(len + 1, 0);
    for (std::size_t i = 0; i < len; ++i) out.offsets_[i + 1] = out.offsets_[i] + count[i] + (rem[i] > 1 ? 1 : 0);
    out.factors_.resize(out.offsets_[len]);
    out.phi_.assign(len, 1);

    // Pass 2: fill slots in ascending prime order; the cofactor goes last.
    std::vector<std::uint32_t> cursor(out.offsets_.begin(), out.offsets_.end() - 1);
    for (u64 q : base.primes()) {
        if (q > root) break;
        for (u64 m = first_multiple_at_least(q, w.lo); m <= w.hi; m += q) {
            std::size_t i = m - w.lo;
            u64 v = m / q;
            u64 e = 1;
            u64 phi = q - 1;
            while (v % q == 0) {
                v /= q;
                ++e;
                phi *= q;
            }
            out.phi_[i] *= phi;
            out.factors_[cursor[i]++] = PrimePower{q, e};
        }
    }
    for (std::size_t i = 0; i < len; ++i) {
        if (rem[i] > 1) {
            out.phi_[i] *= rem[i] - 1;
            out.factors_[cursor[i]++] = PrimePower{rem[i], 1};
        }
    }
    return out;
}

std::vector<u64> totient_window(const Window& w, const BasePrimes& base) {
    require_covered(w, base);
    const std::size_t len = w.size();
    const u64 root = isqrt(w.hi);

    struct Slot {
        u64 rem;
        u64 phi;
    };
    std::vector<Slot> slots(len);
    for (std::size_t i = 0; i < len; ++i) slots[i] = {w.lo + i, 1};

    for (u64 q : base.primes()) {
        if (q > root) break;
        const u64 start = first_multiple_at_least(q, w.lo);
        if (q == 2) {
            for (u64 m = start; m <= w.hi; m += 2) {
                Slot& s = slots[m - w.lo];
                int e = __builtin_ctzll(s.rem);
                s.rem >>= e;
                s.phi <<= (e - 1);
            }
            continue;
        }
        // Exact division by q is multiplication by its inverse; r is a
        // multiple of q iff r * inv <= floor((2^64 - 1) / q).
        const u64 inv = inverse_mod_2_64(q);
        const u64 bound = ~u64{0} / q;
        for (u64 m = start; m <= w.hi; m += q) {
            Slot& s = slots[m - w.lo];
            u64 r = s.rem * inv;
            u64 mul = q - 1;
            for (u64 t = r * inv; t <= bound; t = r * inv) {
                r = t;
                mul *= q;
            }
            s.rem = r;
            s.phi *= mul;
        }
    }

    std::vector<u64> phi(len);
    for (std::size_t i = 0; i < len; ++i) {
        const Slot& s = slots[i];
        phi[i] = s.rem > 1 ? s.phi * (s.rem - 1) : s.phi;
    }
    return phi;
}

std::vector<u64> primes_in(const Window& w, const BasePrimes& base) {
    require_covered(w, base);
    const std::size_t len = w.size();
    const u64 root = isqrt(w.hi);
    std::vector<std::uint8_t> is_prime(len, 1);
    for (u64 q : base.primes()) {
        if (q > root) break;
        u64 start = std::max(q * q, first_multiple_at_least(q, w.lo));
        for (u64 m = start; m <= w.hi; m += q) is_prime[m - w.lo] = 0;
    }
    std::vector<u64> out;
    for (std::size_t i = 0; i < len; ++i) {
        u64 n = w.lo + i;
        if (n >= 2 && is_prime[i]) out.push_back(n);
    }
    return out;
}

u64 prime_count(u64 x, u64 window_size) {
    if (x < 2) return 0;
    const BasePrimes base = base_primes_for(x);
    u64 total = 0;
    for (u64 lo = 1; lo <= x; lo += window_size) {
        u64 hi = std::min(x, lo + window_size - 1);
        total += primes_in(make_window(lo, hi, window_size), base).size();
    }
    return total;
}

std::vector<PrimePower> factor_naive(u64 n) {
    if (n == 0) throw DomainError("cannot factor 0");
    std::vector<PrimePower> out;
    for (u64 q = 2; q <= n / q; q += (q == 2 ? 1 : 2)) {
        if (n % q != 0) continue;
        u64 e = 0;
        while (n % q == 0) {
            n /= q;
            ++e;
        }
        out.push_back(PrimePower{q, e});
    }
    if (n > 1) out.push_back(PrimePower{n, 1});
    return out;
}

u64 phi_naive(u64 n) {
    if (n == 0) throw DomainError("phi(0) is undefined");
    u64 phi = n;
    for (const PrimePower& f : factor_naive(n)) phi = phi / f.prime * (f.prime - 1);
    return phi;
}

}  // namespace totient
