#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "totient/int128.hpp"

namespace totient {

// Graham-Holt-Pomerance construction for phi(n) = phi(n + k), specialized to
// k = 2 ell and n = p - ell. Only j = 2 can produce an odd p, which forces
// ell = 2^m - 1; then g = 2, q1 = t + 1, q2 = (ell + 1) t + 1 and
// n = 2 q2, p = 2 (ell + 1) t + ell + 2.
struct GhpWitness {
    u64 ell = 0;
    u64 j = 0;
    u64 k = 0;
    u64 g = 0;
    u64 t = 0;
    u64 n = 0;
    u64 p = 0;
    u64 q1 = 0;
    u64 q2 = 0;
    bool p_prime = false;

    bool operator==(const GhpWitness&) const = default;
};

enum class GhpReason {
    ok,
    ell_even,          // j would be 2^m with m >= 2, making p even
    ell_not_mersenne,  // ell odd but j and j + 2 ell never share prime factors
    t_zero,
    q1_composite,
    q2_composite,
    divides_j,  // q1 or q2 equals 2
    overflow,
};

std::string_view to_string(GhpReason r);

struct GhpResult {
    std::optional<GhpWitness> witness;
    GhpReason reason = GhpReason::ok;
};

// m with ell = 2^m - 1, or nullopt.
std::optional<unsigned> mersenne_exponent(u64 ell);

GhpResult ghp_construct(u64 ell, u64 t);

// The three linear forms for ell = 2^m - 1:
//   f1(t) = 2 (ell + 1) t + (ell + 2),  f2(t) = t + 1,  f3(t) = (ell + 1) t + 1.
struct TriplePattern {
    u64 ell = 0;
    unsigned exponent = 0;
    bool exponent_odd() const { return exponent % 2 == 1; }
    u64 f1(u64 t) const;
    u64 f2(u64 t) const;
    u64 f3(u64 t) const;
    // For odd exponent exactly one f_i(t) is divisible by 3; returns i.
    // Returns 0 for even exponent unless t = 2 mod 3, where all three are.
    int divisible_by_three(u64 t) const;
};

struct TripleHit {
    u64 t = 0;
    u64 f1 = 0;
    u64 f2 = 0;
    u64 f3 = 0;
    int forced_index = 0;  // which f_i equals 3 when the exponent is odd
};

struct TripleEnumeration {
    TriplePattern pattern;
    std::vector<TripleHit> hits;
};

// All 1 <= t <= t_max with f1, f2, f3 simultaneously prime.
// Throws DomainError unless ell = 2^m - 1 and f1(t_max) fits 64 bits.
TripleEnumeration triple_enumerate(u64 ell, u64 t_max);

// Odd exponents m < m_bound for which t = 2 gives a prime triple
// (5 * 2^m + 1, 3, 2^(m+1) + 1). Arbitrary precision; probabilistic beyond 2^64.
std::vector<unsigned> odd_exponents_with_t2_triple(unsigned m_bound);

struct EqualityClassification {
    u64 ell = 0;
    u64 x = 0;
    std::vector<GhpWitness> ghp_form;
    std::vector<u64> sporadic;
};

// Splits census equality primes into GHP-form and sporadic solutions by
// solving 2 (ell + 1) t = p - ell - 2 for each p.
EqualityClassification classify_equality(u64 ell, u64 x, std::span<const u64> eq_primes);

// `ell,x,eq_total,ghp_form,sporadic` with header.
std::string classification_csv(std::span<const EqualityClassification> rows);

// JSON array of witness records.
std::string witnesses_json(std::span<const GhpWitness> witnesses);

}  // namespace totient
