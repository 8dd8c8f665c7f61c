#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "totient/int128.hpp"
#include "totient/rational.hpp"
#include "totient/sieve.hpp"

namespace totient {

// Smoothness level. Natural logarithms throughout.
struct SmoothParams {
    double y = 3.0;

    // y = log log x; degenerate (below 4) at every feasible x.
    static SmoothParams for_range(u64 x);
    static SmoothParams with_y(double y);

    u64 bound() const { return static_cast<u64>(y); }
    // 1 / (y sqrt(log y))
    double h_threshold() const;
    // [1.5 log log y, 2.5 log log y]
    double omega_low() const;
    double omega_high() const;
    // (log y)^(1/3)
    double ratio_threshold() const;
    // 4 / (y sqrt(log y))
    double weird_threshold() const;
};

// Exact-versus-real comparisons. Values within half an ulp of the threshold
// count as ties, and ties never flag.
bool above_threshold(const Rational& r, double threshold);
bool below_threshold(const Rational& r, double threshold);
bool outside_interval(u64 v, double low, double high);

// lcm(1, ..., floor(y)). Throws DomainError for y < 1 and
// std::overflow_error once the value leaves 128 bits (near y = 88).
u128 lcm_upto(double y);

// d | lcm(1..floor(y)) without forming the lcm: every prime power exactly
// dividing d must be <= y.
bool divides_lcm_upto(u128 d, double y);

// Largest y-smooth divisor.
u128 smooth_part(std::span<const PrimePower> factors, double y);
u64 smooth_part(u64 n, double y);

unsigned omega_y(std::span<const PrimePower> factors, double y);
unsigned omega_y(u64 n, double y);

// Sum of 1/r over primes r > y dividing n.
Rational h_y(std::span<const PrimePower> factors, double y);
Rational h_y(u64 n, double y);

// phi(n)/n as an exact fraction.
Rational phi_ratio(std::span<const PrimePower> factors);

// Sign of phi(p-ell)/(p-ell) - phi(p+ell)/(p+ell) by integer cross-multiplication.
int s_sign(u64 p, u64 ell, u64 phi_minus, u64 phi_plus);
// Same, computing phi by trial division. Throws DomainError unless p is an
// odd prime above ell.
int s_sign(u64 p, u64 ell);

struct SmoothSplit {
    u64 p = 0;
    u64 ell = 0;
    u64 m1 = 1, n1 = 1, m2 = 1, n2 = 1;
    int s_sign = 0;
    // sign of phi(m1)/m1 - phi(m2)/m2
    int smooth_sign = 0;
    // large primes overturn the small-prime verdict
    bool weird() const { return s_sign * smooth_sign < 0; }
};

SmoothSplit smooth_split(u64 p, u64 ell, double y, std::span<const PrimePower> minus, std::span<const PrimePower> plus);
SmoothSplit smooth_split(u64 p, u64 ell, double y);

struct ExceptionFlags {
    u64 p = 0;
    bool e1 = false, e2 = false, e3 = false, e4 = false;
    u128 smooth = 1;  // D_y(p^2 - ell^2)
    unsigned omega_y_total = 0;
    Rational h_minus, h_plus;
    Rational ratio;  // (p^2 - ell^2) / phi(p^2 - ell^2)

    bool convenient() const { return !(e1 || e2 || e3 || e4); }
};

// Throws DomainError when y <= e (thresholds undefined).
void require_flag_params(const SmoothParams& params);

ExceptionFlags exception_flags(u64 p, u64 ell, const SmoothParams& params, std::span<const PrimePower> minus,
                               std::span<const PrimePower> plus);
ExceptionFlags exception_flags(u64 p, u64 ell, const SmoothParams& params);

// `p,e1,e2,e3,e4,omega_y,h_minus,h_plus,ratio` row, flags as 0/1.
std::string flags_csv_header();
std::string flags_csv_row(const ExceptionFlags& f);

// Options shared by every streaming diagnostic.
struct ScanOptions {
    u64 window_size = u64{1} << 18;
    std::optional<unsigned> threads;
};

// Counts over odd primes ell < p <= x not dividing ell.
struct DensityReport {
    u64 ell = 0;
    u64 x = 0;
    double y = 0;
    u64 primes = 0;
    u64 e1 = 0, e2 = 0, e3 = 0, e4 = 0;
    u64 convenient = 0;
    u64 weird = 0;  // convenient primes with s_sign opposite to smooth_sign

    double ratio(u64 count) const { return primes == 0 ? 0.0 : static_cast<double>(count) / primes; }
};

DensityReport density_report(u64 ell, u64 x, const SmoothParams& params, const ScanOptions& scan = {});
std::string density_csv(std::span<const DensityReport> rows);

// Per-prime flag rows for every prime in the scan domain.
std::vector<ExceptionFlags> flag_scan(u64 ell, u64 x, const SmoothParams& params, const ScanOptions& scan = {});

struct MPair {
    u64 m1 = 0;
    u64 m2 = 0;
    Rational difference;  // phi(m1)/m1 - phi(m2)/m2
    bool weird = false;
};

struct PairFamily {
    u64 d = 0;
    double y = 0;
    bool hypotheses = false;  // 24 | D and D | L_y
    std::vector<MPair> pairs;  // ascending m1
    // Ordered weird pairs (a, b) whose odd parts of m1 satisfy a | b, a < b.
    u64 antichain_violations = 0;

    u64 weird_count() const;
};

// Every ordered (m1, m2) with m1 m2 = D and gcd(m1, m2) = 2.
// Throws DomainError for odd D or D < 2.
PairFamily pair_enumerate(u64 d, double y);

enum class SanityMode { exhaustive, euler };

struct SanityRestrictions {
    bool omega_window = false;  // omega(D) in [1.5 log log y, 2.5 log log y]
    bool ratio_cap = false;     // D / phi(D) <= (log y)^(1/3)
};

struct SanityResult {
    double y = 0;
    SanityMode mode = SanityMode::euler;
    long double value = 0;
    u64 terms = 0;  // divisors summed (exhaustive) or primes multiplied (euler)
    long double deviation() const { return value < 1 ? 1 - value : value - 1; }
};

// Sum over D | L_y with 24 | D of 2^(omega(D)+1)/D * prod_{5<=r<=y, r !| D} (r-3)/(r-1).
// Exhaustive mode enumerates divisors (8 <= y <= 40); euler mode evaluates
// the same sum as a product with each prime's series truncated at r^b <= y
// and ignores restrictions. Throws DomainError for y < 8.
SanityResult sanity_sum(double y, SanityMode mode, SanityRestrictions restrictions = {});
std::string sanity_csv(std::span<const SanityResult> rows);

struct Fraction {
    u64 hits = 0;
    u64 total = 0;
    double value() const { return total == 0 ? 0.0 : static_cast<double>(hits) / total; }
};

// For each m in ms: fraction of odd primes ell < p <= x with 2^m dividing
// both phi(p - ell) and phi(p + ell).
std::vector<Fraction> mod2m_census(u64 ell, std::span<const unsigned> ms, u64 x, const ScanOptions& scan = {});
Fraction mod2m_census(u64 ell, unsigned m, u64 x, const ScanOptions& scan = {});

struct ReciprocalMean {
    u64 primes = 0;
    long double sum = 0;
    long double mean() const { return primes == 0 ? 0 : sum / primes; }
};

// Mean of (p + sign ell)/phi(p + sign ell) over odd primes ell < p <= x,
// sign = +1 or -1. Compensated summation in window order.
ReciprocalMean reciprocal_mean(u64 ell, int sign, u64 x, const ScanOptions& scan = {});

// The same sum accumulated exactly, as "num/den". Cost grows with the
// denominator lcm; meant for x up to ~10^4.
std::string reciprocal_sum_exact(u64 ell, int sign, u64 x);

// Histogram of D_y(p^2 - ell^2) over odd primes ell < p <= x not dividing ell.
struct PiDCensus {
    u64 ell = 0;
    u64 x = 0;
    double y = 0;
    u64 primes = 0;
    u64 inconvenient = 0;  // D_y does not divide L_y
    std::map<u128, u64> counts;
};

PiDCensus pi_d_census(u64 ell, const SmoothParams& params, u64 x, const ScanOptions& scan = {});

// #{p : D_y(p^2 - ell^2) = D}. Throws DomainError if D does not divide L_y.
u64 count_pi_d(u128 d, u64 ell, const SmoothParams& params, u64 x, const ScanOptions& scan = {});

// Main term 2^(omega(D)+1) pi / D * prod_{r<=y, r !| D} (r-3)/(r-1), for 24 | D.
double pi_d_main_term(u128 d, const SmoothParams& params, u64 prime_count);

// Divisibility pattern forced on D_y(p^2 - ell^2) for p > 3, p !| ell, y >= 3:
// coprime to ell, odd iff ell even, 8 | D iff ell odd, 3 | D iff 3 !| ell.
bool admissible_for_ell(u128 d, u64 ell);

}  // namespace totient
