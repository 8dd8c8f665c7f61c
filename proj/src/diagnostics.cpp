#include "totient/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

#include <boost/multiprecision/cpp_int.hpp>

#include "totient/errors.hpp"
#include "totient/parallel.hpp"
#include "totient/primality.hpp"

namespace totient {
namespace {

using Factors = std::vector<PrimePower>;

// Factorization of (p - ell)(p + ell) from its two halves.
Factors merge_factors(std::span<const PrimePower> a, std::span<const PrimePower> b) {
    Factors out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].prime < b[j].prime)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].prime < a[i].prime) {
            out.push_back(b[j++]);
        } else {
            out.push_back(PrimePower{a[i].prime, static_cast<u64>(a[i].exponent + b[j].exponent)});
            ++i;
            ++j;
        }
    }
    return out;
}

u128 ipow(u64 base, unsigned e) {
    u128 r = 1;
    while (e-- > 0) r *= base;
    return r;
}

bool prime_power_fits(const PrimePower& f, u64 bound) {
    u128 v = 1;
    for (unsigned e = 0; e < f.exponent; ++e) {
        v *= f.prime;
        if (v > bound) return false;
    }
    return true;
}

// phi(m) for the y-smooth part described by factors.
u128 smooth_phi(std::span<const PrimePower> factors, u64 bound) {
    u128 phi = 1;
    for (const auto& f : factors) {
        if (f.prime > bound) break;
        phi *= ipow(f.prime, static_cast<unsigned>(f.exponent - 1)) * (f.prime - 1);
    }
    return phi;
}

long double half_ulp(double t) { return 0.5L * (std::nextafter(t, INFINITY) - t); }

void require_prime_above(u64 p, u64 ell) {
    if (ell < 1 || p <= ell || p % 2 == 0 || !is_prime_u64(p)) {
        throw DomainError("need an odd prime p > ell, got p=" + std::to_string(p) + " ell=" + std::to_string(ell));
    }
}

struct ScanWindow {
    u64 lo;
    u64 hi;
    u64 sieve_lo;
    u64 sieve_hi;
};

ScanWindow scan_window(u64 index, u64 ell, u64 x, u64 size) {
    const u64 lo = 1 + index * size;
    const u64 hi = std::min(x, lo + size - 1);
    return {lo, hi, lo > ell ? lo - ell : 1, hi + ell};
}

void validate_scan(u64 ell, u64 x, const ScanOptions& scan) {
    if (ell < 1) throw ConfigError("ell must be >= 1");
    if (x < 3) throw ConfigError("x must be >= 3");
    if (x > kMaxValue - ell) throw ConfigError("x + ell exceeds 2^40");
    if (scan.window_size < 1) throw ConfigError("window size must be >= 1");
}

// Streams factored windows over odd primes ell < p <= x, calling
// visit(acc, p, minus, plus). Window accumulators are combined in order.
template <class Acc, class Visit, class Combine>
Acc scan_factored(u64 ell, u64 x, const ScanOptions& scan, bool skip_divisors_of_ell, Visit visit, Combine combine) {
    validate_scan(ell, x, scan);
    const BasePrimes base = base_primes_for(x + ell);
    const u64 windows = (x + scan.window_size - 1) / scan.window_size;
    Acc total{};
    ordered_parallel_for(
        0, windows, resolve_threads(scan.threads),
        [&](std::size_t index) {
            const ScanWindow sw = scan_window(index, ell, x, scan.window_size);
            const FactoredWindow fw =
                factor_window(make_window(sw.sieve_lo, sw.sieve_hi, scan.window_size + 2 * ell), base);
            Acc acc{};
            for (u64 p = std::max(sw.lo, ell + 1); p <= sw.hi; ++p) {
                if (p % 2 == 0 || fw.phi_of(p) != p - 1) continue;
                if (skip_divisors_of_ell && ell % p == 0) continue;
                visit(acc, p, fw.factors_of(p - ell), fw.factors_of(p + ell));
            }
            return acc;
        },
        [&](std::size_t, Acc&& part) { combine(total, std::move(part)); });
    return total;
}

// As scan_factored with totients only: visit(acc, p, phi_minus, phi_plus).
template <class Acc, class Visit, class Combine>
Acc scan_totient(u64 ell, u64 x, const ScanOptions& scan, Visit visit, Combine combine) {
    validate_scan(ell, x, scan);
    const BasePrimes base = base_primes_for(x + ell);
    const u64 windows = (x + scan.window_size - 1) / scan.window_size;
    Acc total{};
    ordered_parallel_for(
        0, windows, resolve_threads(scan.threads),
        [&](std::size_t index) {
            const ScanWindow sw = scan_window(index, ell, x, scan.window_size);
            const std::vector<u64> phi =
                totient_window(make_window(sw.sieve_lo, sw.sieve_hi, scan.window_size + 2 * ell), base);
            auto at = [&](u64 n) { return phi[n - sw.sieve_lo]; };
            Acc acc{};
            for (u64 p = std::max(sw.lo, ell + 1); p <= sw.hi; ++p) {
                if (p % 2 == 0 || at(p) != p - 1) continue;
                visit(acc, p, at(p - ell), at(p + ell));
            }
            return acc;
        },
        [&](std::size_t, Acc&& part) { combine(total, std::move(part)); });
    return total;
}

// Neumaier compensated sum.
struct CompensatedSum {
    long double sum = 0;
    long double carry = 0;
    void add(long double v) {
        long double t = sum + v;
        if (std::fabs(sum) >= std::fabs(v)) {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    long double value() const { return sum + carry; }
};

std::string format_fixed(long double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*Lf", digits, v);
    return buf;
}

}  // namespace

SmoothParams SmoothParams::for_range(u64 x) {
    if (x < 16) throw DomainError("log log x is undefined or negative for x < 16");
    return SmoothParams{std::log(std::log(static_cast<double>(x)))};
}

SmoothParams SmoothParams::with_y(double y) {
    if (!(y >= 1.0) || !std::isfinite(y)) throw DomainError("smoothness bound y must be >= 1");
    return SmoothParams{y};
}

double SmoothParams::h_threshold() const { return 1.0 / (y * std::sqrt(std::log(y))); }
double SmoothParams::omega_low() const { return 1.5 * std::log(std::log(y)); }
double SmoothParams::omega_high() const { return 2.5 * std::log(std::log(y)); }
double SmoothParams::ratio_threshold() const { return std::cbrt(std::log(y)); }
double SmoothParams::weird_threshold() const { return 4.0 / (y * std::sqrt(std::log(y))); }

bool above_threshold(const Rational& r, double threshold) {
    return r.to_long_double() > static_cast<long double>(threshold) + half_ulp(threshold);
}

bool below_threshold(const Rational& r, double threshold) {
    return r.to_long_double() < static_cast<long double>(threshold) - half_ulp(threshold);
}

bool outside_interval(u64 v, double low, double high) {
    const long double x = static_cast<long double>(v);
    return x < low - half_ulp(low) || x > high + half_ulp(high);
}

u128 lcm_upto(double y) {
    if (!(y >= 1.0)) throw DomainError("lcm_upto needs y >= 1");
    const u64 bound = static_cast<u64>(y);
    if (bound > 200) throw std::overflow_error("lcm(1..y) exceeds 128 bits");
    u128 l = 1;
    const BasePrimes base = base_primes(std::max<u64>(2, bound));
    for (u64 q : base.primes()) {
        if (q > bound) break;
        u64 qb = q;
        while (qb <= bound / q) qb *= q;
        if (l > ~u128{0} / qb) throw std::overflow_error("lcm(1..y) exceeds 128 bits");
        l *= qb;
    }
    return l;
}

bool divides_lcm_upto(u128 d, double y) {
    if (d == 0) return false;
    const u64 bound = static_cast<u64>(y);
    for (u64 q = 2; q <= bound && d > 1; ++q) {
        if (d % q != 0) continue;
        u64 qb = 1;
        while (d % q == 0) {
            d /= q;
            if (qb > bound / q) return false;
            qb *= q;
        }
    }
    return d == 1;
}

u128 smooth_part(std::span<const PrimePower> factors, double y) {
    const u64 bound = static_cast<u64>(y);
    u128 d = 1;
    for (const auto& f : factors) {
        if (f.prime > bound) break;
        d *= ipow(f.prime, static_cast<unsigned>(f.exponent));
    }
    return d;
}

u64 smooth_part(u64 n, double y) { return static_cast<u64>(smooth_part(factor_naive(n), y)); }

unsigned omega_y(std::span<const PrimePower> factors, double y) {
    const u64 bound = static_cast<u64>(y);
    return static_cast<unsigned>(
        std::count_if(factors.begin(), factors.end(), [&](const PrimePower& f) { return f.prime <= bound; }));
}

unsigned omega_y(u64 n, double y) { return omega_y(factor_naive(n), y); }

Rational h_y(std::span<const PrimePower> factors, double y) {
    const u64 bound = static_cast<u64>(y);
    Rational h;
    for (const auto& f : factors) {
        if (f.prime > bound) h += Rational(1, static_cast<i128>(f.prime));
    }
    return h;
}

Rational h_y(u64 n, double y) { return h_y(factor_naive(n), y); }

Rational phi_ratio(std::span<const PrimePower> factors) {
    i128 num = 1;
    i128 den = 1;
    for (const auto& f : factors) {
        num *= static_cast<i128>(f.prime - 1);
        den *= static_cast<i128>(f.prime);
    }
    return Rational(num, den);
}

int s_sign(u64 p, u64 ell, u64 phi_minus, u64 phi_plus) {
    const u128 left = u128{phi_minus} * (p + ell);
    const u128 right = u128{phi_plus} * (p - ell);
    return (left > right) - (left < right);
}

int s_sign(u64 p, u64 ell) {
    require_prime_above(p, ell);
    return s_sign(p, ell, phi_naive(p - ell), phi_naive(p + ell));
}

SmoothSplit smooth_split(u64 p, u64 ell, double y, std::span<const PrimePower> minus, std::span<const PrimePower> plus) {
    const u64 bound = static_cast<u64>(y);
    SmoothSplit s;
    s.p = p;
    s.ell = ell;
    s.m1 = static_cast<u64>(smooth_part(minus, y));
    s.m2 = static_cast<u64>(smooth_part(plus, y));
    s.n1 = (p - ell) / s.m1;
    s.n2 = (p + ell) / s.m2;

    u128 phi_minus = 1, phi_plus = 1;
    for (const auto& f : minus) phi_minus *= ipow(f.prime, static_cast<unsigned>(f.exponent - 1)) * (f.prime - 1);
    for (const auto& f : plus) phi_plus *= ipow(f.prime, static_cast<unsigned>(f.exponent - 1)) * (f.prime - 1);
    s.s_sign = s_sign(p, ell, static_cast<u64>(phi_minus), static_cast<u64>(phi_plus));

    const u128 left = smooth_phi(minus, bound) * s.m2;
    const u128 right = smooth_phi(plus, bound) * s.m1;
    s.smooth_sign = (left > right) - (left < right);
    return s;
}

SmoothSplit smooth_split(u64 p, u64 ell, double y) {
    require_prime_above(p, ell);
    return smooth_split(p, ell, y, factor_naive(p - ell), factor_naive(p + ell));
}

void require_flag_params(const SmoothParams& params) {
    if (!(params.y > std::exp(1.0))) {
        throw DomainError("exception thresholds need y > e; pass a larger y override (got y=" +
                          std::to_string(params.y) + ")");
    }
}

ExceptionFlags exception_flags(u64 p, u64 /*ell*/, const SmoothParams& params, std::span<const PrimePower> minus,
                               std::span<const PrimePower> plus) {
    const u64 bound = params.bound();
    const Factors all = merge_factors(minus, plus);

    ExceptionFlags f;
    f.p = p;
    f.smooth = smooth_part(all, params.y);
    f.e1 = false;
    for (const auto& pp : all) {
        if (pp.prime > bound) break;
        if (!prime_power_fits(pp, bound)) f.e1 = true;
    }
    f.omega_y_total = omega_y(all, params.y);
    f.h_minus = h_y(minus, params.y);
    f.h_plus = h_y(plus, params.y);
    i128 num = 1, den = 1;
    for (const auto& pp : all) {
        num *= static_cast<i128>(pp.prime);
        den *= static_cast<i128>(pp.prime - 1);
    }
    f.ratio = Rational(num, den);

    const double h_t = params.h_threshold();
    f.e2 = above_threshold(f.h_minus, h_t) || above_threshold(f.h_plus, h_t);
    f.e3 = outside_interval(f.omega_y_total, params.omega_low(), params.omega_high());
    f.e4 = above_threshold(f.ratio, params.ratio_threshold());
    return f;
}

ExceptionFlags exception_flags(u64 p, u64 ell, const SmoothParams& params) {
    require_prime_above(p, ell);
    require_flag_params(params);
    return exception_flags(p, ell, params, factor_naive(p - ell), factor_naive(p + ell));
}

std::string flags_csv_header() { return "p,e1,e2,e3,e4,omega_y,h_minus,h_plus,ratio\n"; }

std::string flags_csv_row(const ExceptionFlags& f) {
    return std::to_string(f.p) + ',' + (f.e1 ? '1' : '0') + ',' + (f.e2 ? '1' : '0') + ',' + (f.e3 ? '1' : '0') + ',' +
           (f.e4 ? '1' : '0') + ',' + std::to_string(f.omega_y_total) + ',' + f.h_minus.to_string() + ',' +
           f.h_plus.to_string() + ',' + f.ratio.to_string() + '\n';
}

DensityReport density_report(u64 ell, u64 x, const SmoothParams& params, const ScanOptions& scan) {
    require_flag_params(params);
    DensityReport report = scan_factored<DensityReport>(
        ell, x, scan, true,
        [&](DensityReport& acc, u64 p, std::span<const PrimePower> minus, std::span<const PrimePower> plus) {
            const ExceptionFlags f = exception_flags(p, ell, params, minus, plus);
            ++acc.primes;
            acc.e1 += f.e1;
            acc.e2 += f.e2;
            acc.e3 += f.e3;
            acc.e4 += f.e4;
            if (f.convenient()) {
                ++acc.convenient;
                acc.weird += smooth_split(p, ell, params.y, minus, plus).weird();
            }
        },
        [](DensityReport& total, DensityReport&& part) {
            total.primes += part.primes;
            total.e1 += part.e1;
            total.e2 += part.e2;
            total.e3 += part.e3;
            total.e4 += part.e4;
            total.convenient += part.convenient;
            total.weird += part.weird;
        });
    report.ell = ell;
    report.x = x;
    report.y = params.y;
    return report;
}

std::string density_csv(std::span<const DensityReport> rows) {
    std::string out = "ell,x,y,primes,e1,e2,e3,e4,convenient,weird,e1_ratio,e2_ratio,e3_ratio,e4_ratio\n";
    for (const auto& r : rows) {
        out += std::to_string(r.ell) + ',' + std::to_string(r.x) + ',' + format_fixed(r.y, 6) + ',' +
               std::to_string(r.primes) + ',' + std::to_string(r.e1) + ',' + std::to_string(r.e2) + ',' +
               std::to_string(r.e3) + ',' + std::to_string(r.e4) + ',' + std::to_string(r.convenient) + ',' +
               std::to_string(r.weird) + ',' + format_fixed(r.ratio(r.e1), 6) + ',' + format_fixed(r.ratio(r.e2), 6) +
               ',' + format_fixed(r.ratio(r.e3), 6) + ',' + format_fixed(r.ratio(r.e4), 6) + '\n';
    }
    return out;
}

std::vector<ExceptionFlags> flag_scan(u64 ell, u64 x, const SmoothParams& params, const ScanOptions& scan) {
    require_flag_params(params);
    return scan_factored<std::vector<ExceptionFlags>>(
        ell, x, scan, true,
        [&](std::vector<ExceptionFlags>& acc, u64 p, std::span<const PrimePower> minus,
            std::span<const PrimePower> plus) { acc.push_back(exception_flags(p, ell, params, minus, plus)); },
        [](std::vector<ExceptionFlags>& total, std::vector<ExceptionFlags>&& part) {
            total.insert(total.end(), part.begin(), part.end());
        });
}

u64 PairFamily::weird_count() const {
    return static_cast<u64>(std::count_if(pairs.begin(), pairs.end(), [](const MPair& p) { return p.weird; }));
}

PairFamily pair_enumerate(u64 d, double y) {
    if (d < 2 || d % 2 != 0) throw DomainError("pair enumeration needs an even D >= 2, got " + std::to_string(d));
    const Factors factors = factor_naive(d);
    PairFamily family;
    family.d = d;
    family.y = y;
    family.hypotheses = d % 24 == 0 && divides_lcm_upto(d, y);

    const unsigned v2 = static_cast<unsigned>(factors.front().exponent);
    if (v2 < 2) return family;  // one side would be odd

    // The 2-part of m1 is 2 or 2^(v2-1); every odd prime power goes whole.
    std::vector<u64> two_parts = {2};
    if (v2 >= 3) two_parts.push_back(u64{1} << (v2 - 1));
    std::vector<u64> odd_powers;
    for (std::size_t i = 1; i < factors.size(); ++i) {
        odd_powers.push_back(static_cast<u64>(ipow(factors[i].prime, static_cast<unsigned>(factors[i].exponent))));
    }

    const double threshold = SmoothParams{y}.weird_threshold();
    const bool can_be_weird = family.hypotheses && y > 1.0;
    for (u64 two : two_parts) {
        for (u64 mask = 0; mask < (u64{1} << odd_powers.size()); ++mask) {
            u64 m1 = two;
            for (std::size_t i = 0; i < odd_powers.size(); ++i) {
                if (mask >> i & 1) m1 *= odd_powers[i];
            }
            MPair pair;
            pair.m1 = m1;
            pair.m2 = d / m1;
            pair.difference = phi_ratio(factor_naive(pair.m1)) - phi_ratio(factor_naive(pair.m2));
            const Rational magnitude = pair.difference.sign() < 0 ? -pair.difference : pair.difference;
            pair.weird = can_be_weird && below_threshold(magnitude, threshold);
            family.pairs.push_back(pair);
        }
    }
    std::sort(family.pairs.begin(), family.pairs.end(), [](const MPair& a, const MPair& b) { return a.m1 < b.m1; });

    std::vector<u64> odd_parts;
    for (const auto& p : family.pairs) {
        if (p.weird) odd_parts.push_back(p.m1 >> __builtin_ctzll(p.m1));
    }
    for (u64 a : odd_parts) {
        for (u64 b : odd_parts) {
            if (a < b && b % a == 0) ++family.antichain_violations;
        }
    }
    return family;
}

SanityResult sanity_sum(double y, SanityMode mode, SanityRestrictions restrictions) {
    if (!(y >= 8.0)) throw DomainError("sanity sum needs y >= 8");
    const u64 bound = static_cast<u64>(y);
    SanityResult result;
    result.y = y;
    result.mode = mode;

    if (mode == SanityMode::euler) {
        if (bound > kMaxBaseLimit) throw DomainError("euler mode supports y <= 2^21");
        const BasePrimes base = base_primes(bound);
        long double value = 1;
        for (u64 r : base.primes()) {
            long double factor = 0;
            long double inv_power = 1;
            u64 power = 1;
            unsigned e = 0;
            while (power <= bound / r) {
                power *= r;
                ++e;
                inv_power /= static_cast<long double>(r);
                if (r == 2 && e >= 3) factor += 4 * inv_power;
                if (r == 3) factor += 2 * inv_power;
                if (r >= 5) factor += 2 * inv_power;
            }
            if (r >= 5) factor += static_cast<long double>(r - 3) / static_cast<long double>(r - 1);
            value *= factor;
            ++result.terms;
        }
        result.value = value;
        return result;
    }

    if (bound > 40) throw DomainError("exhaustive mode supports y <= 40");
    const BasePrimes base = base_primes(bound);
    struct Choice {
        u64 prime;
        u64 max_exp;
    };
    std::vector<Choice> choices;
    for (u64 r : base.primes()) {
        u64 e = 0;
        for (u64 power = 1; power <= bound / r; power *= r) ++e;
        choices.push_back({r, e});
    }
    const SmoothParams params{y};

    long double total = 0;
    Factors current;
    std::function<void(std::size_t, u64)> walk = [&](std::size_t i, u64 d) {
        if (i == choices.size()) {
            const unsigned omega = static_cast<unsigned>(current.size());
            if (restrictions.omega_window && outside_interval(omega, params.omega_low(), params.omega_high())) return;
            if (restrictions.ratio_cap) {
                i128 num = 1, den = 1;
                for (const auto& f : current) {
                    num *= static_cast<i128>(f.prime);
                    den *= static_cast<i128>(f.prime - 1);
                }
                if (above_threshold(Rational(num, den), params.ratio_threshold())) return;
            }
            long double term = std::ldexp(1.0L, static_cast<int>(omega) + 1) / static_cast<long double>(d);
            for (const auto& c : choices) {
                if (c.prime < 5) continue;
                if (d % c.prime != 0) term *= static_cast<long double>(c.prime - 3) / static_cast<long double>(c.prime - 1);
            }
            total += term;
            ++result.terms;
            return;
        }
        const Choice& c = choices[i];
        const u64 min_exp = c.prime == 2 ? 3 : (c.prime == 3 ? 1 : 0);
        u64 power = 1;
        for (u64 e = 0; e <= c.max_exp; ++e) {
            if (e >= min_exp) {
                if (e > 0) current.push_back(PrimePower{c.prime, e});
                walk(i + 1, d * power);
                if (e > 0) current.pop_back();
            }
            power *= c.prime;
        }
    };
    walk(0, 1);
    result.value = total;
    return result;
}

std::string sanity_csv(std::span<const SanityResult> rows) {
    std::string out = "y,mode,value,abs_dev_from_1\n";
    for (const auto& r : rows) {
        out += format_fixed(r.y, 6) + ',' + (r.mode == SanityMode::euler ? "euler" : "exhaustive") + ',' +
               format_fixed(r.value, 12) + ',' + format_fixed(r.deviation(), 12) + '\n';
    }
    return out;
}

std::vector<Fraction> mod2m_census(u64 ell, std::span<const unsigned> ms, u64 x, const ScanOptions& scan) {
    for (unsigned m : ms) {
        if (m < 1 || m > 63) throw ConfigError("m must lie in [1, 63]");
    }
    // histogram of min(v2(phi(p - ell)), v2(phi(p + ell)))
    using Histogram = std::array<u64, 65>;
    const Histogram hist = scan_totient<Histogram>(
        ell, x, scan,
        [](Histogram& acc, u64, u64 phi_minus, u64 phi_plus) {
            const int v = std::min(__builtin_ctzll(phi_minus), __builtin_ctzll(phi_plus));
            ++acc[static_cast<std::size_t>(v)];
        },
        [](Histogram& total, Histogram&& part) {
            for (std::size_t i = 0; i < total.size(); ++i) total[i] += part[i];
        });
    u64 total = 0;
    for (u64 c : hist) total += c;
    std::vector<Fraction> out;
    for (unsigned m : ms) {
        Fraction f;
        f.total = total;
        for (std::size_t v = m; v < hist.size(); ++v) f.hits += hist[v];
        out.push_back(f);
    }
    return out;
}

Fraction mod2m_census(u64 ell, unsigned m, u64 x, const ScanOptions& scan) {
    const unsigned ms[] = {m};
    return mod2m_census(ell, ms, x, scan).front();
}

ReciprocalMean reciprocal_mean(u64 ell, int sign, u64 x, const ScanOptions& scan) {
    if (sign != 1 && sign != -1) throw ConfigError("sign must be +1 or -1");
    if (x < 10) throw DomainError("reciprocal mean needs x >= 10");
    struct Acc {
        u64 primes = 0;
        CompensatedSum sum;
    };
    const Acc acc = scan_totient<Acc>(
        ell, x, scan,
        [&](Acc& a, u64 p, u64 phi_minus, u64 phi_plus) {
            const u64 n = sign < 0 ? p - ell : p + ell;
            const u64 phi = sign < 0 ? phi_minus : phi_plus;
            ++a.primes;
            a.sum.add(static_cast<long double>(n) / static_cast<long double>(phi));
        },
        [](Acc& total, Acc&& part) {
            total.primes += part.primes;
            total.sum.add(part.sum.value());
        });
    return ReciprocalMean{acc.primes, acc.sum.value()};
}

std::string reciprocal_sum_exact(u64 ell, int sign, u64 x) {
    using boost::multiprecision::cpp_rational;
    if (sign != 1 && sign != -1) throw ConfigError("sign must be +1 or -1");
    cpp_rational sum = 0;
    const BasePrimes base = base_primes_for(x);
    for (u64 p : primes_in(make_window(1, x, x), base)) {
        if (p % 2 == 0 || p <= ell) continue;
        const u64 n = sign < 0 ? p - ell : p + ell;
        sum += cpp_rational(n, phi_naive(n));
    }
    return numerator(sum).str() + "/" + denominator(sum).str();
}

PiDCensus pi_d_census(u64 ell, const SmoothParams& params, u64 x, const ScanOptions& scan) {
    PiDCensus census = scan_factored<PiDCensus>(
        ell, x, scan, true,
        [&](PiDCensus& acc, u64, std::span<const PrimePower> minus, std::span<const PrimePower> plus) {
            const Factors all = merge_factors(minus, plus);
            ++acc.primes;
            const u64 bound = params.bound();
            bool fits = true;
            for (const auto& f : all) {
                if (f.prime > bound) break;
                if (!prime_power_fits(f, bound)) fits = false;
            }
            if (!fits) {
                ++acc.inconvenient;
            } else {
                ++acc.counts[smooth_part(all, params.y)];
            }
        },
        [](PiDCensus& total, PiDCensus&& part) {
            total.primes += part.primes;
            total.inconvenient += part.inconvenient;
            for (const auto& [d, c] : part.counts) total.counts[d] += c;
        });
    census.ell = ell;
    census.x = x;
    census.y = params.y;
    return census;
}

u64 count_pi_d(u128 d, u64 ell, const SmoothParams& params, u64 x, const ScanOptions& scan) {
    if (!divides_lcm_upto(d, params.y)) throw DomainError("D must divide L_y");
    const PiDCensus census = pi_d_census(ell, params, x, scan);
    auto it = census.counts.find(d);
    return it == census.counts.end() ? 0 : it->second;
}

double pi_d_main_term(u128 d, const SmoothParams& params, u64 prime_count) {
    if (d % 24 != 0) throw DomainError("main term assumes 24 | D");
    const u64 bound = params.bound();
    const BasePrimes base = base_primes(std::max<u64>(2, bound));
    long double value = static_cast<long double>(prime_count) * 2 / static_cast<long double>(d);
    for (u64 r : base.primes()) {
        if (r > bound) break;
        if (d % r == 0) {
            value *= 2;
        } else {
            value *= static_cast<long double>(r - 3) / static_cast<long double>(r - 1);
        }
    }
    return static_cast<double>(value);
}

bool admissible_for_ell(u128 d, u64 ell) {
    if (gcd(d, u128{ell}) != 1) return false;
    if (ell % 2 == 0 && d % 2 == 0) return false;
    if (ell % 2 == 1 && d % 8 != 0) return false;
    if ((d % 3 == 0) == (ell % 3 == 0)) return false;
    return true;
}

}  // namespace totient
