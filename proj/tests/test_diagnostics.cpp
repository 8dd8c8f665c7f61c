#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "totient/diagnostics.hpp"
#include "totient/errors.hpp"

using namespace totient;

namespace {

u128 lcm_fold(u64 y) {
    u128 l = 1;
    for (u64 k = 2; k <= y; ++k) l = l / gcd(l, u128{k}) * k;
    return l;
}

std::vector<u64> odd_primes_upto(u64 x) {
    std::vector<u64> out;
    for (u64 p = 3; p <= x; p += 2) {
        if (oracle::is_prime(p)) out.push_back(p);
    }
    return out;
}

// Exception flags recomputed from trial division of p^2 - ell^2 in long double.
struct FlagOracle {
    bool e1, e2, e3, e4;
    u64 omega;
};

FlagOracle flags_oracle(u64 p, u64 ell, double y) {
    const u64 a = p - ell, b = p + ell;
    const u64 n = a * b;
    u64 d = 1, omega = 0;
    long double ratio = 1;
    for (auto [q, e] : oracle::factor(n)) {
        ratio *= static_cast<long double>(q) / (q - 1);
        if (q <= y) {
            ++omega;
            for (u64 i = 0; i < e; ++i) d *= q;
        }
    }
    auto h = [&](u64 m) {
        long double s = 0;
        for (auto [q, e] : oracle::factor(m)) {
            if (q > y) s += 1.0L / q;
        }
        return s;
    };
    const u128 l = lcm_fold(static_cast<u64>(y));
    const double logy = std::log(y);
    FlagOracle f;
    f.e1 = l % d != 0;
    f.e2 = std::max(h(a), h(b)) > 1.0 / (y * std::sqrt(logy));
    f.e3 = omega < 1.5 * std::log(logy) || omega > 2.5 * std::log(logy);
    f.e4 = ratio > std::cbrt(logy);
    f.omega = omega;
    return f;
}

}  // namespace

TEST_CASE("lcm_upto") {
    CHECK(lcm_upto(2) == 2);
    CHECK(lcm_upto(6) == 60);
    CHECK(lcm_upto(10) == 2520);
    CHECK(lcm_upto(10.9) == 2520);
    CHECK(lcm_upto(1) == 1);
    for (u64 y = 1; y <= 80; ++y) REQUIRE(lcm_upto(static_cast<double>(y)) == lcm_fold(y));
    CHECK_THROWS_AS(lcm_upto(0.5), DomainError);
    CHECK_THROWS_AS(lcm_upto(100), std::overflow_error);
}

TEST_CASE("divides_lcm_upto matches the lcm") {
    for (double y : {3.0, 5.0, 10.0, 20.0, 40.0}) {
        const u128 l = lcm_upto(y);
        for (u64 d = 1; d <= 20000; ++d) REQUIRE(divides_lcm_upto(d, y) == (l % d == 0));
    }
}

TEST_CASE("smooth part, omega_y, h_y") {
    CHECK(smooth_part(720, 5) == 720);
    CHECK(smooth_part(20, 3) == 4);
    CHECK(smooth_part(1, 7) == 1);
    CHECK(omega_y(60, 5) == 3);
    CHECK(omega_y(60, 3) == 2);
    CHECK(omega_y(1, 10) == 0);
    CHECK(h_y(35, 3) == Rational(12, 35));
    CHECK(h_y(1, 3) == Rational(0));
    CHECK(h_y(60, 5) == Rational(0));

    for (u64 n = 2; n <= 20000; ++n) {
        for (double y : {2.0, 3.0, 10.0}) {
            const u64 d = smooth_part(n, y);
            REQUIRE(n % d == 0);
            for (auto [q, e] : oracle::factor(d)) REQUIRE(q <= y);
            for (auto [q, e] : oracle::factor(n / d)) REQUIRE(q > y);
        }
    }
}

TEST_CASE("s_sign") {
    CHECK(s_sign(3, 1) == 0);
    CHECK(s_sign(17, 1) == 1);
    CHECK(s_sign(5, 1) == 1);
    CHECK(oracle::phi_trial(4) == oracle::phi_trial(6));
    CHECK_THROWS_AS(s_sign(9, 1), DomainError);
    CHECK_THROWS_AS(s_sign(2, 1), DomainError);
    CHECK_THROWS_AS(s_sign(5, 7), DomainError);

    // Zero only at p = 3 for ell = 1.
    const auto phi = oracle::phi_table(1'000'001);
    u64 zeros = 0;
    for (u64 p = 3; p <= 1'000'000; p += 2) {
        if (phi[p] != p - 1) continue;
        const int s = s_sign(p, 1, phi[p - 1], phi[p + 1]);
        const __int128 lhs = static_cast<__int128>(phi[p - 1]) * (p + 1);
        const __int128 rhs = static_cast<__int128>(phi[p + 1]) * (p - 1);
        REQUIRE(s == (lhs > rhs) - (lhs < rhs));
        if (s == 0) {
            REQUIRE(p == 3);
            ++zeros;
        }
    }
    CHECK(zeros == 1);
}

TEST_CASE("smooth_split") {
    auto tuple = [](const SmoothSplit& s) { return std::vector<u64>{s.m1, s.n1, s.m2, s.n2}; };
    CHECK(tuple(smooth_split(17, 1, 3)) == std::vector<u64>{16, 1, 18, 1});
    CHECK(tuple(smooth_split(17, 1, 2)) == std::vector<u64>{16, 1, 2, 9});
    CHECK(tuple(smooth_split(5, 1, 3)) == std::vector<u64>{4, 1, 6, 1});

    for (u64 ell : {1ull, 2ull, 6ull, 15ull}) {
        for (u64 p : odd_primes_upto(30000)) {
            if (p <= ell) continue;
            for (double y : {3.0, 10.0, 30.0}) {
                const SmoothSplit s = smooth_split(p, ell, y);
                REQUIRE(s.m1 * s.n1 == p - ell);
                REQUIRE(s.m2 * s.n2 == p + ell);
                REQUIRE(s.m1 == smooth_part(p - ell, y));
                REQUIRE(s.m2 == smooth_part(p + ell, y));
                if (ell == 1 && p >= 5) {
                    REQUIRE(std::gcd(s.m1, s.m2) == 2);
                    REQUIRE((p * p - 1) % 24 == 0);
                } else {
                    REQUIRE((2 * ell) % std::gcd(s.m1, s.m2) == 0);
                }
                REQUIRE(s.s_sign == s_sign(p, ell));
            }
        }
    }
}

TEST_CASE("exception_flags examples") {
    const ExceptionFlags f = exception_flags(17, 1, SmoothParams::with_y(3));
    CHECK(f.e1);
    CHECK(f.smooth == 288);
    const ExceptionFlags g = exception_flags(11, 1, SmoothParams::with_y(11));
    CHECK_FALSE(g.e1);
    CHECK(g.smooth == 120);
    // 5^2 - 1 = 24 has no prime factor above 11.
    const ExceptionFlags h = exception_flags(5, 1, SmoothParams::with_y(11));
    CHECK(h.h_minus == Rational(0));
    CHECK(h.h_plus == Rational(0));
    CHECK_FALSE(h.e2);

    CHECK_THROWS_AS(exception_flags(17, 1, SmoothParams::with_y(2.7)), DomainError);
    CHECK_THROWS_AS(require_flag_params(SmoothParams::with_y(2)), DomainError);
    CHECK(SmoothParams::for_range(100'000'000).y < 4);
}

TEST_CASE("exception_flags equal trial-division recomputation for p <= 1e4") {
    for (u64 ell : {1ull, 6ull, 7ull}) {
        for (double y : {3.0, 20.0, 50.0}) {
            const SmoothParams params = SmoothParams::with_y(y);
            for (u64 p : odd_primes_upto(10000)) {
                if (p <= ell || ell % p == 0) continue;
                const ExceptionFlags f = exception_flags(p, ell, params);
                const FlagOracle o = flags_oracle(p, ell, y);
                REQUIRE(f.e1 == o.e1);
                REQUIRE(f.e2 == o.e2);
                REQUIRE(f.e3 == o.e3);
                REQUIRE(f.e4 == o.e4);
                REQUIRE(f.omega_y_total == o.omega);
            }
        }
    }
}

TEST_CASE("flag_scan and density_report agree with the per-prime oracle") {
    const SmoothParams params = SmoothParams::with_y(20);
    ScanOptions scan;
    scan.window_size = 777;
    const std::vector<ExceptionFlags> rows = flag_scan(1, 10000, params, scan);
    const DensityReport r = density_report(1, 10000, params, scan);
    u64 e[4] = {0, 0, 0, 0}, conv = 0, weird = 0, n = 0;
    for (u64 p : odd_primes_upto(10000)) {
        if (p <= 1) continue;
        REQUIRE(n < rows.size());
        REQUIRE(rows[n].p == p);
        ++n;
        const FlagOracle o = flags_oracle(p, 1, 20);
        e[0] += o.e1, e[1] += o.e2, e[2] += o.e3, e[3] += o.e4;
        const bool c = !(o.e1 || o.e2 || o.e3 || o.e4);
        conv += c;
        if (c) weird += smooth_split(p, 1, 20).weird();
    }
    CHECK(rows.size() == n);
    CHECK(r.primes == n);
    CHECK(r.e1 == e[0]);
    CHECK(r.e2 == e[1]);
    CHECK(r.e3 == e[2]);
    CHECK(r.e4 == e[3]);
    CHECK(r.convenient == conv);
    CHECK(r.weird == weird);
    for (u64 c : {r.e1, r.e2, r.e3, r.e4}) {
        CHECK(r.ratio(c) >= 0.0);
        CHECK(r.ratio(c) <= 1.0);
    }
    ScanOptions four = scan;
    four.threads = 4;
    CHECK(density_csv(std::vector<DensityReport>{density_report(1, 10000, params, four)}) ==
          density_csv(std::vector<DensityReport>{r}));
}

TEST_CASE("e1 ratio does not increase with y") {
    double prev = 2;
    for (double y : {10.0, 20.0, 40.0}) {
        const DensityReport r = density_report(1, 1'000'000, SmoothParams::with_y(y));
        CHECK(r.ratio(r.e1) <= prev);
        prev = r.ratio(r.e1);
    }
}

TEST_CASE("flags csv") {
    const ExceptionFlags f = exception_flags(17, 1, SmoothParams::with_y(3));
    CHECK(flags_csv_header() == "p,e1,e2,e3,e4,omega_y,h_minus,h_plus,ratio\n");
    CHECK(flags_csv_row(f).rfind("17,1,", 0) == 0);
}

TEST_CASE("pair_enumerate examples") {
    const PairFamily f24 = pair_enumerate(24, 10);
    REQUIRE(f24.pairs.size() == 4);
    const std::vector<std::pair<u64, u64>> want{{2, 12}, {4, 6}, {6, 4}, {12, 2}};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(f24.pairs[i].m1 == want[i].first);
        CHECK(f24.pairs[i].m2 == want[i].second);
    }
    CHECK(f24.hypotheses);
    CHECK(f24.pairs[0].difference == Rational(1, 6));
    CHECK(pair_enumerate(8, 10).pairs.size() == 2);
    CHECK_FALSE(pair_enumerate(8, 10).hypotheses);
    CHECK(pair_enumerate(8, 10).weird_count() == 0);
    CHECK(pair_enumerate(120, 10).pairs.size() == 8);
    CHECK(pair_enumerate(6, 10).pairs.empty());  // 2 exactly divides D: one side is odd
    CHECK(pair_enumerate(12, 10).pairs.size() == 2);
    CHECK_THROWS_AS(pair_enumerate(15, 10), DomainError);
    CHECK_THROWS_AS(pair_enumerate(0, 10), DomainError);
}

TEST_CASE("pair counts equal exhaustive divisor search") {
    for (u64 d = 2; d <= 20000; d += 2) {
        REQUIRE(pair_enumerate(d, 1e6).pairs.size() == oracle::pair_count(d));
    }
    for (u64 d = 24; d <= 20000; d += 24) {
        REQUIRE(pair_enumerate(d, 1e6).pairs.size() == (u64{1} << oracle::factor(d).size()));
    }
}

TEST_CASE("weird flag follows the threshold") {
    const double y = 30;
    const double threshold = 4.0 / (y * std::sqrt(std::log(y)));
    for (u64 d = 24; d <= 5000; d += 24) {
        const PairFamily fam = pair_enumerate(d, y);
        const bool hyp = lcm_fold(30) % d == 0;
        REQUIRE(fam.hypotheses == hyp);
        for (const auto& p : fam.pairs) {
            const long double diff = static_cast<long double>(oracle::phi_trial(p.m1)) / p.m1 -
                                     static_cast<long double>(oracle::phi_trial(p.m2)) / p.m2;
            REQUIRE(p.weird == (hyp && std::fabs(diff) < threshold));
        }
    }
}

TEST_CASE("sanity_sum") {
    const SanityResult s10 = sanity_sum(10, SanityMode::exhaustive);
    CHECK(std::fabs(static_cast<double>(s10.value) - 8.0 / 21.0) < 1e-12);
    CHECK(s10.terms == 8);
    CHECK(std::fabs(static_cast<double>(sanity_sum(10, SanityMode::euler).value) - 8.0 / 21.0) < 1e-12);

    for (int y = 8; y <= 40; ++y) {
        const long double a = sanity_sum(y, SanityMode::exhaustive).value;
        const long double b = sanity_sum(y, SanityMode::euler).value;
        REQUIRE(std::fabs(static_cast<double>(a - b)) < 1e-12);
        const long double r = sanity_sum(y, SanityMode::exhaustive, {true, true}).value;
        REQUIRE(r <= a);
        REQUIRE(sanity_sum(y, SanityMode::exhaustive, {true, false}).value <= a);
        REQUIRE(sanity_sum(y, SanityMode::exhaustive, {false, true}).value <= a);
    }

    const SanityResult e2 = sanity_sum(100, SanityMode::euler);
    const SanityResult e3 = sanity_sum(1000, SanityMode::euler);
    const SanityResult e4 = sanity_sum(10000, SanityMode::euler);
    CHECK(e4.deviation() < 0.1);
    CHECK(e3.deviation() < e2.deviation());
    CHECK(e4.deviation() < e3.deviation());

    CHECK_THROWS_AS(sanity_sum(7.9, SanityMode::euler), DomainError);
    CHECK_THROWS_AS(sanity_sum(41, SanityMode::exhaustive), DomainError);
    CHECK(sanity_csv(std::vector<SanityResult>{s10}).rfind("y,mode,value,abs_dev_from_1\n", 0) == 0);
}

TEST_CASE("mod2m_census") {
    const Fraction f1 = mod2m_census(1, 1u, 100);
    CHECK(f1.total == 24);
    CHECK(f1.hits == 23);  // only p = 3 misses: phi(2) = 1

    const auto phi = oracle::phi_table(200'016);
    std::vector<unsigned> ms{1, 2, 3, 4, 5, 6, 7, 8};
    for (u64 ell : {1ull, 2ull, 9ull}) {
        const std::vector<Fraction> fr = mod2m_census(ell, ms, 200'000);
        for (std::size_t i = 0; i < ms.size(); ++i) {
            u64 hits = 0, total = 0;
            for (u64 p = ell + 1; p <= 200'000; ++p) {
                if (p % 2 == 0 || phi[p] != p - 1) continue;
                ++total;
                const u64 mod = u64{1} << ms[i];
                hits += phi[p - ell] % mod == 0 && phi[p + ell] % mod == 0;
            }
            REQUIRE(fr[i].total == total);
            REQUIRE(fr[i].hits == hits);
            if (i > 0) REQUIRE(fr[i].hits <= fr[i - 1].hits);
        }
    }
}

TEST_CASE("reciprocal sums") {
    CHECK(reciprocal_sum_exact(1, -1, 100) == "59671/924");
    const ReciprocalMean m = reciprocal_mean(1, -1, 100);
    CHECK(m.primes == 24);
    CHECK(std::fabs(static_cast<double>(m.sum) - 59671.0 / 924.0) < 1e-12);
    CHECK(m.mean() >= 1);

    const auto phi = oracle::phi_table(100'001);
    for (int sign : {-1, 1}) {
        long double want = 0;
        u64 n = 0;
        for (u64 p = 3; p <= 100'000; p += 2) {
            if (phi[p] != p - 1) continue;
            const u64 v = sign < 0 ? p - 1 : p + 1;
            want += static_cast<long double>(v) / phi[v];
            ++n;
        }
        const ReciprocalMean r = reciprocal_mean(1, sign, 100'000);
        CHECK(r.primes == n);
        CHECK(std::fabs(static_cast<double>(r.sum - want) / static_cast<double>(want)) < 1e-12);
        CHECK(r.mean() >= 1);
    }
}

TEST_CASE("pi_D census") {
    const SmoothParams params = SmoothParams::with_y(10);
    CHECK(count_pi_d(24, 1, params, 10000) == 139);
    CHECK_THROWS_AS(count_pi_d(16 * 3, 1, params, 10000), DomainError);

    for (u64 ell : {1ull, 2ull, 3ull, 6ull}) {
        const PiDCensus c = pi_d_census(ell, params, 50000);
        u64 sum = c.inconvenient;
        for (const auto& [d, count] : c.counts) {
            REQUIRE(divides_lcm_upto(d, 10));
            sum += count;
        }
        CHECK(sum == c.primes);
        // Brute-force histogram.
        std::map<u128, u64> want;
        u64 inconvenient = 0;
        for (u64 p : odd_primes_upto(50000)) {
            if (p <= ell || ell % p == 0) continue;
            const u64 d = smooth_part((p - ell) * (p + ell), 10);
            if (lcm_fold(10) % d == 0) {
                ++want[d];
            } else {
                ++inconvenient;
            }
        }
        CHECK(c.counts == want);
        CHECK(c.inconvenient == inconvenient);
    }
    // D even with ell even never occurs.
    for (u128 d = 2; d <= 2520; d += 2) {
        if (lcm_fold(10) % d == 0) REQUIRE(count_pi_d(d, 2, params, 20000) == 0);
    }
    CHECK(pi_d_main_term(24, params, 1000) > 0);
}

TEST_CASE("admissibility pattern holds empirically") {
    for (u64 ell = 1; ell <= 12; ++ell) {
        for (u64 p : odd_primes_upto(20000)) {
            if (p <= std::max<u64>(ell, 3) || ell % p == 0) continue;
            const u64 d = smooth_part((p - ell) * (p + ell), 30);
            REQUIRE(admissible_for_ell(d, ell));
            REQUIRE(std::gcd(d, ell) == 1);
        }
    }
    CHECK_FALSE(admissible_for_ell(24, 2));
    CHECK(admissible_for_ell(3, 2));
    CHECK(admissible_for_ell(24, 1));
    CHECK_FALSE(admissible_for_ell(8, 1));
}
