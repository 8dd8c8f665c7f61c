#include <chrono>
#include <functional>
#include <numeric>
#include <ostream>
#include <random>

#include "cli.hpp"
#include "totient/census.hpp"
#include "totient/diagnostics.hpp"
#include "totient/ghp.hpp"
#include "totient/primality.hpp"
#include "totient/sieve.hpp"

namespace totient::cli {
namespace {

struct SuiteResult {
    u64 passed = 0;
    u64 total = 0;
    std::string first_failure;

    void check(bool ok, const std::string& what) {
        ++total;
        if (ok) {
            ++passed;
        } else if (first_failure.empty()) {
            first_failure = what;
        }
    }
};

struct Suite {
    const char* name;
    const char* invariant;
    std::function<void(SuiteResult&)> body;
};

u64 phi_from(const FactoredWindow& fw, u64 n) { return fw.phi_of(n); }

}  // namespace

int selftest(const SelftestOptions& opts, std::ostream& out) {
    const BasePrimes base = base_primes(u64{1} << 16);
    std::optional<unsigned> threads;
    if (opts.threads > 0) threads = opts.threads;

    std::vector<Suite> suites;
    suites.push_back({"sieve-oracle", "sieve phi equals trial-division phi", [&](SuiteResult& r) {
                          std::mt19937_64 rng(20240601);
                          std::uniform_int_distribution<u64> dist(1, 1'000'000'000);
                          for (int i = 0; i < 10000; ++i) {
                              const u64 n = dist(rng);
                              const FactoredWindow fw = factor_window(make_window(n, n, 1), base);
                              u64 got = phi_from(fw, n);
                              if (opts.corrupt_phi && i == 0) got += 1;
                              r.check(got == phi_naive(n), "phi(" + std::to_string(n) + ")");
                          }
                      }});
    suites.push_back({"factor-completeness", "factorizations multiply back with prime bases", [&](SuiteResult& r) {
                          const FactoredWindow fw = factor_window(make_window(999'990'001, 1'000'000'000, 1 << 14), base);
                          for (u64 n = fw.window().lo; n <= fw.window().hi; ++n) {
                              u64 prod = 1;
                              bool ok = true;
                              for (const auto& pp : fw.factors_of(n)) {
                                  ok = ok && is_prime_u64(pp.prime);
                                  for (u64 e = 0; e < pp.exponent; ++e) prod *= pp.prime;
                              }
                              r.check(ok && prod == n, "factors of " + std::to_string(n));
                          }
                      }});
    suites.push_back({"multiplicativity", "phi(ab) = phi(a) phi(b) for coprime a, b", [&](SuiteResult& r) {
                          std::mt19937_64 rng(7);
                          std::uniform_int_distribution<u64> dist(1, 30000);
                          for (int i = 0; i < 1000; ++i) {
                              const u64 a = dist(rng), b = dist(rng);
                              if (std::gcd(a, b) != 1) continue;
                              const u64 ab = a * b;
                              const u64 lo = std::min({a, b, ab});
                              const u64 hi = std::max({a, b, ab});
                              if (hi - lo >= (1u << 20)) {
                                  const auto one = [&](u64 n) { return totient_window(make_window(n, n, 1), base).front(); };
                                  r.check(one(ab) == one(a) * one(b), "phi(" + std::to_string(ab) + ")");
                              } else {
                                  const auto phi = totient_window(make_window(lo, hi, 1 << 20), base);
                                  r.check(phi[ab - lo] == phi[a - lo] * phi[b - lo], "phi(" + std::to_string(ab) + ")");
                              }
                          }
                      }});
    suites.push_back({"window-independence", "phi does not depend on window boundaries", [&](SuiteResult& r) {
                          const Window whole = make_window(1'000'000, 1'100'000, 1 << 20);
                          const auto ref = totient_window(whole, base);
                          for (u64 size : {1u, 7u, 4096u, 65537u}) {
                              bool same = true;
                              for (u64 lo = whole.lo; lo <= whole.hi; lo += size) {
                                  const u64 hi = std::min(whole.hi, lo + size - 1);
                                  if (size == 1 && lo % 97 != 0) continue;  // sampled
                                  const auto part = totient_window(make_window(lo, hi, size), base);
                                  for (u64 n = lo; n <= hi; ++n) same = same && part[n - lo] == ref[n - whole.lo];
                              }
                              r.check(same, "window size " + std::to_string(size));
                          }
                      }});
    suites.push_back({"prime-count", "pi(10^8) = 5761455", [&](SuiteResult& r) {
                          r.check(prime_count(100'000'000) == 5'761'455, "pi(10^8)");
                      }});
    suites.push_back({"census-oracle", "census equals brute force at x = 20000", [&](SuiteResult& r) {
                          CensusRequest req;
                          req.ells = parse_ell_list("1-64");
                          req.x_max = 20000;
                          req.window_size = 1000;
                          RunOptions ro;
                          ro.threads = threads;
                          const CensusResult res = run_census(req, ro);
                          for (u64 ell : req.ells) {
                              SignTally want;
                              for (u64 p = ell + 1; p <= 20000; ++p) {
                                  if (p % 2 == 0 || !is_prime_u64(p)) continue;
                                  const u64 a = phi_naive(p - ell), b = phi_naive(p + ell);
                                  ++want.primes_considered;
                                  (a > b ? want.gt : a < b ? want.lt : want.eq) += 1;
                              }
                              const SignTally& got = res.tallies.at(ell);
                              r.check(got.gt == want.gt && got.lt == want.lt && got.eq == want.eq &&
                                          got.primes_considered == want.primes_considered,
                                      "ell " + std::to_string(ell));
                          }
                      }});
    suites.push_back({"determinism", "census CSV identical for 1, 2 and 4 workers", [&](SuiteResult& r) {
                          CensusRequest req;
                          req.ells = parse_ell_list("1-64");
                          req.x_max = 1'000'000;
                          req.window_size = 1 << 15;
                          std::string ref;
                          for (unsigned t : {1u, 2u, 4u}) {
                              RunOptions ro;
                              ro.threads = t;
                              const std::string csv = census_csv(run_census(req, ro), req.x_max);
                              if (ref.empty()) ref = csv;
                              r.check(csv == ref, std::to_string(t) + " workers");
                          }
                      }});
    suites.push_back({"ghp", "GHP witnesses satisfy phi(n) = phi(n + 2 ell)", [&](SuiteResult& r) {
                          for (u64 ell : {1u, 3u, 7u, 15u}) {
                              for (const auto& h : triple_enumerate(ell, 2000).hits) {
                                  const GhpResult g = ghp_construct(ell, h.t);
                                  if (g.reason == GhpReason::divides_j) continue;  // q1 = 2 is not a witness
                                  r.check(g.witness && phi_naive(g.witness->n) == phi_naive(g.witness->n + 2 * ell),
                                          "ell " + std::to_string(ell) + " t " + std::to_string(h.t));
                              }
                          }
                          const auto hits = triple_enumerate(1, 100'000).hits;
                          r.check(hits.size() == 2 && hits[0].t == 1 && hits[1].t == 2, "ell 1 triples");
                      }});
    suites.push_back({"pairs", "pair count is 2^omega(D) for 24 | D", [&](SuiteResult& r) {
                          for (u64 d = 24; d <= 10'000; d += 24) {
                              u64 w = 0;
                              for (const auto& pp : factor_naive(d)) w += 1, (void)pp;
                              r.check(pair_enumerate(d, 1e9).pairs.size() == (u64{1} << w), "D " + std::to_string(d));
                          }
                      }});
    suites.push_back({"sanity", "Euler product equals exhaustive sum", [&](SuiteResult& r) {
                          for (int y = 8; y <= 40; ++y) {
                              const long double a = sanity_sum(y, SanityMode::exhaustive).value;
                              const long double b = sanity_sum(y, SanityMode::euler).value;
                              r.check(std::abs(static_cast<double>(a - b)) < 1e-12, "y " + std::to_string(y));
                          }
                      }});

    int code = kOk;
    for (const auto& s : suites) {
        SuiteResult r;
        const auto t0 = std::chrono::steady_clock::now();
        s.body(r);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool ok = r.passed == r.total && r.total > 0;
        out << (ok ? "[PASS] " : "[FAIL] ") << s.name << ' ' << r.passed << '/' << r.total << " (" << secs << " s)";
        if (!ok) {
            out << " invariant violated: " << s.invariant << "; first failure: " << r.first_failure;
            code = kInvariantFailure;
        }
        out << '\n';
    }
    return code;
}

}  // namespace totient::cli
