#include "totient/census.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

#include "totient/errors.hpp"
#include "totient/parallel.hpp"
#include "totient/sieve.hpp"

namespace totient {
namespace {

u64 fnv1a(std::string_view s) {
    u64 h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

u64 parse_u64(std::string_view s) {
    u64 v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw ConfigError("not a non-negative integer: '" + std::string(s) + "'");
    }
    return v;
}

// Tallies for one census window, indexed like req.ells.
using WindowTallies = std::vector<SignTally>;

WindowTallies tally_window(const CensusRequest& req, const BasePrimes& base, u64 index) {
    const u64 halo = req.ells.back();
    const u64 lo = 1 + index * req.window_size;
    const u64 hi = std::min(req.x_max, lo + req.window_size - 1);
    const u64 sieve_lo = lo > halo ? lo - halo : 1;
    const u64 sieve_hi = hi + halo;
    const std::vector<u64> phi =
        totient_window(make_window(sieve_lo, sieve_hi, req.window_size + 2 * halo), base);
    auto phi_at = [&](u64 n) { return phi[n - sieve_lo]; };

    const bool all_primes = req.boundary == Boundary::all_primes_abs;
    std::vector<u64> primes;
    for (u64 n = std::max<u64>(lo, all_primes ? 2 : 3); n <= hi; ++n) {
        if (phi_at(n) == n - 1) primes.push_back(n);
    }

    WindowTallies out(req.ells.size());
    for (std::size_t k = 0; k < req.ells.size(); ++k) {
        const u64 ell = req.ells[k];
        SignTally& t = out[k];
        t.ell = ell;
        auto record = [&](u64 p, u64 a, u64 b) {
            t.gt += a > b;
            t.lt += a < b;
            if (a == b && req.collect_equality_primes) t.equality_primes.push_back(p);
        };
        auto first = std::upper_bound(primes.begin(), primes.end(), ell);
        if (all_primes) {
            for (auto it = primes.begin(); it != first; ++it) record(*it, *it == ell ? 0 : phi_at(ell - *it), phi_at(*it + ell));
        }
        for (auto it = first; it != primes.end(); ++it) record(*it, phi_at(*it - ell), phi_at(*it + ell));
        t.primes_considered = static_cast<u64>(primes.end() - (all_primes ? primes.begin() : first));
        t.eq = t.primes_considered - t.gt - t.lt;
    }
    return out;
}

void merge_into(SignTally& acc, SignTally&& part) {
    if (acc.ell != part.ell) throw std::logic_error("merge of tallies with different ell");
    acc.gt += part.gt;
    acc.lt += part.lt;
    acc.eq += part.eq;
    acc.primes_considered += part.primes_considered;
    acc.equality_primes.insert(acc.equality_primes.end(), part.equality_primes.begin(),
                               part.equality_primes.end());
}

}  // namespace

std::string_view to_string(Boundary b) {
    return b == Boundary::odd_above_ell ? "odd-above-ell" : "all-primes-abs";
}

Boundary parse_boundary(std::string_view text) {
    if (text == "odd-above-ell") return Boundary::odd_above_ell;
    if (text == "all-primes-abs") return Boundary::all_primes_abs;
    throw ConfigError("unknown boundary convention '" + std::string(text) + "'");
}

SignTally merge_tallies(const SignTally& a, const SignTally& b) {
    if (a.ell != b.ell) throw std::logic_error("merge of tallies with different ell");
    SignTally out;
    out.ell = a.ell;
    out.gt = a.gt + b.gt;
    out.lt = a.lt + b.lt;
    out.eq = a.eq + b.eq;
    out.primes_considered = a.primes_considered + b.primes_considered;
    out.equality_primes.resize(a.equality_primes.size() + b.equality_primes.size());
    std::merge(a.equality_primes.begin(), a.equality_primes.end(), b.equality_primes.begin(),
               b.equality_primes.end(), out.equality_primes.begin());
    return out;
}

void validate(const CensusRequest& req) {
    if (req.ells.empty()) throw ConfigError("no ell values requested");
    if (!std::is_sorted(req.ells.begin(), req.ells.end()) ||
        std::adjacent_find(req.ells.begin(), req.ells.end()) != req.ells.end()) {
        throw ConfigError("ell list must be strictly increasing");
    }
    if (req.ells.front() < 1) throw ConfigError("ell must be >= 1");
    if (req.ells.back() > req.ell_limit) {
        throw ConfigError("ell " + std::to_string(req.ells.back()) + " exceeds limit " + std::to_string(req.ell_limit));
    }
    if (req.x_max < 3) throw ConfigError("x must be >= 3");
    if (req.x_max > kMaxValue - req.ells.back()) throw ConfigError("x + max(ell) exceeds 2^40");
    if (req.window_size < 1 || req.window_size > (u64{1} << 30)) throw ConfigError("window size outside [1, 2^30]");
}

std::string canonical_request(const CensusRequest& req) {
    std::ostringstream os;
    os << "census-v1;ells=";
    for (std::size_t i = 0; i < req.ells.size(); ++i) os << (i ? "," : "") << req.ells[i];
    os << ";x=" << req.x_max << ";window=" << req.window_size << ";collect=" << (req.collect_equality_primes ? 1 : 0)
       << ";boundary=" << to_string(req.boundary);
    return os.str();
}

u64 request_fingerprint(const CensusRequest& req) { return fnv1a(canonical_request(req)); }

u64 census_window_count(const CensusRequest& req) { return (req.x_max + req.window_size - 1) / req.window_size; }

CensusResult run_census(const CensusRequest& req, const RunOptions& opts) {
    validate(req);
    const unsigned threads = resolve_threads(opts.threads);
    const u64 fingerprint = request_fingerprint(req);

    CensusResult result;
    result.windows_total = census_window_count(req);
    for (u64 ell : req.ells) result.tallies[ell].ell = ell;

    if (req.checkpoint_path && std::filesystem::exists(*req.checkpoint_path)) {
        Checkpoint cp = read_checkpoint(*req.checkpoint_path);
        if (cp.fingerprint != fingerprint) {
            throw CheckpointError("checkpoint " + req.checkpoint_path->string() + " belongs to a different request");
        }
        if (cp.next_window > result.windows_total) throw CheckpointError("checkpoint window index out of range");
        for (u64 ell : req.ells) {
            auto it = cp.tallies.find(ell);
            if (it == cp.tallies.end()) throw CheckpointError("checkpoint lacks tally for ell " + std::to_string(ell));
            result.tallies[ell] = std::move(it->second);
        }
        result.windows_done = cp.next_window;
    }

    const u64 begin = result.windows_done;
    u64 end = result.windows_total;
    if (opts.max_windows) end = std::min(end, begin + *opts.max_windows);

    auto save = [&] {
        if (!req.checkpoint_path) return;
        write_checkpoint(*req.checkpoint_path, Checkpoint{fingerprint, result.windows_done, result.tallies});
    };

    const BasePrimes base = base_primes_for(req.x_max + req.ells.back());
    u64 since_save = 0;
    ordered_parallel_for(
        begin, end, threads, [&](std::size_t index) { return tally_window(req, base, index); },
        [&](std::size_t, WindowTallies&& part) {
            for (std::size_t k = 0; k < req.ells.size(); ++k) merge_into(result.tallies[req.ells[k]], std::move(part[k]));
            ++result.windows_done;
            if (++since_save >= std::max<u64>(1, opts.checkpoint_every)) {
                save();
                since_save = 0;
            }
        });
    save();
    return result;
}

std::vector<u64> equality_primes(u64 ell, u64 x, const RunOptions& opts) {
    CensusRequest req;
    req.ells = {ell};
    req.x_max = x;
    req.ell_limit = std::max(ell, kDefaultEllLimit);
    req.collect_equality_primes = true;
    RunOptions o = opts;
    o.max_windows.reset();
    return run_census(req, o).tallies.at(ell).equality_primes;
}

std::vector<u64> parse_ell_list(const std::string& text) {
    std::vector<u64> out;
    std::string_view rest = text;
    if (rest.empty()) throw ConfigError("empty ell list");
    while (!rest.empty()) {
        std::size_t comma = rest.find(',');
        std::string_view item = rest.substr(0, comma);
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        if (comma != std::string_view::npos && rest.empty()) throw ConfigError("trailing comma in ell list");
        std::size_t dash = item.find('-');
        if (dash == std::string_view::npos) {
            out.push_back(parse_u64(item));
        } else {
            u64 a = parse_u64(item.substr(0, dash));
            u64 b = parse_u64(item.substr(dash + 1));
            if (b < a) throw ConfigError("descending ell range '" + std::string(item) + "'");
            if (b - a > 1'000'000) throw ConfigError("ell range too long");
            for (u64 v = a; v <= b; ++v) out.push_back(v);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string census_csv(const CensusResult& result, u64 x) {
    std::string out = "ell,x,gt,lt,eq,primes_considered\n";
    for (const auto& [ell, t] : result.tallies) {
        out += std::to_string(ell) + ',' + std::to_string(x) + ',' + std::to_string(t.gt) + ',' + std::to_string(t.lt) +
               ',' + std::to_string(t.eq) + ',' + std::to_string(t.primes_considered) + '\n';
    }
    return out;
}

}  // namespace totient
