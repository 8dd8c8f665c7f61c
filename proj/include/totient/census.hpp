#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "totient/int128.hpp"

namespace totient {

inline constexpr u64 kDefaultEllLimit = 64;
// Census windows are kept small enough that the sieve state stays in cache.
inline constexpr u64 kDefaultCensusWindow = u64{1} << 18;

// Which primes enter a census.
enum class Boundary {
    // odd primes ell < p <= x
    odd_above_ell,
    // every prime p <= x, comparing phi(|p - ell|) with phi(p + ell) and
    // taking phi(0) = 0
    all_primes_abs,
};

std::string_view to_string(Boundary b);
Boundary parse_boundary(std::string_view text);

// Sign counts of phi(p - ell) - phi(p + ell) over the census domain.
struct SignTally {
    u64 ell = 0;
    u64 gt = 0;
    u64 lt = 0;
    u64 eq = 0;
    u64 primes_considered = 0;
    std::vector<u64> equality_primes;

    bool operator==(const SignTally&) const = default;
};

// Componentwise sum of tallies over disjoint prime ranges. Equality primes
// are merged in ascending order. Throws std::logic_error on mismatched ell.
SignTally merge_tallies(const SignTally& a, const SignTally& b);

struct CensusRequest {
    std::vector<u64> ells;
    u64 x_max = 3;
    u64 window_size = kDefaultCensusWindow;
    bool collect_equality_primes = false;
    std::optional<std::filesystem::path> checkpoint_path;
    u64 ell_limit = kDefaultEllLimit;
    Boundary boundary = Boundary::odd_above_ell;
};

// Execution knobs that never change the result.
struct RunOptions {
    std::optional<unsigned> threads;
    // Checkpoint is rewritten after every `checkpoint_every` merged windows
    // and always at the end of the run.
    u64 checkpoint_every = 8;
    // Stop after this many windows in this invocation (simulated interruption).
    std::optional<u64> max_windows;
};

struct CensusResult {
    std::map<u64, SignTally> tallies;
    u64 windows_done = 0;
    u64 windows_total = 0;
    bool complete() const { return windows_done == windows_total; }
};

// Throws ConfigError for an invalid request.
void validate(const CensusRequest& req);

// Stable FNV-1a hash of the canonical request text. Thread count and the
// checkpoint location do not participate.
u64 request_fingerprint(const CensusRequest& req);
std::string canonical_request(const CensusRequest& req);

u64 census_window_count(const CensusRequest& req);

// Exact sign census. Resumes from req.checkpoint_path when that file exists;
// a fingerprint mismatch throws CheckpointError.
CensusResult run_census(const CensusRequest& req, const RunOptions& opts = {});

// Ascending primes ell < p <= x with phi(p - ell) = phi(p + ell).
std::vector<u64> equality_primes(u64 ell, u64 x, const RunOptions& opts = {});

// Parses "1-64", "1,3,15" or mixes like "1-4,15,63". Sorted, deduplicated.
std::vector<u64> parse_ell_list(const std::string& text);

// CSV with header `ell,x,gt,lt,eq,primes_considered`, '\n' line endings.
std::string census_csv(const CensusResult& result, u64 x);

struct Checkpoint {
    u64 fingerprint = 0;
    u64 next_window = 0;
    std::map<u64, SignTally> tallies;
};

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& cp);
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace totient
