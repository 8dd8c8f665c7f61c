#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace totient::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInvariantFailure = 1;
inline constexpr int kUsage = 2;

// Entry point shared by the executable and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct SelftestOptions {
    // Test hook: perturb one sieve value so the oracle suite must fail.
    bool corrupt_phi = false;
    unsigned threads = 0;  // 0 = default resolution
};

int selftest(const SelftestOptions& opts, std::ostream& out);

// FNV-1a 64 of a file's bytes as 16 hex digits.
std::string file_checksum(const std::string& path);

}  // namespace totient::cli
