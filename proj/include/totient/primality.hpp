#pragma once

#include "totient/int128.hpp"

namespace totient {

// Deterministic Miller-Rabin for the full 64-bit range.
bool is_prime_u64(u64 n);

}  // namespace totient
