#pragma once

#include <cstdint>
#include <string>

namespace totient {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline std::string to_string(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    return {s.rbegin(), s.rend()};
}

inline std::string to_string(i128 v) {
    if (v < 0) return "-" + to_string(static_cast<u128>(-v));
    return to_string(static_cast<u128>(v));
}

inline u64 isqrt(u64 n) {
    u64 r = 0;
    for (int bit = 31; bit >= 0; --bit) {
        u64 c = r | (u64{1} << bit);
        if (static_cast<u128>(c) * c <= n) r = c;
    }
    return r;
}

inline u64 gcd(u64 a, u64 b) {
    while (b != 0) {
        u64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline u128 gcd(u128 a, u128 b) {
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace totient
