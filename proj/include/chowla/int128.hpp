// 128-bit integer helpers. Exact arithmetic in the decomposition machinery
// (polynomial coefficients, discriminants) exceeds 64 bits.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace chowla {

using i128 = __int128;
using u128 = unsigned __int128;

inline std::string to_string(i128 x) {
    if (x == 0) return "0";
    bool neg = x < 0;
    u128 v = neg ? -static_cast<u128>(x) : static_cast<u128>(x);
    std::string s;
    while (v) {
        s += static_cast<char>('0' + static_cast<int>(v % 10));
        v /= 10;
    }
    if (neg) s += '-';
    return {s.rbegin(), s.rend()};
}

inline i128 abs128(i128 x) { return x < 0 ? -x : x; }

// Multiplication that refuses to wrap silently.
inline i128 checked_mul(i128 a, i128 b) {
    if (a == 0 || b == 0) return 0;
    i128 r = a * b;
    if (r / b != a) throw std::overflow_error("chowla: 128-bit multiplication overflow");
    return r;
}

inline i128 gcd128(i128 a, i128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Round toward -infinity; C++ division truncates toward zero.
inline long long floor_div(long long a, long long b) {
    long long q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

inline long long ceil_div(long long a, long long b) { return -floor_div(-a, b); }

}  // namespace chowla
