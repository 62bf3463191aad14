// Exact integer and modular arithmetic primitives: Kronecker symbol, CRT for
// systems with non-coprime moduli, the lcm lower bound, and the standard
// multiplicative functions by trial division. Everything here is a pure
// function of its arguments.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "chowla/int128.hpp"

namespace chowla {

struct ExtGcd {
    long long g;  // gcd(a, b) >= 0
    long long x;  // a*x + b*y = g
    long long y;
};

inline ExtGcd ext_gcd(long long a, long long b) {
    long long old_r = a, r = b;
    long long old_s = 1, s = 0;
    long long old_t = 0, t = 1;
    while (r != 0) {
        long long q = old_r / r;
        long long tmp = old_r - q * r; old_r = r; r = tmp;
        tmp = old_s - q * s; old_s = s; s = tmp;
        tmp = old_t - q * t; old_t = t; t = tmp;
    }
    if (old_r < 0) { old_r = -old_r; old_s = -old_s; old_t = -old_t; }
    return {old_r, old_s, old_t};
}

// Inverse of a modulo m (gcd(a, m) must be 1), result in [0, m).
inline long long inv_mod(long long a, long long m) {
    if (m <= 0) throw std::invalid_argument("inv_mod: modulus must be positive");
    a %= m;
    if (a < 0) a += m;
    ExtGcd e = ext_gcd(a, m);
    if (e.g != 1) throw std::invalid_argument("inv_mod: arguments not coprime");
    long long x = e.x % m;
    if (x < 0) x += m;
    return x;
}

// Kronecker symbol (d|n) for arbitrary d and n >= 0.
// (d|0) = 1 iff d = +-1, else 0; (d|1) = 1; completely multiplicative in n.
inline int kronecker(long long d, long long n) {
    if (n < 0) throw std::invalid_argument("kronecker: n must be non-negative");
    if (n == 0) return (d == 1 || d == -1) ? 1 : 0;
    if ((d & 1) == 0 && (n & 1) == 0) return 0;
    int result = 1;
    // factor 2s out of n; (d|2) depends on d mod 8
    int v = 0;
    while ((n & 1) == 0) { n >>= 1; ++v; }
    if (v & 1) {
        long long d8 = ((d % 8) + 8) % 8;
        if (d8 == 3 || d8 == 5) result = -result;
    }
    // n odd >= 1 now; handle sign of d via (-1|n) = (-1)^((n-1)/2)
    if (d < 0) {
        d = -d;
        if ((n & 3) == 3) result = -result;
    }
    d %= n;
    // Jacobi loop
    while (d != 0) {
        while ((d & 1) == 0) {
            d >>= 1;
            long long n8 = n & 7;
            if (n8 == 3 || n8 == 5) result = -result;
        }
        std::swap(d, n);
        if ((d & 3) == 3 && (n & 3) == 3) result = -result;
        d %= n;
    }
    return n == 1 ? result : 0;
}

// One congruence n = residue (mod modulus), residue normalized to [0, modulus).
struct Congruence {
    long long residue;
    long long modulus;
};

struct CrtSolution {
    long long r_star;   // representative in (0, M]: a solution of 0 reports M
    long long modulus;  // M = lcm of the moduli
};

// Solves a system of congruences with arbitrary (not necessarily coprime)
// moduli. Insolubility is a valid outcome, reported as an empty optional.
inline std::optional<CrtSolution> crt_solve(std::span<const Congruence> system) {
    long long r = 0, m = 1;  // current combined solution n = r (mod m)
    for (const Congruence& c : system) {
        if (c.modulus < 1) throw std::invalid_argument("crt_solve: modulus must be >= 1");
        long long r2 = c.residue % c.modulus;
        if (r2 < 0) r2 += c.modulus;
        long long g = std::gcd(m, c.modulus);
        if ((r2 - r) % g != 0) return std::nullopt;
        long long m2 = c.modulus / g;
        long long lcm = m * m2;
        // r + m*t = r2 (mod c.modulus)  =>  t = (r2-r)/g * inv(m/g) (mod m2)
        long long t = ((r2 - r) / g) % m2;
        if (t < 0) t += m2;
        if (m2 > 1) t = static_cast<long long>((i128)t * inv_mod((m / g) % m2, m2) % m2);
        else t = 0;
        r = static_cast<long long>((r + (i128)m * t) % lcm);
        m = lcm;
    }
    long long rep = r == 0 ? m : r;  // representative in (0, M]
    return CrtSolution{rep, m};
}

inline std::optional<CrtSolution> crt_solve(std::initializer_list<Congruence> system) {
    return crt_solve(std::span<const Congruence>(system.begin(), system.size()));
}

// Trial-division factorization, exponents in increasing prime order.
inline std::vector<std::pair<long long, int>> factorize(long long n) {
    if (n < 1) throw std::invalid_argument("factorize: n must be >= 1");
    std::vector<std::pair<long long, int>> f;
    for (long long p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) { n /= p; ++e; }
            f.emplace_back(p, e);
        }
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

// Record of the standard multiplicative functions of one n, with the m-fold
// divisor function exposed as a method (tau_m(n) = # ordered m-tuples with
// product n).
struct MultFunctions {
    long long n;
    std::vector<std::pair<long long, int>> factors;
    int omega_big;  // Omega(n), prime factors with multiplicity
    int mu;         // Moebius
    long long phi;  // Euler totient

    i128 tau_m(int m) const {
        if (m < 1) throw std::invalid_argument("tau_m: m must be >= 1");
        i128 t = 1;
        for (const auto& [p, e] : factors) {
            // binomial(e + m - 1, m - 1)
            i128 b = 1;
            for (int i = 1; i <= e; ++i) b = b * (m - 1 + i) / i;
            t = checked_mul(t, b);
        }
        return t;
    }
    i128 tau() const { return tau_m(2); }
};

inline MultFunctions mult_functions(long long n) {
    MultFunctions r;
    r.n = n;
    r.factors = factorize(n);
    r.omega_big = 0;
    r.mu = 1;
    r.phi = 1;
    for (const auto& [p, e] : r.factors) {
        r.omega_big += e;
        r.mu = (e > 1) ? 0 : -r.mu;
        long long pe = 1;
        for (int i = 0; i < e - 1; ++i) pe *= p;
        r.phi *= pe * (p - 1);
    }
    return r;
}

// Both sides of [m_1,...,m_k] >= m_1...m_k / prod_{i<j} (m_i, m_j).
// The exact comparison is done prime-by-prime on exponents, since the raw
// products overflow even 128 bits for k = 6, entries <= 1e4.
struct LcmBound {
    i128 lcm;                 // exact
    long double lcm_value;    // same, as a float for reporting
    long double bound_value;  // m_1...m_k / prod of pairwise gcds
    bool holds_exactly;       // lcm >= bound, decided exactly
};

inline LcmBound lcm_lower_bound(std::span<const long long> m) {
    if (m.empty()) throw std::invalid_argument("lcm_lower_bound: empty tuple");
    // collect exponent vectors per prime
    std::vector<std::vector<std::pair<long long, int>>> fac;
    fac.reserve(m.size());
    for (long long mi : m) fac.push_back(factorize(mi));
    std::vector<long long> primes;
    for (const auto& f : fac)
        for (const auto& [p, e] : f) primes.push_back(p);
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());

    i128 lcm = 1;
    long double bound = 1.0L;
    bool holds = true;
    const size_t k = m.size();
    std::vector<int> a(k);
    for (long long p : primes) {
        for (size_t i = 0; i < k; ++i) {
            a[i] = 0;
            for (const auto& [q, e] : fac[i])
                if (q == p) a[i] = e;
        }
        int mx = *std::max_element(a.begin(), a.end());
        long long sum = std::accumulate(a.begin(), a.end(), 0LL);
        long long min_pairs = 0;
        for (size_t i = 0; i < k; ++i)
            for (size_t j = i + 1; j < k; ++j) min_pairs += std::min(a[i], a[j]);
        for (int i = 0; i < mx; ++i) lcm = checked_mul(lcm, p);
        bound *= std::pow(static_cast<long double>(p), static_cast<long double>(sum - min_pairs));
        if (mx + min_pairs < sum) holds = false;  // per-prime exponent check
    }
    return {lcm, static_cast<long double>(lcm), bound, holds};
}

inline LcmBound lcm_lower_bound(std::initializer_list<long long> m) {
    return lcm_lower_bound(std::span<const long long>(m.begin(), m.size()));
}

// Simple sieve; shared prime source for the character and sieve modules.
inline std::vector<long long> primes_up_to(long long n) {
    std::vector<long long> primes;
    if (n < 2) return primes;
    std::vector<bool> comp(static_cast<size_t>(n) + 1, false);
    for (long long i = 2; i <= n; ++i) {
        if (!comp[static_cast<size_t>(i)]) {
            primes.push_back(i);
            for (long long j = i * i; j <= n; j += i) comp[static_cast<size_t>(j)] = true;
        }
    }
    return primes;
}

}  // namespace chowla
