// Segmented sieve for the Liouville function and smooth/rough counting.
//
// The parity of Omega(n) is stored 1 bit per integer (bit n-1 set means
// Omega(n) odd, i.e. lambda(n) = -1). An optional smallest-prime-factor table
// accelerates factorization-flavoured queries; without it they fall back to
// trial division.
//
// Conventions from the counting functions: P-(1) = +infinity, P+(1) = 0, so
// n = 1 is rough for every z and 1-smooth.
#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "chowla/arith.hpp"
#include "chowla/parallel.hpp"

namespace chowla {

struct BuildOptions {
    std::uint64_t segment_size = 1 << 18;
    bool with_spf = true;
    int threads = 1;
    std::uint64_t memory_budget_bytes = 6ULL << 30;
};

class LiouvilleTable {
  public:
    static constexpr char kMagic[9] = "CHWLLIO1";

    static LiouvilleTable build(std::uint64_t limit, BuildOptions opt = {}) {
        if (limit < 1) throw std::invalid_argument("build_table: limit must be >= 1");
        if (opt.segment_size < 64) throw std::invalid_argument("build_table: segment_size must be >= 64");
        LiouvilleTable t;
        t.limit_ = limit;
        std::uint64_t words = (limit + 63) / 64;
        std::uint64_t need = words * 8 + (opt.with_spf ? (limit + 1) * 8 : 0) +
                             static_cast<std::uint64_t>(opt.threads < 1 ? 1 : opt.threads) *
                                 opt.segment_size * 9;
        if (need > opt.memory_budget_bytes)
            throw std::runtime_error("build_table: memory budget exceeded, required bytes = " +
                                     std::to_string(need));
        t.parity_.assign(words, 0);
        if (opt.with_spf) t.spf_.assign(limit + 1, 0);

        std::uint64_t sqrt_lim = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 2;
        std::vector<long long> small_primes = primes_up_to(static_cast<long long>(sqrt_lim));

        // Word-aligned thread chunks keep the packed-bit writes disjoint, so
        // the output is identical for every thread count and segment size.
        parallel_chunks(0, static_cast<long long>(words), opt.threads,
                        [&](int, long long wlo, long long whi) {
                            std::uint64_t n_lo = static_cast<std::uint64_t>(wlo) * 64 + 1;
                            std::uint64_t n_hi = std::min<std::uint64_t>(static_cast<std::uint64_t>(whi) * 64, limit);
                            t.sieve_range(n_lo, n_hi, opt.segment_size, small_primes);
                        });
        if (opt.with_spf) t.spf_[1] = 1;
        return t;
    }

    std::uint64_t limit() const { return limit_; }
    bool has_spf() const { return !spf_.empty(); }

    bool parity_bit(std::uint64_t n) const {
        check_range(n);
        return (parity_[(n - 1) >> 6] >> ((n - 1) & 63)) & 1;
    }

    // lambda(n) = (-1)^Omega(n)
    int lambda(std::uint64_t n) const { return parity_bit(n) ? -1 : 1; }

    std::uint64_t smallest_prime_factor(std::uint64_t n) const {
        check_range(n);
        if (n == 1) return 1;
        if (has_spf()) return spf_[n];
        for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2))
            if (n % p == 0) return p;
        return n;
    }

    std::vector<std::pair<std::uint64_t, int>> factor(std::uint64_t n) const {
        check_range(n);
        std::vector<std::pair<std::uint64_t, int>> f;
        while (n > 1) {
            std::uint64_t p = smallest_prime_factor(n);
            int e = 0;
            while (n % p == 0) { n /= p; ++e; }
            f.emplace_back(p, e);
        }
        return f;
    }

    // Largest divisor of n composed of primes <= z (the "z-smooth part").
    std::uint64_t smooth_part(std::uint64_t n, double z) const {
        check_range(n);
        std::uint64_t s = 1, rest = n;
        while (rest > 1) {
            std::uint64_t p = smallest_prime_factor(rest);
            if (static_cast<double>(p) > z) break;  // spf ascending: all later factors larger
            while (rest % p == 0) { rest /= p; s *= p; }
        }
        return s;
    }

    const std::vector<std::uint64_t>& parity_words() const { return parity_; }

    // --- binary table file: magic, limit (LE u64), packed parity bits ---

    std::vector<std::uint8_t> serialize() const {
        std::uint64_t nbytes = (limit_ + 7) / 8;
        std::vector<std::uint8_t> out(8 + 8 + nbytes, 0);
        std::memcpy(out.data(), kMagic, 8);
        for (int i = 0; i < 8; ++i) out[8 + i] = static_cast<std::uint8_t>((limit_ >> (8 * i)) & 0xff);
        for (std::uint64_t b = 0; b < nbytes; ++b) {
            std::uint64_t word = parity_[b / 8];
            out[16 + b] = static_cast<std::uint8_t>((word >> (8 * (b % 8))) & 0xff);
        }
        return out;
    }

    void save(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("LiouvilleTable::save: cannot open " + path);
        auto bytes = serialize();
        f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!f) throw std::runtime_error("LiouvilleTable::save: write failed for " + path);
    }

    static LiouvilleTable load(const std::string& path) {
        std::ifstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("LiouvilleTable::load: cannot open " + path);
        char magic[8];
        f.read(magic, 8);
        if (!f || std::memcmp(magic, kMagic, 8) != 0)
            throw std::runtime_error("LiouvilleTable::load: bad magic in " + path);
        std::uint8_t lim[8];
        f.read(reinterpret_cast<char*>(lim), 8);
        if (!f) throw std::runtime_error("LiouvilleTable::load: truncated header in " + path);
        std::uint64_t limit = 0;
        for (int i = 0; i < 8; ++i) limit |= static_cast<std::uint64_t>(lim[i]) << (8 * i);
        LiouvilleTable t;
        t.limit_ = limit;
        std::uint64_t nbytes = (limit + 7) / 8;
        std::vector<std::uint8_t> bits(nbytes);
        f.read(reinterpret_cast<char*>(bits.data()), static_cast<std::streamsize>(nbytes));
        if (!f) throw std::runtime_error("LiouvilleTable::load: truncated bit table in " + path);
        t.parity_.assign((limit + 63) / 64, 0);
        for (std::uint64_t b = 0; b < nbytes; ++b)
            t.parity_[b / 8] |= static_cast<std::uint64_t>(bits[b]) << (8 * (b % 8));
        return t;
    }

  private:
    void check_range(std::uint64_t n) const {
        if (n < 1 || n > limit_)
            throw std::out_of_range("LiouvilleTable: n = " + std::to_string(n) +
                                    " outside table limit " + std::to_string(limit_));
    }

    // Sieve parities (and spf) for n in [n_lo, n_hi], both inclusive,
    // where n_lo - 1 is a multiple of 64.
    void sieve_range(std::uint64_t n_lo, std::uint64_t n_hi, std::uint64_t segment_size,
                     const std::vector<long long>& small_primes) {
        if (n_hi < n_lo) return;
        std::vector<std::uint64_t> rem(segment_size);
        std::vector<std::uint8_t> par(segment_size);
        for (std::uint64_t lo = n_lo; lo <= n_hi; lo += segment_size) {
            std::uint64_t hi = std::min(lo + segment_size - 1, n_hi);  // inclusive
            std::uint64_t len = hi - lo + 1;
            for (std::uint64_t i = 0; i < len; ++i) { rem[i] = lo + i; par[i] = 0; }
            for (long long pp : small_primes) {
                std::uint64_t p = static_cast<std::uint64_t>(pp);
                if (p * p > hi) break;
                std::uint64_t first = ((lo + p - 1) / p) * p;
                for (std::uint64_t m = first; m <= hi; m += p) {
                    std::uint64_t i = m - lo;
                    while (rem[i] % p == 0) { rem[i] /= p; par[i] ^= 1; }
                    if (!spf_.empty() && spf_[m] == 0) spf_[m] = p;
                }
            }
            for (std::uint64_t i = 0; i < len; ++i) {
                std::uint64_t n = lo + i;
                if (rem[i] > 1) {  // leftover prime > sqrt(hi)
                    par[i] ^= 1;
                    if (!spf_.empty() && spf_[n] == 0) spf_[n] = rem[i];
                }
                if (par[i]) parity_[(n - 1) >> 6] |= 1ULL << ((n - 1) & 63);
            }
        }
    }

    std::uint64_t limit_ = 0;
    std::vector<std::uint64_t> parity_;
    std::vector<std::uint64_t> spf_;
};

// Oracle-grade lambda by trial division; used by tests and small callers.
inline int lambda_trial_division(std::uint64_t n) {
    int omega = 0;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2))
        while (n % p == 0) { n /= p; ++omega; }
    if (n > 1) ++omega;
    return (omega & 1) ? -1 : 1;
}

// z-smooth part by trial division, no table required.
inline std::uint64_t smooth_part(std::uint64_t n, double z) {
    if (n < 1) throw std::invalid_argument("smooth_part: n must be >= 1");
    std::uint64_t s = 1;
    for (std::uint64_t p = 2; p * p <= n && static_cast<double>(p) <= z; p += (p == 2 ? 1 : 2))
        while (n % p == 0) { n /= p; s *= p; }
    if (n > 1 && static_cast<double>(n) <= z) s *= n;
    return s;
}

// Phi(x, z) = #{n <= x : P-(n) > z}; n = 1 counts.
inline std::uint64_t count_rough(const LiouvilleTable& t, double x, double z) {
    if (x < 1) return 0;
    std::uint64_t xf = static_cast<std::uint64_t>(x);
    if (xf > t.limit())
        throw std::out_of_range("count_rough: x exceeds table limit");
    std::uint64_t c = 1;  // n = 1
    for (std::uint64_t n = 2; n <= xf; ++n)
        if (static_cast<double>(t.smallest_prime_factor(n)) > z) ++c;
    return c;
}

// Psi(x, z) = #{n <= x : P+(n) <= z}; n = 1 counts.
inline std::uint64_t count_smooth(const LiouvilleTable& t, double x, double z) {
    if (x < 1) return 0;
    std::uint64_t xf = static_cast<std::uint64_t>(x);
    if (xf > t.limit())
        throw std::out_of_range("count_smooth: x exceeds table limit");
    std::uint64_t c = 0;
    for (std::uint64_t n = 1; n <= xf; ++n)
        if (t.smooth_part(n, z) == n) ++c;
    return c;
}

struct ExcessSmoothCount {
    std::uint64_t count;
    double ratio;  // count / (x * exp(-u/2)), the empirical envelope constant
};

// #{n <= x : z-smooth part of n exceeds z^u}. Hypothesis x >= z^u enforced.
inline ExcessSmoothCount count_excess_smooth_part(const LiouvilleTable& t, double x, double z,
                                                  double u) {
    if (u < 1) throw std::invalid_argument("count_excess_smooth_part: u must be >= 1");
    double threshold = std::pow(z, u);
    if (x < threshold)
        throw std::invalid_argument("count_excess_smooth_part: hypothesis x >= z^u violated");
    std::uint64_t xf = static_cast<std::uint64_t>(x);
    if (xf > t.limit()) throw std::out_of_range("count_excess_smooth_part: x exceeds table limit");
    std::uint64_t c = 0;
    for (std::uint64_t n = 1; n <= xf; ++n)
        if (static_cast<double>(t.smooth_part(n, z)) > threshold) ++c;
    return {c, static_cast<double>(c) / (x * std::exp(-u / 2.0))};
}

// Right side of the two-way counting identity: the number of pairs (a, b)
// with ab <= x, a > z^u, P+(a) <= z < P-(b). No hypothesis needed; the
// identity with the direct count is exact for every x.
inline std::uint64_t excess_smooth_factorization_count(const LiouvilleTable& t, double x, double z,
                                                       double u) {
    std::uint64_t xf = static_cast<std::uint64_t>(x);
    if (xf > t.limit()) throw std::out_of_range("excess_smooth_factorization_count: x exceeds table limit");
    double threshold = std::pow(z, u);
    std::uint64_t c = 0;
    for (std::uint64_t a = 1; a <= xf; ++a) {
        if (static_cast<double>(a) <= threshold) continue;
        if (t.smooth_part(a, z) != a) continue;
        // count b <= x/a with P-(b) > z (b = 1 included)
        std::uint64_t bmax = xf / a;
        for (std::uint64_t b = 1; b <= bmax; ++b)
            if (b == 1 || static_cast<double>(t.smallest_prime_factor(b)) > z) ++c;
    }
    return c;
}

}  // namespace chowla
