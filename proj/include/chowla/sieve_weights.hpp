// Fundamental-lemma sieve weights.
//
// Construction: a Rosser-Iwaniec style truncation of the Moebius function on
// the squarefree z-smooth integers. A divisor written with decreasing prime
// factors d = p_1 p_2 ... p_r (all <= z) is admissible iff for every m <= r
//
//     p_1 ... p_(m-1) * p_m^beta <= z^u,   or
//     p_1 ... p_m * (product of all primes < p_m) <= z^u,
//
// and then w(d) = mu(d). The second clause says every completion of the
// chain fits in the box, so no truncation is needed below it; it makes the
// construction degenerate to full Moebius (exact Legendre identity) whenever
// z^u >= prod_{p<=z} p. Either clause keeps d <= z^u, so the support lies
// inside the required box. A boundary chain fails both clauses at its last
// step, in particular the first one, which forces (m - 1) + beta > u: any n
// with (1*w)(n) different from the rough indicator is divisible by more than
// u - beta + 1 distinct primes <= z. That is what keeps the error inside the
// tau(n)^2 * sum_{r >= u-beta} 1_{P-(n) > z_r} 2^(-r) envelope. The envelope
// verification below is the arbiter that the truncation rule is right.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "chowla/arith.hpp"
#include "chowla/liouville.hpp"
#include "chowla/parallel.hpp"

namespace chowla {

// The shrinking truncation ladder z_r = z^(((beta-1)/beta)^r); decreases
// strictly to 1.
struct ZLadder {
    double z;
    double beta;
    double z_r(int r) const { return std::pow(z, std::pow((beta - 1.0) / beta, r)); }
};

struct SieveWeightSet {
    double z;
    double u;
    double beta;
    // (d, w(d)) with w in {-1, +1}, sorted by d; entries with w = 0 omitted.
    std::vector<std::pair<std::uint64_t, int>> weights;

    ZLadder ladder() const { return {z, beta}; }
    int weight_of(std::uint64_t d) const {
        auto it = std::lower_bound(weights.begin(), weights.end(), d,
                                   [](const auto& a, std::uint64_t v) { return a.first < v; });
        return (it != weights.end() && it->first == d) ? it->second : 0;
    }
};

// Builds the weight set by DFS over primes <= z in decreasing order.
inline SieveWeightSet build_weights(double z, double u, double beta,
                                    std::size_t max_support = 5'000'000) {
    if (beta < 2) throw std::invalid_argument("build_weights: beta must be >= 2");
    if (u < beta)
        throw std::invalid_argument("build_weights: hypothesis u >= beta violated");
    SieveWeightSet w{z, u, beta, {}};
    w.weights.emplace_back(1, 1);
    if (z < 2) return w;  // no primes below z: pure w(1) = 1, identity is exact

    std::vector<long long> primes = primes_up_to(static_cast<long long>(z));
    const long double cap = std::pow(static_cast<long double>(z), static_cast<long double>(u));
    // primorial_below[i] = product of primes[0..i-1]
    std::vector<long double> primorial_below(primes.size() + 1, 1.0L);
    for (std::size_t i = 0; i < primes.size(); ++i)
        primorial_below[i + 1] = primorial_below[i] * static_cast<long double>(primes[i]);

    // chain state: product so far and the index below which primes may extend
    struct Frame {
        std::uint64_t d;
        int sign;
        std::size_t next;  // primes[i] for i < next are candidates
    };
    std::vector<Frame> stack;
    stack.push_back({1, 1, primes.size()});
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        for (std::size_t i = f.next; i-- > 0;) {
            long double p = static_cast<long double>(primes[i]);
            long double d = static_cast<long double>(f.d);
            bool beta_ok = d * std::pow(p, static_cast<long double>(beta)) <= cap;
            bool subtree_ok = d * p * primorial_below[i] <= cap;
            if (!beta_ok && !subtree_ok) continue;
            std::uint64_t d2 = f.d * static_cast<std::uint64_t>(primes[i]);
            w.weights.emplace_back(d2, -f.sign);
            if (w.weights.size() > max_support)
                throw std::runtime_error("build_weights: support exceeds cap, count > " +
                                         std::to_string(max_support));
            if (i > 0) stack.push_back({d2, -f.sign, i});
        }
    }
    std::sort(w.weights.begin(), w.weights.end());
    return w;
}

// (1*w)(n) = sum over support divisors of n.
inline long long convolve_indicator(std::uint64_t n, const SieveWeightSet& w) {
    long long s = 0;
    for (const auto& [d, wd] : w.weights)
        if (n % d == 0) s += wd;
    return s;
}

struct EnvelopeReport {
    bool exact_outside_envelope;  // Delta(n) = 0 whenever the envelope vanishes
    double min_C;                 // max_n |Delta(n)| / E(n) over E(n) > 0
    std::uint64_t worst_n;
    std::size_t support_size;
    std::uint64_t nonzero_delta_count;
};

// Scans n <= N: Delta(n) = 1_{P-(n)>z} - (1*w)(n) against the envelope
// E(n) = tau(n)^2 * sum_{r >= ceil(u-beta)} 1_{P-(n) > z_r} 2^(-r).
// Violations are reported, not thrown; they would mean the construction is
// wrong.
inline EnvelopeReport verify_envelope(const SieveWeightSet& w, std::uint64_t N,
                                      const LiouvilleTable& table, int threads = 1) {
    if (N > table.limit()) throw std::out_of_range("verify_envelope: N exceeds table limit");
    // sieve-style accumulation of (1*w)(n)
    std::vector<std::int32_t> conv(N + 1, 0);
    for (const auto& [d, wd] : w.weights)
        for (std::uint64_t m = d; m <= N; m += d) conv[m] += wd;

    const int r_min = std::max(0, static_cast<int>(std::ceil(w.u - w.beta - 1e-9)));
    ZLadder lad = w.ladder();
    // z_r thresholds until they drop below 2; beyond that every n qualifies
    std::vector<double> zr;
    for (int r = 0;; ++r) {
        zr.push_back(lad.z_r(r));
        if (zr.back() < 2.0) break;
        if (r > 4000) throw std::logic_error("verify_envelope: ladder failed to reach 2");
    }

    struct Chunk {
        double max_ratio = 0.0;
        std::uint64_t worst = 0;
        std::uint64_t nonzero = 0;
        bool exact_outside = true;
    };
    std::vector<Chunk> parts(static_cast<size_t>(std::max(1, chunk_count(1, static_cast<long long>(N) + 1, threads))));
    parallel_chunks(1, static_cast<long long>(N) + 1, threads, [&](int idx, long long lo, long long hi) {
        Chunk& ck = parts[static_cast<size_t>(idx)];
        for (long long n = lo; n < hi; ++n) {
            double pminus = n == 1 ? std::numeric_limits<double>::infinity()
                                   : static_cast<double>(table.smallest_prime_factor(
                                         static_cast<std::uint64_t>(n)));
            long long delta = (pminus > w.z ? 1 : 0) - conv[static_cast<std::uint64_t>(n)];
            if (delta != 0) ++ck.nonzero;
            // first ladder index with z_r < P-(n)
            int r_star = 0;
            while (r_star < static_cast<int>(zr.size()) && zr[static_cast<size_t>(r_star)] >= pminus)
                ++r_star;
            int r0 = std::max(r_min, r_star);
            double tail = std::ldexp(2.0, -r0);  // sum_{r >= r0} 2^-r = 2^(1-r0)
            double tau = 1;
            for (const auto& [p, e] : table.factor(static_cast<std::uint64_t>(n))) tau *= e + 1;
            double env = tau * tau * tail;
            if (env == 0.0) {
                if (delta != 0) ck.exact_outside = false;
                continue;
            }
            if (delta == 0) continue;
            double ratio = std::abs(static_cast<double>(delta)) / env;
            if (ratio > ck.max_ratio) {
                ck.max_ratio = ratio;
                ck.worst = static_cast<std::uint64_t>(n);
            }
        }
    });
    EnvelopeReport rep{true, 0.0, 0, w.weights.size(), 0};
    for (const Chunk& ck : parts) {
        rep.exact_outside_envelope = rep.exact_outside_envelope && ck.exact_outside;
        rep.nonzero_delta_count += ck.nonzero;
        if (ck.max_ratio > rep.min_C) {
            rep.min_C = ck.max_ratio;
            rep.worst_n = ck.worst;
        }
    }
    return rep;
}

}  // namespace chowla
