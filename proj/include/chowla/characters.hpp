// Primitive quadratic characters from fundamental discriminants, the
// prime-sum evaluators attached to them, and the scan for characters that
// mimic an exceptional one (chi(p) = -1 for as many small primes as
// possible).
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chowla/arith.hpp"
#include "chowla/parallel.hpp"

namespace chowla {

inline bool is_squarefree(long long n) {
    n = std::llabs(n);
    if (n == 0) return false;
    for (long long p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % (p * p) == 0) return false;
        while (n % p == 0) n /= p;
    }
    return true;
}

// d is fundamental iff d = 1 (mod 4) and squarefree, or d = 4m with
// m = 2 or 3 (mod 4) and m squarefree.
inline bool is_fundamental_discriminant(long long d, std::string* why = nullptr) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (d == 0) return fail("discriminant is zero");
    long long mod4 = ((d % 4) + 4) % 4;
    if (mod4 == 1) {
        if (!is_squarefree(d)) return fail("d = 1 (mod 4) but not squarefree");
        return true;
    }
    if (mod4 != 0) return fail("d = 2 or 3 (mod 4)");
    long long m = d / 4;
    long long m4 = ((m % 4) + 4) % 4;
    if (m4 != 2 && m4 != 3) return fail("d = 4m with m = 0 or 1 (mod 4)");
    if (!is_squarefree(m)) return fail("d = 4m with m not squarefree");
    return true;
}

// chi(n) = (d|n) for a fundamental discriminant d; modulus q = |d|.
// eta is the Siegel-quality parameter, attached as a free parameter for
// bound evaluation only (never computed from an actual zero).
class QuadCharacter {
  public:
    static QuadCharacter from_discriminant(long long d) {
        std::string why;
        if (!is_fundamental_discriminant(d, &why))
            throw std::invalid_argument("from_discriminant: d = " + std::to_string(d) +
                                        " is not a fundamental discriminant (" + why + ")");
        QuadCharacter c;
        c.d_ = d;
        c.q_ = std::llabs(d);
        return c;
    }

    long long discriminant() const { return d_; }
    long long modulus() const { return q_; }

    // chi(n) for any integer n, via periodicity mod q.
    int operator()(long long n) const {
        long long r = n % q_;
        if (r < 0) r += q_;
        return kronecker(d_, r);
    }

    std::optional<double> eta() const { return eta_; }
    void set_eta(double eta) {
        if (eta <= 0) throw std::invalid_argument("set_eta: eta must be positive");
        eta_ = eta;
    }
    double require_eta() const {
        if (!eta_) throw std::invalid_argument("QuadCharacter: eta required but not set");
        return *eta_;
    }

    // beta = 1 - 1/(eta log q), the zero this eta would correspond to.
    double beta() const {
        if (q_ < 2) throw std::logic_error("beta: undefined for modulus 1");
        return 1.0 - 1.0 / (require_eta() * std::log(static_cast<double>(q_)));
    }

  private:
    long long d_ = 1;
    long long q_ = 1;
    std::optional<double> eta_;
};

// sum_{z < p <= x} (1 + chi(p))/p, exactly over primes. Each term is >= 0.
inline double joka_sum(const QuadCharacter& chi, double z, double x) {
    if (!(x > z) || !(z > 1)) throw std::invalid_argument("joka_sum: need x > z > 1");
    double s = 0;
    for (long long p : primes_up_to(static_cast<long long>(x)))
        if (static_cast<double>(p) > z) s += (1.0 + chi(p)) / static_cast<double>(p);
    return s;
}

struct AgreementScore {
    double penalty;         // sum_{p <= z} (1 + chi(p))/p; chi(p) = 0 contributes 1/p
    long long minus_count;  // primes p <= z with chi(p) = -1
    long long prime_count;  // primes p <= z
};

// How "exceptional-like" chi looks below z: penalty 0 means chi(p) = -1 at
// every prime p <= z (no prime <= z may divide q for that to happen).
inline AgreementScore agreement_score_over(const QuadCharacter& chi,
                                           const std::vector<long long>& primes) {
    AgreementScore s{0.0, 0, 0};
    for (long long p : primes) {
        int v = chi(p);
        s.penalty += (1.0 + v) / static_cast<double>(p);
        if (v == -1) ++s.minus_count;
        ++s.prime_count;
    }
    return s;
}

inline AgreementScore agreement_score(const QuadCharacter& chi, double z) {
    if (z < 2) return {0.0, 0, 0};
    return agreement_score_over(chi, primes_up_to(static_cast<long long>(z)));
}

struct CharacterHit {
    long long d;
    AgreementScore score;
};

// Scans [d_min, d_max] for fundamental discriminants and returns the `top`
// of them by smallest penalty, ties broken by smaller |d|. Thread partitions
// merge deterministically.
inline std::vector<CharacterHit> search_exceptional(long long d_min, long long d_max, double z,
                                                    std::size_t top, int threads = 1) {
    if (d_max < d_min) throw std::invalid_argument("search_exceptional: empty range");
    const std::vector<long long> primes =
        z < 2 ? std::vector<long long>{} : primes_up_to(static_cast<long long>(z));
    std::vector<std::vector<CharacterHit>> partial(
        static_cast<size_t>(std::max(1, chunk_count(d_min, d_max + 1, threads))));
    parallel_chunks(d_min, d_max + 1, threads, [&](int idx, long long lo, long long hi) {
        for (long long d = lo; d < hi; ++d) {
            if (!is_fundamental_discriminant(d)) continue;
            auto chi = QuadCharacter::from_discriminant(d);
            partial[static_cast<size_t>(idx)].push_back({d, agreement_score_over(chi, primes)});
        }
    });
    std::vector<CharacterHit> all;
    for (auto& v : partial) all.insert(all.end(), v.begin(), v.end());
    std::sort(all.begin(), all.end(), [](const CharacterHit& a, const CharacterHit& b) {
        if (a.score.penalty != b.score.penalty) return a.score.penalty < b.score.penalty;
        if (std::llabs(a.d) != std::llabs(b.d)) return std::llabs(a.d) < std::llabs(b.d);
        return a.d < b.d;
    });
    if (all.size() > top) all.resize(top);
    return all;
}

}  // namespace chowla
