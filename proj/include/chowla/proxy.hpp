// The lambda_z proxy: a completely multiplicative function agreeing with
// lambda at primes <= z and with chi at primes > z. Correlation sums are
// exact integer scans; the headline bounds are evaluated as formulas
// only (they are conditional statements, not measurable ones).
#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "chowla/characters.hpp"
#include "chowla/liouville.hpp"
#include "chowla/parallel.hpp"

namespace chowla {

// Distinct non-negative shifts, kept sorted so h_1 is the minimum.
class ShiftSystem {
  public:
    explicit ShiftSystem(std::vector<long long> shifts) : h_(std::move(shifts)) {
        if (h_.empty()) throw std::invalid_argument("ShiftSystem: at least one shift required");
        std::sort(h_.begin(), h_.end());
        if (h_.front() < 0) throw std::invalid_argument("ShiftSystem: shifts must be non-negative");
        if (std::adjacent_find(h_.begin(), h_.end()) != h_.end())
            throw std::invalid_argument("ShiftSystem: shifts must be distinct");
    }
    ShiftSystem(std::initializer_list<long long> shifts)
        : ShiftSystem(std::vector<long long>(shifts)) {}

    std::size_t k() const { return h_.size(); }
    long long h(std::size_t i) const { return h_.at(i); }  // 0-based
    long long h_star(std::size_t i) const { return h_.at(i) - h_.front(); }
    long long min_shift() const { return h_.front(); }
    long long max_shift() const { return h_.back(); }
    const std::vector<long long>& shifts() const { return h_; }

  private:
    std::vector<long long> h_;
};

// lambda_z(n) = lambda(smooth part) * chi(rough part); vanishes exactly when
// a prime > z dividing both n and q occurs.
inline int lambda_z(std::uint64_t n, double z, const QuadCharacter& chi,
                    const LiouvilleTable& table) {
    std::uint64_t s = table.smooth_part(n, z);
    long long rough = static_cast<long long>(n / s);
    return table.lambda(s) * chi(rough);
}

// Exact sum_{n <= x} prod_i values(n + h_i); values maps into {-1, 0, +1}.
// Chunked across threads with an ordered integer reduction.
template <typename F>
long long correlate(F&& values, const ShiftSystem& shifts, double x, int threads = 1) {
    if (x < 1) return 0;
    long long xf = static_cast<long long>(x);
    int nchunks = chunk_count(1, xf + 1, threads);
    std::vector<long long> partial(static_cast<size_t>(std::max(1, nchunks)), 0);
    parallel_chunks(1, xf + 1, threads, [&](int idx, long long lo, long long hi) {
        long long s = 0;
        for (long long n = lo; n < hi; ++n) {
            int prod = 1;
            for (std::size_t i = 0; i < shifts.k() && prod != 0; ++i)
                prod *= values(n + shifts.h(i));
            s += prod;
        }
        partial[static_cast<size_t>(idx)] = s;
    });
    return std::accumulate(partial.begin(), partial.end(), 0LL);
}

struct TransitionBound {
    std::string branch;  // "v<2" or "v>=2"
    double value;
    double v;  // log z / log q
};

// The two-branch transition bound with v = log z / log q:
//   v in (0,2): x (1/(v^2 eta^(v/2)) + 1/z) (log x / log z)^3
//   v >= 2:     x log x / (eta log q)
inline TransitionBound transition_bound(double x, double z, double q, double eta) {
    double v = std::log(z) / std::log(q);
    TransitionBound b;
    b.v = v;
    if (v < 2.0) {
        b.branch = "v<2";
        double t = std::log(x) / std::log(z);
        b.value = x * (1.0 / (v * v * std::pow(eta, v / 2.0)) + 1.0 / z) * t * t * t;
    } else {
        b.branch = "v>=2";
        b.value = x * std::log(x) / (eta * std::log(q));
    }
    return b;
}

struct ProxyGap {
    long long lhs;            // sum_{n<=x} |prod lambda(n+h_j) - prod lambda_z(n+h_j)|
    long long lhs_expansion;  // sum_j sum_{n<=x} |lambda - lambda_z|(n+h_j), >= lhs termwise
    double rhs;               // the stated bound for the applicable branch
    double ratio;             // lhs / rhs, reported only (implicit constant unknown)
    std::string branch;       // "v<2" or "v>=2"
    double v;                 // log z / log q
};

// The lambda -> lambda_z transition gap, measured directly and through the
// termwise triangle-inequality expansion, against the two-branch bound with
// v = log z / log q.
inline ProxyGap proxy_gap(double x, double z, const QuadCharacter& chi, const ShiftSystem& shifts,
                          const LiouvilleTable& table) {
    if (!(x > z)) throw std::invalid_argument("proxy_gap: need x > z");
    if (chi.modulus() < 2) throw std::invalid_argument("proxy_gap: modulus must be >= 2");
    double eta = chi.require_eta();
    long long xf = static_cast<long long>(x);
    if (static_cast<std::uint64_t>(xf + shifts.max_shift()) > table.limit())
        throw std::out_of_range("proxy_gap: table too small for x + max shift");

    auto lam_z = [&](long long n) {
        std::uint64_t s = table.smooth_part(static_cast<std::uint64_t>(n), z);
        return table.lambda(s) * chi(n / static_cast<long long>(s));
    };
    long long lhs = 0, expansion = 0;
    for (long long n = 1; n <= xf; ++n) {
        int pl = 1, pz = 1;
        for (std::size_t i = 0; i < shifts.k(); ++i) {
            long long m = n + shifts.h(i);
            int a = table.lambda(static_cast<std::uint64_t>(m));
            int b = lam_z(m);
            pl *= a;
            pz *= b;
            expansion += std::abs(a - b);
        }
        lhs += std::abs(pl - pz);
    }

    TransitionBound tb = transition_bound(x, z, static_cast<double>(chi.modulus()), eta);
    ProxyGap g;
    g.lhs = lhs;
    g.lhs_expansion = expansion;
    g.v = tb.v;
    g.branch = tb.branch;
    g.rhs = tb.value;
    g.ratio = g.rhs > 0 ? static_cast<double>(lhs) / g.rhs : 0.0;
    return g;
}

struct TheoremBound {
    double log_x;          // log(q^V)
    double x;              // q^V, +inf if not representable
    double main;           // x*V/eta + x*exp(-c*sqrt(V log eta))
    double log_main_term2; // log of the exponential term, always finite
    double corollary_branch_1;  // x*exp(-c'*sqrt(log eta))
    double corollary_branch_2;  // x / eta^(1-delta)
    bool branch_1_applicable;   // V in [1/2+eps, c^-2 log eta]
    bool branch_2_applicable;   // V in (c^-2 log eta, eta^delta]
};

// Pure formula evaluation of the headline bounds; x = q^V handled in log
// space so large exponents degrade to log-values instead of overflowing.
inline TheoremBound theorem_bound(double q, double eta, double V, double eps, int k, double c,
                                  double delta = 0.5, double c_prime = 0.01) {
    if (q < 2) throw std::invalid_argument("theorem_bound: q must be >= 2");
    if (eta < 10) throw std::invalid_argument("theorem_bound: eta must be >= 10");
    if (!(eps > 0 && eps < 0.5)) throw std::invalid_argument("theorem_bound: eps must be in (0, 1/2)");
    if (k < 2) throw std::invalid_argument("theorem_bound: k must be >= 2");
    if (c <= 0 || c_prime <= 0) throw std::invalid_argument("theorem_bound: constants must be positive");
    if (!(delta > 0 && delta < 1)) throw std::invalid_argument("theorem_bound: delta must be in (0, 1)");
    if (V < 0.5 + eps || V > eta)
        throw std::invalid_argument("theorem_bound: V outside [1/2+eps, eta]");

    TheoremBound b;
    b.log_x = V * std::log(q);
    b.x = std::exp(b.log_x);
    double log_eta = std::log(eta);
    b.log_main_term2 = b.log_x - c * std::sqrt(V * log_eta);
    b.main = b.x * V / eta + std::exp(b.log_main_term2);
    b.corollary_branch_1 = std::exp(b.log_x - c_prime * std::sqrt(log_eta));
    b.corollary_branch_2 = std::exp(b.log_x - (1.0 - delta) * log_eta);
    double v_cut = log_eta / (c * c);
    b.branch_1_applicable = V >= 0.5 + eps && V <= v_cut;
    b.branch_2_applicable = V > v_cut && V <= std::pow(eta, delta);
    return b;
}

struct ParameterChoice {
    double v;     // min(sqrt(V / log eta), 2)
    double z;     // q^v
    double u;     // eps * V / (30 k v)
    double beta;  // 25 k
};

// The closing-section parameter choices, exposed so the decomposition driver
// can default to them.
inline ParameterChoice choose_parameters(double q, double eta, double V, double eps, int k) {
    if (eta <= 1) throw std::invalid_argument("choose_parameters: eta must be > 1");
    ParameterChoice p;
    p.v = std::min(std::sqrt(V / std::log(eta)), 2.0);
    p.z = std::pow(q, p.v);
    p.u = eps * V / (30.0 * k * p.v);
    p.beta = 25.0 * k;
    return p;
}

}  // namespace chowla
