// The correlation-sum decomposition machine: smooth tuples, the congruence
// system and its CRT solution, the polynomial Q whose values are the rough
// cofactors, inner character sums, and the reassembly identity
//
//   S = sum_{n<=x, smooth parts <= z^u} lambda_z(n+h_1)...lambda_z(n+h_k)
//     = sum'_{tuples} lambda(a_1...a_k) sum_{l, P-(Q(l))>z} chi(Q(l))
//
// which must hold exactly: the two evaluation paths are independent and any
// mismatch is a bug in the CRT / Q / range logic.
//
// Index convention: tuples are 0-based in code; the write-up's a_1 is a[0].
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "chowla/arith.hpp"
#include "chowla/characters.hpp"
#include "chowla/exceptions.hpp"
#include "chowla/int128.hpp"
#include "chowla/liouville.hpp"
#include "chowla/poly.hpp"
#include "chowla/proxy.hpp"

namespace chowla {

struct SmoothTuple {
    std::vector<long long> a;  // each >= 1, z-smooth, <= z^u

    // Outer-sum condition: (a_i, a_j) | (h_i - h_j) for all i != j.
    bool satisfies_gcd_condition(const ShiftSystem& shifts) const {
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = i + 1; j < a.size(); ++j)
                if ((shifts.h(j) - shifts.h(i)) % std::gcd(a[i], a[j]) != 0) return false;
        return true;
    }
};

// One outer-sum term after CRT reduction. Linear factor i of Q is
// slope_i * X + intercept_i with slope_i = a_1 * M / a_i, where
// M = [a_2*, ..., a_k*]; its values at in-range X are the rough cofactors
// n_i.
struct ReducedTerm {
    SmoothTuple tuple;
    std::vector<long long> shifts;      // copy of the shift system, sorted
    long long r_star;                   // CRT representative in (0, M]
    std::vector<long long> star_moduli; // a_i* = a_i/(a_1, a_i) for i >= 2
    long long big_modulus;              // M = [a_2*, ..., a_k*] (1 for k = 1)
    std::vector<std::pair<i128, i128>> factors;  // (slope, intercept) per i
    IntPolynomial Q;                    // expanded product, degree k
    i128 D;                             // discriminant of Q

    std::size_t k() const { return tuple.a.size(); }
    long long h_min() const { return shifts.front(); }
    long long h_max() const { return shifts.back(); }
    i128 a_product() const {
        i128 p = 1;
        for (long long ai : tuple.a) p = checked_mul(p, ai);
        return p;
    }
};

// Builds the congruence system n = -(h_i*/(a_1,a_i)) * inverse(a_1/(a_1,a_i))
// (mod a_i*) for i >= 2, solves it, and constructs Q and its discriminant.
// Insolubility is a valid empty result (the term contributes 0). Internal
// divisibility failures mean the tuple violated its invariants.
inline std::optional<ReducedTerm> reduce(const SmoothTuple& tuple, const ShiftSystem& shifts) {
    const std::size_t k = tuple.a.size();
    if (k != shifts.k()) throw std::invalid_argument("reduce: tuple/shift size mismatch");
    for (long long ai : tuple.a)
        if (ai < 1) throw std::invalid_argument("reduce: tuple entries must be >= 1");
    if (!tuple.satisfies_gcd_condition(shifts))
        throw std::invalid_argument("reduce: tuple violates (a_i,a_j) | (h_i-h_j)");

    const long long a1 = tuple.a[0];
    std::vector<Congruence> system;
    std::vector<long long> star_moduli;
    for (std::size_t i = 1; i < k; ++i) {
        long long g = std::gcd(a1, tuple.a[i]);
        long long ai_star = tuple.a[i] / g;
        long long a1i = a1 / g;
        long long h_st = shifts.h_star(i);
        if (h_st % g != 0) throw std::logic_error("reduce: gcd does not divide shift difference");
        long long rhs = ((-(h_st / g)) % ai_star + ai_star) % ai_star;
        if (ai_star > 1)
            rhs = static_cast<long long>((i128)rhs * inv_mod(a1i % ai_star, ai_star) % ai_star);
        else
            rhs = 0;
        system.push_back({rhs, ai_star});
        star_moduli.push_back(ai_star);
    }
    auto sol = crt_solve(std::span<const Congruence>(system.data(), system.size()));
    if (!sol) return std::nullopt;

    ReducedTerm t;
    t.tuple = tuple;
    t.shifts = shifts.shifts();
    t.r_star = sol->r_star;
    t.star_moduli = std::move(star_moduli);
    t.big_modulus = sol->modulus;

    // a_1 r* = -h_i* (mod a_i) for every i: the defining property.
    for (std::size_t i = 0; i < k; ++i) {
        i128 v = (i128)a1 * t.r_star + shifts.h_star(i);
        if (v % tuple.a[i] != 0)
            throw std::logic_error("reduce: congruence check a_1 r* = -h_i* (mod a_i) failed");
    }

    for (std::size_t i = 0; i < k; ++i) {
        long long g = std::gcd(a1, tuple.a[i]);
        long long ai_star = tuple.a[i] / g;
        long long a1i = a1 / g;
        if (t.big_modulus % ai_star != 0)
            throw std::logic_error("reduce: a_i* does not divide the big modulus");
        i128 slope = checked_mul((i128)a1i, t.big_modulus / ai_star);
        i128 value_at_one = ((i128)a1 * t.r_star + shifts.h_star(i)) / tuple.a[i];  // n_i at l = 1
        i128 intercept = value_at_one - slope;
        t.factors.emplace_back(slope, intercept);
    }
    t.Q = poly_from_linear_factors(t.factors);

    // Discriminant both ways: from the built coefficients via
    // prod_{i<j} (c_i b_j - c_j b_i)^2 (the product of squared root
    // differences scaled by the leading coefficient), and from the closed
    // formula prod_{i<j} (a_1 M (h_j - h_i) / (a_i a_j))^2.
    i128 cross = 1, closed = 1;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            i128 diff = checked_mul(t.factors[i].first, t.factors[j].second) -
                        checked_mul(t.factors[j].first, t.factors[i].second);
            if (diff == 0) throw std::logic_error("reduce: repeated root of Q");
            cross = checked_mul(cross, checked_mul(diff, diff));
            i128 num = checked_mul(checked_mul((i128)a1, t.big_modulus),
                                   shifts.h(j) - shifts.h(i));
            i128 den = (i128)tuple.a[i] * tuple.a[j];
            if (num % den != 0) throw std::logic_error("reduce: closed discriminant not integral");
            i128 q = num / den;
            closed = checked_mul(closed, checked_mul(q, q));
        }
    }
    if (cross != closed)
        throw identity_violation("reduce: discriminant routes disagree: " + to_string(cross) +
                                 " vs " + to_string(closed));
    t.D = cross;
    return t;
}

// All z-smooth integers <= bound, ascending.
inline std::vector<long long> smooth_numbers_up_to(double z, double bound) {
    std::vector<long long> primes = z < 2 ? std::vector<long long>{} :
                                            primes_up_to(static_cast<long long>(z));
    std::vector<long long> out;
    long long b = static_cast<long long>(bound);
    if (b < 1) return out;
    // DFS over prime indices with multiplicities
    struct Frame { long long val; std::size_t idx; };
    std::vector<Frame> stack{{1, 0}};
    while (!stack.empty()) {
        auto [val, idx] = stack.back();
        stack.pop_back();
        out.push_back(val);
        for (std::size_t i = idx; i < primes.size(); ++i) {
            if (val > b / primes[i]) break;  // primes ascending: later ones overflow too
            stack.push_back({val * primes[i], i});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct EnumeratedTuples {
    std::vector<SmoothTuple> soluble;
    long long insoluble_count = 0;
    long long total = 0;  // tuples satisfying smoothness/size/gcd conditions
};

// Exhaustive outer-sum tuple stream. The pairwise-gcd condition prunes each
// coordinate against the previous ones; CRT-insoluble tuples are counted and
// dropped (their contribution is 0).
inline EnumeratedTuples enumerate_tuples(double z, double u, const ShiftSystem& shifts,
                                         long long volume_cap = 20'000'000) {
    double bound = std::pow(z, u);
    std::vector<long long> smooth = smooth_numbers_up_to(z, bound);
    const std::size_t k = shifts.k();
    double est = 1;
    for (std::size_t i = 0; i < k; ++i) est *= static_cast<double>(smooth.size());
    if (est > static_cast<double>(volume_cap))
        throw std::runtime_error("enumerate_tuples: infeasible volume, estimated " +
                                 std::to_string(static_cast<long long>(est)) + " tuples > cap " +
                                 std::to_string(volume_cap));

    EnumeratedTuples out;
    std::vector<long long> cur(k);
    auto rec = [&](auto&& self, std::size_t pos) -> void {
        if (pos == k) {
            ++out.total;
            SmoothTuple t{cur};
            if (reduce(t, shifts))
                out.soluble.push_back(std::move(t));
            else
                ++out.insoluble_count;
            return;
        }
        for (long long v : smooth) {
            bool ok = true;
            for (std::size_t i = 0; i < pos && ok; ++i)
                if ((shifts.h(pos) - shifts.h(i)) % std::gcd(cur[i], v) != 0) ok = false;
            if (!ok) continue;
            cur[pos] = v;
            self(self, pos + 1);
        }
    };
    rec(rec, 0);
    return out;
}

struct InnerSum {
    long long value = 0;
    bool zero_skipped = false;  // Q(l) = 0 inside the range: a range bug
    long long l_lo = 1;
    long long l_hi = 0;
    long long terms_counted = 0;  // l values passing the roughness filter
};

// Inner character sum over l in the identity-preserving range: the upper
// endpoint is floor((x + h_1 - a_1 r*)/(a_1 M)) + 1, the lower endpoint
// clamps n = a_1((l-1)M + r*) - h_1 to n >= 1 (only relevant when h_1 > 0).
// With with_coprimality set, the supplementary condition
// (Q(l), a_1...a_k prod_{p<=k} p) = 1 is added; for z >= k it changes
// nothing since P-(Q(l)) > z already forces it.
inline InnerSum inner_sum(const ReducedTerm& term, double x, double z, const QuadCharacter& chi,
                          bool with_coprimality = false) {
    const long long a1 = term.tuple.a[0];
    const long long M = term.big_modulus;
    const long long h1 = term.h_min();
    const long long xf = static_cast<long long>(x);
    InnerSum r;
    r.l_hi = floor_div(xf + h1 - a1 * term.r_star, a1 * M) + 1;
    long long n1_min = ceil_div(1 + h1, a1);
    r.l_lo = std::max(1LL, 1 + ceil_div(n1_min - term.r_star, M));

    std::vector<long long> primes = z < 2 ? std::vector<long long>{} :
                                            primes_up_to(static_cast<long long>(z));
    i128 coprime_mask = 1;
    if (with_coprimality) {
        coprime_mask = term.a_product();
        for (long long p : primes_up_to(static_cast<long long>(term.k())))
            coprime_mask = checked_mul(coprime_mask, p);
    }

    for (long long l = r.l_lo; l <= r.l_hi; ++l) {
        bool rough = true;
        int prod = 1;
        for (std::size_t i = 0; i < term.k() && rough; ++i) {
            i128 v128 = term.factors[i].first * l + term.factors[i].second;
            if (v128 == 0) {
                r.zero_skipped = true;
                rough = false;
                break;
            }
            if (v128 < 0)
                throw std::logic_error("inner_sum: negative factor value inside clamped range");
            long long v = static_cast<long long>(v128);
            for (long long p : primes)
                if (v % p == 0) { rough = false; break; }
            if (rough && with_coprimality && gcd128(v128, coprime_mask) != 1) rough = false;
            if (rough) prod *= chi(v);
        }
        if (rough) {
            r.value += prod;
            ++r.terms_counted;
        }
    }
    return r;
}

struct AssembleReport {
    long long S_direct = 0;
    long long S_decomposed = 0;
    long long tuples_realized = 0;   // distinct smooth-part tuples of surviving n
    long long dropped = 0;           // n excluded by the smooth-part restriction
};

// The central identity: S computed by definition and by the reassembled
// decomposition. The grouped path reduces each smooth-part tuple that
// actually occurs and re-derives its l-range independently.
inline AssembleReport assemble_S(double x, double z, double u, const ShiftSystem& shifts,
                                 const QuadCharacter& chi, const LiouvilleTable& table) {
    const long long xf = static_cast<long long>(x);
    if (static_cast<std::uint64_t>(xf + shifts.max_shift()) > table.limit())
        throw std::out_of_range("assemble_S: table too small for x + max shift");
    const double box = std::pow(z, u);

    AssembleReport rep;
    std::set<std::vector<long long>> tuples;
    std::vector<long long> a(shifts.k());
    for (long long n = 1; n <= xf; ++n) {
        bool inside = true;
        for (std::size_t i = 0; i < shifts.k(); ++i) {
            a[i] = static_cast<long long>(
                table.smooth_part(static_cast<std::uint64_t>(n + shifts.h(i)), z));
            if (static_cast<double>(a[i]) > box) { inside = false; break; }
        }
        if (!inside) {
            ++rep.dropped;
            continue;
        }
        int prod = 1;
        for (std::size_t i = 0; i < shifts.k() && prod != 0; ++i) {
            long long m = n + shifts.h(i);
            prod *= table.lambda(static_cast<std::uint64_t>(a[i])) * chi(m / a[i]);
        }
        rep.S_direct += prod;
        tuples.insert(a);
    }
    rep.tuples_realized = static_cast<long long>(tuples.size());

    for (const auto& tup : tuples) {
        auto term = reduce(SmoothTuple{tup}, shifts);
        if (!term)
            throw std::logic_error("assemble_S: realized tuple has insoluble congruence system");
        InnerSum inner = inner_sum(*term, x, z, chi);
        if (inner.zero_skipped)
            throw std::logic_error("assemble_S: Q vanished inside the l-range");
        int lam = 1;
        for (long long ai : tup) lam *= lambda_trial_division(static_cast<std::uint64_t>(ai));
        rep.S_decomposed += lam * inner.value;
    }
    return rep;
}

// Verification path: same reassembly over the full syntactic tuple stream
// (unrealized tuples contribute 0). Feasible only at small z^u.
inline long long assemble_S_enumerated(double x, double z, double u, const ShiftSystem& shifts,
                                       const QuadCharacter& chi,
                                       long long volume_cap = 20'000'000) {
    EnumeratedTuples et = enumerate_tuples(z, u, shifts, volume_cap);
    long long S = 0;
    for (const auto& tup : et.soluble) {
        auto term = reduce(tup, shifts);
        InnerSum inner = inner_sum(*term, x, z, chi);
        if (inner.zero_skipped)
            throw std::logic_error("assemble_S_enumerated: Q vanished inside the l-range");
        int lam = 1;
        for (long long ai : tup.a) lam *= lambda_trial_division(static_cast<std::uint64_t>(ai));
        S += lam * inner.value;
    }
    return S;
}

struct RestrictionReport {
    long long dropped;
    double bound;  // x e^{-u/2} + 1
    double ratio;
};

inline long long count_restriction_dropped(double x, double z, double u,
                                           const ShiftSystem& shifts,
                                           const LiouvilleTable& table) {
    const long long xf = static_cast<long long>(x);
    if (static_cast<std::uint64_t>(xf + shifts.max_shift()) > table.limit())
        throw std::out_of_range("count_restriction_dropped: table too small");
    const double box = std::pow(z, u);
    long long dropped = 0;
    for (long long n = 1; n <= xf; ++n)
        for (std::size_t i = 0; i < shifts.k(); ++i)
            if (static_cast<double>(table.smooth_part(
                    static_cast<std::uint64_t>(n + shifts.h(i)), z)) > box) {
                ++dropped;
                break;
            }
    return dropped;
}

// The count of n <= x excluded by the smooth-part restriction, against the
// stated O(x e^{-u/2} + 1) size. Hypothesis x >= z^u enforced; the constant
// is implicit, so only the ratio is reported.
inline RestrictionReport restriction_error(double x, double z, double u,
                                           const ShiftSystem& shifts,
                                           const LiouvilleTable& table) {
    if (u < 1) throw std::invalid_argument("restriction_error: u must be >= 1");
    if (x < std::pow(z, u))
        throw std::invalid_argument("restriction_error: hypothesis x >= z^u violated");
    long long dropped = count_restriction_dropped(x, z, u, shifts, table);
    double bound = x * std::exp(-u / 2.0) + 1.0;
    return {dropped, bound, static_cast<double>(dropped) / bound};
}

struct WeilCompleteReport {
    long long abs_sum;
    double bound;          // (g - 1) sqrt(p), g = degree of the radical mod p
    int reduced_degree;    // g
    bool is_square_case;   // chi(f) constant on non-roots; bound not asserted
    bool bound_holds;      // exact integer comparison abs_sum^2 <= (g-1)^2 p
};

// Complete character sum |sum_{n mod p} chi_p(f(n))| at an odd prime, where
// the classical bound is a theorem: except in the square case it must hold,
// and a violation throws.
inline WeilCompleteReport weil_complete_sum(long long p, const IntPolynomial& f) {
    if (p < 3 || p > 100000) throw std::invalid_argument("weil_complete_sum: p out of range");
    {
        auto fac = factorize(p);
        if (fac.size() != 1 || fac[0].second != 1)
            throw std::invalid_argument("weil_complete_sum: p must be prime");
    }
    std::vector<long long> fm = f.reduced_mod(p);
    if (fm.empty()) throw std::invalid_argument("weil_complete_sum: f vanishes identically mod p");

    // Legendre symbol table via the squares mod p
    std::vector<std::int8_t> chi(static_cast<size_t>(p), -1);
    chi[0] = 0;
    for (long long a = 1; a <= (p - 1) / 2; ++a)
        chi[static_cast<size_t>((i128)a * a % p)] = 1;

    long long s = 0;
    for (long long n = 0; n < p; ++n) {
        i128 acc = 0;
        for (size_t i = fm.size(); i-- > 0;) acc = (acc * n + fm[i]) % p;
        s += chi[static_cast<size_t>(acc)];
    }

    WeilCompleteReport r;
    r.abs_sum = std::llabs(s);
    r.is_square_case = square_multiple_mod_p(f, p) != SquareMod::no;
    fp::Poly rad = fp::radical(fm, p);
    r.reduced_degree = fp::deg(rad);
    long long g = r.reduced_degree;
    r.bound = (g - 1) * std::sqrt(static_cast<double>(p));
    r.bound_holds = (i128)r.abs_sum * r.abs_sum <= (i128)(g - 1) * (g - 1) * p;
    if (!r.is_square_case && !r.bound_holds)
        throw identity_violation("weil_complete_sum: bound violated at p = " + std::to_string(p));
    return r;
}

struct WeilIncompleteReport {
    long long abs_sum;
    long long q_star;  // product of odd p | q where f is a square multiple mod p
    double rhs;        // sqrt(q*) (N/sqrt(q) + sqrt(q)) q^eps
    double ratio;
};

// Incomplete-sum measurement against the generalized bound; the implicit
// constant is unknown, so the ratio is tracked, never asserted.
inline WeilIncompleteReport weil_incomplete_measure(const QuadCharacter& chi,
                                                    const IntPolynomial& f, long long M,
                                                    long long N, double eps) {
    if (N < 0) throw std::invalid_argument("weil_incomplete_measure: N must be >= 0");
    const long long q = chi.modulus();
    long long q_star = 1;
    for (const auto& [p, e] : factorize(q))
        if (p > 2 && square_multiple_mod_p(f, p) != SquareMod::no) q_star *= p;

    i128 s = 0;
    for (long long n = M + 1; n <= M + N; ++n) {
        i128 v = f.eval(n);
        long long r = static_cast<long long>(v % q);
        if (r < 0) r += q;
        s += chi(r);
    }
    WeilIncompleteReport rep;
    rep.abs_sum = static_cast<long long>(s < 0 ? -s : s);
    rep.q_star = q_star;
    double sq = std::sqrt(static_cast<double>(q));
    rep.rhs = std::sqrt(static_cast<double>(q_star)) * (static_cast<double>(N) / sq + sq) *
              std::pow(static_cast<double>(q), eps);
    rep.ratio = rep.rhs > 0 ? static_cast<double>(rep.abs_sum) / rep.rhs : 0.0;
    return rep;
}

struct RhoViolation {
    long long p;
    long long rho;
    std::string expected;
};

struct RhoReport {
    bool ok = true;
    long long primes_checked = 0;
    std::vector<RhoViolation> violations;
};

// Root-count structure of a constructed term, for primes p > max h_i (the
// hypothesis both claims are proved under): rho(p) = k when p does not
// divide a_1...a_k, and rho(p) <= 1 when it does. Below max h_i a prime may
// divide two coordinates (it divides their shift difference) and rho(p) can
// legitimately reach 2; such primes are outside the stated ranges.
inline RhoReport rho_structure_check(const ReducedTerm& term, long long p_max) {
    RhoReport rep;
    i128 aprod = term.a_product();
    for (long long p : primes_up_to(p_max)) {
        ++rep.primes_checked;
        if (p <= term.h_max()) continue;
        bool divides_a = aprod % p == 0;
        long long rho = count_roots(term.Q, p);
        if (divides_a) {
            if (rho > 1) {
                rep.ok = false;
                rep.violations.push_back({p, rho, "rho(p) <= 1 for p | a_1...a_k, p > max h"});
            }
        } else {
            if (rho != static_cast<long long>(term.k())) {
                rep.ok = false;
                rep.violations.push_back({p, rho, "rho(p) = k for p > max h, p not | a_1...a_k"});
            }
        }
    }
    return rep;
}

struct HenriotMeasure {
    double lhs;        // exact divisor sum at ladder rung r
    double rhs;        // the product-form bound evaluated literally
    double ratio;
    bool degenerate;   // some Euler factor (1 - rho(p)/p) <= 0
    long long terms;
};

// The divisor-sum instance of the Shiu/Henriot bound used by the error-term
// estimate: lhs = sum_{l <= x/(a_1 M)} tau(Q(l))^2 over l with
// P-(Q(l)) > z_r and (Q(l), a_1...a_k prod_{p<=k} p) = 1, with
// z_r = z^(((25k-1)/25k)^r). Measurement only; no assertion.
inline HenriotMeasure henriot_measure(const ReducedTerm& term, double x, double z, int r) {
    const long long k = static_cast<long long>(term.k());
    const double beta = 25.0 * static_cast<double>(k);
    const double z_r = std::pow(z, std::pow((beta - 1.0) / beta, r));
    const long long a1 = term.tuple.a[0];
    const long long L = static_cast<long long>(x / (static_cast<double>(a1) * term.big_modulus));

    i128 coprime_mask = term.a_product();
    for (long long p : primes_up_to(k)) coprime_mask = checked_mul(coprime_mask, p);
    std::vector<long long> primes_zr = z_r < 2 ? std::vector<long long>{} :
                                                 primes_up_to(static_cast<long long>(z_r));

    HenriotMeasure m{0.0, 0.0, 0.0, false, 0};
    for (long long l = 1; l <= L; ++l) {
        bool ok = true;
        long long tau = 1;
        std::map<long long, int> expo;
        for (std::size_t i = 0; i < term.k() && ok; ++i) {
            i128 v128 = term.factors[i].first * l + term.factors[i].second;
            if (v128 <= 0) { ok = false; break; }  // below the n >= 1 domain, O(1) edge
            long long v = static_cast<long long>(v128);
            for (long long p : primes_zr)
                if (v % p == 0) { ok = false; break; }
            if (ok && gcd128(v128, coprime_mask) != 1) ok = false;
            if (ok)
                for (const auto& [p, e] : factorize(v)) expo[p] += e;
        }
        if (!ok) continue;
        for (const auto& [p, e] : expo) tau *= e + 1;
        m.lhs += static_cast<double>(tau) * static_cast<double>(tau);
        ++m.terms;
    }

    // right side: X * prod_{p<=z}(1 - rho(p)/p) * 5^k per prime p | D coprime
    // to the tuple * (sum_{m<=x, P-(m)>z_r, (m, a)=1} tau(m)^2/m)^k
    double rhs = x / (static_cast<double>(a1) * term.big_modulus);
    for (long long p : primes_up_to(static_cast<long long>(z))) {
        double factor = 1.0 - static_cast<double>(count_roots(term.Q, p)) / static_cast<double>(p);
        if (factor <= 0) m.degenerate = true;
        rhs *= factor;
    }
    double five_k = std::pow(5.0, static_cast<double>(k));
    for (long long p : primes_up_to(std::max(static_cast<long long>(z), term.h_max()))) {
        if (term.D % p != 0) continue;
        if (term.a_product() % p == 0) continue;
        rhs *= five_k;
    }
    double s1 = 0.0;
    i128 amask = term.a_product();
    for (long long mm = 1; mm <= static_cast<long long>(x); ++mm) {
        if (mm > 1) {
            long long spf = 0;
            for (long long p : primes_zr)
                if (mm % p == 0) { spf = p; break; }
            if (spf != 0) continue;  // P-(m) <= z_r
        }
        if (gcd128(mm, amask) != 1) continue;
        long long tau = 1;
        for (const auto& [p, e] : factorize(mm)) tau *= e + 1;
        s1 += static_cast<double>(tau) * static_cast<double>(tau) / static_cast<double>(mm);
    }
    rhs *= std::pow(s1, static_cast<double>(k));
    m.rhs = rhs;
    m.ratio = rhs > 0 ? m.lhs / rhs : 0.0;
    return m;
}

struct GroupingAudit {
    bool ok = true;
    long long first_bad_n = 0;
    std::string detail;
};

// Bijection audit: every n counted by the direct sum must map to exactly one
// (tuple, l) pair counted by the decomposition, and the per-tuple l-counts
// must match the group sizes.
inline GroupingAudit audit_grouping(double x, double z, double u, const ShiftSystem& shifts,
                                    const QuadCharacter& chi, const LiouvilleTable& table) {
    const long long xf = static_cast<long long>(x);
    const double box = std::pow(z, u);
    GroupingAudit audit;
    std::map<std::vector<long long>, long long> group_size;
    std::map<std::vector<long long>, std::set<long long>> group_l;
    for (long long n = 1; n <= xf; ++n) {
        std::vector<long long> a(shifts.k());
        bool inside = true;
        for (std::size_t i = 0; i < shifts.k(); ++i) {
            a[i] = static_cast<long long>(
                table.smooth_part(static_cast<std::uint64_t>(n + shifts.h(i)), z));
            if (static_cast<double>(a[i]) > box) { inside = false; break; }
        }
        if (!inside) continue;
        auto term = reduce(SmoothTuple{a}, shifts);
        if (!term) {
            audit.ok = false;
            audit.first_bad_n = n;
            audit.detail = "realized tuple insoluble";
            return audit;
        }
        // n = a_1 ((l-1) M + r*) - h_1  =>  l from n
        long long n1 = (n + shifts.min_shift()) / a[0];
        if (n1 * a[0] != n + shifts.min_shift() || (n1 - term->r_star) % term->big_modulus != 0) {
            audit.ok = false;
            audit.first_bad_n = n;
            audit.detail = "n does not lie on its tuple's progression";
            return audit;
        }
        long long l = (n1 - term->r_star) / term->big_modulus + 1;
        ++group_size[a];
        if (!group_l[a].insert(l).second) {
            audit.ok = false;
            audit.first_bad_n = n;
            audit.detail = "duplicate l within a tuple group";
            return audit;
        }
    }
    for (const auto& [a, size] : group_size) {
        auto term = reduce(SmoothTuple{a}, shifts);
        InnerSum inner = inner_sum(*term, x, z, chi);
        if (inner.terms_counted != size) {
            audit.ok = false;
            audit.detail = "tuple group size " + std::to_string(size) +
                           " != l-range rough count " + std::to_string(inner.terms_counted);
            return audit;
        }
        for (long long l : group_l[a])
            if (l < inner.l_lo || l > inner.l_hi) {
                audit.ok = false;
                audit.detail = "mapped l outside the derived range";
                return audit;
            }
    }
    return audit;
}

}  // namespace chowla
