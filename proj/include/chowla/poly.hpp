// Integer polynomials and their reductions modulo m: root counting, and the
// "constant multiple of a square modulo p" test that drives the Weil-bound
// bookkeeping. Coefficients are 128-bit because the decomposition machinery
// produces products of several moduli.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "chowla/arith.hpp"
#include "chowla/int128.hpp"

namespace chowla {

// Dense polynomial over Z, constant term first. Trailing zero coefficients
// are stripped; the zero polynomial has an empty coefficient vector.
struct IntPolynomial {
    std::vector<i128> c;

    IntPolynomial() = default;
    explicit IntPolynomial(std::vector<i128> coeffs) : c(std::move(coeffs)) { normalize(); }

    static IntPolynomial from(std::initializer_list<long long> coeffs) {
        std::vector<i128> v(coeffs.begin(), coeffs.end());
        return IntPolynomial(std::move(v));
    }

    void normalize() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }  // -1 for zero

    i128 eval(i128 x) const {
        i128 v = 0;
        for (size_t i = c.size(); i-- > 0;) v = checked_mul(v, x) + c[i];
        return v;
    }

    // Coefficients reduced into [0, m).
    std::vector<long long> reduced_mod(long long m) const {
        std::vector<long long> r(c.size());
        for (size_t i = 0; i < c.size(); ++i) {
            long long v = static_cast<long long>(c[i] % m);
            if (v < 0) v += m;
            r[i] = v;
        }
        while (!r.empty() && r.back() == 0) r.pop_back();
        return r;
    }
};

// Expanded product of linear factors (c*X + b).
inline IntPolynomial poly_from_linear_factors(const std::vector<std::pair<i128, i128>>& factors) {
    std::vector<i128> acc{1};
    for (const auto& [slope, intercept] : factors) {
        std::vector<i128> next(acc.size() + 1, 0);
        for (size_t i = 0; i < acc.size(); ++i) {
            next[i + 1] += checked_mul(acc[i], slope);
            next[i] += checked_mul(acc[i], intercept);
        }
        acc = std::move(next);
    }
    return IntPolynomial(std::move(acc));
}

// rho(m) = #{v mod m : Q(v) = 0 (mod m)}, by direct enumeration.
// Multiplicative across coprime moduli (tested, not exploited).
inline long long count_roots(const IntPolynomial& Q, long long m) {
    if (Q.is_zero()) throw std::invalid_argument("count_roots: zero polynomial");
    if (m < 1) throw std::invalid_argument("count_roots: modulus must be >= 1");
    if (m == 1) return 1;
    std::vector<long long> c = Q.reduced_mod(m);
    long long count = 0;
    for (long long v = 0; v < m; ++v) {
        i128 acc = 0;
        for (size_t i = c.size(); i-- > 0;) acc = (acc * v + c[i]) % m;
        if (acc == 0) ++count;
    }
    return count;
}

// --- dense polynomial arithmetic over F_p (p odd prime, p small) ---

namespace fp {

inline long long pow_mod(long long b, long long e, long long p) {
    long long r = 1;
    b %= p;
    while (e > 0) {
        if (e & 1) r = static_cast<long long>((i128)r * b % p);
        b = static_cast<long long>((i128)b * b % p);
        e >>= 1;
    }
    return r;
}

using Poly = std::vector<long long>;  // constant first, no trailing zeros

inline void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int deg(const Poly& f) { return static_cast<int>(f.size()) - 1; }

inline Poly make_monic(Poly f, long long p) {
    trim(f);
    if (f.empty()) return f;
    long long inv = inv_mod(f.back(), p);
    for (auto& x : f) x = static_cast<long long>((i128)x * inv % p);
    return f;
}

inline Poly derivative(const Poly& f, long long p) {
    Poly d;
    for (size_t i = 1; i < f.size(); ++i)
        d.push_back(static_cast<long long>((i128)f[i] * (i % p) % p));
    trim(d);
    return d;
}

inline Poly mul(const Poly& a, const Poly& b, long long p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = static_cast<long long>(((i128)a[i] * b[j] + r[i + j]) % p);
    trim(r);
    return r;
}

// Remainder of a by b (b nonzero).
inline Poly rem(Poly a, const Poly& b, long long p) {
    trim(a);
    long long lead_inv = inv_mod(b.back(), p);
    while (deg(a) >= deg(b)) {
        long long q = static_cast<long long>((i128)a.back() * lead_inv % p);
        size_t shift = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) {
            long long sub = static_cast<long long>((i128)q * b[i] % p);
            a[shift + i] = (a[shift + i] - sub % p + p) % p;
        }
        trim(a);
        if (a.empty()) break;
    }
    return a;
}

// Exact quotient a / b (b must divide a).
inline Poly div_exact(Poly a, const Poly& b, long long p) {
    trim(a);
    if (a.empty()) return {};
    Poly q(a.size() - b.size() + 1, 0);
    long long lead_inv = inv_mod(b.back(), p);
    while (deg(a) >= deg(b)) {
        long long co = static_cast<long long>((i128)a.back() * lead_inv % p);
        size_t shift = a.size() - b.size();
        q[shift] = co;
        for (size_t i = 0; i < b.size(); ++i) {
            long long sub = static_cast<long long>((i128)co * b[i] % p);
            a[shift + i] = (a[shift + i] - sub % p + p) % p;
        }
        trim(a);
        if (a.empty()) break;
    }
    if (!a.empty()) throw std::logic_error("fp::div_exact: division not exact");
    trim(q);
    return q;
}

// Monic gcd; monic normalization each step keeps representatives unique.
inline Poly gcd(Poly a, Poly b, long long p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(a, p);
}

// p-th root of a polynomial in X^p (valid since c^p = c in F_p).
inline Poly pth_root(const Poly& f, long long p) {
    Poly r;
    for (size_t i = 0; i < f.size(); i += static_cast<size_t>(p)) r.push_back(f[i]);
    trim(r);
    return r;
}

// Product of the distinct irreducible factors, monic. Handles vanishing
// derivatives (perfect p-th powers) so small p is safe.
inline Poly radical(Poly f, long long p) {
    f = make_monic(std::move(f), p);
    if (deg(f) <= 0) return {1};
    Poly d = derivative(f, p);
    if (d.empty()) return radical(pth_root(f, p), p);
    Poly g = gcd(f, d, p);
    Poly w = div_exact(f, g, p);  // factors with multiplicity not divisible by p
    // strip w-factors from g; what remains is a perfect p-th power
    Poly rest = std::move(g);
    Poly c = gcd(rest, w, p);
    while (deg(c) > 0) {
        rest = div_exact(rest, c, p);
        c = gcd(rest, w, p);
    }
    if (deg(rest) <= 0) return make_monic(w, p);
    return mul(make_monic(w, p), radical(pth_root(rest, p), p), p);
}

// Decides whether monic f is a perfect square in F_p[X] by extracting the
// square-root coefficients top-down (possible since 2 is invertible) and
// verifying. f must be monic of even degree.
inline bool monic_is_square(const Poly& f, long long p) {
    int n = deg(f);
    int m = n / 2;
    Poly h(static_cast<size_t>(m) + 1, 0);
    h[static_cast<size_t>(m)] = 1;
    long long inv2 = inv_mod(2, p);
    for (int j = 1; j <= m; ++j) {
        // coefficient of X^(2m-j) in h^2 must match f
        i128 acc = 0;
        for (int i = m - j + 1; i < m; ++i) {
            int i2 = 2 * m - j - i;
            if (i2 > m || i2 < 0 || i2 <= m - j) continue;
            acc += (i128)h[static_cast<size_t>(i)] * h[static_cast<size_t>(i2)];
        }
        long long known = static_cast<long long>(acc % p);
        long long target = f[static_cast<size_t>(2 * m - j)];
        long long hv = static_cast<long long>((i128)((target - known) % p + p) * inv2 % p);
        h[static_cast<size_t>(m - j)] = hv;
    }
    return mul(h, h, p) == f;
}

}  // namespace fp

enum class SquareMod {
    no,
    yes,
    degenerate,  // Q vanishes identically mod p; treated as "yes" downstream
};

// True branch iff Q mod p equals c*g(X)^2 for a constant c, equivalently iff
// the monic normalization of Q mod p is a perfect square in F_p[X].
inline SquareMod square_multiple_mod_p(const IntPolynomial& Q, long long p) {
    if (p < 3) throw std::invalid_argument("square_multiple_mod_p: p must be an odd prime");
    if (auto fac = factorize(p); fac.size() != 1 || fac[0].second != 1)
        throw std::invalid_argument("square_multiple_mod_p: p must be an odd prime");
    std::vector<long long> f = Q.reduced_mod(p);
    if (f.empty()) return SquareMod::degenerate;
    if (fp::deg(f) == 0) return SquareMod::yes;  // constant = c * 1^2
    if (fp::deg(f) % 2 != 0) return SquareMod::no;
    return fp::monic_is_square(fp::make_monic(f, p), p) ? SquareMod::yes : SquareMod::no;
}

inline bool is_square_multiple_mod_p(const IntPolynomial& Q, long long p) {
    return square_multiple_mod_p(Q, p) != SquareMod::no;
}

}  // namespace chowla
