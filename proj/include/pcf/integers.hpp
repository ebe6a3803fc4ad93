#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <utility>

namespace pcf {

using Integer  = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer iabs(const Integer& x) { return x < 0 ? Integer(-x) : x; }

inline int isign(const Integer& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

inline int rsign(const Rational& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

inline Rational rabs(const Rational& x) { return x < 0 ? Rational(-x) : x; }

// floor(a/b), b != 0
inline Integer floor_div(const Integer& a, const Integer& b) {
    if (b == 0) throw std::domain_error("floor_div: division by zero");
    Integer q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

inline Integer ceil_div(const Integer& a, const Integer& b) {
    return -floor_div(-a, b);
}

inline Integer rat_floor(const Rational& x) {
    return floor_div(numerator(x), denominator(x));
}

// floor sqrt for n >= 0
inline Integer isqrt(const Integer& n) {
    if (n < 0) throw std::domain_error("isqrt: negative argument");
    return boost::multiprecision::sqrt(n);
}

inline bool is_perfect_square(const Integer& n, Integer* root = nullptr) {
    if (n < 0) return false;
    Integer s = isqrt(n);
    if (s * s == n) {
        if (root) *root = s;
        return true;
    }
    return false;
}

// Write n = f * s^2 with f squarefree (up to the trial-division bound) and
// s >= 1.  Trial division runs to 2^16; any residual square factor beyond
// that is still detected when the whole residual is a perfect square.
inline void squarefree_split(const Integer& n, Integer& f, Integer& s) {
    if (n == 0) { f = 0; s = 1; return; }
    Integer m = iabs(n);
    s = 1;
    Integer reduced = 1;
    auto strip = [&](const Integer& p) {
        if (m % p != 0) return;
        int e = 0;
        while (m % p == 0) { m /= p; ++e; }
        for (int i = 0; i + 1 < e; i += 2) s *= p;
        if (e % 2 == 1) reduced *= p;
    };
    strip(2);
    for (Integer p = 3; p <= (1 << 16) && p * p <= m; p += 2) strip(p);
    Integer root;
    if (is_perfect_square(m, &root)) {
        s *= root;
    } else {
        reduced *= m;
    }
    f = (n < 0) ? Integer(-reduced) : reduced;
}

// max(|num|, den) of a reduced rational
inline Integer rat_height(const Rational& x) {
    Integer n = iabs(numerator(x)), d = denominator(x);
    return n > d ? n : d;
}

// sign of a + b*sqrt(D) for rational a, b and D > 0 non-square (exact)
inline int surd_sign(const Rational& a, const Rational& b, const Integer& D) {
    if (D <= 0) throw std::domain_error("surd_sign: D must be positive");
    if (b == 0) return rsign(a);
    if (a == 0) return rsign(b);
    if (a > 0 && b > 0) return 1;
    if (a < 0 && b < 0) return -1;
    // opposite signs: compare a^2 with b^2 D
    Rational lhs = a * a, rhs = b * b * Rational(D);
    if (lhs == rhs) return 0; // only possible when D is a square
    bool a_dominates = lhs > rhs;
    return a_dominates ? rsign(a) : rsign(b);
}

// sign of x0 + x1*sqrt(n) with n >= 0 rational (exact); collapses square n
inline int qsurd_sign(const Rational& x0, const Rational& x1, const Rational& n) {
    if (n < 0) throw std::domain_error("qsurd_sign: negative radicand");
    if (x1 == 0 || n == 0) return rsign(x0);
    // sqrt(n) = sqrt(num*den)/den
    Integer m = numerator(n) * denominator(n);
    Integer root;
    if (is_perfect_square(m, &root)) {
        return rsign(x0 + x1 * Rational(root, denominator(n)));
    }
    return surd_sign(x0, x1 / Rational(denominator(n)), m);
}

} // namespace pcf
