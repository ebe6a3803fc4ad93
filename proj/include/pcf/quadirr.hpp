#pragma once

#include "pcf/dyadic.hpp"
#include "pcf/integers.hpp"

#include <stdexcept>
#include <tuple>

namespace pcf {

// Quadratic irrational (p + q*sqrt(D))/r in canonical form:
// r > 0, q != 0, gcd(p, q, r) = 1, D not a perfect square (and squarefree up
// to the trial-division bound), D != 0, 1.  D < 0 gives a complex value.
struct QuadIrr {
    Integer p, q, r, D;

    bool is_real() const { return D > 0; }

    bool operator==(const QuadIrr& o) const {
        return p == o.p && q == o.q && r == o.r && D == o.D;
    }
    bool operator!=(const QuadIrr& o) const { return !(*this == o); }
    bool operator<(const QuadIrr& o) const {
        return std::tie(p, q, r, D) < std::tie(o.p, o.q, o.r, o.D);
    }
};

// reduce_radicand pulls square factors of D into q; internal steps that keep
// D fixed skip it.
inline QuadIrr make_quadirr(Integer p, Integer q, Integer r, Integer D,
                            bool reduce_radicand = true) {
    if (r == 0) throw std::domain_error("QuadIrr: zero denominator");
    if (q == 0) throw std::domain_error("QuadIrr: rational value (q = 0)");
    if (D == 0 || D == 1) throw std::domain_error("QuadIrr: invalid radicand");
    if (reduce_radicand) {
        Integer f, s;
        squarefree_split(D, f, s);
        if (f == 1 || f == 0) throw std::domain_error("QuadIrr: radicand is a perfect square");
        q *= s;
        D = f;
    }
    if (r < 0) { p = -p; q = -q; r = -r; }
    Integer g = gcd(gcd(iabs(p), iabs(q)), r);
    if (g > 1) { p /= g; q /= g; r /= g; }
    return QuadIrr{std::move(p), std::move(q), std::move(r), std::move(D)};
}

inline void require_real(const QuadIrr& x) {
    if (!x.is_real()) throw std::domain_error("QuadIrr: operation requires a real value");
}

// exact sign (real values)
inline int qi_sign(const QuadIrr& x) {
    require_real(x);
    return surd_sign(Rational(x.p), Rational(x.q), x.D); // r > 0
}

// exact comparison with a rational
inline int qi_cmp(const QuadIrr& x, const Rational& t) {
    require_real(x);
    // x - t = ((p*den - num*r) + q*den*sqrt(D)) / (r*den)
    Integer num = numerator(t), den = denominator(t);
    return surd_sign(Rational(x.p * den - num * x.r), Rational(x.q * den), x.D);
}

inline Integer qi_floor(const QuadIrr& x) {
    require_real(x);
    // floor(q*sqrt(D)) first: q^2 D is never a perfect square
    Integer t2 = x.q * x.q * x.D;
    Integer s = isqrt(t2);
    Integer tfl = x.q >= 0 ? s : Integer(-s - 1);
    Integer f = floor_div(x.p + tfl, x.r);
    // correct upward at most twice
    while (qi_cmp(x, Rational(f + 1)) >= 0) ++f;
    while (qi_cmp(x, Rational(f)) < 0) --f;
    return f;
}

// nearest integer with remainder in (-1/2, 1/2]: c = ceil(x - 1/2)
inline Integer qi_nearest(const QuadIrr& x) {
    require_real(x);
    // ceil(y) = -floor(-y); -(x - 1/2) = ((r - 2p) - 2q sqrt(D)) / (2r)
    QuadIrr y{x.r - 2 * x.p, -2 * x.q, 2 * x.r, x.D};
    return -qi_floor(y);
}

inline QuadIrr qi_add_rational(const QuadIrr& x, const Rational& t) {
    Integer num = numerator(t), den = denominator(t);
    return make_quadirr(x.p * den + num * x.r, x.q * den, x.r * den, x.D, false);
}

inline QuadIrr qi_sub_rational(const QuadIrr& x, const Rational& t) {
    return qi_add_rational(x, -t);
}

inline QuadIrr qi_neg(const QuadIrr& x) {
    return QuadIrr{-x.p, -x.q, x.r, x.D};
}

inline QuadIrr qi_conj(const QuadIrr& x) {
    return QuadIrr{x.p, -x.q, x.r, x.D};
}

inline Rational qi_norm(const QuadIrr& x) {
    return Rational(x.p * x.p - x.q * x.q * x.D, x.r * x.r);
}

inline QuadIrr qi_invert(const QuadIrr& x) {
    Integer denom = x.p * x.p - x.q * x.q * x.D; // nonzero: D not a square
    return make_quadirr(x.r * x.p, -x.r * x.q, denom, x.D, false);
}

// (a*x + b) / (c*x + d) with rational coefficients
inline QuadIrr qi_mobius(const Rational& a, const Rational& b,
                         const Rational& c, const Rational& d, const QuadIrr& x) {
    // numerator: a*(p + q sqrt D) + b*r ; denominator: c*(p + q sqrt D) + d*r
    Integer L = lcm(lcm(denominator(a), denominator(b)), lcm(denominator(c), denominator(d)));
    Integer ai = numerator(a) * (L / denominator(a));
    Integer bi = numerator(b) * (L / denominator(b));
    Integer ci = numerator(c) * (L / denominator(c));
    Integer di = numerator(d) * (L / denominator(d));
    Integer n0 = ai * x.p + bi * x.r, n1 = ai * x.q;
    Integer d0 = ci * x.p + di * x.r, d1 = ci * x.q;
    if (d0 == 0 && d1 == 0) throw std::domain_error("qi_mobius: pole");
    // (n0 + n1 s)/(d0 + d1 s) = (n0 + n1 s)(d0 - d1 s) / (d0^2 - d1^2 D)
    Integer den = d0 * d0 - d1 * d1 * x.D;
    Integer p = n0 * d0 - n1 * d1 * x.D;
    Integer q = n1 * d0 - n0 * d1;
    if (q == 0) throw std::domain_error("qi_mobius: degenerate (rational) image");
    return make_quadirr(std::move(p), std::move(q), std::move(den), x.D, false);
}

// rational value of the quadratic polynomial A x^2 + B x + C at x, exact;
// returns the pair (rational part, surd coefficient) over the common denom.
inline bool qi_is_root(const Rational& A, const Rational& B, const Rational& C,
                       const QuadIrr& x) {
    // x = (p + q s)/r, x^2 = (p^2 + q^2 D + 2pq s)/r^2
    Rational r2(x.r * x.r);
    Rational rat = A * Rational(x.p * x.p + x.q * x.q * x.D) / r2 + B * Rational(x.p, x.r) + C;
    Rational surd = A * Rational(2 * x.p * x.q) / r2 + B * Rational(x.q, x.r);
    return rat == 0 && surd == 0;
}

inline RIv qi_riv(const QuadIrr& x, long prec) {
    require_real(x);
    RIv s = riv_sqrt(riv_from_rational(Rational(x.D), prec), prec);
    RIv num = riv_add(riv_from_rational(Rational(x.p), prec),
                      riv_mul(riv_from_rational(Rational(x.q), prec), s));
    return riv_mul(num, riv_from_rational(Rational(1, x.r), prec));
}

inline CIv qi_civ(const QuadIrr& x, long prec) {
    if (x.is_real()) return CIv(qi_riv(x, prec), riv_from_rational(Rational(0), prec));
    RIv s = riv_sqrt(riv_from_rational(Rational(-x.D), prec), prec);
    RIv inv_r = riv_from_rational(Rational(1, x.r), prec);
    return CIv(riv_mul(riv_from_rational(Rational(x.p), prec), inv_r),
               riv_mul(riv_mul(riv_from_rational(Rational(x.q), prec), s), inv_r));
}

// nearest integer to a rational with ties rounding down: c = ceil(t - 1/2)
inline Integer rat_nearest(const Rational& t) {
    Rational shifted = t - Rational(1, 2);
    return -rat_floor(-shifted);
}

} // namespace pcf
