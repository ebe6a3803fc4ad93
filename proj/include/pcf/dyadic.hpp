#pragma once

#include "pcf/integers.hpp"

#include <algorithm>
#include <optional>

namespace pcf {

// Dyadic rational m * 2^e.  Add/sub/mul are exact; div and sqrt round in a
// stated direction; normalize() caps the mantissa at a working precision so
// long iterations cannot blow up.  Intervals built from these are rigorous
// enclosures by construction.
struct Dyad {
    Integer m;
    long e = 0;

    Dyad() : m(0) {}
    Dyad(Integer mm, long ee) : m(std::move(mm)), e(ee) {}
    explicit Dyad(const Integer& n) : m(n), e(0) {}

    bool is_zero() const { return m == 0; }
    int sign() const { return isign(m); }
};

inline long bit_length(const Integer& n) {
    if (n == 0) return 0;
    return static_cast<long>(boost::multiprecision::msb(iabs(n))) + 1;
}

// round toward -inf / +inf to at most prec mantissa bits
inline Dyad round_dir(const Dyad& x, long prec, bool up) {
    long bits = bit_length(x.m);
    if (bits <= prec) return x;
    long k = bits - prec;
    Integer shifted = x.m >> static_cast<unsigned>(k);
    Integer rem = x.m - (shifted << static_cast<unsigned>(k));
    if (rem != 0 && up) ++shifted;
    return Dyad(shifted, x.e + k);
}

inline Dyad dyad_add(const Dyad& a, const Dyad& b) {
    if (a.m == 0) return b;
    if (b.m == 0) return a;
    long e = std::min(a.e, b.e);
    Integer am = a.m << static_cast<unsigned>(a.e - e);
    Integer bm = b.m << static_cast<unsigned>(b.e - e);
    return Dyad(am + bm, e);
}

inline Dyad dyad_neg(const Dyad& a) { return Dyad(-a.m, a.e); }

inline Dyad dyad_sub(const Dyad& a, const Dyad& b) { return dyad_add(a, dyad_neg(b)); }

inline Dyad dyad_mul(const Dyad& a, const Dyad& b) { return Dyad(a.m * b.m, a.e + b.e); }

inline int dyad_cmp(const Dyad& a, const Dyad& b) {
    return dyad_sub(a, b).sign();
}

inline Dyad dyad_from_rational(const Rational& x, long prec, bool up) {
    // num/den * 2^prec, rounded in direction
    Integer num = numerator(x), den = denominator(x);
    Integer scaled = num << static_cast<unsigned>(prec);
    Integer q = up ? ceil_div(scaled, den) : floor_div(scaled, den);
    return Dyad(q, -prec);
}

// sqrt with directed rounding, x >= 0
inline Dyad dyad_sqrt(const Dyad& x, long prec, bool up) {
    if (x.m < 0) throw std::domain_error("dyad_sqrt: negative");
    if (x.m == 0) return Dyad();
    // scale so that mantissa has at least 2*prec bits and even exponent
    long e = x.e;
    Integer m = x.m;
    long want = 2 * prec + 2;
    long have = bit_length(m);
    long shift = std::max<long>(0, want - have);
    if ((e - shift) % 2 != 0) ++shift;
    m <<= static_cast<unsigned>(shift);
    e -= shift;
    Integer r = isqrt(m);
    if (up && r * r != m) ++r;
    return Dyad(r, e / 2);
}

inline Rational dyad_to_rational(const Dyad& x) {
    if (x.e >= 0) return Rational(x.m << static_cast<unsigned>(x.e));
    return Rational(x.m, Integer(1) << static_cast<unsigned>(-x.e));
}

// ---------------------------------------------------------------------------
// real interval [lo, hi]

struct RIv {
    Dyad lo, hi;

    RIv() = default;
    RIv(Dyad l, Dyad h) : lo(std::move(l)), hi(std::move(h)) {}
    explicit RIv(const Integer& n) : lo(Dyad(n)), hi(Dyad(n)) {}

    bool contains_zero() const { return lo.sign() <= 0 && hi.sign() >= 0; }
    // certain sign, or nullopt when the interval straddles zero
    std::optional<int> sign() const {
        if (lo.sign() > 0) return 1;
        if (hi.sign() < 0) return -1;
        if (lo.sign() == 0 && hi.sign() == 0) return 0;
        return std::nullopt;
    }
};

inline RIv riv_from_rational(const Rational& x, long prec) {
    return RIv(dyad_from_rational(x, prec, false), dyad_from_rational(x, prec, true));
}

inline RIv riv_add(const RIv& a, const RIv& b) {
    return RIv(dyad_add(a.lo, b.lo), dyad_add(a.hi, b.hi));
}

inline RIv riv_neg(const RIv& a) { return RIv(dyad_neg(a.hi), dyad_neg(a.lo)); }

inline RIv riv_sub(const RIv& a, const RIv& b) { return riv_add(a, riv_neg(b)); }

inline RIv riv_mul(const RIv& a, const RIv& b) {
    Dyad p1 = dyad_mul(a.lo, b.lo), p2 = dyad_mul(a.lo, b.hi);
    Dyad p3 = dyad_mul(a.hi, b.lo), p4 = dyad_mul(a.hi, b.hi);
    Dyad lo = p1, hi = p1;
    for (const Dyad* p : {&p2, &p3, &p4}) {
        if (dyad_cmp(*p, lo) < 0) lo = *p;
        if (dyad_cmp(*p, hi) > 0) hi = *p;
    }
    return RIv(lo, hi);
}

inline RIv riv_normalize(const RIv& a, long prec) {
    return RIv(round_dir(a.lo, prec, false), round_dir(a.hi, prec, true));
}

// 1/x for an interval not containing zero
inline RIv riv_inv(const RIv& a, long prec) {
    if (a.contains_zero()) throw std::domain_error("riv_inv: interval contains zero");
    auto recip = [&](const Dyad& d, bool up) {
        // 1/(m 2^e) = (2^s / m) 2^(-e-s)
        long s = bit_length(d.m) + prec;
        Integer num = Integer(1) << static_cast<unsigned>(s);
        Integer q = up ? ceil_div(num, d.m) : floor_div(num, d.m);
        return Dyad(q, -d.e - s);
    };
    return RIv(recip(a.hi, false), recip(a.lo, true));
}

inline RIv riv_div(const RIv& a, const RIv& b, long prec) {
    return riv_mul(a, riv_inv(b, prec));
}

inline RIv riv_sqrt(const RIv& a, long prec) {
    if (a.lo.sign() < 0) throw std::domain_error("riv_sqrt: negative lower bound");
    return RIv(dyad_sqrt(a.lo, prec, false), dyad_sqrt(a.hi, prec, true));
}

inline Rational riv_rad(const RIv& a) {
    return dyad_to_rational(dyad_sub(a.hi, a.lo)) / 2;
}

inline Rational riv_mid(const RIv& a) {
    return (dyad_to_rational(a.lo) + dyad_to_rational(a.hi)) / 2;
}

// strict a < b certified
inline bool riv_lt(const RIv& a, const RIv& b) { return dyad_cmp(a.hi, b.lo) < 0; }

// ---------------------------------------------------------------------------
// complex rectangle re + i*im

struct CIv {
    RIv re, im;

    CIv() = default;
    CIv(RIv r, RIv i) : re(std::move(r)), im(std::move(i)) {}
};

inline CIv civ_add(const CIv& a, const CIv& b) {
    return CIv(riv_add(a.re, b.re), riv_add(a.im, b.im));
}

inline CIv civ_sub(const CIv& a, const CIv& b) {
    return CIv(riv_sub(a.re, b.re), riv_sub(a.im, b.im));
}

inline CIv civ_mul(const CIv& a, const CIv& b) {
    return CIv(riv_sub(riv_mul(a.re, b.re), riv_mul(a.im, b.im)),
               riv_add(riv_mul(a.re, b.im), riv_mul(a.im, b.re)));
}

inline RIv civ_abs2(const CIv& a) {
    return riv_add(riv_mul(a.re, a.re), riv_mul(a.im, a.im));
}

inline CIv civ_div(const CIv& a, const CIv& b, long prec) {
    RIv n = civ_abs2(b);
    RIv inv = riv_inv(n, prec);
    CIv conj_b(b.re, riv_neg(b.im));
    CIv prod = civ_mul(a, conj_b);
    return CIv(riv_mul(prod.re, inv), riv_mul(prod.im, inv));
}

inline CIv civ_normalize(const CIv& a, long prec) {
    return CIv(riv_normalize(a.re, prec), riv_normalize(a.im, prec));
}

// radius of the enclosing disc (upper bound)
inline Rational civ_rad(const CIv& a) {
    Rational rr = riv_rad(a.re), ri = riv_rad(a.im);
    // hypot upper bound: rr + ri
    return rr + ri;
}

} // namespace pcf
