#pragma once

#include "pcf/quadirr.hpp"
#include "pcf/ring.hpp"

#include <optional>
#include <stdexcept>

namespace pcf {

// Value (p + q*sqrt(delta))/r in a relative quadratic extension of the base
// ring's fraction field K; sqrt(delta) is the principal complex square root.
struct RelQuadIrr {
    RElem p, q, r;
    RElem delta;
};

inline bool rational_is_square(const Rational& x, Rational* root = nullptr) {
    if (x < 0) return false;
    Integer rn, rd;
    if (!is_perfect_square(numerator(x), &rn)) return false;
    if (!is_perfect_square(denominator(x), &rd)) return false;
    if (root) *root = Rational(rn, rd);
    return true;
}

// Solve s^2 = x in K = Frac(R) for quadratic R; nullopt when x is not a
// square in K.
inline std::optional<RElem> sqrt_in_K(const RingSpec& R, const RElem& x) {
    if (!R.is_quadratic()) {
        Rational rt;
        if (x.v == 0 && rational_is_square(x.u, &rt)) return RElem(rt, 0);
        return std::nullopt;
    }
    Rational A(R.wconst()), B(R.wlin());
    if (x.v == 0) {
        Rational rt;
        if (rational_is_square(x.u, &rt)) return RElem(rt, 0);
        // s = b*w + a with 2a + B b = 0
        if (B == 0) {
            if (A != 0 && rational_is_square(x.u / A, &rt)) return RElem(Rational(0), rt);
        } else {
            // a = -b/2, a^2 + A b^2 = b^2 d/4
            Rational d4 = Rational(R.d) / 4;
            if (rational_is_square(x.u / d4, &rt)) return RElem(-rt / 2, rt);
        }
        return std::nullopt;
    }
    // b != 0: (B^2+4A) t^2 - (2B xv + 4 xu) t + xv^2 = 0 with t = b^2
    Rational qa = B * B + 4 * A;
    Rational qb = -(2 * B * x.v + 4 * x.u);
    Rational qc = x.v * x.v;
    Rational disc = qb * qb - 4 * qa * qc, droot;
    if (!rational_is_square(disc, &droot)) return std::nullopt;
    for (int sgn : {+1, -1}) {
        if (qa == 0) break;
        Rational t = (-qb + sgn * droot) / (2 * qa);
        Rational b;
        if (t > 0 && rational_is_square(t, &b) && b != 0) {
            Rational a = (x.v / b - B * b) / 2;
            RElem s(a, b);
            if (rmul(R, s, s) == x) return s;
        }
    }
    return std::nullopt;
}

inline RelQuadIrr make_relquad(const RingSpec& R, RElem p, RElem q, RElem r, RElem delta) {
    if (r.is_zero()) throw std::domain_error("RelQuadIrr: zero denominator");
    if (q.is_zero()) throw std::domain_error("RelQuadIrr: value lies in the base field");
    if (delta.is_zero()) throw std::domain_error("RelQuadIrr: zero radicand");
    if (sqrt_in_K(R, delta)) throw std::domain_error("RelQuadIrr: radicand is a square in K");
    // strip rational content shared by p, q, r (keeps sizes in check)
    Integer nums = gcd(gcd(iabs(numerator(p.u)), iabs(numerator(p.v))),
                       gcd(gcd(iabs(numerator(q.u)), iabs(numerator(q.v))),
                           gcd(iabs(numerator(r.u)), iabs(numerator(r.v)))));
    Integer dens = gcd(gcd(denominator(p.u), denominator(p.v)),
                       gcd(gcd(denominator(q.u), denominator(q.v)),
                           gcd(denominator(r.u), denominator(r.v))));
    if (nums != 0 && (nums > 1 || dens > 1)) {
        Rational content(nums, dens);
        p = RElem(p.u / content, p.v / content);
        q = RElem(q.u / content, q.v / content);
        r = RElem(r.u / content, r.v / content);
    }
    if (r.u < 0 || (r.u == 0 && r.v < 0)) {
        p = rneg(p); q = rneg(q); r = rneg(r);
    }
    return RelQuadIrr{std::move(p), std::move(q), std::move(r), std::move(delta)};
}

inline bool rel_equal(const RingSpec& R, const RelQuadIrr& a, const RelQuadIrr& b) {
    if (!(a.delta == b.delta)) return false;
    return rmul(R, a.p, b.r) == rmul(R, b.p, a.r) && rmul(R, a.q, b.r) == rmul(R, b.q, a.r);
}

inline RelQuadIrr rel_sub_elem(const RingSpec& R, const RelQuadIrr& a, const RElem& c) {
    return RelQuadIrr{rsub(a.p, rmul(R, c, a.r)), a.q, a.r, a.delta};
}

inline RelQuadIrr rel_neg(const RelQuadIrr& a) {
    return RelQuadIrr{rneg(a.p), rneg(a.q), a.r, a.delta};
}

// conjugate over K (flips sqrt(delta))
inline RelQuadIrr rel_conj(const RelQuadIrr& a) {
    return RelQuadIrr{a.p, rneg(a.q), a.r, a.delta};
}

// relative norm down to K
inline RElem rel_norm(const RingSpec& R, const RelQuadIrr& a) {
    RElem num = rsub(rmul(R, a.p, a.p), rmul(R, rmul(R, a.q, a.q), a.delta));
    RElem den = rmul(R, a.r, a.r);
    return rdiv(R, num, den);
}

inline RelQuadIrr rel_invert(const RingSpec& R, const RelQuadIrr& a) {
    RElem den = rsub(rmul(R, a.p, a.p), rmul(R, rmul(R, a.q, a.q), a.delta));
    if (den.is_zero()) throw std::domain_error("rel_invert: radicand degenerate");
    return make_relquad(R, rmul(R, a.r, a.p), rneg(rmul(R, a.r, a.q)), den, a.delta);
}

// (A*x + B)/(C*x + D) with coefficients in R; requires AD - BC != 0
inline RelQuadIrr rel_mobius(const RingSpec& R, const RElem& A, const RElem& B,
                             const RElem& C, const RElem& D, const RelQuadIrr& x) {
    RElem n0 = radd(rmul(R, A, x.p), rmul(R, B, x.r)), n1 = rmul(R, A, x.q);
    RElem d0 = radd(rmul(R, C, x.p), rmul(R, D, x.r)), d1 = rmul(R, C, x.q);
    RElem den = rsub(rmul(R, d0, d0), rmul(R, rmul(R, d1, d1), x.delta));
    RElem p = rsub(rmul(R, n0, d0), rmul(R, rmul(R, n1, d1), x.delta));
    RElem q = rsub(rmul(R, n1, d0), rmul(R, n0, d1));
    return make_relquad(R, p, q, den, x.delta);
}

// A x^2 + B x + C == 0 exactly
inline bool rel_is_root(const RingSpec& R, const RElem& A, const RElem& B,
                        const RElem& C, const RelQuadIrr& x) {
    RElem p2 = radd(rmul(R, x.p, x.p), rmul(R, rmul(R, x.q, x.q), x.delta));
    RElem rat = radd(radd(rmul(R, A, p2), rmul(R, rmul(R, B, x.p), x.r)),
                     rmul(R, C, rmul(R, x.r, x.r)));
    RElem surd = radd(rmul(R, A, rmul(R, RElem(2L), rmul(R, x.p, x.q))),
                      rmul(R, B, rmul(R, x.q, x.r)));
    return rat.is_zero() && surd.is_zero();
}

// ---------------------------------------------------------------------------
// complex embedding (imaginary-quadratic base)

// principal sqrt of an exact element delta of an imaginary-quadratic K
inline CIv rel_sqrt_civ(const RingSpec& R, const RElem& delta, long prec) {
    Rational re = re_part(R, delta);
    int im_sgn = rsign(delta.v);
    RIv zero = riv_from_rational(Rational(0), prec);
    if (im_sgn == 0) {
        if (re >= 0) return CIv(riv_sqrt(riv_from_rational(re, prec), prec), zero);
        return CIv(zero, riv_sqrt(riv_from_rational(-re, prec), prec));
    }
    Rational nm = rnorm(R, delta); // |delta|^2
    RIv absd = riv_sqrt(riv_from_rational(nm, prec), prec);
    RIv re_iv = riv_from_rational(re, prec);
    RIv half = riv_from_rational(Rational(1, 2), prec);
    auto clamped_sqrt = [&](RIv x) {
        if (x.lo.sign() < 0) x.lo = Dyad(); // outward rounding may dip below 0
        return riv_sqrt(x, prec);
    };
    RIv sre = clamped_sqrt(riv_mul(riv_add(absd, re_iv), half));
    RIv sim = clamped_sqrt(riv_mul(riv_sub(absd, re_iv), half));
    if (im_sgn < 0) sim = riv_neg(sim);
    return CIv(sre, sim);
}

inline CIv rel_civ(const RingSpec& R, const RelQuadIrr& a, long prec) {
    CIv s = rel_sqrt_civ(R, a.delta, prec);
    CIv num = civ_add(relem_civ(R, a.p, prec), civ_mul(relem_civ(R, a.q, prec), s));
    return civ_div(num, relem_civ(R, a.r, prec), prec);
}

// ---------------------------------------------------------------------------
// exact sign of A + 2*Re(W*sqrt(delta)) for rational A, W and delta in an
// imaginary-quadratic K.  Dyadic screening decides generic cases; the zero
// case is settled by integer arithmetic first, so the ladder terminates.

namespace detail {

inline std::optional<int> screen_sign(const RingSpec& R, const Rational& A,
                                      const RElem& W, const RElem& delta, long prec) {
    CIv s = rel_sqrt_civ(R, delta, prec);
    CIv w = relem_civ(R, W, prec);
    CIv prod = civ_mul(w, s);
    RIv t = riv_add(riv_from_rational(A, prec),
                    riv_mul(prod.re, riv_from_rational(Rational(2), prec)));
    return t.sign();
}

} // namespace detail

inline int sign_re_combo(const RingSpec& R, const Rational& A,
                         const RElem& W, const RElem& delta) {
    if (R.kind != RingKind::ImagQuad)
        throw std::domain_error("sign_re_combo: imaginary-quadratic base required");
    if (W.is_zero() || delta.is_zero()) return rsign(A);
    // X := 2 Re(W sqrt(delta));  X^2 = 2 Re(W^2 delta) + 2 Nm(W) sqrt(Nm(delta))
    RElem w2d = rmul(R, rmul(R, W, W), delta);
    Rational x0 = 2 * re_part(R, w2d);
    Rational x1 = 2 * rnorm(R, W);
    Rational n = rnorm(R, delta);
    auto ladder = [&](const Rational& base) -> int {
        for (long prec : {96L, 192L, 384L, 768L, 1536L, 3072L}) {
            auto s = detail::screen_sign(R, base, W, delta, prec);
            if (s) return *s;
        }
        throw std::logic_error("sign_re_combo: precision ladder exhausted");
    };
    if (A == 0) {
        if (qsurd_sign(x0, x1, n) == 0) return 0; // X^2 == 0
        return ladder(Rational(0));
    }
    if (qsurd_sign(x0 - A * A, x1, n) == 0) {
        // X = +-A exactly; T is 0 or 2A
        int sx = ladder(Rational(0)); // sign of X, nonzero here
        return sx == -rsign(A) ? 0 : rsign(A);
    }
    return ladder(A);
}

// sign of |alpha - c1|^2 - |alpha - c2|^2 for lattice points c1, c2
inline int rel_cmp_dist2(const RingSpec& R, const RelQuadIrr& a,
                         const RElem& c1, const RElem& c2) {
    RElem p1 = rsub(a.p, rmul(R, c1, a.r));
    RElem p2 = rsub(a.p, rmul(R, c2, a.r));
    Rational A = rnorm(R, p1) - rnorm(R, p2);
    RElem W = rmul(R, rconj(R, rsub(p1, p2)), a.q);
    return sign_re_combo(R, A, W, a.delta);
}

// sign of Nm(g) - 2 Re(z * conj(g)) for z = (p + q sqrt(delta))/r: positive
// means z is strictly on the origin side of the bisector of 0 and g.
inline int rel_halfplane_sign(const RingSpec& R, const RelQuadIrr& z, const RElem& g) {
    RElem rg = rmul(R, rconj(R, z.r), rconj(R, g));
    RElem prg = rmul(R, z.p, rg);
    Rational A = rnorm(R, g) * rnorm(R, z.r) - 2 * re_part(R, prg);
    RElem W = rneg(rmul(R, z.q, rg));
    return sign_re_combo(R, A, W, z.delta);
}

} // namespace pcf
