#pragma once

#include "pcf/contmat.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace pcf {

class NonConvergentError : public std::runtime_error {
public:
    explicit NonConvergentError(const std::string& what) : std::runtime_error(what) {}
};

class BudgetExceededError : public std::runtime_error {
public:
    explicit BudgetExceededError(const std::string& what) : std::runtime_error(what) {}
};

// |sigma(x)| >= bound, exact, for the archimedean embedding sigma
inline bool abs_at_least(const RingSpec& R, const RElem& x, const Rational& bound,
                         bool conj_embedding = false) {
    switch (R.kind) {
        case RingKind::Integers:
        case RingKind::SIntegers:
            return rabs(x.u) >= bound;
        case RingKind::ImagQuad:
            return rnorm(R, x) >= bound * bound;
        case RingKind::RealQuad: {
            // sigma(u + v w): w -> (lin + s*sqrt(d))/div
            Rational a = x.u, b = x.v;
            if (R.maximal) { a += b / 2; b /= 2; }
            if (conj_embedding) b = -b;
            // |a + b sqrt(d)| >= bound  <=>  value - bound >= 0 or value + bound <= 0
            int s_hi = surd_sign(a - bound, b, Integer(R.d));
            int s_lo = surd_sign(a + bound, b, Integer(R.d));
            return s_hi >= 0 || s_lo <= 0;
        }
    }
    return false;
}

// Worpitzky gate: |c_n c_{n+1}| >= 4 for all consecutive pairs; when
// periodic_wrap is set the pair (c_k, c_1) is included for the infinite tail.
inline bool worpitzky_check(const RingSpec& R, const std::vector<RElem>& cs,
                            bool periodic_wrap = true, bool conj_embedding = false) {
    if (cs.empty()) return false;
    size_t n = cs.size();
    size_t pairs = periodic_wrap ? n : (n > 0 ? n - 1 : 0);
    if (n == 1 && !periodic_wrap) {
        return true; // no consecutive pair to test
    }
    for (size_t i = 0; i < pairs; ++i) {
        RElem prod = rmul(R, cs[i], cs[(i + 1) % n]);
        if (!abs_at_least(R, prod, Rational(4), conj_embedding)) return false;
    }
    return true;
}

using ExactValue = std::variant<RElem, QuadIrr, RelQuadIrr>;

enum class NumericMethod { TailDisk, FixedPoint, Heuristic };

struct PCFValue {
    std::optional<ExactValue> exact;
    CIv numeric;
    Rational numeric_radius = -1; // distance bound to the limit; -1 = heuristic only
    NumericMethod method = NumericMethod::Heuristic;
    bool converged = false;
    bool tail_hit_infinity = false;
    size_t periods_applied = 0;
};

namespace detail {

// dominant branch sign for the fixed points of W over Z: lambda = (tr ± sqrt(D))/2
inline int dominant_branch_z(const Rational& tr) { return rsign(tr); }

// principal square root enclosure for an exact ring element
inline CIv sqrt_civ_of_relem(const RingSpec& R, const RElem& x, long prec) {
    if (R.kind == RingKind::ImagQuad) return rel_sqrt_civ(R, x, prec);
    RIv zero = riv_from_rational(Rational(0), prec);
    if (R.kind == RingKind::RealQuad) {
        Rational a = x.u, b = x.v;
        if (R.maximal) { a += b / 2; b /= 2; }
        int s = b == 0 ? rsign(a) : surd_sign(a, b, Integer(R.d));
        RIv v = relem_riv(R, x, prec);
        if (s >= 0) return CIv(riv_sqrt(v, prec), zero);
        return CIv(zero, riv_sqrt(riv_neg(v), prec));
    }
    if (x.u >= 0) return CIv(riv_sqrt(riv_from_rational(x.u, prec), prec), zero);
    return CIv(zero, riv_sqrt(riv_from_rational(-x.u, prec), prec));
}

struct NumericResult {
    CIv value;
    Rational radius = -1;
    NumericMethod method = NumericMethod::Heuristic;
    bool contracting = false;
    bool hit_infinity = false;
    size_t periods = 0;
};

// Enclosure of the attracting fixed point of W pushed through B, by the
// interval quadratic formula; needs certified eigenvalue dominance.
inline std::optional<CIv> fixed_point_enclosure(const RingSpec& R, const Mat2& B,
                                                const Mat2& W, long prec) {
    if (W.e21.is_zero()) return std::nullopt;
    RElem tr = radd(W.e11, W.e22);
    RElem det = mat_det(R, W);
    RElem disc = rsub(rmul(R, tr, tr), rmul(R, RElem(4L), det));
    CIv s = sqrt_civ_of_relem(R, disc, prec);
    CIv tr_iv = relem_civ(R, tr, prec);
    RIv half = riv_from_rational(Rational(1, 2), prec);
    auto scale_half = [&](const CIv& z) { return CIv(riv_mul(z.re, half), riv_mul(z.im, half)); };
    CIv lam_p = scale_half(civ_add(tr_iv, s));
    CIv lam_m = scale_half(civ_sub(tr_iv, s));
    bool plus;
    if (disc.is_zero()) {
        plus = true; // parabolic: single fixed point, truncations still reach it
    } else {
        RIv np = civ_abs2(lam_p), nm = civ_abs2(lam_m);
        if (riv_lt(nm, np)) plus = true;
        else if (riv_lt(np, nm)) plus = false;
        else return std::nullopt;
    }
    CIv diff = civ_sub(relem_civ(R, W.e11, prec), relem_civ(R, W.e22, prec));
    CIv num = plus ? civ_add(diff, s) : civ_sub(diff, s);
    CIv den = civ_mul(CIv(riv_from_rational(Rational(2), prec), riv_from_rational(Rational(0), prec)),
                      relem_civ(R, W.e21, prec));
    if (civ_abs2(den).contains_zero()) return std::nullopt;
    CIv beta = civ_div(num, den, prec);
    CIv vnum = civ_add(civ_mul(relem_civ(R, B.e11, prec), beta), relem_civ(R, B.e12, prec));
    CIv vden = civ_add(civ_mul(relem_civ(R, B.e21, prec), beta), relem_civ(R, B.e22, prec));
    if (civ_abs2(vden).contains_zero()) return std::nullopt;
    return civ_div(vnum, vden, prec);
}

// Iterate truncations of B * W^m.  When every period term has |a| >= 2 the
// tail value lies in the closed disk around a_1 of radius 1
// (Sleszynski-Pringsheim), so the Moebius image of that disk rigorously
// encloses the limit; otherwise the plain truncation values feed the
// contraction diagnostic only.
inline NumericResult numeric_evaluate(const RingSpec& R, const PCF& p, long prec,
                                      const Rational& target_radius, size_t max_periods) {
    Mat2 B = Mat2::identity();
    for (const RElem& b : p.pre) B = mat_mul(R, B, dmat(b));
    Mat2 W = period_matrix(R, p);

    bool tail_disk_ok = true;
    for (const RElem& a : p.per)
        if (!abs_at_least(R, a, Rational(2))) { tail_disk_ok = false; break; }

    CIv m11 = relem_civ(R, B.e11, prec), m12 = relem_civ(R, B.e12, prec);
    CIv m21 = relem_civ(R, B.e21, prec), m22 = relem_civ(R, B.e22, prec);
    CIv w11 = relem_civ(R, W.e11, prec), w12 = relem_civ(R, W.e12, prec);
    CIv w21 = relem_civ(R, W.e21, prec), w22 = relem_civ(R, W.e22, prec);
    CIv u = relem_civ(R, p.per[0], prec); // tail disk center

    NumericResult out;
    std::optional<CIv> prev_value;
    Rational prev_diff = -1;
    int contracting_streak = 0;
    for (size_t m = 1; m <= max_periods; ++m) {
        out.periods = m;
        // advance M <- M * W, renormalized to the working precision
        CIv n11 = civ_normalize(civ_add(civ_mul(m11, w11), civ_mul(m12, w21)), prec);
        CIv n12 = civ_normalize(civ_add(civ_mul(m11, w12), civ_mul(m12, w22)), prec);
        CIv n21 = civ_normalize(civ_add(civ_mul(m21, w11), civ_mul(m22, w21)), prec);
        CIv n22 = civ_normalize(civ_add(civ_mul(m21, w12), civ_mul(m22, w22)), prec);
        m11 = n11; m12 = n12; m21 = n21; m22 = n22;

        if (tail_disk_ok) {
            // image of the closed unit disk about u under z -> (m11 z + m12)/(m21 z + m22)
            CIv q = civ_add(civ_mul(m21, u), m22);
            RIv den = riv_sub(civ_abs2(q), civ_abs2(m21));
            if (!(den.sign() && *den.sign() > 0)) {
                out.hit_infinity = true; // pole meets the tail disk at this truncation
                continue;
            }
            CIv conj_q(q.re, riv_neg(q.im));
            CIv conj_c(m21.re, riv_neg(m21.im));
            CIv center_num = civ_sub(civ_mul(civ_add(civ_mul(m11, u), m12), conj_q),
                                     civ_mul(m11, conj_c));
            RIv inv_den = riv_inv(den, prec);
            CIv center(riv_mul(center_num.re, inv_den), riv_mul(center_num.im, inv_den));
            // |det| = 1, so the image disk radius is 1/den
            Rational rho = dyad_to_rational(inv_den.hi);
            Rational total = rho + civ_rad(center);
            if (out.radius < 0 || total < out.radius) {
                Dyad rpad = dyad_from_rational(rho, prec, true);
                RIv pad(dyad_neg(rpad), rpad);
                out.value = CIv(riv_add(center.re, pad), riv_add(center.im, pad));
                out.radius = total;
                out.method = NumericMethod::TailDisk;
            }
            if (prev_value) {
                CIv d = civ_sub(center, *prev_value);
                Rational diff = rabs(riv_mid(d.re)) + rabs(riv_mid(d.im)) + civ_rad(d);
                if (prev_diff >= 0) {
                    if (diff < prev_diff) ++contracting_streak; else contracting_streak = 0;
                    if (contracting_streak >= 3) out.contracting = true;
                }
                prev_diff = diff;
            }
            prev_value = center;
            if (out.radius >= 0 && out.radius < target_radius) break;
        } else {
            // plain truncation value M11/M21 (the finite continued fraction);
            // diagnostics only, so a few hundred periods are plenty
            if (m > 400) break;
            if (civ_abs2(m21).contains_zero()) {
                out.hit_infinity = true;
                continue;
            }
            CIv val = civ_div(m11, m21, prec);
            if (out.method == NumericMethod::Heuristic) out.value = val;
            if (prev_value) {
                CIv d = civ_sub(val, *prev_value);
                Rational diff = rabs(riv_mid(d.re)) + rabs(riv_mid(d.im)) + civ_rad(d);
                if (prev_diff >= 0) {
                    if (diff < prev_diff) ++contracting_streak; else contracting_streak = 0;
                    if (contracting_streak >= 3) out.contracting = true;
                }
                prev_diff = diff;
            }
            prev_value = val;
            if (out.contracting && prev_diff >= 0 && prev_diff < target_radius && m >= 8) break;
        }
    }

    if (out.radius < 0 || out.radius >= target_radius) {
        // fixed-point route: certified dominance gives an enclosure directly
        for (long fprec : {prec, 2 * prec, 4 * prec}) {
            auto fp = fixed_point_enclosure(R, B, W, fprec);
            if (!fp) continue;
            Rational rad = civ_rad(*fp);
            if (out.radius < 0 || rad < out.radius) {
                out.value = *fp;
                out.radius = rad;
                out.method = NumericMethod::FixedPoint;
            }
            if (out.radius < target_radius) break;
        }
    }
    return out;
}

} // namespace detail

inline Rational default_eval_radius() {
    Integer den = 1;
    for (int i = 0; i < 30; ++i) den *= 10;
    return Rational(1, den);
}

// Value of the PCF: the attracting fixed point of the period matrix (root
// with |W21 b + W22| strictly maximal) pushed through the preperiod Moebius
// map.  Exact over Z and imaginary-quadratic orders; rigorous numeric
// enclosure always.

inline PCFValue evaluate_impl(const RingSpec& R, const PCF& p,
                              const Rational& target_radius, size_t max_periods) {
    if (p.per.empty()) throw std::invalid_argument("evaluate: empty period");
    PCFValue out;

    bool exact_supported = R.kind == RingKind::Integers || R.kind == RingKind::ImagQuad;
    std::optional<std::string> exact_failure;
    if (exact_supported) {
        Mat2 W = period_matrix(R, p);
        RElem tr = radd(W.e11, W.e22);
        RElem det = mat_det(R, W);
        RElem disc = rsub(rmul(R, tr, tr), rmul(R, RElem(4L), det));
        if (W.e21.is_zero()) {
            exact_failure = "period matrix fixes infinity";
        } else if (auto s = sqrt_in_K(R, disc)) {
            // rational (in K) fixed points
            RElem lam_plus = rdiv(R, radd(tr, *s), RElem(2L));
            RElem lam_minus = rdiv(R, rsub(tr, *s), RElem(2L));
            Rational np = R.kind == RingKind::Integers ? rabs(lam_plus.u) * rabs(lam_plus.u)
                                                       : rnorm(R, lam_plus);
            Rational nm = R.kind == RingKind::Integers ? rabs(lam_minus.u) * rabs(lam_minus.u)
                                                       : rnorm(R, lam_minus);
            if (np == nm) {
                exact_failure = "eigenvalues of equal absolute value";
            } else {
                RElem ssel = np > nm ? *s : rneg(*s);
                RElem root = rdiv(R, radd(rsub(W.e11, W.e22), ssel),
                                  rmul(R, RElem(2L), W.e21));
                // push through the preperiod
                Mat2 B = Mat2::identity();
                for (const RElem& b : p.pre) B = mat_mul(R, B, dmat(b));
                RElem den = radd(rmul(R, B.e21, root), B.e22);
                if (den.is_zero()) {
                    exact_failure = "preperiod sends the fixed point to infinity";
                } else {
                    out.exact = rdiv(R, radd(rmul(R, B.e11, root), B.e12), den);
                }
            }
        } else if (R.kind == RingKind::Integers) {
            Rational dq = disc.u; // integer here
            if (dq < 0) {
                exact_failure = "complex fixed points over Z";
            } else {
                int branch = detail::dominant_branch_z(tr.u);
                if (branch == 0) {
                    exact_failure = "eigenvalues of equal absolute value";
                } else {
                    QuadIrr beta = make_quadirr(numerator(rsub(W.e11, W.e22).u),
                                                Integer(branch),
                                                2 * numerator(W.e21.u),
                                                numerator(dq));
                    Mat2 B = Mat2::identity();
                    for (const RElem& b : p.pre) B = mat_mul(R, B, dmat(b));
                    out.exact = qi_mobius(B.e11.u, B.e12.u, B.e21.u, B.e22.u, beta);
                }
            }
        } else {
            // imaginary-quadratic: branch by sign of Re(conj(tr) sqrt(disc))
            int branch = sign_re_combo(R, Rational(0), rconj(R, tr), disc);
            if (branch == 0) {
                exact_failure = "eigenvalues of equal absolute value";
            } else {
                RelQuadIrr beta = make_relquad(R, rsub(W.e11, W.e22), RElem(long(branch)),
                                               rmul(R, RElem(2L), W.e21), disc);
                Mat2 B = Mat2::identity();
                for (const RElem& b : p.pre) B = mat_mul(R, B, dmat(b));
                out.exact = rel_mobius(R, B.e11, B.e12, B.e21, B.e22, beta);
            }
        }
    }

    if (exact_supported && exact_failure)
        throw NonConvergentError("evaluate: " + *exact_failure);

    auto num = detail::numeric_evaluate(R, p, 320, target_radius, max_periods);
    out.numeric = num.value;
    out.numeric_radius = num.radius;
    out.method = num.method;
    out.tail_hit_infinity = num.hit_infinity;
    out.periods_applied = num.periods;
    bool worpitzky_ok = worpitzky_check(R, p.per, /*periodic_wrap=*/true);
    out.converged = worpitzky_ok || num.contracting;
    return out;
}

inline PCFValue evaluate(const RingSpec& R, const PCF& p, const Rational& target_radius,
                         size_t max_periods) {
    return evaluate_impl(R, p, target_radius, max_periods);
}

inline PCFValue evaluate(const RingSpec& R, const PCF& p) {
    return evaluate_impl(R, p, default_eval_radius(), 10000);
}

// Projective membership in V(B)_{N,k}: Quad(p) is a nonzero R-multiple of Q.
inline bool membership(const RingSpec& R, const PCF& p, const QuadPoly& Q) {
    if (Q.is_zero()) throw std::invalid_argument("membership: zero quadratic");
    QuadPoly qp = quad_poly(R, p);
    if (qp.is_zero()) return false;
    RElem m12 = rsub(rmul(R, qp.A, Q.B), rmul(R, qp.B, Q.A));
    RElem m13 = rsub(rmul(R, qp.A, Q.C), rmul(R, qp.C, Q.A));
    RElem m23 = rsub(rmul(R, qp.B, Q.C), rmul(R, qp.C, Q.B));
    return m12.is_zero() && m13.is_zero() && m23.is_zero();
}

} // namespace pcf
