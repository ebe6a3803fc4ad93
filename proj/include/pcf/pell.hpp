#pragma once

#include "pcf/contmat.hpp"
#include "pcf/ring.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

namespace pcf {

// Element e + f*beta of K(beta), beta a fixed root of Q = A x^2 + B x + C.
struct QElem {
    RElem e, f;

    bool operator==(const QElem& o) const { return e == o.e && f == o.f; }
    bool operator<(const QElem& o) const {
        return e != o.e ? e < o.e : f < o.f;
    }
};

inline QElem qe_mul(const RingSpec& R, const QuadPoly& Q, const QElem& x, const QElem& y) {
    // beta^2 = (-B beta - C)/A
    RElem ff = rmul(R, x.f, y.f);
    RElem cross = radd(rmul(R, x.e, y.f), rmul(R, x.f, y.e));
    RElem bOverA = rdiv(R, Q.B, Q.A), cOverA = rdiv(R, Q.C, Q.A);
    return {rsub(rmul(R, x.e, y.e), rmul(R, ff, cOverA)),
            rsub(cross, rmul(R, ff, bOverA))};
}

inline QElem qe_conj(const RingSpec& R, const QuadPoly& Q, const QElem& x) {
    // beta* = -B/A - beta
    return {rsub(x.e, rmul(R, x.f, rdiv(R, Q.B, Q.A))), rneg(x.f)};
}

inline RElem qe_norm(const RingSpec& R, const QuadPoly& Q, const QElem& x) {
    QElem prod = qe_mul(R, Q, x, qe_conj(R, Q, x));
    if (!prod.f.is_zero()) throw std::logic_error("qe_norm: nonzero beta part");
    return prod.e;
}

inline QElem qe_inv(const RingSpec& R, const QuadPoly& Q, const QElem& x) {
    RElem n = qe_norm(R, Q, x);
    if (n.is_zero()) throw std::domain_error("qe_inv: zero norm");
    QElem c = qe_conj(R, Q, x);
    return {rdiv(R, c.e, n), rdiv(R, c.f, n)};
}

// Point on the Fermat-Pell curve FP_k(B): ad - bc = (-1)^k, Bc = A(d-a),
// -Ab = Cc, -Bb = C(d-a).
struct FPPoint {
    RElem a, b, c, d;
    int k_parity = 0;

    bool operator==(const FPPoint& o) const {
        return a == o.a && b == o.b && c == o.c && d == o.d && k_parity == o.k_parity;
    }
    bool operator<(const FPPoint& o) const {
        if (!(a == o.a)) return a < o.a;
        if (!(b == o.b)) return b < o.b;
        if (!(c == o.c)) return c < o.c;
        return d < o.d;
    }
};

inline Integer fp_height(const FPPoint& p) {
    return std::max(std::max(height(p.a), height(p.b)), std::max(height(p.c), height(p.d)));
}

inline bool fp_check(const RingSpec& R, const QuadPoly& Q, const FPPoint& p) {
    RElem det = rsub(rmul(R, p.a, p.d), rmul(R, p.b, p.c));
    RElem sign(p.k_parity % 2 == 0 ? 1L : -1L);
    if (!(det == sign)) return false;
    RElem dma = rsub(p.d, p.a);
    if (!(rmul(R, Q.B, p.c) == rmul(R, Q.A, dma))) return false;
    if (!(rneg(rmul(R, Q.A, p.b)) == rmul(R, Q.C, p.c))) return false;
    if (!(rneg(rmul(R, Q.B, p.b)) == rmul(R, Q.C, dma))) return false;
    return true;
}

// ---------------------------------------------------------------------------
// the (left) order R_beta of the lattice L_beta = beta R + R

struct OrderDesc {
    QElem theta;       // second basis element; basis is (1, theta)
    RElem theta_lin;   // theta^2 = theta_lin * theta + theta_const
    RElem theta_const;
};

inline bool stabilizes_lattice(const RingSpec& R, const QuadPoly& Q, const QElem& x) {
    // x*1 and x*beta must lie in L = beta R + R
    if (!in_ring(R, x.e) || !in_ring(R, x.f)) return false;
    QElem xb = qe_mul(R, Q, x, QElem{RElem(0L), RElem(1L)});
    return in_ring(R, xb.e) && in_ring(R, xb.f);
}

inline OrderDesc r_beta(const RingSpec& R, const QuadPoly& Qin) {
    if (Qin.A.is_zero()) throw std::invalid_argument("r_beta: quadratic required (A != 0)");
    QuadPoly Q = Qin;
    RElem disc = rsub(rmul(R, Q.B, Q.B), rmul(R, rmul(R, RElem(4L), Q.A), Q.C));
    if (sqrt_in_K(R, disc)) throw std::invalid_argument("r_beta: Q is reducible over K");

    RElem mult; // theta = mult * beta
    if (R.kind == RingKind::Integers) {
        Integer A = numerator(Q.A.u), B = numerator(Q.B.u), C = numerator(Q.C.u);
        Integer g = gcd(gcd(iabs(A), iabs(B)), iabs(C));
        Integer t0 = iabs(A) / g;
        mult = RElem(t0);
    } else {
        if (!(Q.A == RElem(1L) || Q.A == RElem(-1L)))
            throw std::invalid_argument("r_beta: non-monic Q over a quadratic base ring is unsupported");
        mult = RElem(1L);
    }
    OrderDesc ord;
    ord.theta = QElem{RElem(0L), mult};
    // theta^2 = mult^2 beta^2 = -mult (B/A) theta - mult^2 C/A
    ord.theta_lin = rneg(rdiv(R, rmul(R, mult, Q.B), Q.A));
    ord.theta_const = rneg(rdiv(R, rmul(R, rmul(R, mult, mult), Q.C), Q.A));
    // the multiplication rule must close over R and theta must stabilize L
    bool ok = in_ring(R, ord.theta_lin) && in_ring(R, ord.theta_const) &&
              stabilizes_lattice(R, Q, ord.theta);
    if (!ok) {
        // search the smallest positive multiplier that stabilizes (over Z)
        ok = false;
        if (R.kind == RingKind::Integers) {
            for (long t = 1; t <= 1024 && !ok; ++t) {
                QElem cand{RElem(0L), RElem(t)};
                if (stabilizes_lattice(R, Q, cand)) {
                    ord.theta = cand;
                    ord.theta_lin = rneg(rdiv(R, rmul(R, RElem(t), Q.B), Q.A));
                    ord.theta_const = rneg(rdiv(R, rmul(R, RElem(t * t), Q.C), Q.A));
                    ok = in_ring(R, ord.theta_lin) && in_ring(R, ord.theta_const);
                }
            }
        }
        if (!ok) throw std::logic_error("r_beta: stabilizer verification failed");
    }
    return ord;
}

// ---------------------------------------------------------------------------
// unit <-> point correspondence

// u = c*beta + d with norm (-1)^k gives the point (d - cB/A, -cC/A, c, d)
inline FPPoint unit_to_fp(const RingSpec& R, const QuadPoly& Q,
                          const RElem& c, const RElem& d, int k) {
    QElem u{d, c};
    RElem n = qe_norm(R, Q, u);
    RElem want(k % 2 == 0 ? 1L : -1L);
    if (!(n == want))
        throw std::domain_error("unit_to_fp: norm of c*beta+d is not (-1)^k");
    RElem a = rsub(d, rdiv(R, rmul(R, c, Q.B), Q.A));
    RElem b = rneg(rdiv(R, rmul(R, c, Q.C), Q.A));
    if (!in_ring(R, a) || !in_ring(R, b))
        throw std::domain_error("unit_to_fp: image entries leave the ring (u is not in R_beta)");
    FPPoint p{a, b, c, d, ((k % 2) + 2) % 2};
    if (!fp_check(R, Q, p)) throw std::logic_error("unit_to_fp: Fermat-Pell relations failed");
    return p;
}

inline std::pair<RElem, RElem> fp_to_unit(const RingSpec& R, const QuadPoly& Q, const FPPoint& p) {
    if (!fp_check(R, Q, p))
        throw std::domain_error("fp_to_unit: point violates the Fermat-Pell relations");
    return {p.c, p.d};
}

// Fundamental solution of y^2 - alpha x^2 = +-1 (regular continued fraction).
struct PellSolution {
    Integer x, y;
    int norm = 0;
};

inline PellSolution fundamental_pell(const Integer& alpha) {
    auto [x, y, n] = detail::pell_fundamental(alpha);
    return PellSolution{x, y, n};
}

// ---------------------------------------------------------------------------
// streaming Fermat-Pell points

// Q has the conic form x^2 - alpha when A = 1, B = 0, C = -alpha
inline std::optional<Integer> conic_alpha(const RingSpec& R, const QuadPoly& Q) {
    if (R.kind != RingKind::Integers) return std::nullopt;
    if (!(Q.A == RElem(1L)) || !Q.B.is_zero()) return std::nullopt;
    if (!Q.C.is_rational() || denominator(Q.C.u) != 1) return std::nullopt;
    Integer alpha = -numerator(Q.C.u);
    if (alpha < 2 || is_perfect_square(alpha)) return std::nullopt;
    return alpha;
}

// First `count` points from the unit powers, filtered to norm (-1)^k and
// ordered by height.  With a single generator the stream is u0^m, m >= 1;
// with several (config-supplied) generators, signed exponent products up to a
// growing degree are merged.
inline std::vector<FPPoint> fp_stream(const RingSpec& R, const QuadPoly& Q, int k,
                                      size_t count,
                                      const std::vector<QElem>& extra_unit_gens = {}) {
    std::vector<QElem> gens = extra_unit_gens;
    if (gens.empty()) {
        auto alpha = conic_alpha(R, Q);
        if (!alpha)
            throw std::invalid_argument("fp_stream: no unit generator available; supply unit_generators");
        PellSolution s = fundamental_pell(*alpha);
        gens.push_back(QElem{RElem(s.y), RElem(s.x)});
    }
    for (const QElem& g : gens) {
        RElem n = qe_norm(R, Q, g);
        if (!(n == RElem(1L) || n == RElem(-1L)))
            throw std::invalid_argument("fp_stream: supplied generator is not a unit of norm +-1");
        if (!in_ring(R, g.e) || !in_ring(R, g.f))
            throw std::invalid_argument("fp_stream: supplied generator has coefficients outside R");
    }
    RElem want(k % 2 == 0 ? 1L : -1L);
    std::set<FPPoint> collected;
    auto try_add = [&](const QElem& u) {
        if (!(qe_norm(R, Q, u) == want)) return;
        try {
            FPPoint p = unit_to_fp(R, Q, u.f, u.e, k);
            collected.insert(p);
        } catch (const std::domain_error&) {
            // u outside R_beta: skip
        }
    };
    if (gens.size() == 1) {
        QElem u = gens[0];
        int parity = qe_norm(R, Q, gens[0]) == RElem(-1L) ? -1 : 1;
        size_t needed = count * (parity == -1 ? 2 : 1) + 4;
        if (parity == 1 && k % 2 == 1) needed = 0; // parity can never match
        QElem cur = u;
        for (size_t m = 1; m <= needed; ++m) {
            try_add(cur);
            cur = qe_mul(R, Q, cur, u);
        }
    } else {
        // signed products of generator powers, degree by degree
        for (int degree = 1; degree <= 6 && collected.size() < 3 * count + 8; ++degree) {
            std::vector<int> expo(gens.size(), -degree);
            for (;;) {
                int total = 0;
                for (int e : expo) total += std::abs(e);
                if (total > 0 && total <= degree) {
                    QElem u{RElem(1L), RElem(0L)};
                    for (size_t i = 0; i < gens.size(); ++i) {
                        QElem g = expo[i] >= 0 ? gens[i] : qe_inv(R, Q, gens[i]);
                        for (int j = 0; j < std::abs(expo[i]); ++j) u = qe_mul(R, Q, u, g);
                    }
                    if (in_ring(R, u.e) && in_ring(R, u.f)) {
                        try_add(u);
                        try_add(QElem{rneg(u.e), rneg(u.f)});
                    }
                }
                size_t idx = 0;
                while (idx < expo.size() && expo[idx] == degree) expo[idx++] = -degree;
                if (idx == expo.size()) break;
                ++expo[idx];
            }
        }
    }
    std::vector<FPPoint> out(collected.begin(), collected.end());
    std::stable_sort(out.begin(), out.end(), [](const FPPoint& p, const FPPoint& q) {
        Integer hp = fp_height(p), hq = fp_height(q);
        if (hp != hq) return hp < hq;
        return p < q;
    });
    if (out.size() > count) out.resize(count);
    return out;
}

// Bounded-height search for units of R_beta beyond the streamed powers;
// reported for S-integer rings where completeness is not claimed.
inline std::vector<QElem> extra_unit_scan(const RingSpec& R, const QuadPoly& Q, long H) {
    std::vector<QElem> found;
    auto coords = [&](long lo, long hi) {
        std::vector<RElem> vals;
        for (long u = lo; u <= hi; ++u) {
            if (R.is_quadratic()) {
                for (long v = lo; v <= hi; ++v) vals.push_back(RElem(Rational(u), Rational(v)));
            } else {
                vals.push_back(RElem(Rational(u), Rational(0)));
            }
        }
        return vals;
    };
    for (const RElem& c : coords(-H, H)) {
        for (const RElem& d : coords(-H, H)) {
            if (c.is_zero() && d.is_zero()) continue;
            QElem u{d, c};
            RElem n = qe_norm(R, Q, u);
            if (!(n == RElem(1L) || n == RElem(-1L))) continue;
            QElem ub = qe_mul(R, Q, u, QElem{RElem(0L), RElem(1L)});
            if (in_ring(R, ub.e) && in_ring(R, ub.f)) found.push_back(u);
        }
    }
    return found;
}

} // namespace pcf
