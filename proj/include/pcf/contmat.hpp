#pragma once

#include "pcf/relquad.hpp"
#include "pcf/ring.hpp"

#include <variant>
#include <vector>

namespace pcf {

struct Mat2 {
    RElem e11, e12, e21, e22;

    static Mat2 identity() { return {RElem(1L), RElem(0L), RElem(0L), RElem(1L)}; }
    static Mat2 t() { return {RElem(0L), RElem(1L), RElem(1L), RElem(0L)}; }

    bool operator==(const Mat2& o) const {
        return e11 == o.e11 && e12 == o.e12 && e21 == o.e21 && e22 == o.e22;
    }
};

inline Mat2 mat_mul(const RingSpec& R, const Mat2& a, const Mat2& b) {
    return {radd(rmul(R, a.e11, b.e11), rmul(R, a.e12, b.e21)),
            radd(rmul(R, a.e11, b.e12), rmul(R, a.e12, b.e22)),
            radd(rmul(R, a.e21, b.e11), rmul(R, a.e22, b.e21)),
            radd(rmul(R, a.e21, b.e12), rmul(R, a.e22, b.e22))};
}

inline RElem mat_det(const RingSpec& R, const Mat2& m) {
    return rsub(rmul(R, m.e11, m.e22), rmul(R, m.e12, m.e21));
}

inline Mat2 mat_rmul_t(const Mat2& m) { // m * t swaps columns
    return {m.e12, m.e11, m.e22, m.e21};
}

// D(a) = [[a, 1], [1, 0]]
inline Mat2 dmat(const RElem& a) {
    return {a, RElem(1L), RElem(1L), RElem(0L)};
}

// Periodic continued fraction [b_1..b_N; a_1..a_k overline]
struct PCF {
    std::vector<RElem> pre;
    std::vector<RElem> per;

    size_t N() const { return pre.size(); }
    size_t k() const { return per.size(); }

    bool operator==(const PCF& o) const { return pre == o.pre && per == o.per; }
};

// Quadratic A x^2 + B x + C; the all-zero triple is representable but flagged.
struct QuadPoly {
    RElem A, B, C;

    bool is_zero() const { return A.is_zero() && B.is_zero() && C.is_zero(); }
    bool operator==(const QuadPoly& o) const { return A == o.A && B == o.B && C == o.C; }
};

// E = D(b_1)..D(b_N) D(a_1)..D(a_k) t D(-b_N)..D(-b_1) t
inline Mat2 e_matrix(const RingSpec& R, const PCF& p) {
    if (p.per.empty()) throw std::invalid_argument("e_matrix: empty period");
    Mat2 m = Mat2::identity();
    for (const RElem& b : p.pre) m = mat_mul(R, m, dmat(b));
    for (const RElem& a : p.per) m = mat_mul(R, m, dmat(a));
    m = mat_rmul_t(m);
    for (auto it = p.pre.rbegin(); it != p.pre.rend(); ++it)
        m = mat_mul(R, m, dmat(rneg(*it)));
    return mat_rmul_t(m);
}

// period matrix W = D(a_1)..D(a_k)
inline Mat2 period_matrix(const RingSpec& R, const PCF& p) {
    Mat2 m = Mat2::identity();
    for (const RElem& a : p.per) m = mat_mul(R, m, dmat(a));
    return m;
}

inline QuadPoly quad_poly_of(const RingSpec& R, const Mat2& E) {
    return QuadPoly{E.e21, rsub(E.e22, E.e11), rneg(E.e12)};
}

inline QuadPoly quad_poly(const RingSpec& R, const PCF& p) {
    return quad_poly_of(R, e_matrix(R, p));
}

using Root = std::variant<QuadIrr, RelQuadIrr>;

// E (beta, 1)^T == (E21 beta + E22) (beta, 1)^T, exactly
inline bool eigen_check(const RingSpec& R, const PCF& p, const Root& beta) {
    Mat2 E = e_matrix(R, p);
    if (std::holds_alternative<QuadIrr>(beta)) {
        const QuadIrr& b = std::get<QuadIrr>(beta);
        for (const RElem* e : {&E.e11, &E.e12, &E.e21, &E.e22})
            if (!e->is_rational())
                throw std::domain_error("eigen_check: QuadIrr root needs rational matrix entries");
        // lambda = E21 b + E22; check E11 b + E12 == lambda*b and E21 b + E22 == lambda
        // second is trivial; first: E21 b^2 + (E22 - E11) b - E12 == 0
        return qi_is_root(E.e21.u, rsub(E.e22, E.e11).u, rneg(E.e12).u, b);
    }
    const RelQuadIrr& b = std::get<RelQuadIrr>(beta);
    return rel_is_root(R, E.e21, rsub(E.e22, E.e11), rneg(E.e12), b);
}

} // namespace pcf
