#pragma once

#include "pcf/pcf_eval.hpp"
#include "pcf/pell.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace pcf {

// Solve A = D(y_1)..D(y_N) D(x_1)..D(x_k) t D(-y_N)..D(-y_1) t^{k+1} for
// tuples of height <= H.  N is 0 or 1; det A must be +1.
struct FactorProblem {
    Mat2 A;
    int N = 0;
    int k = 1;
    Integer H = 8;
};

struct FactorSolution {
    std::vector<RElem> y, x;

    bool operator==(const FactorSolution& o) const { return y == o.y && x == o.x; }
    bool operator<(const FactorSolution& o) const {
        if (y != o.y) return std::lexicographical_compare(y.begin(), y.end(), o.y.begin(), o.y.end());
        return std::lexicographical_compare(x.begin(), x.end(), o.x.begin(), o.x.end());
    }
};

namespace detail {

// all ring elements of height <= H (finite for every supported ring)
inline std::vector<RElem> height_box(const RingSpec& R, const Integer& H) {
    std::vector<RElem> out;
    long h = H.convert_to<long>();
    switch (R.kind) {
        case RingKind::Integers:
            for (long u = -h; u <= h; ++u) out.push_back(RElem(Rational(u), Rational(0)));
            break;
        case RingKind::SIntegers: {
            std::vector<Integer> dens = {1};
            for (const Integer& p : R.s_primes)
                for (Integer q = p; q <= H; q *= p) {
                    std::vector<Integer> next;
                    for (const Integer& d0 : dens)
                        if (d0 * q <= H) next.push_back(d0 * q);
                    dens.insert(dens.end(), next.begin(), next.end());
                }
            std::sort(dens.begin(), dens.end());
            dens.erase(std::unique(dens.begin(), dens.end()), dens.end());
            for (const Integer& den : dens)
                for (long a = -h; a <= h; ++a) {
                    if (den > 1 && gcd(Integer(a), den) != 1) continue;
                    out.push_back(RElem(Rational(a, den), Rational(0)));
                }
            break;
        }
        default:
            for (long u = -h; u <= h; ++u)
                for (long v = -h; v <= h; ++v)
                    out.push_back(RElem(Rational(u), Rational(v)));
    }
    return out;
}

// continuant height bound: K_n = x_n K_{n-1} + K_{n-2} with the ring's
// coefficient-growth factor folded into the multiplier
inline std::vector<Integer> continuant_bounds(const RingSpec& R, const Integer& H, int k) {
    Integer c = 1;
    if (R.is_quadratic())
        c = std::max(Integer(1) + iabs(R.wconst()), Integer(2) + iabs(R.wlin()));
    std::vector<Integer> bell(static_cast<size_t>(k) + 2);
    bell[0] = 1;
    if (bell.size() > 1) bell[1] = std::max(Integer(1), Integer(c * H));
    for (size_t n = 2; n < bell.size(); ++n)
        bell[n] = c * H * bell[n - 1] + bell[n - 2];
    return bell;
}

inline Integer mat_height(const Mat2& m) {
    return std::max(std::max(height(m.e11), height(m.e12)),
                    std::max(height(m.e21), height(m.e22)));
}

// peel one factor: D(x)^{-1} M = [[0,1],[1,-x]] M
inline Mat2 peel(const RingSpec& R, const Mat2& m, const RElem& x) {
    return Mat2{m.e21, m.e22, rsub(m.e11, rmul(R, x, m.e21)), rsub(m.e12, rmul(R, x, m.e22))};
}

// nearest ring elements to a fraction-field value, coefficient-wise
inline std::vector<RElem> quotient_seeds(const RingSpec& R, const RElem& q) {
    std::vector<RElem> seeds;
    Integer u0 = rat_nearest(q.u);
    if (!R.is_quadratic()) {
        for (long du = -1; du <= 1; ++du) seeds.push_back(RElem(u0 + du));
        return seeds;
    }
    Integer v0 = rat_nearest(q.v);
    for (long du = -1; du <= 1; ++du)
        for (long dv = -1; dv <= 1; ++dv)
            seeds.push_back(RElem(Rational(u0 + du), Rational(v0 + dv)));
    return seeds;
}

struct SolverCtx {
    const RingSpec& R;
    std::vector<RElem> box;
    std::vector<Integer> bell;
    Integer H;
};

// candidates for the next factor, continuant-quotient seeds first
inline std::vector<RElem> ordered_candidates(const SolverCtx& ctx, const Mat2& m) {
    std::vector<RElem> out;
    if (!m.e21.is_zero()) {
        RElem q = rdiv(ctx.R, m.e11, m.e21);
        for (const RElem& s : quotient_seeds(ctx.R, q))
            if (height(s) <= ctx.H && in_ring(ctx.R, s)) out.push_back(s);
    }
    for (const RElem& c : ctx.box)
        if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    return out;
}

inline void solve_word(const SolverCtx& ctx, const Mat2& m, int remaining,
                       std::vector<RElem>& prefix, std::vector<FactorSolution>& out,
                       const Integer& last_bound) {
    if (remaining == 1) {
        if (m.e12 == RElem(1L) && m.e21 == RElem(1L) && m.e22 == RElem(0L) &&
            in_ring(ctx.R, m.e11) && height(m.e11) <= last_bound) {
            FactorSolution s;
            s.x = prefix;
            s.x.push_back(m.e11);
            out.push_back(std::move(s));
        }
        return;
    }
    if (remaining == 2) {
        // D(x) D(y) = [[xy+1, x],[y, 1]]
        if (!(m.e22 == RElem(1L))) return;
        const RElem& x = m.e12;
        const RElem& y = m.e21;
        if (!in_ring(ctx.R, x) || !in_ring(ctx.R, y)) return;
        if (height(x) > ctx.H || height(y) > last_bound) return;
        if (!(m.e11 == radd(rmul(ctx.R, x, y), RElem(1L)))) return;
        FactorSolution s;
        s.x = prefix;
        s.x.push_back(x);
        s.x.push_back(y);
        out.push_back(std::move(s));
        return;
    }
    // feasibility: the residual entries are continuants of the remaining
    // variables (all but the last bounded by H)
    if (mat_height(m) > ctx.bell[static_cast<size_t>(remaining)]) return;
    for (const RElem& x : ordered_candidates(ctx, m)) {
        Mat2 next = peel(ctx.R, m, x);
        prefix.push_back(x);
        solve_word(ctx, next, remaining - 1, prefix, out, last_bound);
        prefix.pop_back();
    }
}

} // namespace detail

// All solutions of D(x_1)..D(x_k) = T with height(x_i) <= H for i < k and
// height(x_k) <= last_bound (the relaxed last coordinate serves the phi
// pullback).  Sorted lexicographically.
inline std::vector<FactorSolution> solve_dword(const RingSpec& R, const Mat2& T, int k,
                                               const Integer& H, const Integer& last_bound,
                                               int jobs = 1) {
    detail::SolverCtx ctx{R, detail::height_box(R, H),
                          detail::continuant_bounds(R, std::max(H, last_bound), k), H};
    std::vector<FactorSolution> out;
    if (k == 1 || k == 2 || jobs <= 1) {
        std::vector<RElem> prefix;
        detail::solve_word(ctx, T, k, prefix, out, last_bound);
    } else {
        auto cands = detail::ordered_candidates(ctx, T);
        std::vector<std::vector<FactorSolution>> results(cands.size());
        std::vector<std::thread> pool;
        std::atomic<size_t> next{0};
        for (int j = 0; j < jobs; ++j) {
            pool.emplace_back([&]() {
                for (;;) {
                    size_t i = next.fetch_add(1);
                    if (i >= cands.size()) break;
                    Mat2 m = detail::peel(ctx.R, T, cands[i]);
                    std::vector<RElem> prefix = {cands[i]};
                    detail::solve_word(ctx, m, k - 1, prefix, results[i], last_bound);
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& r : results) out.insert(out.end(), r.begin(), r.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline std::vector<FactorSolution> vbar_solve(const RingSpec& R, const FactorProblem& prob,
                                              int jobs = 1) {
    if (!(mat_det(R, prob.A) == RElem(1L)))
        throw std::invalid_argument("vbar_solve: det A must be +1");
    if (prob.k < 1) throw std::invalid_argument("vbar_solve: k >= 1 required");
    Mat2 T = prob.k % 2 == 1 ? mat_rmul_t(prob.A) : prob.A; // A t^k, t^2 = I
    if (prob.N == 0) {
        return solve_dword(R, T, prob.k, prob.H, prob.H, jobs);
    }
    if (prob.N != 1) throw std::invalid_argument("vbar_solve: N must be 0 or 1");
    // V_{1,k}(A) = phi^{-1} of V_{0,k+1}(A); the last pulled-back coordinate
    // x_k = z_{k+1} + z_1 needs the relaxed bound 2H before filtering
    Mat2 T1 = (prob.k + 1) % 2 == 1 ? mat_rmul_t(prob.A) : prob.A;
    auto zsols = solve_dword(R, T1, prob.k + 1, prob.H, 2 * prob.H, jobs);
    std::vector<FactorSolution> out;
    for (const auto& z : zsols) {
        FactorSolution s;
        s.y = {z.x[0]};
        s.x.assign(z.x.begin() + 1, z.x.end() - 1);
        s.x.push_back(radd(z.x.back(), z.x[0]));
        if (height(s.x.back()) > prob.H) continue;
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// phi: (b_1, a_1..a_k) -> (b_1, a_1, ..., a_{k-1}, a_k - b_1)
inline FactorSolution phi_iso(const FactorSolution& s) {
    if (s.y.size() != 1) throw std::invalid_argument("phi_iso: N = 1 solution required");
    FactorSolution out;
    out.x.push_back(s.y[0]);
    out.x.insert(out.x.end(), s.x.begin(), s.x.end());
    out.x.back() = rsub(s.x.back(), s.y[0]);
    return out;
}

inline FactorSolution phi_inv(const FactorSolution& s) {
    if (!s.y.empty() || s.x.size() < 2)
        throw std::invalid_argument("phi_inv: N = 0 solution with k >= 2 required");
    FactorSolution out;
    out.y = {s.x[0]};
    out.x.assign(s.x.begin() + 1, s.x.end());
    out.x.back() = radd(s.x.back(), s.x[0]);
    return out;
}

// substitute back into the defining word
inline Mat2 solution_word(const RingSpec& R, const FactorSolution& s, int k) {
    Mat2 m = Mat2::identity();
    for (const RElem& y : s.y) m = mat_mul(R, m, dmat(y));
    for (const RElem& x : s.x) m = mat_mul(R, m, dmat(x));
    m = mat_rmul_t(m);
    for (auto it = s.y.rbegin(); it != s.y.rend(); ++it) m = mat_mul(R, m, dmat(rneg(*it)));
    int tpow = (k + 1) % 2 == 0 ? 0 : 1;
    if (tpow) m = mat_rmul_t(m);
    return m;
}

// Fiber of the Fermat-Pell fibration over P: solutions of
// V_{N,k}([[a,b],[c,d]] t^k) mapped to PCF points, kept when they actually
// represent the quadratic (degenerate Quad drops out).
inline std::vector<PCF> fiber_solve(const RingSpec& R, const FPPoint& P, const QuadPoly& Q,
                                    int N, int k, const Integer& H, int jobs = 1) {
    Mat2 A{P.a, P.b, P.c, P.d};
    if (k % 2 == 1) A = mat_rmul_t(A);
    FactorProblem prob{A, N, k, H};
    std::vector<PCF> out;
    for (const FactorSolution& s : vbar_solve(R, prob, jobs)) {
        PCF p;
        p.pre = s.y;
        p.per = s.x;
        Mat2 E = e_matrix(R, p);
        if (!(E == Mat2{P.a, P.b, P.c, P.d}))
            throw std::logic_error("fiber_solve: solution does not reproduce E(p)");
        if (!membership(R, p, Q)) continue;
        out.push_back(std::move(p));
    }
    return out;
}

} // namespace pcf
