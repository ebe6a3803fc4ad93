#pragma once

#include "pcf/dyadic.hpp"
#include "pcf/integers.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace pcf {

enum class RingKind { Integers, SIntegers, ImagQuad, RealQuad };

// A supported base ring R: Z, Z[1/p...], or a quadratic order with basis
// {1, w} where w = (1+sqrt(d))/2 when the maximal flag is set and d = 1 mod 4,
// and w = sqrt(d) otherwise.  w satisfies w^2 = wlin*w + wconst.
struct RingSpec {
    RingKind kind = RingKind::Integers;
    long d = 0;
    bool maximal = false;
    std::vector<Integer> s_primes;

    static RingSpec integers() { return RingSpec{}; }

    static RingSpec s_integers(std::vector<Integer> primes) {
        if (primes.empty()) throw std::invalid_argument("S-integer ring needs a nonempty prime set");
        RingSpec r;
        r.kind = RingKind::SIntegers;
        std::sort(primes.begin(), primes.end());
        primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
        r.s_primes = std::move(primes);
        return r;
    }

    static RingSpec quadratic(long d, bool maximal) {
        if (d == 0 || d == 1) throw std::invalid_argument("quadratic order: d must not be 0 or 1");
        Integer f, s;
        squarefree_split(Integer(d), f, s);
        if (s != 1) throw std::invalid_argument("quadratic order: d must be squarefree");
        RingSpec r;
        r.kind = d < 0 ? RingKind::ImagQuad : RingKind::RealQuad;
        r.d = d;
        long dm = ((d % 4) + 4) % 4;
        r.maximal = maximal && dm == 1;
        return r;
    }

    bool is_quadratic() const { return kind == RingKind::ImagQuad || kind == RingKind::RealQuad; }

    // w^2 = wlin*w + wconst
    Integer wlin() const { return maximal ? 1 : 0; }
    Integer wconst() const { return maximal ? Integer((d - 1) / 4) : Integer(d); }

    std::string dsl() const {
        switch (kind) {
            case RingKind::Integers: return "Z";
            case RingKind::SIntegers: {
                std::string s = "Z[1/";
                for (size_t i = 0; i < s_primes.size(); ++i) {
                    if (i) s += ",";
                    s += s_primes[i].str();
                }
                return s + "]";
            }
            default:
                if (maximal) return "O(" + std::to_string(d) + ")";
                return "Z[sqrt(" + std::to_string(d) + ")]";
        }
    }

    bool operator==(const RingSpec& o) const {
        return kind == o.kind && d == o.d && maximal == o.maximal && s_primes == o.s_primes;
    }
};

// Element u + v*w of R (or of its fraction field K; membership is a separate
// predicate).  cpp_rational keeps u, v canonical, so structural equality is
// ring equality.
struct RElem {
    Rational u, v;

    RElem() : u(0), v(0) {}
    RElem(Rational uu, Rational vv) : u(std::move(uu)), v(std::move(vv)) {}
    explicit RElem(const Integer& n) : u(n), v(0) {}
    explicit RElem(long n) : u(n), v(0) {}

    bool is_zero() const { return u == 0 && v == 0; }
    bool is_rational() const { return v == 0; }

    bool operator==(const RElem& o) const { return u == o.u && v == o.v; }
    bool operator!=(const RElem& o) const { return !(*this == o); }
    bool operator<(const RElem& o) const {
        return u != o.u ? u < o.u : v < o.v;
    }
};

inline RElem radd(const RElem& x, const RElem& y) { return RElem(x.u + y.u, x.v + y.v); }
inline RElem rsub(const RElem& x, const RElem& y) { return RElem(x.u - y.u, x.v - y.v); }
inline RElem rneg(const RElem& x) { return RElem(-x.u, -x.v); }

inline RElem rmul(const RingSpec& R, const RElem& x, const RElem& y) {
    if (x.v == 0 && y.v == 0) return RElem(x.u * y.u, 0);
    Rational A(R.wconst()), B(R.wlin());
    return RElem(x.u * y.u + A * x.v * y.v,
                 x.u * y.v + x.v * y.u + B * x.v * y.v);
}

// conjugate: w -> wlin - w
inline RElem rconj(const RingSpec& R, const RElem& x) {
    return RElem(x.u + Rational(R.wlin()) * x.v, -x.v);
}

// x * conj(x); for the rational kinds conj is the identity, so norm = x^2
inline Rational rnorm(const RingSpec& R, const RElem& x) {
    if (!R.is_quadratic()) return x.u * x.u;
    Rational A(R.wconst()), B(R.wlin());
    return x.u * x.u + B * x.u * x.v - A * x.v * x.v;
}

// exact division in the fraction field; membership is the caller's problem
inline RElem rdiv(const RingSpec& R, const RElem& x, const RElem& y) {
    if (y.is_zero()) throw std::domain_error("rdiv: division by zero");
    if (y.v == 0) return RElem(x.u / y.u, x.v / y.u);
    Rational n = rnorm(R, y);
    if (n == 0) throw std::domain_error("rdiv: zero-norm divisor"); // impossible for squarefree d
    RElem num = rmul(R, x, rconj(R, y));
    return RElem(num.u / n, num.v / n);
}

inline bool denominator_is_s_unit(const Integer& den, const std::vector<Integer>& primes) {
    Integer m = den;
    for (const Integer& p : primes) {
        while (m % p == 0) m /= p;
    }
    return m == 1;
}

inline bool in_ring(const RingSpec& R, const RElem& x) {
    switch (R.kind) {
        case RingKind::Integers:
            return x.v == 0 && denominator(x.u) == 1;
        case RingKind::SIntegers:
            return x.v == 0 && denominator_is_s_unit(denominator(x.u), R.s_primes);
        default:
            return denominator(x.u) == 1 && denominator(x.v) == 1;
    }
}

inline bool is_unit(const RingSpec& R, const RElem& x) {
    if (!in_ring(R, x) || x.is_zero()) return false;
    switch (R.kind) {
        case RingKind::Integers:
            return x.u == 1 || x.u == -1;
        case RingKind::SIntegers:
            return denominator_is_s_unit(iabs(numerator(x.u)), R.s_primes);
        default:
            return rabs(rnorm(R, x)) == 1;
    }
}

inline Integer height(const RElem& x) {
    Integer h = rat_height(x.u);
    if (x.v != 0) h = std::max(h, rat_height(x.v));
    return h;
}

// real embeddings: w -> sqrt(d) (principal) or -sqrt(d); for imaginary
// quadratic rings the complex embedding with Im(w) > 0 is used.
inline RIv relem_riv(const RingSpec& R, const RElem& x, long prec, bool conj_embedding = false) {
    RIv r = riv_from_rational(x.u, prec);
    if (x.v == 0) return r;
    if (R.kind != RingKind::RealQuad)
        throw std::domain_error("relem_riv: not a real embedding");
    RIv sq = riv_sqrt(riv_from_rational(Rational(R.d), prec), prec);
    if (conj_embedding) sq = riv_neg(sq);
    RIv w = R.maximal
        ? riv_mul(riv_add(RIv(Integer(1)), sq), riv_from_rational(Rational(1, 2), prec))
        : sq;
    return riv_add(r, riv_mul(riv_from_rational(x.v, prec), w));
}

inline CIv relem_civ(const RingSpec& R, const RElem& x, long prec) {
    if (R.kind == RingKind::RealQuad)
        return CIv(relem_riv(R, x, prec), riv_from_rational(Rational(0), prec));
    RIv re = riv_from_rational(x.u, prec);
    RIv im = riv_from_rational(Rational(0), prec);
    if (x.v != 0) {
        if (R.kind != RingKind::ImagQuad)
            throw std::domain_error("relem_civ: nonzero w part over a rational ring");
        RIv sq = riv_sqrt(riv_from_rational(Rational(-R.d), prec), prec);
        RIv vv = riv_from_rational(x.v, prec);
        if (R.maximal) {
            RIv half = riv_from_rational(Rational(1, 2), prec);
            re = riv_add(re, riv_mul(vv, half));
            im = riv_mul(riv_mul(vv, sq), half);
        } else {
            im = riv_mul(vv, sq);
        }
    }
    return CIv(re, im);
}

// real part of the complex embedding (imaginary-quadratic elements)
inline Rational re_part(const RingSpec& R, const RElem& x) {
    if (R.kind != RingKind::ImagQuad) throw std::domain_error("re_part: imaginary-quadratic only");
    return R.maximal ? x.u + x.v / 2 : x.u;
}

// trace x + conj(x) of the complex embedding, rational for any quadratic x
inline Rational trace(const RingSpec& R, const RElem& x) {
    return 2 * x.u + Rational(R.wlin()) * x.v;
}

namespace detail {

// Fundamental solution of y^2 - alpha*x^2 = +-1 by the regular continued
// fraction of sqrt(alpha); returns (x, y, norm).
inline std::tuple<Integer, Integer, int> pell_fundamental(const Integer& alpha) {
    if (alpha < 2) throw std::invalid_argument("pell: alpha must be >= 2");
    Integer a0 = isqrt(alpha);
    if (a0 * a0 == alpha) throw std::invalid_argument("pell: alpha is a perfect square");
    Integer m = 0, dd = 1, a = a0;
    Integer h_prev = 1, h = a0, k_prev = 0, k = 1;
    for (int iter = 0; iter < 1 << 20; ++iter) {
        Integer val = h * h - alpha * k * k;
        if (val == 1) return {k, h, +1};
        if (val == -1) return {k, h, -1};
        m = dd * a - m;
        dd = (alpha - m * m) / dd;
        a = (a0 + m) / dd;
        Integer h_next = a * h + h_prev, k_next = a * k + k_prev;
        h_prev = h; h = h_next;
        k_prev = k; k = k_next;
    }
    throw std::runtime_error("pell: period not found (iteration cap)");
}

} // namespace detail

// Generators of R^x modulo torsion, plus a torsion generator.
inline std::vector<RElem> unit_generators(const RingSpec& R) {
    switch (R.kind) {
        case RingKind::Integers:
            return {RElem(-1L)};
        case RingKind::SIntegers: {
            std::vector<RElem> gens = {RElem(-1L)};
            for (const Integer& p : R.s_primes) gens.push_back(RElem(p));
            return gens;
        }
        case RingKind::ImagQuad: {
            if (R.d == -1) return {RElem(Rational(0), Rational(1))};            // i
            if (R.d == -3 && R.maximal) return {RElem(Rational(0), Rational(1))}; // zeta_6
            return {RElem(-1L)};
        }
        case RingKind::RealQuad: {
            auto [x1, y1, nrm] = detail::pell_fundamental(Integer(R.d));
            (void)nrm;
            // eps = y1 + x1*sqrt(d) expressed over the basis {1, w}
            RElem eps = R.maximal ? RElem(Rational(y1 - x1), Rational(2 * x1))
                                  : RElem(Rational(y1), Rational(x1));
            return {RElem(-1L), eps};
        }
    }
    throw std::logic_error("unit_generators: unreachable");
}

} // namespace pcf
