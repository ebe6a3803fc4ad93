#pragma once

#include "pcf/contmat.hpp"
#include "pcf/ring.hpp"

#include <random>
#include <vector>

namespace pcf_test {

using namespace pcf;

inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(0x5eed5eedULL);
    return gen;
}

inline long rand_int(long lo, long hi) {
    std::uniform_int_distribution<long> dist(lo, hi);
    return dist(rng());
}

inline RElem random_elem(const RingSpec& R, long height) {
    long u = rand_int(-height, height);
    if (!R.is_quadratic()) return RElem(Rational(u), Rational(0));
    long v = rand_int(-height, height);
    return RElem(Rational(u), Rational(v));
}

inline RElem random_nonzero_elem(const RingSpec& R, long height) {
    for (;;) {
        RElem e = random_elem(R, height);
        if (!e.is_zero()) return e;
    }
}

inline PCF random_pcf(const RingSpec& R, size_t N, size_t k, long height) {
    PCF p;
    for (size_t i = 0; i < N; ++i) p.pre.push_back(random_elem(R, height));
    for (size_t i = 0; i < k; ++i) p.per.push_back(random_elem(R, height));
    return p;
}

inline std::vector<RingSpec> sample_rings() {
    return {RingSpec::integers(),
            RingSpec::quadratic(-1, true),
            RingSpec::quadratic(2, false)};
}

// naive left-to-right product of D(c) factors (independent oracle)
inline Mat2 naive_dproduct(const RingSpec& R, const std::vector<RElem>& cs) {
    Mat2 m = Mat2::identity();
    for (const RElem& c : cs) m = mat_mul(R, m, dmat(c));
    return m;
}

} // namespace pcf_test
