#include <catch2/catch_amalgamated.hpp>

#include "pcf/contmat.hpp"
#include "test_util.hpp"

using namespace pcf;
using pcf_test::random_elem;
using pcf_test::random_pcf;
using pcf_test::naive_dproduct;

static PCF pcf_z(std::vector<long> pre, std::vector<long> per) {
    PCF p;
    for (long b : pre) p.pre.push_back(RElem(b));
    for (long a : per) p.per.push_back(RElem(a));
    return p;
}

TEST_CASE("dmat") {
    Mat2 t = dmat(RElem(0L));
    CHECK(t == Mat2::t());
    Mat2 d5 = dmat(RElem(5L));
    CHECK(d5.e11 == RElem(5L));
    CHECK(d5.e12 == RElem(1L));
    CHECK(d5.e21 == RElem(1L));
    CHECK(d5.e22 == RElem(0L));
    RingSpec z = RingSpec::integers();
    CHECK(mat_det(z, d5) == RElem(-1L));
}

TEST_CASE("e_matrix ground truth") {
    RingSpec z = RingSpec::integers();
    // [overline{1}]
    Mat2 e1 = e_matrix(z, pcf_z({}, {1}));
    CHECK(e1 == dmat(RElem(1L)));
    // [1, overline{2}]: hand product D(1)D(2)tD(-1)t = [[1,2],[1,1]]
    Mat2 e2 = e_matrix(z, pcf_z({1}, {2}));
    CHECK(e2.e11 == RElem(1L));
    CHECK(e2.e12 == RElem(2L));
    CHECK(e2.e21 == RElem(1L));
    CHECK(e2.e22 == RElem(1L));
    {
        // independent hand oracle for the same product
        Mat2 m = mat_mul(z, dmat(RElem(1L)), dmat(RElem(2L)));
        m = mat_mul(z, m, Mat2::t());
        m = mat_mul(z, m, dmat(RElem(-1L)));
        m = mat_mul(z, m, Mat2::t());
        CHECK(e2 == m);
    }
}

TEST_CASE("e_matrix for N=0 equals the plain D-product") {
    for (const RingSpec& R : pcf_test::sample_rings()) {
        for (int trial = 0; trial < 30; ++trial) {
            PCF p = random_pcf(R, 0, 3, 5);
            CHECK(e_matrix(R, p) == naive_dproduct(R, p.per));
        }
    }
}

TEST_CASE("det(E) = (-1)^k (property over three rings)") {
    for (const RingSpec& R : pcf_test::sample_rings()) {
        for (int trial = 0; trial < 60; ++trial) {
            size_t N = static_cast<size_t>(pcf_test::rand_int(0, 3));
            size_t k = static_cast<size_t>(pcf_test::rand_int(1, 4));
            PCF p = random_pcf(R, N, k, 8);
            RElem det = mat_det(R, e_matrix(R, p));
            CHECK(det == (k % 2 == 0 ? RElem(1L) : RElem(-1L)));
        }
    }
}

TEST_CASE("collapsing identity D(a) t D(-b) = D(a-b)") {
    for (const RingSpec& R : pcf_test::sample_rings()) {
        for (int trial = 0; trial < 40; ++trial) {
            RElem a = random_elem(R, 10), b = random_elem(R, 10);
            Mat2 lhs = mat_mul(R, mat_mul(R, dmat(a), Mat2::t()), dmat(rneg(b)));
            CHECK(lhs == dmat(rsub(a, b)));
        }
    }
}

TEST_CASE("quad_poly examples") {
    RingSpec z = RingSpec::integers();
    QuadPoly q1 = quad_poly(z, pcf_z({1}, {2}));
    CHECK(q1.A == RElem(1L));
    CHECK(q1.B == RElem(0L));
    CHECK(q1.C == RElem(-2L)); // x^2 - 2

    QuadPoly q2 = quad_poly(z, pcf_z({}, {1}));
    CHECK(q2.A == RElem(1L));
    CHECK(q2.B == RElem(-1L));
    CHECK(q2.C == RElem(-1L)); // x^2 - x - 1

    // third example: A equals E21 of the direct triple product
    PCF p3 = pcf_z({}, {2, -4, 4});
    Mat2 direct = naive_dproduct(z, p3.per);
    CHECK(quad_poly(z, p3).A == direct.e21);

    // degenerate: [overline{0,0}] gives E = I and Quad = 0, flagged not thrown
    QuadPoly qz = quad_poly(z, pcf_z({}, {0, 0}));
    CHECK(qz.is_zero());
}

TEST_CASE("eigen_check") {
    RingSpec z = RingSpec::integers();
    PCF p = pcf_z({1}, {2});
    CHECK(eigen_check(z, p, make_quadirr(0, 1, 1, 2)));          // sqrt2
    CHECK(eigen_check(z, p, make_quadirr(0, -1, 1, 2)));         // -sqrt2 (other root)
    CHECK_FALSE(eigen_check(z, p, make_quadirr(1, 1, 1, 3)));    // not a root

    PCF golden = pcf_z({}, {1});
    CHECK(eigen_check(z, golden, make_quadirr(1, 1, 2, 5)));     // (1+sqrt5)/2
}

TEST_CASE("roots of quad_poly are fixed points (both roots, property)") {
    RingSpec z = RingSpec::integers();
    int checked = 0;
    for (int trial = 0; trial < 200 && checked < 60; ++trial) {
        size_t N = static_cast<size_t>(pcf_test::rand_int(0, 2));
        size_t k = static_cast<size_t>(pcf_test::rand_int(1, 3));
        PCF p = random_pcf(z, N, k, 6);
        QuadPoly q = quad_poly(z, p);
        if (q.is_zero() || q.A.is_zero()) continue;
        Integer A = numerator(q.A.u), B = numerator(q.B.u), C = numerator(q.C.u);
        Integer disc = B * B - 4 * A * C;
        if (disc <= 0 || is_perfect_square(disc)) continue;
        for (int sgn : {1, -1}) {
            QuadIrr root = make_quadirr(-B, Integer(sgn), 2 * A, disc);
            CHECK(eigen_check(z, p, root));
        }
        ++checked;
    }
    CHECK(checked > 20);
}
