#include <catch2/catch_amalgamated.hpp>

#include "pcf/pcf_eval.hpp"
#include "test_util.hpp"

using namespace pcf;
using pcf_test::rand_int;

static PCF pcf_z(std::vector<long> pre, std::vector<long> per) {
    PCF p;
    for (long b : pre) p.pre.push_back(RElem(b));
    for (long a : per) p.per.push_back(RElem(a));
    return p;
}

TEST_CASE("worpitzky examples") {
    RingSpec z = RingSpec::integers();
    auto lift = [](std::vector<long> v) {
        std::vector<RElem> out;
        for (long x : v) out.push_back(RElem(x));
        return out;
    };
    CHECK(worpitzky_check(z, lift({3, 3, 3})));
    CHECK_FALSE(worpitzky_check(z, lift({1, 2})));
    CHECK(worpitzky_check(z, lift({2, 2, 2})));
    CHECK(worpitzky_check(z, lift({2, -2}))); // |(2)(-2)| = 4 >= 4 wraps both ways
    CHECK_FALSE(worpitzky_check(z, lift({3, 1, 3})));

    RingSpec zi = RingSpec::quadratic(-1, true);
    // |(1+i)(-2+i)| = sqrt10 < 4
    std::vector<RElem> g = {RElem(Rational(1), Rational(1)), RElem(Rational(-2), Rational(1))};
    CHECK_FALSE(worpitzky_check(zi, g));
}

TEST_CASE("worpitzky over Z[i] exact") {
    RingSpec zi = RingSpec::quadratic(-1, true);
    RElem two_i(Rational(0), Rational(2));
    CHECK(worpitzky_check(zi, {two_i, two_i}));            // |2i * 2i| = 4
    RElem one_i(Rational(1), Rational(1));
    CHECK_FALSE(worpitzky_check(zi, {one_i, one_i}));      // |(1+i)^2| = 2 < 4
}

TEST_CASE("evaluate golden ratio") {
    RingSpec z = RingSpec::integers();
    PCFValue v = evaluate(z, pcf_z({}, {1}));
    REQUIRE(v.exact.has_value());
    CHECK(std::get<QuadIrr>(*v.exact) == make_quadirr(1, 1, 2, 5));
    // golden: Worpitzky fails (1*1 < 4) but contraction holds
    CHECK(v.converged);
    double mid = riv_mid(v.numeric.re).convert_to<double>();
    CHECK(std::abs(mid - 1.6180339887498949) < 1e-25);
}

TEST_CASE("evaluate sqrt2 and sqrt3 forms") {
    RingSpec z = RingSpec::integers();
    PCFValue v2 = evaluate(z, pcf_z({1}, {2}));
    REQUIRE(v2.exact.has_value());
    CHECK(std::get<QuadIrr>(*v2.exact) == make_quadirr(0, 1, 1, 2));
    CHECK(v2.converged);
    CHECK(std::abs(riv_mid(v2.numeric.re).convert_to<double>() - 1.4142135623730951) < 1e-25);

    PCFValue v3 = evaluate(z, pcf_z({2}, {-4, 4}));
    REQUIRE(v3.exact.has_value());
    CHECK(std::get<QuadIrr>(*v3.exact) == make_quadirr(0, 1, 1, 3));
}

TEST_CASE("evaluate detects non-convergence") {
    RingSpec z = RingSpec::integers();
    CHECK_THROWS_AS(evaluate(z, pcf_z({}, {1, -1})), NonConvergentError); // elliptic
    CHECK_THROWS_AS(evaluate(z, pcf_z({}, {2, -2})), NonConvergentError); // parabolic
    CHECK_THROWS_AS(evaluate(z, pcf_z({}, {0, 5})), NonConvergentError);  // fixes infinity
}

TEST_CASE("evaluate exact value is a root and an eigenvector (soundness)") {
    RingSpec z = RingSpec::integers();
    int done = 0;
    for (int trial = 0; trial < 400 && done < 50; ++trial) {
        size_t N = static_cast<size_t>(rand_int(0, 2));
        size_t k = static_cast<size_t>(rand_int(1, 3));
        PCF p = pcf_test::random_pcf(z, N, k, 6);
        PCFValue v;
        try {
            v = evaluate(z, p);
        } catch (const NonConvergentError&) {
            continue;
        }
        if (!v.exact || !std::holds_alternative<QuadIrr>(*v.exact)) continue;
        const QuadIrr& b = std::get<QuadIrr>(*v.exact);
        QuadPoly q = quad_poly(z, p);
        CHECK(qi_is_root(q.A.u, q.B.u, q.C.u, b));
        CHECK(eigen_check(z, p, b));
        // numeric interval contains the exact value
        RIv iv = qi_riv(b, 320);
        CHECK(dyad_cmp(v.numeric.re.lo, iv.hi) <= 0);
        CHECK(dyad_cmp(iv.lo, v.numeric.re.hi) <= 0);
        ++done;
    }
    CHECK(done >= 30);
}

TEST_CASE("evaluate over Z[i]") {
    RingSpec zi = RingSpec::quadratic(-1, true);
    // [overline{2i}] is parabolic (double eigenvalue i): exact tie
    {
        PCF p;
        p.per.push_back(RElem(Rational(0), Rational(2)));
        CHECK_THROWS_AS(evaluate(zi, p), NonConvergentError);
    }
    // [overline{2+2i}]: x = 2+2i + 1/x, root x = (2+2i+sqrt(4+8i))/2
    PCF p;
    p.per.push_back(RElem(Rational(2), Rational(2)));
    PCFValue v = evaluate(zi, p);
    REQUIRE(v.exact.has_value());
    REQUIRE(std::holds_alternative<RelQuadIrr>(*v.exact));
    const RelQuadIrr& b = std::get<RelQuadIrr>(*v.exact);
    CHECK(rel_is_root(zi, RElem(1L), RElem(Rational(-2), Rational(-2)), RElem(-1L), b));
    double sqrt5 = std::sqrt(5.0);
    double ere = 1 + std::sqrt(2 * sqrt5 + 2) / 2;
    double eim = 1 + std::sqrt(2 * sqrt5 - 2) / 2;
    CHECK(std::abs(riv_mid(v.numeric.re).convert_to<double>() - ere) < 1e-12);
    CHECK(std::abs(riv_mid(v.numeric.im).convert_to<double>() - eim) < 1e-12);
    // the numeric enclosure contains the exact value
    CIv exact_iv = rel_civ(zi, b, 320);
    CHECK(dyad_cmp(v.numeric.re.lo, exact_iv.re.hi) <= 0);
    CHECK(dyad_cmp(exact_iv.re.lo, v.numeric.re.hi) <= 0);
    CHECK(dyad_cmp(v.numeric.im.lo, exact_iv.im.hi) <= 0);
    CHECK(dyad_cmp(exact_iv.im.lo, v.numeric.im.hi) <= 0);
}

TEST_CASE("division-by-zero tail is reported and survived") {
    RingSpec z = RingSpec::integers();
    // [overline{1,-1}] truncations hit infinity; evaluate throws NonConvergent
    // for the exact value but the numeric machinery should flag the event.
    try {
        evaluate(z, pcf_z({}, {1, -1}));
    } catch (const NonConvergentError&) {
    }
    auto num = detail::numeric_evaluate(z, pcf_z({}, {1, -1}), 128, default_eval_radius(), 50);
    CHECK(num.hit_infinity);
}

TEST_CASE("membership examples") {
    RingSpec z = RingSpec::integers();
    QuadPoly q{RElem(1L), RElem(0L), RElem(-2L)}; // x^2 - 2
    CHECK(membership(z, pcf_z({1}, {2}), q));
    CHECK_FALSE(membership(z, pcf_z({}, {2}), q));
    QuadPoly scaled{RElem(2L), RElem(-2L), RElem(-2L)}; // 2x^2-2x-2
    CHECK(membership(z, pcf_z({}, {1}), scaled));
}

TEST_CASE("membership scaling invariance (property)") {
    for (const RingSpec& R : pcf_test::sample_rings()) {
        for (int trial = 0; trial < 40; ++trial) {
            PCF p = pcf_test::random_pcf(R, 1, 2, 5);
            QuadPoly q = quad_poly(R, p);
            if (q.is_zero()) continue;
            RElem lam = pcf_test::random_nonzero_elem(R, 4);
            QuadPoly scaled{rmul(R, lam, q.A), rmul(R, lam, q.B), rmul(R, lam, q.C)};
            CHECK(membership(R, p, q));
            CHECK(membership(R, p, scaled));
        }
    }
}

TEST_CASE("membership implies the Fermat-Pell entry relations") {
    RingSpec z = RingSpec::integers();
    QuadPoly q{RElem(1L), RElem(0L), RElem(-2L)};
    PCF p = pcf_z({1}, {2});
    REQUIRE(membership(z, p, q));
    Mat2 E = e_matrix(z, p);
    RElem a = E.e11, b = E.e12, c = E.e21, d = E.e22;
    // Bc = A(d-a), -Ab = Cc, -Bb = C(d-a)
    CHECK(rmul(z, q.B, c) == rmul(z, q.A, rsub(d, a)));
    CHECK(rneg(rmul(z, q.A, b)) == rmul(z, q.C, c));
    CHECK(rneg(rmul(z, q.B, b)) == rmul(z, q.C, rsub(d, a)));
}

TEST_CASE("worpitzky soundness: tail-disk radius decay (property)") {
    RingSpec z = RingSpec::integers();
    int tested = 0;
    for (int trial = 0; trial < 300 && tested < 100; ++trial) {
        size_t k = static_cast<size_t>(rand_int(1, 4));
        PCF p;
        for (size_t i = 0; i < k; ++i) {
            long mag = rand_int(2, 9);
            p.per.push_back(RElem(rand_int(0, 1) ? mag : -mag));
        }
        if (!worpitzky_check(z, p.per)) continue;
        // skip non-hyperbolic period matrices: Worpitzky still gives
        // convergence but only sublinearly, so no geometric bound holds
        Mat2 W = period_matrix(z, p);
        Rational tr = radd(W.e11, W.e22).u;
        RElem det = mat_det(z, W);
        if (det.u == 1 && tr * tr <= 4) continue;
        if (det.u == -1 && tr == 0) continue;
        auto num = detail::numeric_evaluate(z, p, 256, default_eval_radius(), 2000);
        CHECK(num.contracting);
        CHECK(num.method == NumericMethod::TailDisk);
        CHECK(num.radius >= 0);
        CHECK(num.radius < default_eval_radius());
        ++tested;
    }
    CHECK(tested == 100);
}
