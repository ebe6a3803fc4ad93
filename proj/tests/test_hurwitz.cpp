#include <catch2/catch_amalgamated.hpp>

#include "pcf/hurwitz.hpp"
#include "test_util.hpp"

using namespace pcf;
using pcf_test::rand_int;

static NICFExpansion exp_of(std::vector<long> pre, std::vector<long> per) {
    NICFExpansion e;
    for (long c : pre) e.pre.push_back(Integer(c));
    for (long c : per) e.per.push_back(Integer(c));
    return e;
}

TEST_CASE("nicf_expand of classic surds (iteration oracle)") {
    // sqrt2: 1/(sqrt2-1) = sqrt2+1 -> nearest 2, state repeats
    NICFExpansion e2 = nicf_expand(make_quadirr(0, 1, 1, 2));
    CHECK(e2 == exp_of({1}, {2}));

    NICFExpansion e3 = nicf_expand(make_quadirr(0, 1, 1, 3));
    CHECK(e3 == exp_of({2}, {-4, 4}));

    NICFExpansion eg = nicf_expand(make_quadirr(1, 1, 2, 5));
    CHECK(eg == exp_of({2}, {-3, 3}));
}

TEST_CASE("nicf_expand of rationals terminates without a -2 tail") {
    NICFExpansion e = nicf_expand(Rational(7, 4));
    CHECK(e.finite());
    CHECK(e.pre.back() != -2);
    // value folds back: 7/4 = 2 + 1/(-4)
    CHECK(e == exp_of({2, -4}, {}));
    CHECK(nicf_expand(Rational(5)) == exp_of({5}, {}));
    for (int trial = 0; trial < 200; ++trial) {
        Rational x(rand_int(-400, 400), rand_int(1, 60));
        NICFExpansion r = nicf_expand(x);
        CHECK(r.finite());
        CHECK(r.pre.back() != -2);
        CHECK(hurwitz_valid(r));
    }
}

TEST_CASE("hurwitz_valid examples") {
    CHECK(hurwitz_valid(exp_of({1}, {2})));
    CHECK_FALSE(hurwitz_valid(exp_of({3, 2, -5}, {})));  // 2 followed by negative
    CHECK_FALSE(hurwitz_valid(exp_of({4, -2}, {})));     // ends in -2
    CHECK_FALSE(hurwitz_valid(exp_of({}, {1})));         // |1| < 2 recurs
    CHECK(hurwitz_valid(exp_of({2}, {-3, 3})));
    CHECK_FALSE(hurwitz_valid(exp_of({2}, {-2, 3})));    // -2 then positive wraps badly
    CHECK(hurwitz_valid(exp_of({0, 2, 2}, {2})));        // sign chain of +2s
    CHECK_FALSE(hurwitz_valid(exp_of({0, 2, -3}, {3}))); // +2 then negative
}

TEST_CASE("expansions always satisfy the Hurwitz conditions (property)") {
    static const long Ds[] = {2, 3, 5, 6, 7, 10, 11, 13, 14, 15};
    for (int trial = 0; trial < 200; ++trial) {
        long D = Ds[rand_int(0, 9)];
        long p = rand_int(-60, 60), q = rand_int(-25, 25), r = rand_int(1, 25);
        if (q == 0) q = 1;
        QuadIrr x = make_quadirr(p, q, r, D);
        NICFExpansion e = nicf_expand(x);
        CHECK_FALSE(e.finite());
        CHECK(hurwitz_valid(e));
    }
}

TEST_CASE("sign lemma on suffixes of valid expansions") {
    // for every suffix of [2; -3,3] etc: sign(value) = sign(first term),
    // 1/value in [-1/2, 1/2]
    RingSpec z = RingSpec::integers();
    std::vector<NICFExpansion> cases = {
        exp_of({2}, {-3, 3}), exp_of({1}, {2}), exp_of({}, {5, 7}), exp_of({3}, {4, -5, 6})};
    for (const auto& e : cases) {
        if (!hurwitz_valid(e)) continue;
        size_t n = e.pre.size() + e.per.size();
        for (size_t s = 0; s < n; ++s) {
            // suffix s: drop s leading terms, rotating the period
            NICFExpansion suf;
            std::vector<Integer> all(e.pre);
            all.insert(all.end(), e.per.begin(), e.per.end());
            suf.pre.assign(all.begin() + s, all.end());
            size_t rot = s < e.pre.size() ? 0 : s - e.pre.size();
            for (size_t i = 0; i < e.per.size(); ++i)
                suf.per.push_back(e.per[(rot + i) % e.per.size()]);
            // the lemma's hypothesis covers every term, including the first:
            // |c_1| >= 2 and, when c_1 = +-2, sgn(c_1) = sgn(c_2)
            Integer first = suf.pre.empty() ? suf.per[0] : suf.pre[0];
            Integer second = suf.pre.size() >= 2 ? suf.pre[1]
                             : (suf.pre.size() == 1 ? suf.per[0] : suf.per[1 % suf.per.size()]);
            if (iabs(first) < 2) continue;
            if ((first == 2 || first == -2) && isign(first) != isign(second)) continue;
            // evaluate the suffix: preperiod is the dangling part
            PCF p = nicf_to_pcf(suf);
            PCFValue v;
            try {
                v = evaluate(z, p);
            } catch (const NonConvergentError&) {
                continue;
            }
            REQUIRE(v.exact.has_value());
            if (!std::holds_alternative<QuadIrr>(*v.exact)) continue;
            QuadIrr val = std::get<QuadIrr>(*v.exact);
            CHECK(qi_sign(val) == isign(suf.pre.empty() ? suf.per[0] : suf.pre[0]));
            QuadIrr inv = qi_invert(val);
            CHECK(qi_cmp(inv, Rational(-1, 2)) >= 0);
            CHECK(qi_cmp(inv, Rational(1, 2)) <= 0);
        }
    }
}

TEST_CASE("uniqueness probe round trips") {
    CHECK(uniqueness_probe(exp_of({1}, {2})));
    CHECK(uniqueness_probe(exp_of({2}, {-4, 4})));
    CHECK(uniqueness_probe(exp_of({}, {5, 7})));
    CHECK_THROWS_AS(uniqueness_probe(exp_of({4, -2}, {})), std::invalid_argument);
}

TEST_CASE("random valid expansions round trip (uniqueness property)") {
    int done = 0;
    for (int trial = 0; trial < 400 && done < 200; ++trial) {
        NICFExpansion e;
        size_t n_pre = static_cast<size_t>(rand_int(0, 2));
        size_t n_per = static_cast<size_t>(rand_int(1, 5));
        for (size_t i = 0; i < n_pre; ++i) {
            long mag = rand_int(3, 9);
            e.pre.push_back(Integer(rand_int(0, 1) ? mag : -mag));
        }
        for (size_t i = 0; i < n_per; ++i) {
            long mag = rand_int(3, 9);
            e.per.push_back(Integer(rand_int(0, 1) ? mag : -mag));
        }
        // the canonical split may differ if the period is a power or the
        // preperiod tail folds into the period; skip those draws
        bool degenerate = false;
        for (size_t len = 1; len < n_per; ++len) {
            if (n_per % len != 0) continue;
            bool pow = true;
            for (size_t i = len; i < n_per && pow; ++i)
                if (e.per[i] != e.per[i % len]) pow = false;
            if (pow) degenerate = true;
        }
        if (n_pre > 0 && e.pre.back() == e.per.back()) degenerate = true;
        if (degenerate) continue;
        REQUIRE(hurwitz_valid(e));
        CHECK(uniqueness_probe(e));
        ++done;
    }
    CHECK(done == 200);
}
