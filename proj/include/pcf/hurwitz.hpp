#pragma once

#include "pcf/pcf_eval.hpp"
#include "pcf/quadirr.hpp"

#include <map>
#include <tuple>
#include <vector>

namespace pcf {

// Nearest-integer continued fraction over Z: preperiod then period; an empty
// period means the expansion terminated (rational input).
struct NICFExpansion {
    std::vector<Integer> pre;
    std::vector<Integer> per;

    bool finite() const { return per.empty(); }
    bool operator==(const NICFExpansion& o) const { return pre == o.pre && per == o.per; }
};

class StepBudgetExceeded : public std::runtime_error {
public:
    explicit StepBudgetExceeded(const std::string& w) : std::runtime_error(w) {}
};

// c = nearest(alpha) with ties down, alpha <- 1/(alpha - c); the split is the
// first recurrence of the exact state (p, q, r), which makes both the
// preperiod and the period minimal.
inline NICFExpansion nicf_expand(const QuadIrr& alpha0, size_t max_steps = 512) {
    if (max_steps < 1) throw std::invalid_argument("nicf_expand: max_steps must be >= 1");
    require_real(alpha0);
    QuadIrr alpha = alpha0;
    std::vector<Integer> terms;
    std::map<std::tuple<Integer, Integer, Integer>, size_t> seen;
    for (size_t step = 0; step < max_steps; ++step) {
        auto key = std::make_tuple(alpha.p, alpha.q, alpha.r);
        auto it = seen.find(key);
        if (it != seen.end()) {
            NICFExpansion e;
            e.pre.assign(terms.begin(), terms.begin() + it->second);
            e.per.assign(terms.begin() + it->second, terms.end());
            return e;
        }
        seen.emplace(key, step);
        Integer c = qi_nearest(alpha);
        terms.push_back(c);
        alpha = qi_invert(qi_sub_rational(alpha, Rational(c)));
    }
    throw StepBudgetExceeded("nicf_expand: no state recurrence within the step budget");
}

inline NICFExpansion nicf_expand(const Rational& x0, size_t max_steps = 512) {
    if (max_steps < 1) throw std::invalid_argument("nicf_expand: max_steps must be >= 1");
    Rational x = x0;
    NICFExpansion e;
    for (size_t step = 0; step < max_steps; ++step) {
        Integer c = rat_nearest(x);
        e.pre.push_back(c);
        Rational rem = x - Rational(c);
        if (rem == 0) return e;
        x = 1 / rem;
    }
    throw StepBudgetExceeded("nicf_expand: rational expansion exceeded the step budget");
}

// Conditions of the unique nearest-integer form: (a) |c_i| >= 2 for i > 1,
// (b) a term +-2 shares its sign with the next term (wrapping around the
// period), (c) a finite expansion does not end in -2.
inline bool hurwitz_valid(const NICFExpansion& e) {
    size_t n_pre = e.pre.size(), n_per = e.per.size();
    if (n_pre + n_per == 0) return false;
    auto sign_ok = [](const Integer& c, const Integer& next) {
        if (c != 2 && c != -2) return true;
        return isign(c) == isign(next);
    };
    if (e.finite()) {
        for (size_t i = 1; i < n_pre; ++i)
            if (iabs(e.pre[i]) < 2) return false;
        for (size_t i = 1; i + 1 < n_pre; ++i)
            if (!sign_ok(e.pre[i], e.pre[i + 1])) return false;
        return e.pre.back() != -2;
    }
    // periodic: in the unrolled infinite sequence only the very first term is
    // exempt from (a), and every period term has a successor, so (b) wraps
    for (size_t i = 1; i < n_pre; ++i)
        if (iabs(e.pre[i]) < 2) return false;
    for (const Integer& c : e.per)
        if (iabs(c) < 2) return false;
    for (size_t i = 1; i + 1 < n_pre; ++i)
        if (!sign_ok(e.pre[i], e.pre[i + 1])) return false;
    if (n_pre >= 2 && !sign_ok(e.pre.back(), e.per[0])) return false;
    for (size_t i = 0; i < n_per; ++i)
        if (!sign_ok(e.per[i], e.per[(i + 1) % n_per])) return false;
    return true;
}

inline PCF nicf_to_pcf(const NICFExpansion& e) {
    PCF p;
    for (const Integer& b : e.pre) p.pre.push_back(RElem(b));
    for (const Integer& a : e.per) p.per.push_back(RElem(a));
    return p;
}

// Evaluate, re-expand, and compare: the round trip witnesses uniqueness.
inline bool uniqueness_probe(const NICFExpansion& e, size_t max_steps = 512) {
    if (!hurwitz_valid(e)) throw std::invalid_argument("uniqueness_probe: invalid expansion");
    RingSpec Z = RingSpec::integers();
    if (e.finite()) {
        // finite value is rational: fold the continued fraction back up
        Rational x(e.pre.back());
        for (size_t i = e.pre.size() - 1; i-- > 0;) {
            if (x == 0) return false;
            x = Rational(e.pre[i]) + 1 / x;
        }
        return nicf_expand(x, max_steps) == e;
    }
    PCFValue v = evaluate(Z, nicf_to_pcf(e));
    if (!v.exact) return false;
    if (std::holds_alternative<QuadIrr>(*v.exact))
        return nicf_expand(std::get<QuadIrr>(*v.exact), max_steps) == e;
    if (std::holds_alternative<RElem>(*v.exact))
        return nicf_expand(std::get<RElem>(*v.exact).u, max_steps) == e;
    return false;
}

} // namespace pcf
