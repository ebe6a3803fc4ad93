#pragma once

#include "pcf/pcf_eval.hpp"
#include "pcf/relquad.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace pcf {

// Planar chart for an imaginary-quadratic order: the point (x, y) stands for
// x + y*sqrt(|d|)*i, so both coordinates of every lattice point are rational
// and |.|^2 = x^2 + |d| y^2 stays in Q.
struct CellPoint {
    Rational x, y;
};

// Voronoi cell of the lattice {1, w}: rectangle for basis sqrt(d), hexagon
// for the maximal order with d = 1 mod 4.
struct Cell {
    std::vector<CellPoint> vertices; // counterclockwise
    std::vector<RElem> neighbors;    // facet vectors
    Rational rho_sq;                 // circumradius^2
    Rational inradius_sq;
    long abs_d = 0;
};

inline CellPoint lattice_chart(const RingSpec& R, const RElem& c) {
    if (R.maximal) return {c.u + c.v / 2, c.v / 2};
    return {c.u, c.v};
}

inline Rational chart_norm_sq(const Cell& cell, const CellPoint& p) {
    return p.x * p.x + Rational(cell.abs_d) * p.y * p.y;
}

inline Cell fundamental_cell(const RingSpec& R) {
    if (R.kind != RingKind::ImagQuad)
        throw std::invalid_argument("fundamental_cell: imaginary-quadratic ring required");
    Cell cell;
    cell.abs_d = -R.d;
    Rational ad(cell.abs_d);
    RElem one(1L), w(Rational(0), Rational(1));
    if (!R.maximal) {
        Rational h(1, 2);
        cell.vertices = {{h, h}, {-h, h}, {-h, -h}, {h, -h}};
        cell.neighbors = {one, rneg(one), w, rneg(w)};
        cell.rho_sq = (1 + ad) / 4;
    } else {
        Rational y1 = (ad - 1) / (4 * ad), y2 = (ad + 1) / (4 * ad), h(1, 2);
        cell.vertices = {{h, y1}, {Rational(0), y2}, {-h, y1},
                         {-h, -y1}, {Rational(0), -y2}, {h, -y1}};
        RElem wm1(Rational(-1), Rational(1)); // w - 1
        cell.neighbors = {one, rneg(one), w, rneg(w), wm1, rneg(wm1)};
        cell.rho_sq = (1 + ad) * (1 + ad) / (16 * ad);
    }
    cell.inradius_sq = Rational(1, 4);
    for (const RElem& g : cell.neighbors)
        cell.inradius_sq = std::min(cell.inradius_sq, rnorm(R, g) / 4);
    return cell;
}

// ---------------------------------------------------------------------------
// exact plane geometry in the chart

inline bool point_in_convex_polygon(const std::vector<CellPoint>& poly, const CellPoint& h) {
    size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const CellPoint& p = poly[i];
        const CellPoint& q = poly[(i + 1) % n];
        Rational cross = (q.x - p.x) * (h.y - p.y) - (q.y - p.y) * (h.x - p.x);
        if (cross < 0) return false; // vertices are counterclockwise
    }
    return true;
}

inline Rational point_segment_dist_sq(const Cell& cell, const CellPoint& p,
                                      const CellPoint& q, const CellPoint& h) {
    Rational ad(cell.abs_d);
    Rational ex = q.x - p.x, ey = q.y - p.y;
    Rational hx = h.x - p.x, hy = h.y - p.y;
    Rational len = ex * ex + ad * ey * ey;
    Rational t = len == 0 ? Rational(0) : (hx * ex + ad * hy * ey) / len;
    if (t < 0) t = 0;
    if (t > 1) t = 1;
    Rational dx = hx - t * ex, dy = hy - t * ey;
    return dx * dx + ad * dy * dy;
}

inline Rational point_polygon_dist_sq(const Cell& cell, const std::vector<CellPoint>& poly,
                                      const CellPoint& h) {
    if (point_in_convex_polygon(poly, h)) return Rational(0);
    Rational best = -1;
    size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        Rational d = point_segment_dist_sq(cell, poly[i], poly[(i + 1) % n], h);
        if (best < 0 || d < best) best = d;
    }
    return best;
}

// ---------------------------------------------------------------------------
// M-set

struct MSet {
    std::vector<RElem> members; // sorted
    Integer bound = 0;

    bool contains(const RElem& c) const {
        return std::binary_search(members.begin(), members.end(), c);
    }
};

namespace detail {

// cheap certificate that V_c is contained in U_0^{-1}: the disk of radius rho
// about c inverts into the disk about 1/c of radius rho/(|c|(|c|-rho)), which
// must sit inside every facet halfplane of the open cell
inline bool disk_criterion_excludes(const RingSpec& R, const Cell& cell, const RElem& c,
                                    long prec = 192) {
    Rational nc = rnorm(R, c);
    if (nc <= cell.rho_sq) return false;
    RIv absc = riv_sqrt(riv_from_rational(nc, prec), prec);
    RIv rho = riv_sqrt(riv_from_rational(cell.rho_sq, prec), prec);
    RIv denom = riv_mul(absc, riv_sub(absc, rho));
    if (!(denom.sign() && *denom.sign() > 0)) return false;
    RIv s = riv_div(rho, denom, prec); // enclosure of the image-disk radius
    RElem w = rdiv(R, rconj(R, c), RElem(Rational(nc), Rational(0))); // 1/c
    for (const RElem& g : cell.neighbors) {
        // need 2 Re(w conj(g)) + 2 s |g| < Nm(g)
        Rational lin = 2 * re_part(R, rmul(R, w, rconj(R, g)));
        RIv gap = riv_sub(riv_from_rational(rnorm(R, g) - lin, prec),
                          riv_mul(riv_mul(riv_from_rational(Rational(2), prec), s),
                                  riv_sqrt(riv_from_rational(rnorm(R, g), prec), prec)));
        if (!(gap.sign() && *gap.sign() > 0)) return false;
    }
    return true;
}

// exact test: V_c subset U_0^{-1}  <=>  for every facet g the translated cell
// polygon stays strictly outside the closed disk about 1/g of radius 1/|g|
inline bool exact_cell_excluded(const RingSpec& R, const Cell& cell, const RElem& c) {
    CellPoint cc = lattice_chart(R, c);
    std::vector<CellPoint> poly;
    poly.reserve(cell.vertices.size());
    for (const CellPoint& v : cell.vertices) poly.push_back({v.x + cc.x, v.y + cc.y});
    for (const RElem& g : cell.neighbors) {
        RElem inv_g = rdiv(R, rconj(R, g), RElem(Rational(rnorm(R, g)), Rational(0)));
        CellPoint h = lattice_chart(R, inv_g);
        Rational rad_sq = 1 / rnorm(R, g);
        if (point_polygon_dist_sq(cell, poly, h) <= rad_sq) return false;
    }
    return true;
}

} // namespace detail

// M = { c : V_c not a subset of U_0^{-1} }, enumerated over |c| <= bound.
// A certified disk screening runs first; the exact polygon-versus-disk test
// settles the rest, so no candidate is left ambiguous.
inline MSet m_set(const RingSpec& R, const Integer& bound) {
    Cell cell = fundamental_cell(R);
    // bound >= 4*(1 + inradius)
    Rational quarter = Rational(bound) / 4 - 1;
    if (quarter < 0 || quarter * quarter < cell.inradius_sq)
        throw std::invalid_argument("m_set: search bound too small");
    MSet out;
    out.bound = bound;
    long b = bound.convert_to<long>();
    for (long v = -2 * b; v <= 2 * b; ++v) {
        for (long u = -2 * b; u <= 2 * b; ++u) {
            RElem c{Rational(u), Rational(v)};
            Rational nc = rnorm(R, c);
            if (nc > Rational(bound * bound)) continue;
            bool member;
            if (nc <= cell.rho_sq) {
                member = true; // 0 can meet V_c
            } else if (detail::disk_criterion_excludes(R, cell, c)) {
                member = false;
            } else {
                member = !detail::exact_cell_excluded(R, cell, c);
            }
            if (member) out.members.push_back(c);
        }
    }
    std::sort(out.members.begin(), out.members.end());
    return out;
}

// ---------------------------------------------------------------------------
// nearest lattice point (Voronoi rounding with the lexicographic tie-break)

namespace detail {

inline std::vector<RElem> rounding_candidates(const RingSpec& R, double x, double y) {
    double im_w = std::sqrt(static_cast<double>(-R.d)) * (R.maximal ? 0.5 : 1.0);
    double re_w = R.maximal ? 0.5 : 0.0;
    double v_approx = y / im_w;
    double u_approx = x - v_approx * re_w;
    long vf = static_cast<long>(std::floor(v_approx));
    long uf = static_cast<long>(std::floor(u_approx));
    std::vector<RElem> cands;
    for (long dv = -1; dv <= 2; ++dv)
        for (long du = -1; du <= 2; ++du)
            cands.push_back(RElem(Rational(uf + du), Rational(vf + dv)));
    return cands;
}

// lexicographic (Re, Im) order of lattice points
inline bool lattice_lex_less(const RingSpec& R, const RElem& a, const RElem& b) {
    Rational ra = re_part(R, a), rb = re_part(R, b);
    if (ra != rb) return ra < rb;
    return a.v < b.v;
}

} // namespace detail

inline RElem nearest_in_order(const RingSpec& R, const RelQuadIrr& alpha) {
    if (R.kind != RingKind::ImagQuad)
        throw std::invalid_argument("nearest_in_order: imaginary-quadratic ring required");
    CIv iv = rel_civ(R, alpha, 96);
    double x = riv_mid(iv.re).convert_to<double>();
    double y = riv_mid(iv.im).convert_to<double>();
    auto cands = detail::rounding_candidates(R, x, y);
    std::vector<RElem> best;
    for (const RElem& c : cands) {
        if (best.empty()) { best.push_back(c); continue; }
        int cmp = rel_cmp_dist2(R, alpha, c, best.front());
        if (cmp < 0) { best.clear(); best.push_back(c); }
        else if (cmp == 0) best.push_back(c);
    }
    return *std::min_element(best.begin(), best.end(), [&](const RElem& a, const RElem& b) {
        return detail::lattice_lex_less(R, a, b);
    });
}

// K-rational values round with exact rational arithmetic
inline RElem nearest_in_order(const RingSpec& R, const RElem& alpha) {
    if (R.kind != RingKind::ImagQuad)
        throw std::invalid_argument("nearest_in_order: imaginary-quadratic ring required");
    CIv iv = relem_civ(R, alpha, 96);
    double x = riv_mid(iv.re).convert_to<double>();
    double y = riv_mid(iv.im).convert_to<double>();
    auto cands = detail::rounding_candidates(R, x, y);
    std::vector<RElem> best;
    Rational best_d;
    for (const RElem& c : cands) {
        Rational d = rnorm(R, rsub(alpha, c));
        if (best.empty() || d < best_d) { best = {c}; best_d = d; }
        else if (d == best_d) best.push_back(c);
    }
    return *std::min_element(best.begin(), best.end(), [&](const RElem& a, const RElem& b) {
        return detail::lattice_lex_less(R, a, b);
    });
}

// ---------------------------------------------------------------------------
// nearest-integer expansion over the order

enum class GaussStatus { Periodic, Finite, BudgetExceeded };

struct GaussExpansion {
    std::vector<RElem> pre;
    std::vector<RElem> per;
    GaussStatus status = GaussStatus::BudgetExceeded;
    bool avoids_m = false; // all terms beyond the first lie outside M

    bool operator==(const GaussExpansion& o) const { return pre == o.pre && per == o.per; }
};

// "terms beyond the first avoid M": period terms recur past position one, so
// all of them count; only a leading preperiod term is exempt
inline bool expansion_avoids_m(const std::vector<RElem>& pre, const std::vector<RElem>& per,
                               const MSet& m) {
    for (size_t i = 1; i < pre.size(); ++i)
        if (m.contains(pre[i])) return false;
    for (const RElem& c : per)
        if (m.contains(c)) return false;
    return true;
}

inline GaussExpansion nicf_expand_gauss(const RingSpec& R, const RelQuadIrr& alpha0,
                                        size_t max_steps = 64,
                                        const MSet* mset = nullptr) {
    if (R.kind != RingKind::ImagQuad)
        throw std::invalid_argument("nicf_expand_gauss: imaginary-quadratic ring required");
    GaussExpansion out;
    RelQuadIrr alpha = alpha0;
    std::vector<RelQuadIrr> states;
    std::vector<RElem> terms;
    for (size_t step = 0; step < max_steps; ++step) {
        for (size_t j = 0; j < states.size(); ++j) {
            if (rel_equal(R, states[j], alpha)) {
                out.pre.assign(terms.begin(), terms.begin() + j);
                out.per.assign(terms.begin() + j, terms.end());
                out.status = GaussStatus::Periodic;
                MSet local = mset ? *mset : m_set(R, Integer(6));
                out.avoids_m = expansion_avoids_m(out.pre, out.per, local);
                return out;
            }
        }
        states.push_back(alpha);
        RElem c = nearest_in_order(R, alpha);
        terms.push_back(c);
        alpha = rel_invert(R, rel_sub_elem(R, alpha, c));
    }
    out.pre = terms;
    out.status = GaussStatus::BudgetExceeded;
    return out;
}

inline GaussExpansion nicf_expand_gauss(const RingSpec& R, const RElem& alpha0,
                                        size_t max_steps = 64,
                                        const MSet* mset = nullptr) {
    if (R.kind != RingKind::ImagQuad)
        throw std::invalid_argument("nicf_expand_gauss: imaginary-quadratic ring required");
    GaussExpansion out;
    RElem alpha = alpha0;
    for (size_t step = 0; step < max_steps; ++step) {
        RElem c = nearest_in_order(R, alpha);
        out.pre.push_back(c);
        RElem rem = rsub(alpha, c);
        if (rem.is_zero()) {
            out.status = GaussStatus::Finite;
            MSet local = mset ? *mset : m_set(R, Integer(6));
            out.avoids_m = expansion_avoids_m(out.pre, out.per, local);
            return out;
        }
        alpha = rdiv(R, RElem(1L), rem);
    }
    out.status = GaussStatus::BudgetExceeded;
    return out;
}

inline PCF gauss_to_pcf(const GaussExpansion& e) {
    PCF p;
    p.pre = e.pre;
    p.per = e.per;
    return p;
}

// evaluate then re-expand; true iff the round trip reproduces the expansion
inline bool gauss_uniqueness_probe(const RingSpec& R, const GaussExpansion& e,
                                   const MSet& m, size_t max_steps = 64) {
    if (e.per.empty()) throw std::invalid_argument("gauss_uniqueness_probe: periodic expansion required");
    if (!expansion_avoids_m(e.pre, e.per, m))
        throw std::invalid_argument("gauss_uniqueness_probe: expansion has terms in M");
    PCFValue v = evaluate(R, gauss_to_pcf(e));
    if (!v.exact) return false;
    GaussExpansion redo;
    if (std::holds_alternative<RelQuadIrr>(*v.exact))
        redo = nicf_expand_gauss(R, std::get<RelQuadIrr>(*v.exact), max_steps, &m);
    else if (std::holds_alternative<RElem>(*v.exact))
        redo = nicf_expand_gauss(R, std::get<RElem>(*v.exact), max_steps, &m);
    else
        return false;
    return redo == e;
}

} // namespace pcf
