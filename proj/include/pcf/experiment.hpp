#pragma once

#include "pcf/factor.hpp"
#include "pcf/gauss.hpp"

#include <atomic>
#include <chrono>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

namespace pcf {

// Exhaustive classification of the R-points of V(B)_{N,k} at height <= H.
// Interior points are the ones the uniqueness theorems speak about: over Z
// all |c_i| > 2, over an imaginary-quadratic order all |c_i| >= 2 and c_i
// outside M.
struct ScanReport {
    std::string ring;
    QuadPoly Q;
    int N = 0, k = 1;
    Integer H = 0;
    size_t total_points = 0;
    size_t boundary_points = 0;
    std::vector<PCF> interior_points;
    double elapsed_ms = 0;
};

namespace detail {

inline bool interior_coordinate(const RingSpec& R, const RElem& c, const MSet* m) {
    if (R.kind == RingKind::Integers) return rabs(c.u) > 2;
    // imaginary-quadratic: |c| >= 2 and c not in M
    if (rnorm(R, c) < 4) return false;
    return !(m && m->contains(c));
}

inline double ms_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace detail

inline ScanReport degeneracy_scan(const RingSpec& R, const QuadPoly& Q, int N, int k,
                                  const Integer& H, int jobs = 1,
                                  const Integer& node_budget = Integer(200000000)) {
    if (N + k <= 2) throw std::invalid_argument("degeneracy_scan: N+k > 2 required");
    if (R.kind != RingKind::Integers && R.kind != RingKind::ImagQuad)
        throw std::invalid_argument("degeneracy_scan: ring must be Z or imaginary-quadratic");
    if (Q.is_zero()) throw std::invalid_argument("degeneracy_scan: zero quadratic");
    auto t0 = std::chrono::steady_clock::now();
    std::vector<RElem> box = detail::height_box(R, H);
    Integer nodes = 1;
    for (int i = 0; i < N + k; ++i) nodes *= Integer(box.size());
    if (nodes > node_budget)
        throw BudgetExceededError("degeneracy_scan: estimated nodes " + nodes.str() +
                                  " exceed the budget " + node_budget.str());
    std::optional<MSet> m;
    if (R.kind == RingKind::ImagQuad) m = m_set(R, Integer(6));

    int dims = N + k;
    size_t B = box.size();
    auto scan_chunk = [&](size_t first_lo, size_t first_hi, ScanReport& rep) {
        std::vector<size_t> idx(static_cast<size_t>(dims), 0);
        PCF p;
        p.pre.resize(static_cast<size_t>(N));
        p.per.resize(static_cast<size_t>(k));
        for (size_t f = first_lo; f < first_hi; ++f) {
            std::fill(idx.begin(), idx.end(), 0);
            idx[0] = f;
            for (;;) {
                for (int i = 0; i < dims; ++i) {
                    const RElem& c = box[idx[static_cast<size_t>(i)]];
                    if (i < N) p.pre[static_cast<size_t>(i)] = c;
                    else p.per[static_cast<size_t>(i - N)] = c;
                }
                if (membership(R, p, Q)) {
                    ++rep.total_points;
                    bool interior = true;
                    for (int i = 0; i < dims && interior; ++i)
                        interior = detail::interior_coordinate(
                            R, box[idx[static_cast<size_t>(i)]], m ? &*m : nullptr);
                    if (interior) rep.interior_points.push_back(p);
                    else ++rep.boundary_points;
                }
                // odometer over idx[1..]
                int pos = dims - 1;
                while (pos >= 1) {
                    if (++idx[static_cast<size_t>(pos)] < B) break;
                    idx[static_cast<size_t>(pos)] = 0;
                    --pos;
                }
                if (pos < 1) break;
            }
        }
    };

    ScanReport rep;
    rep.ring = R.dsl();
    rep.Q = Q;
    rep.N = N;
    rep.k = k;
    rep.H = H;
    if (jobs <= 1) {
        scan_chunk(0, B, rep);
    } else {
        size_t nchunks = std::min<size_t>(static_cast<size_t>(jobs) * 4, B);
        std::vector<ScanReport> parts(nchunks);
        std::vector<std::thread> pool;
        std::atomic<size_t> next{0};
        for (int j = 0; j < jobs; ++j)
            pool.emplace_back([&]() {
                for (;;) {
                    size_t i = next.fetch_add(1);
                    if (i >= nchunks) break;
                    size_t lo = B * i / nchunks, hi = B * (i + 1) / nchunks;
                    scan_chunk(lo, hi, parts[i]);
                }
            });
        for (auto& t : pool) t.join();
        for (const auto& part : parts) {
            rep.total_points += part.total_points;
            rep.boundary_points += part.boundary_points;
            rep.interior_points.insert(rep.interior_points.end(), part.interior_points.begin(),
                                       part.interior_points.end());
        }
    }
    auto pcf_less = [](const PCF& a, const PCF& b) {
        if (a.pre != b.pre)
            return std::lexicographical_compare(a.pre.begin(), a.pre.end(), b.pre.begin(), b.pre.end());
        return std::lexicographical_compare(a.per.begin(), a.per.end(), b.per.begin(), b.per.end());
    };
    std::sort(rep.interior_points.begin(), rep.interior_points.end(), pcf_less);
    rep.elapsed_ms = detail::ms_since(t0);
    return rep;
}

// Same classification over the solutions of a matrix-factorization variety;
// the interior predicate applies to the period coordinates only.
inline ScanReport vbar_degeneracy_scan(const RingSpec& R, const Mat2& A, int N, int k,
                                       const Integer& H, int jobs = 1) {
    if (N + k <= 3) throw std::invalid_argument("vbar_degeneracy_scan: N+k > 3 required");
    if (R.kind != RingKind::Integers && R.kind != RingKind::ImagQuad)
        throw std::invalid_argument("vbar_degeneracy_scan: ring must be Z or imaginary-quadratic");
    auto t0 = std::chrono::steady_clock::now();
    std::optional<MSet> m;
    if (R.kind == RingKind::ImagQuad) m = m_set(R, Integer(6));
    ScanReport rep;
    rep.ring = R.dsl();
    rep.N = N;
    rep.k = k;
    rep.H = H;
    auto sols = vbar_solve(R, FactorProblem{A, N, k, H}, jobs);
    for (const FactorSolution& s : sols) {
        ++rep.total_points;
        bool interior = true;
        for (const RElem& a : s.x) {
            bool ok = R.kind == RingKind::Integers ? rabs(a.u) >= 2
                                                   : rnorm(R, a) >= 4 && !(m && m->contains(a));
            if (!ok) { interior = false; break; }
        }
        if (interior) {
            PCF p;
            p.pre = s.y;
            p.per = s.x;
            rep.interior_points.push_back(p);
        } else {
            ++rep.boundary_points;
        }
    }
    rep.elapsed_ms = detail::ms_since(t0);
    return rep;
}

// ---------------------------------------------------------------------------
// density certificates: exact rank of the monomial evaluation matrix

class InsufficientPointsError : public std::runtime_error {
public:
    explicit InsufficientPointsError(const std::string& w) : std::runtime_error(w) {}
};

struct DensityCertificate {
    std::vector<std::vector<RElem>> points;
    int degree = 1;
    size_t monomial_count = 0;
    size_t rank = 0;
    bool certified = false;
    std::string note;
};

namespace detail {

inline void monomial_exponents(int nvars, int degree, std::vector<std::vector<int>>& out) {
    // graded lexicographic
    for (int total = 0; total <= degree; ++total) {
        std::vector<int> e(static_cast<size_t>(nvars), 0);
        // iterate compositions of `total` into nvars parts
        std::function<void(int, int)> rec = [&](int pos, int left) {
            if (pos == nvars - 1) {
                e[static_cast<size_t>(pos)] = left;
                out.push_back(e);
                return;
            }
            for (int v = left; v >= 0; --v) {
                e[static_cast<size_t>(pos)] = v;
                rec(pos + 1, left - v);
            }
        };
        if (nvars == 0) {
            if (total == 0) out.push_back({});
            continue;
        }
        rec(0, total);
    }
}

// exact rank over the fraction field K (Gaussian elimination)
inline size_t exact_rank(const RingSpec& R, std::vector<std::vector<RElem>> m) {
    size_t rows = m.size();
    if (rows == 0) return 0;
    size_t cols = m[0].size();
    size_t rank = 0;
    for (size_t col = 0; col < cols && rank < rows; ++col) {
        size_t pivot = rank;
        while (pivot < rows && m[pivot][col].is_zero()) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[rank], m[pivot]);
        RElem inv = rdiv(R, RElem(1L), m[rank][col]);
        for (size_t j = col; j < cols; ++j) m[rank][j] = rmul(R, m[rank][j], inv);
        for (size_t i = 0; i < rows; ++i) {
            if (i == rank || m[i][col].is_zero()) continue;
            RElem f = m[i][col];
            for (size_t j = col; j < cols; ++j)
                m[i][j] = rsub(m[i][j], rmul(R, f, m[rank][j]));
        }
        ++rank;
    }
    return rank;
}

} // namespace detail

// Harvest fiber solutions over the first `fiber_count` Fermat-Pell points and
// certify that no polynomial of total degree <= degree vanishes on them.
inline DensityCertificate harvest_and_certify(const RingSpec& R, const QuadPoly& Q, int N, int k,
                                              size_t fiber_count, const Integer& H, int degree,
                                              const std::vector<QElem>& unit_gens = {},
                                              int jobs = 1) {
    if (N != 0 && N != 1) throw std::invalid_argument("harvest_and_certify: N must be 0 or 1");
    if (R.kind != RingKind::SIntegers && R.kind != RingKind::RealQuad)
        throw std::invalid_argument("harvest_and_certify: ring must have an infinite unit group");
    DensityCertificate cert;
    cert.degree = degree;
    auto fps = fp_stream(R, Q, k, fiber_count, unit_gens);
    for (const FPPoint& P : fps) {
        for (const PCF& p : fiber_solve(R, P, Q, N, k, H, jobs)) {
            std::vector<RElem> coords;
            coords.insert(coords.end(), p.pre.begin(), p.pre.end());
            coords.insert(coords.end(), p.per.begin(), p.per.end());
            if (std::find(cert.points.begin(), cert.points.end(), coords) == cert.points.end())
                cert.points.push_back(std::move(coords));
        }
    }
    if (cert.points.empty())
        throw InsufficientPointsError("harvest_and_certify: no fiber points found");
    int nvars = N + k;
    std::vector<std::vector<int>> exps;
    detail::monomial_exponents(nvars, degree, exps);
    cert.monomial_count = exps.size();
    std::vector<std::vector<RElem>> matrix;
    matrix.reserve(cert.points.size());
    for (const auto& pt : cert.points) {
        std::vector<RElem> row;
        row.reserve(exps.size());
        for (const auto& e : exps) {
            RElem v(1L);
            for (int i = 0; i < nvars; ++i)
                for (int j = 0; j < e[static_cast<size_t>(i)]; ++j)
                    v = rmul(R, v, pt[static_cast<size_t>(i)]);
            row.push_back(v);
        }
        matrix.push_back(std::move(row));
    }
    cert.rank = detail::exact_rank(R, std::move(matrix));
    cert.certified = cert.rank == cert.monomial_count;
    if (cert.points.size() < cert.monomial_count)
        cert.note = "insufficient points: " + std::to_string(cert.points.size()) + " < " +
                    std::to_string(cert.monomial_count) + " monomials";
    return cert;
}

// ---------------------------------------------------------------------------
// exhaustive Fermat-Pell bijection check (conic coordinates, height = max(|x|,|y|))

struct PellBijectionReport {
    bool ok = false;
    size_t count = 0;
    std::vector<std::pair<Integer, Integer>> conic; // (x, y) by increasing height
};

inline PellBijectionReport pell_bijection_check(const Integer& alpha, int k, const Integer& H) {
    if (alpha < 2 || is_perfect_square(alpha))
        throw std::invalid_argument("pell_bijection_check: alpha must be a nonsquare >= 2");
    RingSpec z = RingSpec::integers();
    QuadPoly Q{RElem(1L), RElem(0L), RElem(Integer(-alpha))};
    int want = k % 2 == 0 ? 1 : -1;
    PellBijectionReport rep;
    rep.ok = true;
    // all units y + x sqrt(alpha) with norm (-1)^k and max(|x|, |y|) <= H;
    // these are exactly the conic points y^2 - alpha x^2 = (-1)^k
    std::vector<std::pair<Integer, Integer>> pairs;
    for (Integer x = 0; x <= H; ++x) {
        Integer yy = alpha * x * x + want;
        Integer y;
        if (yy < 0 || !is_perfect_square(yy, &y)) continue;
        if (y > H) continue;
        std::vector<std::pair<Integer, Integer>> batch;
        batch.push_back({x, y});
        if (y != 0) batch.push_back({x, Integer(-y)});
        if (x != 0) {
            batch.push_back({Integer(-x), y});
            if (y != 0) batch.push_back({Integer(-x), Integer(-y)});
        }
        pairs.insert(pairs.end(), batch.begin(), batch.end());
    }
    std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
        Integer ha = std::max(iabs(a.first), iabs(a.second));
        Integer hb = std::max(iabs(b.first), iabs(b.second));
        if (ha != hb) return ha < hb;
        return a < b;
    });
    std::set<FPPoint> seen;
    for (const auto& [x, y] : pairs) {
        FPPoint p = unit_to_fp(z, Q, RElem(x), RElem(y), k);
        // mutually inverse on these sets
        auto [c, d] = fp_to_unit(z, Q, p);
        if (!(c == RElem(x) && d == RElem(y))) rep.ok = false;
        if (!(p.c == RElem(x) && p.d == RElem(y))) rep.ok = false; // conic model map
        if (!fp_check(z, Q, p)) rep.ok = false;
        if (!seen.insert(p).second) rep.ok = false; // injectivity
        rep.conic.push_back({x, y});
    }
    rep.count = pairs.size();
    return rep;
}

} // namespace pcf
