#pragma once
// Decomposition of a path into optimal and sub-optimal parts.
//
// Edges are grouped by strip (the level pair they cross).  In each strip the
// edge with the leftmost midpoint (earliest in path order on ties) is the
// designated crossing; all others are repeated.  A b-weight takes precedence
// over repetition when both apply.  The x-trace merges the column projections
// of sub-optimal edges into disjoint closed intervals; optimal edges whose
// projection is swallowed by one of those intervals are dropped, and the
// y-trace records the level spans of the maximal surviving runs.  Two ways of
// computing the optimal displacement (path displacement minus x-trace mass,
// and the direct sum over surviving edges) are kept separate so tests can
// compare them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "lattice.hpp"
#include "passage.hpp"

namespace fpp {

enum class EdgeClass : std::uint8_t { optimal, suboptimal_b, suboptimal_repeated };

struct Interval {
    int lo = 0;
    int hi = 0;
    friend bool operator==(const Interval&, const Interval&) = default;
};

template <UniformField F>
std::vector<EdgeClass> classify_edges(const F& field, const WeightParams& wp,
                                      const PathRecord& path) {
    wp.validate();
    const std::size_t ne = path.edge_count();
    std::vector<EdgeClass> cls(ne, EdgeClass::optimal);
    if (ne == 0) return cls;

    // (strip, doubled midpoint, path index); sorting groups strips and puts
    // the designated crossing first within each group
    struct Key {
        int strip;
        int mid2;
        std::size_t idx;
    };
    std::vector<Key> keys;
    keys.reserve(ne);
    for (std::size_t i = 0; i < ne; ++i) {
        const LatticePoint u = path.vertices[i], v = path.vertices[i + 1];
        if (std::abs(u.n - v.n) != 1 || std::abs(u.m - v.m) != 1)
            throw std::invalid_argument("classify_edges: vertices are not consecutive neighbors");
        keys.push_back({std::min(u.n, v.n), u.m + v.m, i});
    }
    std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
        if (a.strip != b.strip) return a.strip < b.strip;
        if (a.mid2 != b.mid2) return a.mid2 < b.mid2;
        return a.idx < b.idx;
    });
    for (std::size_t i = 0; i < keys.size(); ++i) {
        const bool designated = i == 0 || keys[i].strip != keys[i - 1].strip;
        if (!designated) cls[keys[i].idx] = EdgeClass::suboptimal_repeated;
    }
    for (std::size_t i = 0; i < ne; ++i) {
        if (!is_a_edge(field, path.edge(i), wp)) cls[i] = EdgeClass::suboptimal_b;
    }
    return cls;
}

// Disjoint closed intervals covering the column projections of sub-optimal
// edges; touching intervals are merged.
inline std::vector<Interval> x_trace(const PathRecord& path, const std::vector<EdgeClass>& cls) {
    std::vector<Interval> proj;
    for (std::size_t i = 0; i < cls.size(); ++i) {
        if (cls[i] == EdgeClass::optimal) continue;
        const int m0 = path.vertices[i].m, m1 = path.vertices[i + 1].m;
        proj.push_back({std::min(m0, m1), std::max(m0, m1)});
    }
    std::sort(proj.begin(), proj.end(), [](const Interval& a, const Interval& b) {
        return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi;
    });
    std::vector<Interval> merged;
    for (const Interval& iv : proj) {
        if (!merged.empty() && iv.lo <= merged.back().hi)
            merged.back().hi = std::max(merged.back().hi, iv.hi);
        else
            merged.push_back(iv);
    }
    return merged;
}

namespace detail {

// whether [lo, hi] fits inside a single component of the merged x-trace
inline bool covered_by(const std::vector<Interval>& xs, int lo, int hi) {
    auto it = std::upper_bound(xs.begin(), xs.end(), lo, [](int value, const Interval& iv) {
        return value < iv.lo;
    });
    if (it == xs.begin()) return false;
    --it;
    return it->lo <= lo && hi <= it->hi;
}

}  // namespace detail

struct YTrace {
    std::vector<Interval> intervals;     // level spans of maximal retained runs
    std::vector<std::uint8_t> retained;  // per path edge
};

inline YTrace y_trace(const PathRecord& path, const std::vector<EdgeClass>& cls,
                      const std::vector<Interval>& x_intervals) {
    YTrace yt;
    yt.retained.assign(cls.size(), 0);
    for (std::size_t i = 0; i < cls.size(); ++i) {
        if (cls[i] != EdgeClass::optimal) continue;
        const int m0 = path.vertices[i].m, m1 = path.vertices[i + 1].m;
        if (!detail::covered_by(x_intervals, std::min(m0, m1), std::max(m0, m1)))
            yt.retained[i] = 1;
    }
    std::size_t i = 0;
    while (i < yt.retained.size()) {
        if (!yt.retained[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < yt.retained.size() && yt.retained[j + 1]) ++j;
        int lo = path.vertices[i].n, hi = lo;
        for (std::size_t k = i; k <= j + 1; ++k) {
            lo = std::min(lo, path.vertices[k].n);
            hi = std::max(hi, path.vertices[k].n);
        }
        yt.intervals.push_back({lo, hi});
        i = j + 1;
    }
    return yt;
}

struct TraceDecomposition {
    std::vector<EdgeClass> classes;
    std::vector<Interval> x_intervals;
    std::vector<Interval> y_intervals;
    std::vector<std::uint8_t> retained;
    int j1 = 0, j2 = 0, j = 0;
    long long suboptimal_count = 0;
    long long x_mass = 0;          // total x-interval length
    long long d_opt = 0;           // displacement minus x_mass
    long long d_opt_direct = 0;    // summed over retained edges
    bool d_opt_consistent = true;  // the two computations agree
};

template <UniformField F>
TraceDecomposition decompose_path(const F& field, const WeightParams& wp, const PathRecord& path) {
    TraceDecomposition d;
    d.classes = classify_edges(field, wp, path);
    d.x_intervals = x_trace(path, d.classes);
    YTrace yt = y_trace(path, d.classes, d.x_intervals);
    d.y_intervals = std::move(yt.intervals);
    d.retained = std::move(yt.retained);
    d.j1 = static_cast<int>(d.x_intervals.size());
    d.j2 = static_cast<int>(d.y_intervals.size());
    d.j = std::max(d.j1, d.j2);
    for (const EdgeClass c : d.classes)
        if (c != EdgeClass::optimal) ++d.suboptimal_count;
    for (const Interval& iv : d.x_intervals) d.x_mass += iv.hi - iv.lo;
    if (!path.vertices.empty())
        d.d_opt = (path.vertices.back().m - path.vertices.front().m) - d.x_mass;
    for (std::size_t i = 0; i < d.retained.size(); ++i)
        if (d.retained[i]) d.d_opt_direct += path.vertices[i + 1].m - path.vertices[i].m;
    d.d_opt_consistent = d.d_opt == d.d_opt_direct;
    return d;
}

// ---- counting bounds -------------------------------------------------------

inline double entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("entropy: argument outside [0, 1]");
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log(x) - (1.0 - x) * std::log(1.0 - x);
}

// C(u, v) <= exp(u * H(v / u)); exact integer binomials up to u = 62, the
// log-gamma form beyond.
inline bool entropy_binomial_check(long long u, long long v) {
    if (u < 1 || v < 0 || v > u) throw std::invalid_argument("entropy_binomial_check: need 0 <= v <= u, u >= 1");
    if (v == 0 || v == u) return true;  // C = 1, bound = 1
    const double bound = static_cast<double>(u) * entropy(static_cast<double>(v) / static_cast<double>(u));
    double log_c;
    if (u <= 62) {
        unsigned __int128 c = 1;
        const long long k = std::min(v, u - v);
        for (long long i = 1; i <= k; ++i) c = c * static_cast<unsigned __int128>(u - k + i) / static_cast<unsigned __int128>(i);
        log_c = std::log(static_cast<double>(static_cast<unsigned long long>(c)));
    } else {
        log_c = std::lgamma(static_cast<double>(u) + 1.0) - std::lgamma(static_cast<double>(v) + 1.0) -
                std::lgamma(static_cast<double>(u - v) + 1.0);
    }
    return log_c <= bound;
}

struct KBound {
    long long value = 0;
    bool regime_ok = true;  // false when log(1 / (p0 - p)) <= 1
};

// Cap on the number of sub-optimal strips a geodesic to level n can afford
// when passage times are near the flat value.  Returns 0 when p >= p0.
inline KBound k_bound(double a, double b, double delta, double p0, double p, long long n) {
    if (!(a > 0.0) || !(b > a)) throw std::invalid_argument("k_bound: need 0 < a < b");
    if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("k_bound: need 0 < delta < 1/2");
    if (!(p0 > 0.0 && p0 < 1.0) || !(p > 0.0 && p < 1.0))
        throw std::invalid_argument("k_bound: need p, p0 in (0, 1)");
    if (n < 1) throw std::invalid_argument("k_bound: need n >= 1");
    KBound kb;
    if (p >= p0) return kb;
    const double nu = 1.0 / std::min(b - a, a);
    const double log_term = std::log(1.0 / (p0 - p));
    kb.regime_ok = log_term > 1.0;
    const double raw = a * nu * delta * (p0 - p) * (p0 - p) * static_cast<double>(n) / log_term;
    kb.value = static_cast<long long>(std::floor(raw));
    return kb;
}

struct BudgetReport {
    long long suboptimal_count = 0;
    double budget = 0.0;  // nu * (T - a * n)
    bool ok = false;
};

// The excess passage time over the flat value pays for every sub-optimal
// edge; nu converts time surplus into an edge count.
template <UniformField F>
BudgetReport suboptimal_budget_check(const F& field, const WeightParams& wp,
                                     const PathRecord& path, const TraceDecomposition& d) {
    wp.validate();
    if (path.vertices.empty() || !(path.vertices.front() == LatticePoint{0, 0}))
        throw std::invalid_argument("suboptimal_budget_check: path must start at the origin");
    const int n = path.vertices.back().n;
    if (n < 1) throw std::invalid_argument("suboptimal_budget_check: path must end at level >= 1");
    const double t = path_time(field, wp, path);
    const double nu = 1.0 / std::min(wp.b - wp.a, wp.a);
    BudgetReport rep;
    rep.suboptimal_count = d.suboptimal_count;
    rep.budget = nu * (t - wp.a * static_cast<double>(n));
    rep.ok = static_cast<double>(rep.suboptimal_count) <= rep.budget + 1e-9;
    return rep;
}

}  // namespace fpp
