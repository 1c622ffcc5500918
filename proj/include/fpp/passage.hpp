#pragma once
// First passage times from the origin and their geodesics.
//
// The solver is a label-setting search (Dijkstra with an admissible
// consistent heuristic a*chebyshev(v, target)).  With integral a, b every
// tentative distance is an integer, so a bucket queue indexed by f = dist + h
// replaces the binary heap; both modes produce identical results because
// double arithmetic on these integer sums is exact.  The search keeps
// settling until the minimum key strictly exceeds the target's distance,
// which guarantees every vertex lying on any optimal path is settled before
// the geodesic is rebuilt.  The geodesic walks backward from the target and
// always picks the lexicographically least predecessor, so reruns and
// different queue layouts cannot change the reported path.

#include <cstdint>
#include <limits>
#include <queue>
#include <tuple>
#include <vector>

#include "lattice.hpp"

namespace fpp {

struct PathRecord {
    std::vector<LatticePoint> vertices;  // origin first

    std::size_t edge_count() const { return vertices.empty() ? 0 : vertices.size() - 1; }
    Edge edge(std::size_t i) const { return Edge::between(vertices[i], vertices[i + 1]); }
};

// Accumulates weights in path order; with integral a, b this reproduces the
// solver's reported time bit for bit.
template <UniformField F>
double path_time(const F& f, const WeightParams& wp, const PathRecord& path) {
    double t = 0.0;
    for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i)
        t += edge_weight(f, path.edge(i), wp);
    return t;
}

struct PassageResult {
    double time = 0.0;
    PathRecord geodesic;
    Window window;  // the region the search was confined to
};

// Box [-R, R]^2 with R = ceil((b/a) * chebyshev(target)).  Any path touching
// the outside uses at least R + 1 edges and so costs at least a(R+1) >
// b * chebyshev(target), which already bounds the best direct path; no
// optimal path can leave the box.
inline Window safety_window(LatticePoint target, const WeightParams& wp) {
    wp.validate();
    require_lattice(target, "safety_window");
    const int l0 = std::max(std::abs(target.m), std::abs(target.n));
    const int r = static_cast<int>(std::ceil(wp.b / wp.a * static_cast<double>(l0)));
    return Window::box(r);
}

namespace detail {

inline std::uint64_t pack_point(LatticePoint p) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.m)) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.n));
}

inline LatticePoint unpack_point(std::uint64_t k) {
    return {static_cast<std::int32_t>(k >> 32), static_cast<std::int32_t>(k & 0xFFFFFFFFull)};
}

// Open-addressing map from packed point to a dense slot id; dist/state live
// in parallel arrays indexed by slot.
class NodeTable {
  public:
    static constexpr double kInf = std::numeric_limits<double>::infinity();

    explicit NodeTable(std::size_t expected = 1 << 12) { rehash(table_size_for(expected)); }

    std::uint32_t find_or_insert(std::uint64_t key) {
        if ((slots_.size() + 1) * 10 >= buckets_.size() * 7) rehash(buckets_.size() * 2);
        std::size_t i = index_of(key);
        while (buckets_[i] != kEmpty) {
            if (keys_[buckets_[i]] == key) return buckets_[i];
            i = (i + 1) & mask_;
        }
        const auto slot = static_cast<std::uint32_t>(slots_.size());
        buckets_[i] = slot;
        keys_.push_back(key);
        slots_.push_back({kInf, false});
        return slot;
    }

    // returns kNone when absent
    std::uint32_t find(std::uint64_t key) const {
        std::size_t i = index_of(key);
        while (buckets_[i] != kEmpty) {
            if (keys_[buckets_[i]] == key) return buckets_[i];
            i = (i + 1) & mask_;
        }
        return kNone;
    }

    double dist(std::uint32_t slot) const { return slots_[slot].dist; }
    void set_dist(std::uint32_t slot, double d) { slots_[slot].dist = d; }
    bool settled(std::uint32_t slot) const { return slots_[slot].settled; }
    void settle(std::uint32_t slot) { slots_[slot].settled = true; }
    std::uint64_t key(std::uint32_t slot) const { return keys_[slot]; }
    std::size_t size() const { return slots_.size(); }

    static constexpr std::uint32_t kNone = 0xFFFFFFFFu;

  private:
    struct Slot {
        double dist;
        bool settled;
    };
    static constexpr std::uint32_t kEmpty = 0xFFFFFFFFu;

    static std::size_t table_size_for(std::size_t expected) {
        std::size_t n = 64;
        while (n * 7 < expected * 10) n *= 2;
        return n;
    }
    std::size_t index_of(std::uint64_t key) const { return mix64(key) & mask_; }

    void rehash(std::size_t n) {
        buckets_.assign(n, kEmpty);
        mask_ = n - 1;
        for (std::uint32_t s = 0; s < slots_.size(); ++s) {
            std::size_t i = index_of(keys_[s]);
            while (buckets_[i] != kEmpty) i = (i + 1) & mask_;
            buckets_[i] = s;
        }
    }

    std::vector<std::uint32_t> buckets_;
    std::vector<std::uint64_t> keys_;
    std::vector<Slot> slots_;
    std::size_t mask_ = 0;
};

// Monotone bucket queue for integral keys.
class DialQueue {
  public:
    void push(std::int64_t f, std::uint32_t slot) {
        const auto i = static_cast<std::size_t>(f);
        if (i >= buckets_.size()) buckets_.resize(std::max(i + 1, buckets_.size() * 2));
        buckets_[i].push_back(slot);
        ++count_;
    }
    bool empty() const { return count_ == 0; }
    std::pair<std::int64_t, std::uint32_t> pop() {
        while (buckets_[cursor_].empty()) ++cursor_;
        const std::uint32_t s = buckets_[cursor_].back();
        buckets_[cursor_].pop_back();
        --count_;
        return {static_cast<std::int64_t>(cursor_), s};
    }

  private:
    std::vector<std::vector<std::uint32_t>> buckets_{1};
    std::size_t cursor_ = 0;
    std::size_t count_ = 0;
};

inline bool integral_weights(const WeightParams& wp) {
    return std::floor(wp.a) == wp.a && std::floor(wp.b) == wp.b;
}

}  // namespace detail

// Least passage time over paths confined to w, with the canonical geodesic.
// Throws when the target is not reachable inside w.
template <UniformField F>
PassageResult passage_in_window(const F& field, const WeightParams& wp, LatticePoint target,
                                const Window& w) {
    wp.validate();
    require_lattice(target, "passage_in_window");
    const LatticePoint origin{0, 0};
    if (!w.valid() || !w.contains(origin) || !w.contains(target))
        throw std::invalid_argument("passage_in_window: window must contain origin and target");

    const auto cheb = [target](LatticePoint v) {
        return std::max(std::abs(v.m - target.m), std::abs(v.n - target.n));
    };
    const bool dial = detail::integral_weights(wp);

    detail::NodeTable nodes;
    detail::DialQueue dq;
    using HeapItem = std::pair<double, std::uint32_t>;
    std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<>> heap;

    const auto push = [&](std::uint32_t slot, double f) {
        if (dial)
            dq.push(static_cast<std::int64_t>(f), slot);
        else
            heap.emplace(f, slot);
    };

    const std::uint32_t origin_slot = nodes.find_or_insert(detail::pack_point(origin));
    nodes.set_dist(origin_slot, 0.0);
    push(origin_slot, wp.a * cheb(origin));

    double target_dist = detail::NodeTable::kInf;
    bool target_settled = false;
    std::array<Edge, 4> nbr;

    while (dial ? !dq.empty() : !heap.empty()) {
        double f;
        std::uint32_t s;
        if (dial) {
            const auto [fi, si] = dq.pop();
            f = static_cast<double>(fi);
            s = si;
        } else {
            std::tie(f, s) = heap.top();
            heap.pop();
        }
        if (nodes.settled(s)) continue;
        if (target_settled && f > target_dist) break;
        nodes.settle(s);
        const LatticePoint v = detail::unpack_point(nodes.key(s));
        if (v == target) {
            target_settled = true;
            target_dist = nodes.dist(s);
        }
        const double dv = nodes.dist(s);
        const int k = incident_edges(v, w, nbr);
        for (int i = 0; i < k; ++i) {
            const Edge& e = nbr[i];
            const LatticePoint u = e.low == v ? e.high() : e.low;
            const std::uint32_t t = nodes.find_or_insert(detail::pack_point(u));
            if (nodes.settled(t)) continue;
            const double nd = dv + edge_weight(field, e, wp);
            if (nd < nodes.dist(t)) {
                nodes.set_dist(t, nd);
                push(t, nd + wp.a * cheb(u));
            }
        }
    }
    if (!target_settled) throw std::runtime_error("passage_in_window: target unreachable in window");

    PassageResult res;
    res.time = target_dist;
    res.window = w;

    // Backward canonical reconstruction: among settled neighbors u with
    // dist(u) + w(u,v) == dist(v) take the lexicographically least.  The
    // equality uses the same additions the relaxation performed, so at least
    // one candidate always exists.
    std::vector<LatticePoint> rev{target};
    LatticePoint v = target;
    std::uint32_t vs = nodes.find(detail::pack_point(target));
    while (!(v == origin)) {
        const int k = incident_edges(v, w, nbr);
        bool have = false;
        LatticePoint best{};
        std::uint32_t best_slot = 0;
        for (int i = 0; i < k; ++i) {
            const Edge& e = nbr[i];
            const LatticePoint u = e.low == v ? e.high() : e.low;
            const std::uint32_t t = nodes.find(detail::pack_point(u));
            if (t == detail::NodeTable::kNone || !nodes.settled(t)) continue;
            if (nodes.dist(t) + edge_weight(field, e, wp) != nodes.dist(vs)) continue;
            if (!have || lex_less(u, best)) {
                best = u;
                best_slot = t;
                have = true;
            }
        }
        if (!have) throw std::runtime_error("passage_in_window: broken predecessor chain");
        v = best;
        vs = best_slot;
        rev.push_back(v);
        if (rev.size() > nodes.size() + 1)
            throw std::runtime_error("passage_in_window: reconstruction cycle");
    }
    res.geodesic.vertices.assign(rev.rbegin(), rev.rend());
    return res;
}

template <UniformField F>
PassageResult first_passage_time(const F& field, const WeightParams& wp, LatticePoint target) {
    return passage_in_window(field, wp, target, safety_window(target, wp));
}

// Exhaustive minimum over simple origin-to-target paths inside w.  Exists to
// check the solver on tiny instances, hence the hard cap on window size.
template <UniformField F>
double brute_force_passage_time(const F& field, const WeightParams& wp, LatticePoint target,
                                const Window& w) {
    wp.validate();
    require_lattice(target, "brute_force_passage_time");
    const LatticePoint origin{0, 0};
    if (!w.valid() || !w.contains(origin) || !w.contains(target))
        throw std::invalid_argument("brute_force: window must contain origin and target");
    if (count_edges(w) > 16)
        throw std::invalid_argument("brute_force: window exceeds 16 edges, refuse to enumerate");

    double best = detail::NodeTable::kInf;
    std::vector<LatticePoint> stack{origin};

    const auto visited = [&stack](LatticePoint q) {
        for (const auto& s : stack)
            if (s == q) return true;
        return false;
    };

    const auto dfs = [&](auto&& self, LatticePoint v, double acc) -> void {
        if (acc >= best) return;
        if (v == target) {
            best = acc;
            return;
        }
        // per-call buffer: recursion below must not clobber this level's edges
        std::array<Edge, 4> nbr;
        const int k = incident_edges(v, w, nbr);
        for (int i = 0; i < k; ++i) {
            const Edge& e = nbr[i];
            const LatticePoint u = e.low == v ? e.high() : e.low;
            if (visited(u)) continue;
            stack.push_back(u);
            self(self, u, acc + edge_weight(field, e, wp));
            stack.pop_back();
        }
    };
    dfs(dfs, origin, 0.0);
    if (best == detail::NodeTable::kInf)
        throw std::runtime_error("brute_force: target unreachable in window");
    return best;
}

}  // namespace fpp
