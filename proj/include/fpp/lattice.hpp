#pragma once
// Rotated-lattice geometry and the seeded per-edge weight field.
//
// The lattice consists of the integer points (m, n) with m + n even; every
// edge joins (m, n) to (m - 1, n + 1) or (m + 1, n + 1).  Edge weights are
// two-valued: a with probability p, b with probability 1 - p, realized by
// thresholding a per-edge uniform that depends only on (seed, edge).  Keeping
// the uniforms fixed while p varies gives the monotone coupling used by all
// sweep experiments: raising p can only turn b-edges into a-edges.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fpp {

struct LatticePoint {
    int m = 0;  // column
    int n = 0;  // level
    friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

// lexicographic (m, then n); the tie-break order used everywhere
inline bool lex_less(LatticePoint a, LatticePoint b) {
    return a.m != b.m ? a.m < b.m : a.n < b.n;
}

inline bool on_lattice(LatticePoint p) { return ((p.m + p.n) & 1) == 0; }

inline void require_lattice(LatticePoint p, const char* what) {
    if (!on_lattice(p))
        throw std::invalid_argument(std::string(what) + ": (" + std::to_string(p.m) + ", " +
                                    std::to_string(p.n) + ") has odd coordinate sum");
}

enum class Dir : std::uint8_t { up_left = 0, up_right = 1 };

// Canonical edge: stored by its lower endpoint plus the upward direction, so
// each unordered adjacent pair maps to exactly one Edge value.
struct Edge {
    LatticePoint low;
    Dir dir = Dir::up_right;

    LatticePoint high() const { return {low.m + (dir == Dir::up_right ? 1 : -1), low.n + 1}; }

    friend bool operator==(const Edge&, const Edge&) = default;

    static Edge between(LatticePoint u, LatticePoint v) {
        if (v.n < u.n) std::swap(u, v);
        if (v.n != u.n + 1 || (v.m != u.m + 1 && v.m != u.m - 1))
            throw std::invalid_argument("Edge::between: points are not adjacent");
        return Edge{u, v.m == u.m + 1 ? Dir::up_right : Dir::up_left};
    }
};

struct WeightParams {
    double a = 1.0;  // cheap passage time
    double b = 2.0;  // expensive passage time
    double p = 0.5;  // probability of a

    void validate() const {
        if (!(a > 0.0) || !(b > a) || !std::isfinite(b))
            throw std::invalid_argument("WeightParams: need 0 < a < b < inf");
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("WeightParams: need 0 <= p <= 1");
    }
};

struct Window {
    int m_min = 0, m_max = 0, n_min = 0, n_max = 0;

    bool contains(LatticePoint p) const {
        return p.m >= m_min && p.m <= m_max && p.n >= n_min && p.n <= n_max;
    }
    bool valid() const { return m_min <= m_max && n_min <= n_max; }

    static Window box(int radius) { return {-radius, radius, -radius, radius}; }
};

namespace detail {

inline constexpr std::uint64_t golden64 = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer; full-avalanche 64-bit mix
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

inline std::uint64_t zigzag64(std::int64_t v) {
    return (static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63);
}

inline double unit_from_bits(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;  // 53-bit uniform in [0,1)
}

}  // namespace detail

// Deterministic stateless noise field.  The uniform attached to an edge is a
// pure function of (seed, low.m, low.n, dir): three chained SplitMix64
// finalizer rounds absorbing level, column and direction in that order.  The
// intermediate keys are exposed so level- and column-local loops can hoist
// the shared prefix; all entry points produce bit-identical values.
class NoiseField {
  public:
    NoiseField() = default;
    explicit NoiseField(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t level_key(int n_low) const {
        return detail::mix64(seed_ ^ (detail::zigzag64(n_low) * 0xD6E8FEB86659FD93ull));
    }
    static std::uint64_t column_key(std::uint64_t level_key, int m_low) {
        return detail::mix64(level_key ^ (detail::zigzag64(m_low) * 0xA3B195354A39B70Dull));
    }
    static double uniform_from_column(std::uint64_t column_key, Dir dir) {
        return detail::unit_from_bits(detail::mix64(
            column_key ^ (dir == Dir::up_right ? 0x1B87B2C62FB5E4F3ull : 0x8CB92BA72F3D8DD7ull)));
    }

    double uniform(const Edge& e) const {
        return uniform_from_column(column_key(level_key(e.low.n), e.low.m), e.dir);
    }

  private:
    std::uint64_t seed_ = 0;
};

// Any type with .uniform(Edge) -> double works as a weight source; tests use
// hand-built maps, the reflection property uses a mirrored view.
template <typename F>
concept UniformField = requires(const F& f, const Edge& e) {
    { f.uniform(e) } -> std::convertible_to<double>;
};

template <UniformField F>
double edge_uniform(const F& f, const Edge& e) {
    require_lattice(e.low, "edge_uniform");
    return f.uniform(e);
}

template <UniformField F>
double edge_weight(const F& f, const Edge& e, const WeightParams& wp) {
    return f.uniform(e) < wp.p ? wp.a : wp.b;
}

template <UniformField F>
bool is_a_edge(const F& f, const Edge& e, const WeightParams& wp) {
    return f.uniform(e) < wp.p;
}

// Derives independent replicate seeds from an experiment seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return detail::mix64(detail::mix64(base ^ 0x5851F42D4C957F2Dull) + index * detail::golden64);
}

// All canonical edges incident to pt whose other endpoint lies in w, in the
// fixed order up-left, up-right, down-left, down-right.  Returns the count.
inline int incident_edges(LatticePoint pt, const Window& w, std::array<Edge, 4>& out) {
    int k = 0;
    const LatticePoint ul{pt.m - 1, pt.n + 1}, ur{pt.m + 1, pt.n + 1};
    const LatticePoint dl{pt.m - 1, pt.n - 1}, dr{pt.m + 1, pt.n - 1};
    if (w.contains(ul)) out[k++] = Edge{pt, Dir::up_left};
    if (w.contains(ur)) out[k++] = Edge{pt, Dir::up_right};
    if (w.contains(dl)) out[k++] = Edge{dl, Dir::up_right};
    if (w.contains(dr)) out[k++] = Edge{dr, Dir::up_left};
    return k;
}

inline std::vector<Edge> neighbors(LatticePoint pt, const Window& w) {
    require_lattice(pt, "neighbors");
    if (!w.contains(pt)) return {};
    std::array<Edge, 4> buf;
    const int k = incident_edges(pt, w, buf);
    return std::vector<Edge>(buf.begin(), buf.begin() + k);
}

// Lattice point for the target "(x, n)": column floor(x), lowered by one if
// that breaks parity with the level.
inline LatticePoint target_point(double x, int n) {
    const auto fx = static_cast<long long>(std::floor(x));
    const long long m = ((fx + n) & 1) == 0 ? fx : fx - 1;
    return {static_cast<int>(m), n};
}

// Euclidean-nearest lattice point; ties resolved lexicographically (m, n).
inline LatticePoint nearest_lattice_point(double x, double y) {
    const int m0 = static_cast<int>(std::floor(x));
    const int n0 = static_cast<int>(std::floor(y));
    LatticePoint best{};
    double best_d2 = 0.0;
    bool have = false;
    for (int m = m0 - 1; m <= m0 + 2; ++m) {
        for (int n = n0 - 1; n <= n0 + 2; ++n) {
            if (((m + n) & 1) != 0) continue;
            const double dx = m - x, dy = n - y;
            const double d2 = dx * dx + dy * dy;
            if (!have || d2 < best_d2 || (d2 == best_d2 && lex_less({m, n}, best))) {
                best = {m, n};
                best_d2 = d2;
                have = true;
            }
        }
    }
    return best;
}

// Number of canonical edges whose endpoints both lie in w.
inline long long count_edges(const Window& w) {
    long long total = 0;
    for (int n = w.n_min; n < w.n_max; ++n)
        for (int m = w.m_min; m <= w.m_max; ++m) {
            if (((m + n) & 1) != 0) continue;
            if (m - 1 >= w.m_min) ++total;
            if (m + 1 <= w.m_max) ++total;
        }
    return total;
}

}  // namespace fpp
