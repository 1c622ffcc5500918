#pragma once
// Oriented growth through cheap edges.
//
// An edge is open when its weight is a; open upward paths define a growth
// process whose right edge, regeneration levels and asymptotic speed feed the
// directional passage-time estimates.  Fronts are bit-packed rows (bit j of a
// row at `level` is column left + 2j), stepped one level at a time.  The
// half-line process is truncated to the rightmost levels+1 sources; a run is
// flagged invalid if the right edge ever drops below -level, because only
// then could the dropped sources have mattered.
//
// Regeneration levels come from a single backward sweep of the depth
// recursion D(x, y) = 1 + max over open children of D, capped at the slab
// top.  D(0,0) == N + H decides acceptance (origin survives the whole slab),
// and D(r_n, n) >= H marks level n as a break level, so one sweep yields
// every break flag plus the conditioning event with no per-level rescans.

#include <bit>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "lattice.hpp"
#include "parallel.hpp"
#include "stats.hpp"

namespace fpp {

struct FrontState {
    int level = 0;
    std::vector<int> occupied;  // sorted ascending, parity matching level
};

namespace detail {

template <typename F>
concept KeyedField = UniformField<F> && requires(const F& f) {
    { f.level_key(0) } -> std::same_as<std::uint64_t>;
    { F::column_key(std::uint64_t{}, 0) } -> std::same_as<std::uint64_t>;
    { F::uniform_from_column(std::uint64_t{}, Dir::up_left) } -> std::same_as<double>;
};

struct PackedRow {
    int level = 0;
    int left = 0;  // column of bit 0
    int nbits = 0;
    std::vector<std::uint64_t> w;

    void assign(int level_, int left_, int nbits_) {
        level = level_;
        left = left_;
        nbits = nbits_;
        w.assign(static_cast<std::size_t>((nbits_ + 63) / 64), 0);
    }
    void set(int j) { w[static_cast<std::size_t>(j) >> 6] |= 1ull << (j & 63); }
    void set_checked(int j) {
        if (j >= 0 && j < nbits) set(j);
    }
    bool test(int j) const { return (w[static_cast<std::size_t>(j) >> 6] >> (j & 63)) & 1; }
    bool empty() const {
        for (auto x : w)
            if (x) return false;
        return true;
    }
    // highest set bit index, -1 when empty
    int highest() const {
        for (std::size_t i = w.size(); i-- > 0;)
            if (w[i]) return static_cast<int>(i * 64 + 63 - std::countl_zero(w[i]));
        return -1;
    }
    std::vector<int> columns() const {
        std::vector<int> out;
        for (std::size_t i = 0; i < w.size(); ++i) {
            std::uint64_t bits = w[i];
            while (bits) {
                out.push_back(left + 2 * (static_cast<int>(i * 64) + std::countr_zero(bits)));
                bits &= bits - 1;
            }
        }
        return out;
    }
};

// One level of growth: a set bit j (column cur.left + 2j) opens each child
// whose edge uniform is below p.  Children land at next bits j + off and
// j + off + 1, off = (cur.left - 1 - next.left) / 2; out-of-range children
// are dropped, which is how window trimming happens.
template <UniformField F>
void step_row(const F& field, const WeightParams& wp, const PackedRow& cur, PackedRow& next) {
    const int off = (cur.left - 1 - next.left) / 2;
    const double p = wp.p;
    if constexpr (KeyedField<F>) {
        const std::uint64_t lk = field.level_key(cur.level);
        for (std::size_t wi = 0; wi < cur.w.size(); ++wi) {
            std::uint64_t bits = cur.w[wi];
            while (bits) {
                const int j = static_cast<int>(wi << 6) + std::countr_zero(bits);
                bits &= bits - 1;
                const std::uint64_t ck = F::column_key(lk, cur.left + 2 * j);
                if (F::uniform_from_column(ck, Dir::up_left) < p) next.set_checked(j + off);
                if (F::uniform_from_column(ck, Dir::up_right) < p) next.set_checked(j + off + 1);
            }
        }
    } else {
        for (std::size_t wi = 0; wi < cur.w.size(); ++wi) {
            std::uint64_t bits = cur.w[wi];
            while (bits) {
                const int j = static_cast<int>(wi << 6) + std::countr_zero(bits);
                bits &= bits - 1;
                const LatticePoint low{cur.left + 2 * j, cur.level};
                if (field.uniform(Edge{low, Dir::up_left}) < p) next.set_checked(j + off);
                if (field.uniform(Edge{low, Dir::up_right}) < p) next.set_checked(j + off + 1);
            }
        }
    }
}

template <typename F>
std::uint64_t field_seed(const F& f) {
    if constexpr (requires { { f.seed() } -> std::convertible_to<std::uint64_t>; })
        return f.seed();
    else
        return 0;
}

}  // namespace detail

// Exact front evolution from an arbitrary initial state; the row window grows
// one column on each side per level so nothing is ever trimmed.
template <UniformField F>
std::vector<FrontState> evolve_front(const F& field, const WeightParams& wp,
                                     const FrontState& initial, int levels) {
    wp.validate();
    if (levels < 0) throw std::invalid_argument("evolve_front: negative level count");
    for (std::size_t i = 0; i < initial.occupied.size(); ++i) {
        if (((initial.occupied[i] + initial.level) & 1) != 0)
            throw std::invalid_argument("evolve_front: source parity mismatch");
        if (i > 0 && initial.occupied[i - 1] >= initial.occupied[i])
            throw std::invalid_argument("evolve_front: sources must be sorted ascending");
    }

    std::vector<FrontState> out;
    out.reserve(static_cast<std::size_t>(levels) + 1);
    out.push_back(initial);
    if (initial.occupied.empty()) {
        for (int k = 1; k <= levels; ++k) out.push_back({initial.level + k, {}});
        return out;
    }

    const int lo = initial.occupied.front(), hi = initial.occupied.back();
    detail::PackedRow cur, next;
    cur.assign(initial.level, lo, (hi - lo) / 2 + 1);
    for (int c : initial.occupied) cur.set((c - lo) / 2);

    for (int k = 1; k <= levels; ++k) {
        next.assign(initial.level + k, lo - k, (hi - lo) / 2 + k + 1);
        detail::step_row(field, wp, cur, next);
        out.push_back({next.level, next.columns()});
        std::swap(cur, next);
    }
    return out;
}

// Right edge of the origin process with the restart convention: whenever the
// front dies the next level is reseeded with the single column level + 1 and
// the step is flagged, so downstream consumers can skip those levels.
struct RightEdgeTrace {
    std::vector<int> r;               // r[k] for k = 0..levels
    std::vector<std::uint8_t> reset;  // reset[k]: level k was reseeded
    int levels = 0;
    double p = 0.0;
    std::uint64_t seed = 0;
};

template <UniformField F>
RightEdgeTrace origin_right_edge(const F& field, const WeightParams& wp, int levels) {
    wp.validate();
    if (levels < 0) throw std::invalid_argument("origin_right_edge: negative level count");
    RightEdgeTrace tr;
    tr.levels = levels;
    tr.p = wp.p;
    tr.seed = detail::field_seed(field);
    tr.r.assign(static_cast<std::size_t>(levels) + 1, 0);
    tr.reset.assign(static_cast<std::size_t>(levels) + 1, 0);

    detail::PackedRow cur, next;
    cur.assign(0, 0, 1);
    cur.set(0);
    for (int k = 1; k <= levels; ++k) {
        next.assign(k, -k, k + 1);
        detail::step_row(field, wp, cur, next);
        if (next.empty()) {
            next.set(k);  // column k
            tr.reset[k] = 1;
        }
        tr.r[k] = next.left + 2 * next.highest();
        std::swap(cur, next);
    }
    return tr;
}

// Right edge started from every even column <= 0, truncated to the
// rightmost levels + 1 sources.  The window at level k is
// [-2*levels + k, k], one bit per column, constant width.
struct HalfLineTrace {
    std::vector<int> r;  // valid up to the level before extinction
    int levels = 0;
    bool extinct = false;
    int extinct_level = -1;
    bool invalid = false;  // extinct, or r dipped below -level
    double p = 0.0;
    std::uint64_t seed = 0;
};

template <UniformField F>
HalfLineTrace halfline_right_edge(const F& field, const WeightParams& wp, int levels) {
    wp.validate();
    if (levels < 0) throw std::invalid_argument("halfline_right_edge: negative level count");
    HalfLineTrace tr;
    tr.levels = levels;
    tr.p = wp.p;
    tr.seed = detail::field_seed(field);
    tr.r.assign(static_cast<std::size_t>(levels) + 1, 0);

    const int width = levels + 1;
    detail::PackedRow cur, next;
    cur.assign(0, -2 * levels, width);
    for (int j = 0; j < width; ++j) cur.set(j);

    for (int k = 1; k <= levels; ++k) {
        next.assign(k, -2 * levels + k, width);
        detail::step_row(field, wp, cur, next);
        if (next.empty()) {
            tr.extinct = true;
            tr.extinct_level = k;
            tr.invalid = true;
            tr.r.resize(static_cast<std::size_t>(k));
            return tr;
        }
        tr.r[k] = next.left + 2 * next.highest();
        if (tr.r[k] < -k) tr.invalid = true;
        std::swap(cur, next);
    }
    return tr;
}

// True when the single-source process from `from` is still alive `horizon`
// levels later.
template <UniformField F>
bool survives_to_horizon(const F& field, const WeightParams& wp, LatticePoint from, int horizon) {
    wp.validate();
    require_lattice(from, "survives_to_horizon");
    if (horizon < 0) throw std::invalid_argument("survives_to_horizon: negative horizon");
    detail::PackedRow cur, next;
    cur.assign(from.n, from.m, 1);
    cur.set(0);
    for (int k = 1; k <= horizon; ++k) {
        next.assign(from.n + k, from.m - k, k + 1);
        detail::step_row(field, wp, cur, next);
        if (next.empty()) return false;
        std::swap(cur, next);
    }
    return true;
}

// ---- regeneration structure ------------------------------------------------

struct BreakPointRecord {
    int level = 0;  // T_i
    int r = 0;      // right edge at T_i
    int tau = 0;    // T_i - T_{i-1}, with T_0 = 0
    int x = 0;      // r(T_i) - r(T_{i-1})
    bool validated = true;
};

struct BreakPointRun {
    bool accepted = false;
    int levels = 0;   // N
    int horizon = 0;  // H
    std::vector<int> r;                     // r[n], n = 0..N (accepted runs only)
    std::vector<std::uint8_t> is_break;     // size N + 1; index 0 set by construction
    std::vector<BreakPointRecord> records;  // break levels >= 1, ascending
    double p = 0.0;
    std::uint64_t seed = 0;
};

// Runs the origin process to level N, then sweeps the depth recursion down
// from N + H.  Rejected runs (origin dead before N + H) return accepted =
// false and nothing else.
template <UniformField F>
BreakPointRun extract_break_points(const F& field, const WeightParams& wp, int levels,
                                   int horizon) {
    wp.validate();
    if (levels < 1 || horizon < 1)
        throw std::invalid_argument("extract_break_points: need levels >= 1 and horizon >= 1");
    BreakPointRun run;
    run.levels = levels;
    run.horizon = horizon;
    run.p = wp.p;
    run.seed = detail::field_seed(field);

    // upward pass: right edge of the origin process, no restarts
    std::vector<int> r(static_cast<std::size_t>(levels) + 1, 0);
    {
        detail::PackedRow cur, next;
        cur.assign(0, 0, 1);
        cur.set(0);
        for (int k = 1; k <= levels; ++k) {
            next.assign(k, -k, k + 1);
            detail::step_row(field, wp, cur, next);
            if (next.empty()) return run;  // dead before N: rejected
            r[k] = next.left + 2 * next.highest();
            std::swap(cur, next);
        }
    }

    // downward pass: D(x, y) = survival depth from (x, y), capped at the top
    const int top = levels + horizon;
    std::vector<std::int32_t> above(static_cast<std::size_t>(top) + 2, 0);
    std::vector<std::int32_t> here(static_cast<std::size_t>(top) + 2, 0);
    run.is_break.assign(static_cast<std::size_t>(levels) + 1, 0);

    for (int y = top - 1; y >= 0; --y) {
        const double p = wp.p;
        if constexpr (detail::KeyedField<F>) {
            const std::uint64_t lk = field.level_key(y);
            for (int j = 0; j <= y; ++j) {
                const std::uint64_t ck = F::column_key(lk, -y + 2 * j);
                std::int32_t d = 0;
                if (F::uniform_from_column(ck, Dir::up_left) < p) d = 1 + above[j];
                if (F::uniform_from_column(ck, Dir::up_right) < p)
                    d = std::max(d, 1 + above[j + 1]);
                here[j] = d;
            }
        } else {
            for (int j = 0; j <= y; ++j) {
                const LatticePoint low{-y + 2 * j, y};
                std::int32_t d = 0;
                if (field.uniform(Edge{low, Dir::up_left}) < p) d = 1 + above[j];
                if (field.uniform(Edge{low, Dir::up_right}) < p) d = std::max(d, 1 + above[j + 1]);
                here[j] = d;
            }
        }
        if (y <= levels) {
            const int j = (r[static_cast<std::size_t>(y)] + y) / 2;
            run.is_break[static_cast<std::size_t>(y)] = here[j] >= horizon;
        }
        std::swap(here, above);
    }

    if (above[0] < top) return run;  // origin dies in (N, N + H]: rejected
    run.accepted = true;
    run.r = std::move(r);

    int prev_level = 0, prev_r = 0;
    for (int n = 1; n <= levels; ++n) {
        if (!run.is_break[static_cast<std::size_t>(n)]) continue;
        BreakPointRecord rec;
        rec.level = n;
        rec.r = run.r[static_cast<std::size_t>(n)];
        rec.tau = n - prev_level;
        rec.x = rec.r - prev_r;
        run.records.push_back(rec);
        prev_level = n;
        prev_r = rec.r;
    }
    return run;
}

struct RegenReport {
    long long checked = 0;
    long long holds = 0;
    long long uncovered = 0;  // levels with no later break to compare against
    int first_violation = -1;
};

// For every level n covered by a following break point, checks that the right
// edge at that break stays within 2 tau of the right edge at n.
inline RegenReport regeneration_inequality_check(const BreakPointRun& run) {
    if (!run.accepted)
        throw std::invalid_argument("regeneration_inequality_check: run was not accepted");
    RegenReport rep;
    std::size_t idx = 0;
    for (int n = 0; n <= run.levels; ++n) {
        while (idx < run.records.size() && run.records[idx].level <= n) ++idx;
        if (idx >= run.records.size()) {
            ++rep.uncovered;
            continue;
        }
        const BreakPointRecord& next = run.records[idx];
        ++rep.checked;
        const long long gap = std::llabs(static_cast<long long>(next.r) -
                                         static_cast<long long>(run.r[static_cast<std::size_t>(n)]));
        if (gap <= 2ll * next.tau)
            ++rep.holds;
        else if (rep.first_violation < 0)
            rep.first_violation = n;
    }
    return rep;
}

// ---- speed and tail estimators --------------------------------------------

// Mean of r_n / n over half-line replicates.  Invalid replicates are
// excluded; more than half invalid aborts the estimate.
inline EstimateWithCI estimate_alpha_slope(const WeightParams& wp, int n, int reps,
                                           std::uint64_t seed, int workers = 0) {
    wp.validate();
    if (n < 1 || reps < 1) throw std::invalid_argument("estimate_alpha_slope: need n, reps >= 1");
    std::vector<double> vals(static_cast<std::size_t>(reps), 0.0);
    std::vector<std::uint8_t> ok(static_cast<std::size_t>(reps), 0);
    parallel_for_index(static_cast<std::size_t>(reps), workers, [&](std::size_t i) {
        const NoiseField f(derive_seed(seed, i));
        const HalfLineTrace t = halfline_right_edge(f, wp, n);
        if (!t.invalid) {
            ok[i] = 1;
            vals[i] = static_cast<double>(t.r[static_cast<std::size_t>(n)]) / n;
        }
    });
    std::vector<double> kept;
    kept.reserve(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i)
        if (ok[i]) kept.push_back(vals[i]);
    if (kept.size() * 2 < static_cast<std::size_t>(reps))
        throw std::runtime_error("estimate_alpha_slope: more than half of the replicates invalid");
    EstimateWithCI e = mean_and_std_error(kept);
    e.excluded = static_cast<std::size_t>(reps) - kept.size();
    return e;
}

// Proportion of half-line replicates with r_n >= (alpha_ref + eps) * n.
inline EstimateWithCI estimate_tail_probability(const WeightParams& wp, double alpha_ref,
                                                double eps, int n, int reps, std::uint64_t seed,
                                                int workers = 0) {
    wp.validate();
    if (n < 1 || reps < 1)
        throw std::invalid_argument("estimate_tail_probability: need n, reps >= 1");
    if (!(eps > 0.0)) throw std::invalid_argument("estimate_tail_probability: need eps > 0");
    const double threshold = (alpha_ref + eps) * n;
    std::vector<std::uint8_t> hit(static_cast<std::size_t>(reps), 0);
    std::vector<std::uint8_t> ok(static_cast<std::size_t>(reps), 0);
    parallel_for_index(static_cast<std::size_t>(reps), workers, [&](std::size_t i) {
        const NoiseField f(derive_seed(seed, i));
        const HalfLineTrace t = halfline_right_edge(f, wp, n);
        if (!t.invalid) {
            ok[i] = 1;
            hit[i] = static_cast<double>(t.r[static_cast<std::size_t>(n)]) >= threshold;
        }
    });
    std::size_t valid = 0, hits = 0;
    for (std::size_t i = 0; i < ok.size(); ++i) {
        valid += ok[i];
        hits += hit[i];
    }
    if (valid * 2 < static_cast<std::size_t>(reps))
        throw std::runtime_error("estimate_tail_probability: more than half invalid");
    EstimateWithCI e = binomial_proportion(hits, valid);
    e.excluded = static_cast<std::size_t>(reps) - valid;
    return e;
}

struct RatioEstimate {
    EstimateWithCI alpha;  // mean = pooled sum(x)/sum(tau); std_error from run bootstrap
    double kappa_hat = 0.0;  // mean regeneration gap
    long long runs = 0;
    long long records = 0;
    long long attempts = 0;
};

// Pooled increment ratio over accepted regeneration runs.  Attempts are
// consumed in fixed-size blocks by attempt index, and exactly the first
// `reps` accepted (in attempt order) are kept, so the estimate does not
// depend on the worker count.
inline RatioEstimate estimate_alpha_ratio(const WeightParams& wp, int levels, int horizon,
                                          int reps, std::uint64_t seed, int workers = 0) {
    wp.validate();
    if (reps < 1) throw std::invalid_argument("estimate_alpha_ratio: need reps >= 1");
    struct RunSums {
        double x = 0, tau = 0;
        long long cnt = 0;
    };
    std::vector<RunSums> accepted;
    accepted.reserve(static_cast<std::size_t>(reps));
    const long long cap = 200ll * reps + 1000;
    long long attempts = 0;
    const std::size_t block = 64;

    while (accepted.size() < static_cast<std::size_t>(reps)) {
        if (attempts >= cap)
            throw std::runtime_error("estimate_alpha_ratio: acceptance rate too low, giving up");
        std::vector<std::optional<RunSums>> out(block);
        parallel_for_index(block, workers, [&](std::size_t i) {
            const NoiseField f(derive_seed(seed, static_cast<std::uint64_t>(attempts) + i));
            const BreakPointRun run = extract_break_points(f, wp, levels, horizon);
            if (!run.accepted) return;
            RunSums rs;
            for (const auto& rec : run.records) {
                rs.x += rec.x;
                rs.tau += rec.tau;
                ++rs.cnt;
            }
            out[i] = rs;
        });
        attempts += static_cast<long long>(block);
        for (auto& o : out) {
            if (o && accepted.size() < static_cast<std::size_t>(reps)) accepted.push_back(*o);
        }
    }

    RatioEstimate est;
    est.attempts = attempts;
    est.runs = static_cast<long long>(accepted.size());
    double sx = 0, st = 0;
    std::vector<std::pair<double, double>> run_sums;
    run_sums.reserve(accepted.size());
    for (const auto& rs : accepted) {
        sx += rs.x;
        st += rs.tau;
        est.records += rs.cnt;
        run_sums.emplace_back(rs.x, rs.tau);
    }
    if (st == 0.0 || est.records == 0)
        throw std::runtime_error("estimate_alpha_ratio: no regeneration records");
    est.alpha.mean = sx / st;
    est.alpha.std_error = bootstrap_ratio_std_error(run_sums, 400, derive_seed(seed, 0x626f6f74ull));
    est.alpha.reps = accepted.size();
    est.alpha.excluded = static_cast<std::size_t>(est.attempts - est.runs);
    est.kappa_hat = st / static_cast<double>(est.records);
    return est;
}

}  // namespace fpp
