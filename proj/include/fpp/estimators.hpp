#pragma once
// Directional passage-time estimators: time constants along rays, the
// directional f-curve pinned to a frozen speed direction, the flat-edge
// fraction, the speed-gap check, and the one-parameter fit of the excess
// f(p) - a against (p0 - p)^2 / log(1 / (p0 - p)).
//
// Every estimator derives the replicate field for index i from
// derive_seed(seed, i) and nothing else, so estimates at different p that
// share a seed are coupled through identical uniforms: passage times are then
// pointwise monotone in p and curve comparisons are exact, not statistical.

#include <array>
#include <cstdint>
#include <vector>

#include "lattice.hpp"
#include "oriented.hpp"
#include "parallel.hpp"
#include "passage.hpp"
#include "stats.hpp"

namespace fpp {

// numerical estimate of the oriented growth threshold on this lattice
inline constexpr double kDefaultCriticalP = 0.6447;

// Mean of T(round(n * x)) / n over replicate fields.
inline EstimateWithCI estimate_time_constant(std::array<double, 2> x, const WeightParams& wp,
                                             int n, int reps, std::uint64_t seed,
                                             int workers = 0) {
    wp.validate();
    if (n < 1 || reps < 1)
        throw std::invalid_argument("estimate_time_constant: need n, reps >= 1");
    if (!(x[1] > 0.0) || !(std::abs(x[0]) <= x[1]))
        throw std::invalid_argument("estimate_time_constant: direction must satisfy |x| <= y, y > 0");
    const LatticePoint target = nearest_lattice_point(n * x[0], n * x[1]);
    std::vector<double> vals(static_cast<std::size_t>(reps), 0.0);
    parallel_for_index(static_cast<std::size_t>(reps), workers, [&](std::size_t i) {
        const NoiseField f(derive_seed(seed, i));
        vals[i] = first_passage_time(f, wp, target).time / static_cast<double>(n);
    });
    return mean_and_std_error(vals);
}

struct ProbeConfig {
    double a = 1.0;
    double b = 2.0;
    double p0 = 0.8;
    std::vector<double> p_grid;  // strictly ascending, below p0
    int n = 1000;
    int reps = 1000;
    double alpha0 = 0.0;  // frozen speed at p0; fixes the probed direction
    double alpha0_std_error = 0.0;
    std::uint64_t seed = 1;
    double critical_p = kDefaultCriticalP;
    int workers = 0;

    void validate() const {
        WeightParams{a, b, p0}.validate();
        if (n < 1 || reps < 1) throw std::invalid_argument("ProbeConfig: need n, reps >= 1");
        if (!(alpha0 > 0.0 && alpha0 <= 1.0))
            throw std::invalid_argument("ProbeConfig: alpha0 must be frozen in (0, 1]");
        if (!(critical_p > 0.0 && critical_p < 1.0))
            throw std::invalid_argument("ProbeConfig: critical_p outside (0, 1)");
        if (!(p0 > critical_p))
            throw std::invalid_argument("ProbeConfig: p0 must exceed critical_p");
        for (std::size_t i = 0; i < p_grid.size(); ++i) {
            if (!(p_grid[i] > critical_p && p_grid[i] < p0))
                throw std::invalid_argument("ProbeConfig: grid values must lie in (critical_p, p0)");
            if (i > 0 && !(p_grid[i - 1] < p_grid[i]))
                throw std::invalid_argument("ProbeConfig: grid must be strictly ascending");
        }
    }
};

// Mean of T(target) / n toward the frozen direction (alpha0 * n, n).
inline EstimateWithCI estimate_f(const ProbeConfig& cfg, double p) {
    cfg.validate();
    const WeightParams wp{cfg.a, cfg.b, p};
    wp.validate();
    const LatticePoint target = target_point(cfg.alpha0 * cfg.n, cfg.n);
    std::vector<double> vals(static_cast<std::size_t>(cfg.reps), 0.0);
    parallel_for_index(static_cast<std::size_t>(cfg.reps), cfg.workers, [&](std::size_t i) {
        const NoiseField f(derive_seed(cfg.seed, i));
        vals[i] = first_passage_time(f, wp, target).time / static_cast<double>(cfg.n);
    });
    return mean_and_std_error(vals);
}

// Fraction of replicates where the target is reached at the flat passage
// time a * n, i.e. by an all-a upward path.  Shares seeds with estimate_f.
inline EstimateWithCI flat_edge_fraction(const ProbeConfig& cfg, double p, int n) {
    cfg.validate();
    if (n < 1) throw std::invalid_argument("flat_edge_fraction: need n >= 1");
    const WeightParams wp{cfg.a, cfg.b, p};
    wp.validate();
    const LatticePoint target = target_point(cfg.alpha0 * n, n);
    std::vector<std::uint8_t> hit(static_cast<std::size_t>(cfg.reps), 0);
    parallel_for_index(static_cast<std::size_t>(cfg.reps), cfg.workers, [&](std::size_t i) {
        const NoiseField f(derive_seed(cfg.seed, i));
        detail::PackedRow cur, next;
        cur.assign(0, 0, 1);
        cur.set(0);
        for (int k = 1; k <= n; ++k) {
            next.assign(k, -k, k + 1);
            detail::step_row(f, wp, cur, next);
            if (next.empty()) return;
            std::swap(cur, next);
        }
        hit[i] = cur.test((target.m + n) / 2);
    });
    std::size_t hits = 0;
    for (auto h : hit) hits += h;
    return binomial_proportion(hits, static_cast<std::size_t>(cfg.reps));
}

struct GapReport {
    EstimateWithCI alpha_lo, alpha_hi;
    double gap = 0.0;              // alpha_hi.mean - alpha_lo.mean
    double lower_bound = 0.0;      // 2 * (p_hi - p_lo)
    double combined_std_error = 0.0;
    bool holds = false;  // gap >= lower_bound - 3 * combined_std_error
};

// Speed gap between two supercritical densities, with both estimates run on
// the same replicate seeds so the difference is itself pathwise coupled.
inline GapReport gap_check(double a, double b, double p_lo, double p_hi, int n, int reps,
                           std::uint64_t seed, double critical_p = kDefaultCriticalP,
                           int workers = 0) {
    if (!(critical_p < p_lo && p_lo < p_hi && p_hi <= 1.0))
        throw std::invalid_argument("gap_check: need critical_p < p_lo < p_hi <= 1");
    GapReport rep;
    rep.alpha_lo = estimate_alpha_slope(WeightParams{a, b, p_lo}, n, reps, seed, workers);
    rep.alpha_hi = estimate_alpha_slope(WeightParams{a, b, p_hi}, n, reps, seed, workers);
    rep.gap = rep.alpha_hi.mean - rep.alpha_lo.mean;
    rep.lower_bound = 2.0 * (p_hi - p_lo);
    rep.combined_std_error = std::sqrt(rep.alpha_lo.std_error * rep.alpha_lo.std_error +
                                       rep.alpha_hi.std_error * rep.alpha_hi.std_error);
    rep.holds = rep.gap >= rep.lower_bound - 3.0 * rep.combined_std_error;
    return rep;
}

struct HPoint {
    double p = 0.0;
    double h = 0.0;  // f_hat(p) - a
    double std_error = 0.0;
};

struct SingularityFit {
    double delta_hat = 0.0;
    double residual_norm = 0.0;
    std::vector<double> g;                  // regressor (p0-p)^2 / log(1/(p0-p)) per point
    std::vector<std::uint8_t> significant;  // h > 3 * std_error per point
    bool all_significant = true;
};

inline SingularityFit singularity_fit(const ProbeConfig& cfg, const std::vector<HPoint>& pts) {
    if (pts.size() < 2) throw std::invalid_argument("singularity_fit: need at least 2 grid points");
    SingularityFit fit;
    std::vector<double> g, h;
    for (const HPoint& pt : pts) {
        const double d = cfg.p0 - pt.p;
        if (!(d > 0.0 && d < 1.0))
            throw std::invalid_argument("singularity_fit: grid point not below p0");
        g.push_back(d * d / std::log(1.0 / d));
        h.push_back(pt.h);
        const bool sig = pt.h > 3.0 * pt.std_error;
        fit.significant.push_back(sig);
        fit.all_significant = fit.all_significant && sig;
    }
    fit.g = g;
    fit.delta_hat = fit_through_origin(g, h);
    double ss = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = h[i] - fit.delta_hat * g[i];
        ss += r * r;
    }
    fit.residual_norm = std::sqrt(ss);
    return fit;
}

struct ProbeOutcome {
    std::vector<EstimateWithCI> f_grid;  // parallel to cfg.p_grid
    std::vector<HPoint> h_points;
    EstimateWithCI f_at_p0;
    EstimateWithCI flat_fraction_p0;
    SingularityFit fit;
};

// Full probe at a frozen direction: f on the grid, f and the flat fraction
// at p0, and the singular fit of the excess.
inline ProbeOutcome run_probe(const ProbeConfig& cfg) {
    cfg.validate();
    if (cfg.p_grid.size() < 2)
        throw std::invalid_argument("run_probe: need at least 2 grid points");
    ProbeOutcome out;
    for (const double p : cfg.p_grid) {
        const EstimateWithCI e = estimate_f(cfg, p);
        out.f_grid.push_back(e);
        out.h_points.push_back({p, e.mean - cfg.a, e.std_error});
    }
    out.f_at_p0 = estimate_f(cfg, cfg.p0);
    out.flat_fraction_p0 = flat_edge_fraction(cfg, cfg.p0, cfg.n);
    out.fit = singularity_fit(cfg, out.h_points);
    return out;
}

}  // namespace fpp
