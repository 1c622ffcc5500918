#pragma once
// Small estimation helpers shared by the experiment drivers: sample mean with
// standard error, binomial proportions, least squares, and a bootstrap for
// ratio statistics.  The bootstrap uses its own deterministic generator so
// results never depend on platform library internals.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lattice.hpp"

namespace fpp {

struct EstimateWithCI {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t reps = 0;      // samples that entered the estimate
    std::size_t excluded = 0;  // rejected / extinct / invalid replicates

    double lower(double z = 3.0) const { return mean - z * std_error; }
    double upper(double z = 3.0) const { return mean + z * std_error; }
};

inline EstimateWithCI mean_and_std_error(const std::vector<double>& xs) {
    EstimateWithCI e;
    e.reps = xs.size();
    if (xs.empty()) return e;
    double s = 0.0;
    for (double x : xs) s += x;
    e.mean = s / static_cast<double>(xs.size());
    if (xs.size() < 2) return e;
    double ss = 0.0;
    for (double x : xs) {
        const double d = x - e.mean;
        ss += d * d;
    }
    const auto n = static_cast<double>(xs.size());
    e.std_error = std::sqrt(ss / (n - 1.0) / n);
    return e;
}

inline EstimateWithCI binomial_proportion(std::size_t hits, std::size_t n) {
    EstimateWithCI e;
    e.reps = n;
    if (n == 0) return e;
    const double ph = static_cast<double>(hits) / static_cast<double>(n);
    e.mean = ph;
    e.std_error = std::sqrt(ph * (1.0 - ph) / static_cast<double>(n));
    return e;
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

inline LineFit least_squares_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("least_squares_line: need >= 2 paired points");
    const auto n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double den = n * sxx - sx * sx;
    if (den == 0.0) throw std::invalid_argument("least_squares_line: degenerate x values");
    LineFit f;
    f.slope = (n * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

// One-parameter least squares for h ~ delta * g through the origin.
inline double fit_through_origin(const std::vector<double>& g, const std::vector<double>& h) {
    if (g.size() != h.size() || g.empty())
        throw std::invalid_argument("fit_through_origin: need paired points");
    double num = 0, den = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        num += g[i] * h[i];
        den += g[i] * g[i];
    }
    if (den == 0.0) throw std::invalid_argument("fit_through_origin: all g are zero");
    return num / den;
}

// Plain SplitMix64 stream; used where a sequential generator is wanted
// (bootstrap resampling), never for edge noise.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        state_ += detail::golden64;
        return detail::mix64(state_);
    }
    double next_unit() { return detail::unit_from_bits(next()); }
    // unbiased integer in [0, bound) by rejection
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % bound;
    }

  private:
    std::uint64_t state_;
};

// Standard error of sum(num)/sum(den) under resampling whole runs.
inline double bootstrap_ratio_std_error(const std::vector<std::pair<double, double>>& run_sums,
                                        int resamples, std::uint64_t seed) {
    if (run_sums.size() < 2 || resamples < 2) return 0.0;
    SplitMix64 rng(detail::mix64(seed ^ 0xB0075EED5EEDB007ull));
    std::vector<double> stats;
    stats.reserve(static_cast<std::size_t>(resamples));
    const auto r = run_sums.size();
    for (int it = 0; it < resamples; ++it) {
        double num = 0, den = 0;
        for (std::size_t j = 0; j < r; ++j) {
            const auto& rs = run_sums[rng.next_below(r)];
            num += rs.first;
            den += rs.second;
        }
        if (den != 0.0) stats.push_back(num / den);
    }
    if (stats.size() < 2) return 0.0;
    const EstimateWithCI e = mean_and_std_error(stats);
    return e.std_error * std::sqrt(static_cast<double>(stats.size()));
}

}  // namespace fpp
