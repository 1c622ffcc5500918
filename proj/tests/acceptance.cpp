// Acceptance harness.  One criterion per invocation:
//
//   fpp_acceptance --criterion N [--cli PATH]
//
// prints a single line "criterion NN name: PASS/FAIL (detail; elapsed)" and
// exits 0 on pass, 1 on fail.  --criterion 0 runs everything.  The CLI path
// is only needed by the determinism criterion.  Every tolerance is written
// out literally at its point of use.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <fpp/experiment.hpp>

using namespace fpp;

namespace {

constexpr std::uint64_t kSeed = 0x5CA1AB1E2024ull;

std::string g_cli;

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point start = clock::now();
    return std::chrono::duration<double>(clock::now() - start).count();
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// ---- 1: solver equals exhaustive search on every tiny window ---------------

bool c01_oracle_equivalence(std::string& d) {
    const double t0 = now_seconds();
    long long checks = 0, mismatches = 0;
    for (const double p : {0.3, 0.7}) {
        const WeightParams wp{1.0, 2.0, p};
        for (int s = 0; s < 500; ++s) {
            const NoiseField f(derive_seed(kSeed, 1000 + static_cast<std::uint64_t>(s)));
            for (const auto& oc : detail::oracle_cases()) {
                const double solver = passage_in_window(f, wp, oc.target, oc.w).time;
                const double brute = brute_force_passage_time(f, wp, oc.target, oc.w);
                ++checks;
                if (solver != brute) ++mismatches;
            }
        }
    }
    const double secs = now_seconds() - t0;
    d = std::to_string(checks) + " checks, " + std::to_string(mismatches) + " mismatches, " +
        num(secs) + "s";
    return mismatches == 0 && secs < 60.0;
}

// ---- 2: closed forms at p = 1 and p = 0 ------------------------------------

bool c02_degenerate_exactness(std::string& d) {
    const WeightParams all_a{1.0, 2.0, 1.0};
    const WeightParams all_b{1.0, 2.0, 0.0};
    bool ok = true;
    std::string why;

    const EstimateWithCI sp = estimate_alpha_slope(all_a, 400, 50, derive_seed(kSeed, 2001));
    if (!(sp.mean == 1.0 && sp.std_error == 0.0 && sp.excluded == 0)) {
        ok = false;
        why += " slope!=1;";
    }

    const NoiseField fa(derive_seed(kSeed, 2002));
    for (int n = 1; n <= 1000 && ok; ++n) {
        if (first_passage_time(fa, all_a, {n, n}).time != 1.0 * n ||
            first_passage_time(fa, all_a, {-n, n}).time != 1.0 * n) {
            ok = false;
            why += " diagonal(" + std::to_string(n) + ");";
        }
    }

    ProbeConfig pc;
    pc.p0 = 0.8;
    pc.alpha0 = 1.0;
    pc.n = 500;
    pc.reps = 50;
    pc.seed = derive_seed(kSeed, 2003);
    const EstimateWithCI flat = flat_edge_fraction(pc, 1.0, 500);
    if (flat.mean != 1.0) {
        ok = false;
        why += " flat!=1;";
    }

    const NoiseField fb(derive_seed(kSeed, 2004));
    for (int k = 1; k <= 100 && ok; ++k) {
        if (first_passage_time(fb, all_b, {0, 2 * k}).time != 2.0 * all_b.b * k) {
            ok = false;
            why += " vertical(" + std::to_string(k) + ");";
        }
    }

    d = ok ? "speed, diagonals to n=1000, flat fraction, all-b verticals all exact" : why;
    return ok;
}

// ---- 3: doubling the safety window never changes the time ------------------

bool c03_window_sufficiency(std::string& d) {
    SplitMix64 rng(derive_seed(kSeed, 3000));
    const double ps[] = {0.3, 0.5, 0.75, 0.9};
    int agree = 0;
    for (int i = 0; i < 200; ++i) {
        const WeightParams wp{1.0, 2.0, ps[i % 4]};
        const int n = 1 + static_cast<int>(rng.next_below(40));
        const int m = -n + 2 * static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n) + 1));
        const LatticePoint target{m, n};
        const NoiseField f(derive_seed(kSeed, 3100 + static_cast<std::uint64_t>(i)));
        const Window w1 = safety_window(target, wp);
        const double t1 = passage_in_window(f, wp, target, w1).time;
        const double t2 = passage_in_window(f, wp, target, Window::box(2 * w1.m_max)).time;
        if (t1 == t2) ++agree;
    }
    d = std::to_string(agree) + "/200 triples unchanged";
    return agree == 200;
}

// ---- 4: shared-seed monotonicity in p --------------------------------------

bool c04_coupling_monotonicity(std::string& d) {
    const double grid[] = {0.5, 0.6, 0.7, 0.8, 0.9};
    const LatticePoint target = target_point(0.3 * 40, 40);
    long long t_checks = 0, t_bad = 0, r_checks = 0, r_bad = 0;
    for (int s = 0; s < 100; ++s) {
        const NoiseField f(derive_seed(kSeed, 4000 + static_cast<std::uint64_t>(s)));
        double prev = std::numeric_limits<double>::infinity();
        for (const double p : grid) {
            const double t = first_passage_time(f, WeightParams{1.0, 2.0, p}, target).time;
            ++t_checks;
            if (!(t <= prev)) ++t_bad;
            prev = t;
        }
        std::vector<HalfLineTrace> tr;
        for (const double p : grid)
            tr.push_back(halfline_right_edge(f, WeightParams{1.0, 2.0, p}, 60));
        for (std::size_t i = 0; i + 1 < tr.size(); ++i) {
            const HalfLineTrace& lo = tr[i];
            const HalfLineTrace& hi = tr[i + 1];
            const std::size_t common = std::min(lo.r.size(), hi.r.size());
            for (std::size_t k = 0; k < common; ++k) {
                ++r_checks;
                if (lo.r[k] > hi.r[k]) ++r_bad;
            }
            ++r_checks;
            if (hi.extinct && !(lo.extinct && lo.extinct_level <= hi.extinct_level)) ++r_bad;
        }
    }
    d = std::to_string(t_checks) + " time and " + std::to_string(r_checks) +
        " right-edge comparisons, " + std::to_string(t_bad + r_bad) + " violations";
    return t_bad == 0 && r_bad == 0;
}

// ---- 5: regeneration increment identities ----------------------------------

bool c05_regeneration_structure(std::string& d) {
    const WeightParams wp{1.0, 2.0, 0.8};
    const int N = 2000, H = 500, want = 200;
    SplitMix64 pick(derive_seed(kSeed, 5005));
    long long attempts = 0, records = 0, bad = 0, covered = 0;
    int accepted = 0;
    while (accepted < want) {
        if (attempts > 3000) {
            d = "acceptance rate collapsed after " + std::to_string(attempts) + " attempts";
            return false;
        }
        const NoiseField f(derive_seed(kSeed, 5100 + static_cast<std::uint64_t>(attempts)));
        ++attempts;
        const BreakPointRun run = extract_break_points(f, wp, N, H);
        if (!run.accepted) continue;
        ++accepted;

        if (!(run.r[0] == 0 && run.is_break[0] == 1)) ++bad;
        long long stau = 0, sx = 0;
        int prev = 0;
        for (const BreakPointRecord& rec : run.records) {
            ++records;
            stau += rec.tau;
            sx += rec.x;
            if (!(rec.level > prev && rec.tau == rec.level - prev)) ++bad;
            if (std::llabs(rec.x) > rec.tau) ++bad;
            if (!run.is_break[static_cast<std::size_t>(rec.level)]) ++bad;
            prev = rec.level;
        }
        if (!run.records.empty()) {
            const int last = run.records.back().level;
            if (stau != last) ++bad;
            if (sx != run.r[static_cast<std::size_t>(last)]) ++bad;
        }

        const RegenReport rep = regeneration_inequality_check(run);
        covered += rep.checked;
        if (rep.holds != rep.checked) ++bad;

        // spot dual route: the break flag equals a fresh survival run
        for (int probe = 0; probe < 2; ++probe) {
            const int n = static_cast<int>(pick.next_below(static_cast<std::uint64_t>(N) + 1));
            const bool direct =
                survives_to_horizon(f, wp, {run.r[static_cast<std::size_t>(n)], n}, H);
            if (direct != (run.is_break[static_cast<std::size_t>(n)] != 0)) ++bad;
        }
    }
    d = std::to_string(accepted) + " runs / " + std::to_string(attempts) + " attempts, " +
        std::to_string(records) + " records, " + std::to_string(covered) + " covered levels, " +
        std::to_string(bad) + " violations";
    return bad == 0;
}

// ---- 6: ratio and slope estimators agree -----------------------------------

bool c06_ratio_vs_slope(std::string& d) {
    bool ok = true;
    std::string parts;
    for (const double p : {0.75, 0.85}) {
        const WeightParams wp{1.0, 2.0, p};
        const std::uint64_t tag = p == 0.75 ? 6100 : 6200;
        const EstimateWithCI slope = estimate_alpha_slope(wp, 2000, 200, derive_seed(kSeed, tag));
        const RatioEstimate ratio =
            estimate_alpha_ratio(wp, 2000, 500, 200, derive_seed(kSeed, tag + 1));
        const double diff = std::abs(ratio.alpha.mean - slope.mean);
        const double tol = 3.0 * std::sqrt(slope.std_error * slope.std_error +
                                           ratio.alpha.std_error * ratio.alpha.std_error);
        if (!(diff <= tol)) ok = false;
        parts += " p=" + num(p) + ": slope=" + num(slope.mean) + " ratio=" + num(ratio.alpha.mean) +
                 " diff=" + num(diff) + " tol=" + num(tol) + ";";
    }
    d = parts;
    return ok;
}

// ---- 7: overshoot probability decays with n --------------------------------

bool c07_tail_decay_trend(std::string& d) {
    const WeightParams wp{1.0, 2.0, 0.75};
    const EstimateWithCI alpha = estimate_alpha_slope(wp, 2000, 200, derive_seed(kSeed, 7000));
    const std::vector<int> ns{100, 200, 400, 800};
    const int reps = 10000;
    std::vector<EstimateWithCI> tail;
    for (const int n : ns)
        tail.push_back(estimate_tail_probability(wp, alpha.mean, 0.15, n, reps,
                                                 derive_seed(kSeed, 7100)));
    bool mono = true;
    for (std::size_t i = 0; i + 1 < tail.size(); ++i) {
        const double slack = 3.0 * std::sqrt(tail[i].std_error * tail[i].std_error +
                                             tail[i + 1].std_error * tail[i + 1].std_error);
        if (!(tail[i + 1].mean <= tail[i].mean + slack)) mono = false;
    }
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        xs.push_back(static_cast<double>(ns[i]));
        // zero hits would put the log at infinity; floor at half a hit
        ys.push_back(-std::log(std::max(tail[i].mean, 0.5 / reps)));
    }
    const LineFit fit = least_squares_line(xs, ys);
    std::string parts = "alpha=" + num(alpha.mean) + " P=";
    for (const auto& t : tail) parts += num(t.mean) + ",";
    parts += " slope=" + num(fit.slope);
    d = parts;
    return mono && fit.slope > 0.0;
}

// ---- 8: well-separated densities give a speed gap --------------------------

bool c08_speed_gap(std::string& d) {
    const GapReport rep = gap_check(1.0, 2.0, 0.75, 0.85, 4000, 400, derive_seed(kSeed, 8000));
    d = "alpha(0.75)=" + num(rep.alpha_lo.mean) + " alpha(0.85)=" + num(rep.alpha_hi.mean) +
        " gap=" + num(rep.gap) + " bound=" + num(rep.lower_bound) +
        " se=" + num(rep.combined_std_error);
    return rep.holds;
}

// ---- 9: flat fraction stabilises and bounds the excess ---------------------

bool c09_flat_edge_trend(std::string& d) {
    const WeightParams wp{1.0, 2.0, 0.8};
    const EstimateWithCI alpha = estimate_alpha_slope(wp, 2000, 200, derive_seed(kSeed, 9000));
    ProbeConfig pc;
    pc.p0 = 0.8;
    pc.alpha0 = alpha.mean;
    pc.alpha0_std_error = alpha.std_error;
    pc.seed = derive_seed(kSeed, 9001);

    pc.n = 1000;
    pc.reps = 2000;
    const EstimateWithCI flat_big = flat_edge_fraction(pc, 0.8, 1000);
    const EstimateWithCI flat_small = flat_edge_fraction(pc, 0.8, 100);
    const double slack = 3.0 * std::sqrt(flat_big.std_error * flat_big.std_error +
                                         flat_small.std_error * flat_small.std_error);
    const bool trend = flat_big.mean >= flat_small.mean - slack;

    pc.reps = 300;
    const EstimateWithCI fhat = estimate_f(pc, 0.8);
    const EstimateWithCI flat_same = flat_edge_fraction(pc, 0.8, 1000);
    const bool identity = fhat.mean - 1.0 <= (2.0 - 1.0) * (1.0 - flat_same.mean) + 1e-12;

    d = "alpha0=" + num(alpha.mean) + " flat(100)=" + num(flat_small.mean) +
        " flat(1000)=" + num(flat_big.mean) + " slack=" + num(slack) + " f-a=" +
        num(fhat.mean - 1.0) + " cap=" + num(1.0 - flat_same.mean);
    return trend && identity;
}

// ---- 10: the excess is real below p0 and shrinks toward it -----------------

bool c10_singularity_direction(std::string& d) {
    const WeightParams wp{1.0, 2.0, 0.8};
    const EstimateWithCI alpha = estimate_alpha_slope(wp, 2000, 200, derive_seed(kSeed, 10000));
    ProbeConfig pc;
    pc.p0 = 0.8;
    pc.p_grid = {0.65, 0.70, 0.75};
    pc.n = 1000;
    pc.reps = 1000;
    pc.alpha0 = alpha.mean;
    pc.alpha0_std_error = alpha.std_error;
    pc.seed = derive_seed(kSeed, 10001);
    const ProbeOutcome out = run_probe(pc);

    const HPoint& mid = out.h_points[1];  // p = p0 - 0.1
    const bool significant = mid.h > 3.0 * mid.std_error;
    const bool mono = out.f_grid[0].mean >= out.f_grid[1].mean &&
                      out.f_grid[1].mean >= out.f_grid[2].mean &&
                      out.f_grid[2].mean >= out.f_at_p0.mean;
    const bool positive = out.fit.delta_hat > 0.0;

    d = "h(0.70)=" + num(mid.h) + " se=" + num(mid.std_error) + " f=" +
        num(out.f_grid[0].mean) + "," + num(out.f_grid[1].mean) + "," +
        num(out.f_grid[2].mean) + "," + num(out.f_at_p0.mean) +
        " delta_hat=" + num(out.fit.delta_hat);
    return significant && mono && positive;
}

// ---- 11: every sampled geodesic decomposes cleanly -------------------------

bool c11_trace_suite(std::string& d) {
    SplitMix64 rng(derive_seed(kSeed, 11000));
    const int n = 500;
    // sampling direction sits just outside the growth cone of each density so
    // the decomposition operates in its intended regime; speed knots measured
    // once at n=2000 and pinned
    const auto speed = [](double p) {
        if (p <= 0.75) return 0.304 + (p - 0.70) * (0.453 - 0.304) / 0.05;
        return 0.453 + (p - 0.75) * (0.581 - 0.453) / 0.05;
    };
    long long bad_disjoint = 0, bad_j = 0, bad_dopt = 0, bad_retained = 0, bad_budget = 0,
              bad_count = 0, bad_range = 0;
    for (int s = 0; s < 1000; ++s) {
        const double p = 0.7 + 0.1 * rng.next_unit();
        const WeightParams wp{1.0, 2.0, p};
        const LatticePoint target = target_point((speed(p) + 0.05) * n, n);
        const NoiseField f(derive_seed(kSeed, 11100 + static_cast<std::uint64_t>(s)));
        const PassageResult res = first_passage_time(f, wp, target);
        const TraceDecomposition dec = decompose_path(f, wp, res.geodesic);

        for (std::size_t i = 0; i + 1 < dec.x_intervals.size(); ++i)
            if (!(dec.x_intervals[i].hi < dec.x_intervals[i + 1].lo)) ++bad_disjoint;
        if (res.time < 2.0 * wp.a * n)
            for (const Interval& iv : dec.x_intervals)
                if (iv.lo < -2 * n || iv.hi > 2 * n) ++bad_range;
        if (std::abs(dec.j1 - dec.j2) > 1) ++bad_j;
        if (!dec.d_opt_consistent) ++bad_dopt;
        if (dec.j1 > dec.suboptimal_count) ++bad_count;
        for (std::size_t i = 0; i < dec.retained.size(); ++i) {
            if (!dec.retained[i]) continue;
            const LatticePoint u = res.geodesic.vertices[i];
            const LatticePoint v = res.geodesic.vertices[i + 1];
            if (v.n != u.n + 1 || !is_a_edge(f, res.geodesic.edge(i), wp)) ++bad_retained;
        }
        if (!suboptimal_budget_check(f, wp, res.geodesic, dec).ok) ++bad_budget;
    }
    d = "1000 geodesics; violations: disjoint=" + std::to_string(bad_disjoint) +
        " range=" + std::to_string(bad_range) + " |j1-j2|=" + std::to_string(bad_j) +
        " d_opt=" + std::to_string(bad_dopt) + " retained=" + std::to_string(bad_retained) +
        " budget=" + std::to_string(bad_budget) + " j1<=k=" + std::to_string(bad_count);
    return bad_disjoint + bad_j + bad_dopt + bad_retained + bad_budget + bad_count + bad_range ==
           0;
}

// ---- 12: entropy identities and the binomial bound -------------------------

bool c12_combinatorial_bounds(std::string& d) {
    long long bad = 0, pairs = 0;
    for (long long u = 1; u <= 60; ++u)
        for (long long v = 0; v <= u; ++v) {
            ++pairs;
            if (!entropy_binomial_check(u, v)) ++bad;
        }

    if (std::abs(entropy(0.5) - std::log(2.0)) > 1e-12) ++bad;
    for (int i = 1; i < 100; ++i) {
        const double x = i / 100.0;
        if (std::abs(entropy(x) - entropy(1.0 - x)) > 1e-12) ++bad;
    }

    // H(x) <= 2x log(1/x) holds on (0, 1/2], equality at 1/2
    std::vector<double> grid;
    for (double x = 1e-4; x < 0.01; x *= 1.5) grid.push_back(x);
    for (double x = 0.01; x < 0.4999; x += 0.005) grid.push_back(x);
    grid.push_back(0.5);
    long long grid_bad = 0;
    for (const double x : grid)
        if (!(entropy(x) <= 2.0 * x * std::log(1.0 / x) + 1e-12)) ++grid_bad;
    bad += grid_bad;

    d = std::to_string(pairs) + " binomial pairs, entropy grid to x0=0.5, " +
        std::to_string(bad) + " violations";
    return bad == 0;
}

// ---- 13: byte-identical outputs whatever the worker count ------------------

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool run_cli(const std::string& args) {
    const std::string cmd = g_cli + " " + args + " 2>/dev/null";
    return std::system(cmd.c_str()) == 0;
}

bool c13_determinism(std::string& d) {
    if (g_cli.empty()) {
        d = "no --cli path given";
        return false;
    }
    struct Job {
        const char* name;
        std::string args;
        std::vector<int> workers;
    };
    const std::vector<Job> jobs = {
        {"alpha", "alpha --p 0.8 --n 300 --horizon 80 --reps 24 --seed 99", {1, 4, 1}},
        {"fpt", "fpt --p 0.75 --n 100 --x 0.25 1.0 --reps 30 --seed 3", {1, 2, 1}},
        {"probe",
         "probe --p 0.7 --p 0.75 --p0 0.8 --n 200 --reps 40 --alpha0 0.55 --seed 7 --format json",
         {1, 3, 1}},
    };
    bool ok = true;
    std::string parts;
    int idx = 0;
    for (const Job& job : jobs) {
        std::vector<std::string> outs;
        for (const int w : job.workers) {
            const std::string path = "acc13_" + std::to_string(idx++) + ".out";
            if (!run_cli(job.args + " --workers " + std::to_string(w) + " --out " + path)) {
                d = std::string(job.name) + " exited nonzero";
                return false;
            }
            outs.push_back(slurp(path));
            std::remove(path.c_str());
        }
        const bool same = !outs[0].empty() && outs[0] == outs[1] && outs[1] == outs[2];
        if (!same) ok = false;
        parts += std::string(job.name) + (same ? " stable " : " DIFFERS ") + "(" +
                 std::to_string(outs[0].size()) + " bytes); ";
    }
    d = parts;
    return ok;
}

struct Criterion {
    const char* name;
    bool (*fn)(std::string&);
};

const Criterion kCriteria[] = {
    {"oracle_equivalence", c01_oracle_equivalence},
    {"degenerate_exactness", c02_degenerate_exactness},
    {"window_sufficiency", c03_window_sufficiency},
    {"coupling_monotonicity", c04_coupling_monotonicity},
    {"regeneration_structure", c05_regeneration_structure},
    {"ratio_vs_slope", c06_ratio_vs_slope},
    {"tail_decay_trend", c07_tail_decay_trend},
    {"speed_gap", c08_speed_gap},
    {"flat_edge_trend", c09_flat_edge_trend},
    {"singularity_direction", c10_singularity_direction},
    {"trace_suite", c11_trace_suite},
    {"combinatorial_bounds", c12_combinatorial_bounds},
    {"determinism", c13_determinism},
};

int run_one(int idx) {
    const Criterion& c = kCriteria[idx - 1];
    std::string detail;
    bool ok = false;
    const double t0 = now_seconds();
    try {
        ok = c.fn(detail);
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %02d %s: %s (%s; %.1fs)\n", idx, c.name, ok ? "PASS" : "FAIL",
                detail.c_str(), now_seconds() - t0);
    std::fflush(stdout);
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    int criterion = -1;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--criterion" && i + 1 < argc)
            criterion = std::atoi(argv[++i]);
        else if (a == "--cli" && i + 1 < argc)
            g_cli = argv[++i];
    }
    if (criterion < 0 || criterion > 13) {
        std::fprintf(stderr, "usage: fpp_acceptance --criterion N [--cli PATH]  (N=0 runs all)\n");
        return 2;
    }
    if (criterion > 0) return run_one(criterion);
    int rc = 0;
    for (int i = 1; i <= 13; ++i) rc |= run_one(i);
    return rc;
}
