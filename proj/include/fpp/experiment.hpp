#pragma once
// Experiment configuration, dispatch and result emission for the command
// line driver.  A run is fully described by an ExperimentConfig; replicate
// seeds derive from (seed, replicate index) alone and rows are emitted in a
// fixed grid order, so rerunning a config byte-identically reproduces the
// output whatever the worker count.  Doubles are printed with 17 significant
// digits in both CSV and JSON.

#include <cstdio>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "estimators.hpp"
#include "lattice.hpp"
#include "oriented.hpp"
#include "passage.hpp"
#include "stats.hpp"
#include "traces.hpp"

namespace fpp {

inline constexpr const char* kVersion = "0.1.0";

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string experiment;  // alpha | fpt | f-curve | tail | breakpoints | traces | probe | oracle
    double a = 1.0;
    double b = 2.0;
    std::vector<double> p_grid{0.75};
    double p0 = 0.8;
    std::vector<long long> n_grid{1000};
    long long horizon = 500;
    long long reps = 200;
    double eps = 0.15;
    std::array<double, 2> x{0.0, 1.0};
    double alpha0 = 0.0;  // 0 = not frozen yet; estimated at p0 when needed
    double alpha0_std_error = 0.0;
    long long alpha_n = 2000;
    long long alpha_reps = 200;
    double delta = 0.4;
    double critical_p = kDefaultCriticalP;
    std::uint64_t seed = 1;
    int workers = 0;  // 0 = FPP_WORKERS or 1
    std::string out;  // empty = stdout
    std::string format = "csv";
};

inline const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{"alpha", "fpt",    "f-curve", "tail",
                                                "breakpoints", "traces", "probe",   "oracle"};
    return names;
}

inline void validate_config(const ExperimentConfig& cfg) {
    bool known = false;
    for (const auto& n : experiment_names()) known = known || n == cfg.experiment;
    if (!known) throw ConfigError("unknown experiment: '" + cfg.experiment + "'");
    try {
        WeightParams{cfg.a, cfg.b, 0.5}.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    if (cfg.p_grid.empty()) throw ConfigError("p_grid must not be empty");
    for (double p : cfg.p_grid)
        if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p values must lie in [0, 1]");
    if (cfg.n_grid.empty()) throw ConfigError("n_grid must not be empty");
    for (long long n : cfg.n_grid)
        if (n < 1) throw ConfigError("n values must be >= 1");
    if (cfg.reps < 1) throw ConfigError("reps must be >= 1");
    if (cfg.horizon < 1) throw ConfigError("horizon must be >= 1");
    if (cfg.alpha_n < 1 || cfg.alpha_reps < 1) throw ConfigError("alpha_n and alpha_reps must be >= 1");
    if (!(cfg.eps > 0.0)) throw ConfigError("eps must be > 0");
    if (!(cfg.delta > 0.0 && cfg.delta < 0.5)) throw ConfigError("delta must lie in (0, 1/2)");
    if (!(cfg.critical_p > 0.0 && cfg.critical_p < 1.0))
        throw ConfigError("critical_p must lie in (0, 1)");
    if (!(cfg.p0 > 0.0 && cfg.p0 <= 1.0)) throw ConfigError("p0 must lie in (0, 1]");
    if (cfg.workers < 0) throw ConfigError("workers must be >= 0");
    if (cfg.format != "csv" && cfg.format != "json")
        throw ConfigError("format must be 'csv' or 'json'");
}

inline nlohmann::json config_to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["experiment"] = c.experiment;
    j["a"] = c.a;
    j["b"] = c.b;
    j["p_grid"] = c.p_grid;
    j["p0"] = c.p0;
    j["n_grid"] = c.n_grid;
    j["horizon"] = c.horizon;
    j["reps"] = c.reps;
    j["eps"] = c.eps;
    j["x"] = c.x;
    j["alpha0"] = c.alpha0;
    j["alpha0_std_error"] = c.alpha0_std_error;
    j["alpha_n"] = c.alpha_n;
    j["alpha_reps"] = c.alpha_reps;
    j["delta"] = c.delta;
    j["critical_p"] = c.critical_p;
    j["seed"] = c.seed;
    j["workers"] = c.workers;
    j["out"] = c.out;
    j["format"] = c.format;
    return j;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    try {
        for (const auto& item : j.items()) {
            const std::string& k = item.key();
            const nlohmann::json& v = item.value();
            if (k == "experiment") c.experiment = v.get<std::string>();
            else if (k == "a") c.a = v.get<double>();
            else if (k == "b") c.b = v.get<double>();
            else if (k == "p_grid") c.p_grid = v.get<std::vector<double>>();
            else if (k == "p0") c.p0 = v.get<double>();
            else if (k == "n_grid") c.n_grid = v.get<std::vector<long long>>();
            else if (k == "horizon") c.horizon = v.get<long long>();
            else if (k == "reps") c.reps = v.get<long long>();
            else if (k == "eps") c.eps = v.get<double>();
            else if (k == "x") c.x = v.get<std::array<double, 2>>();
            else if (k == "alpha0") c.alpha0 = v.get<double>();
            else if (k == "alpha0_std_error") c.alpha0_std_error = v.get<double>();
            else if (k == "alpha_n") c.alpha_n = v.get<long long>();
            else if (k == "alpha_reps") c.alpha_reps = v.get<long long>();
            else if (k == "delta") c.delta = v.get<double>();
            else if (k == "critical_p") c.critical_p = v.get<double>();
            else if (k == "seed") c.seed = v.get<std::uint64_t>();
            else if (k == "workers") c.workers = v.get<int>();
            else if (k == "out") c.out = v.get<std::string>();
            else if (k == "format") c.format = v.get<std::string>();
            else throw ConfigError("unknown config key: '" + k + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    return c;
}

struct ResultRow {
    std::string experiment;
    std::string metric;
    double a = 0.0, b = 0.0;
    std::optional<double> p, p0, alpha0, eps, x0, x1;
    std::optional<long long> n, horizon;
    long long reps = 0;
    long long excluded = 0;
    std::uint64_t seed = 0;
    double estimate = 0.0;
    std::optional<double> std_error;
    std::string version = kVersion;
};

inline constexpr const char* kCsvHeader =
    "experiment,metric,a,b,p,p0,alpha0,eps,x0,x1,n,horizon,reps,excluded,seed,estimate,"
    "std_error,version";

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
inline std::string fmt_opt(const std::optional<double>& v) {
    return v ? fmt_double(*v) : std::string();
}
inline std::string fmt_opt(const std::optional<long long>& v) {
    return v ? std::to_string(*v) : std::string();
}
inline std::string json_opt(const std::optional<double>& v) {
    return v ? fmt_double(*v) : std::string("null");
}
inline std::string json_opt(const std::optional<long long>& v) {
    return v ? std::to_string(*v) : std::string("null");
}

}  // namespace detail

inline void emit_csv(const std::vector<ResultRow>& rows, std::ostream& os) {
    os << kCsvHeader << "\n";
    for (const ResultRow& r : rows) {
        os << r.experiment << ',' << r.metric << ',' << detail::fmt_double(r.a) << ','
           << detail::fmt_double(r.b) << ',' << detail::fmt_opt(r.p) << ','
           << detail::fmt_opt(r.p0) << ',' << detail::fmt_opt(r.alpha0) << ','
           << detail::fmt_opt(r.eps) << ',' << detail::fmt_opt(r.x0) << ','
           << detail::fmt_opt(r.x1) << ',' << detail::fmt_opt(r.n) << ','
           << detail::fmt_opt(r.horizon) << ',' << r.reps << ',' << r.excluded << ',' << r.seed
           << ',' << detail::fmt_double(r.estimate) << ',' << detail::fmt_opt(r.std_error) << ','
           << r.version << "\n";
    }
}

// Same fields as the CSV, one object per row; doubles formatted identically.
inline void emit_json(const std::vector<ResultRow>& rows, std::ostream& os) {
    os << "[\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const ResultRow& r = rows[i];
        os << "  {\"experiment\":\"" << r.experiment << "\",\"metric\":\"" << r.metric
           << "\",\"a\":" << detail::fmt_double(r.a) << ",\"b\":" << detail::fmt_double(r.b)
           << ",\"p\":" << detail::json_opt(r.p) << ",\"p0\":" << detail::json_opt(r.p0)
           << ",\"alpha0\":" << detail::json_opt(r.alpha0) << ",\"eps\":" << detail::json_opt(r.eps)
           << ",\"x0\":" << detail::json_opt(r.x0) << ",\"x1\":" << detail::json_opt(r.x1)
           << ",\"n\":" << detail::json_opt(r.n) << ",\"horizon\":" << detail::json_opt(r.horizon)
           << ",\"reps\":" << r.reps << ",\"excluded\":" << r.excluded << ",\"seed\":" << r.seed
           << ",\"estimate\":" << detail::fmt_double(r.estimate)
           << ",\"std_error\":" << detail::json_opt(r.std_error) << ",\"version\":\"" << r.version
           << "\"}" << (i + 1 < rows.size() ? "," : "") << "\n";
    }
    os << "]\n";
}

// ---- experiment drivers ----------------------------------------------------

namespace detail {

inline ResultRow base_row(const ExperimentConfig& cfg, const std::string& metric) {
    ResultRow r;
    r.experiment = cfg.experiment;
    r.metric = metric;
    r.a = cfg.a;
    r.b = cfg.b;
    r.seed = cfg.seed;
    r.reps = cfg.reps;
    return r;
}

// Frozen speed direction: reuse the configured value when present, otherwise
// estimate it at p0 on a seed stream disjoint from the replicate streams.
inline EstimateWithCI frozen_alpha0(const ExperimentConfig& cfg, double at_p) {
    if (cfg.alpha0 > 0.0) return {cfg.alpha0, cfg.alpha0_std_error, 0, 0};
    const WeightParams wp{cfg.a, cfg.b, at_p};
    return estimate_alpha_slope(wp, static_cast<int>(cfg.alpha_n),
                                static_cast<int>(cfg.alpha_reps),
                                derive_seed(cfg.seed, 0xA1F0ull), cfg.workers);
}

inline ProbeConfig probe_config(const ExperimentConfig& cfg, const EstimateWithCI& alpha0,
                                long long n) {
    ProbeConfig pc;
    pc.a = cfg.a;
    pc.b = cfg.b;
    pc.p0 = cfg.p0;
    pc.n = static_cast<int>(n);
    pc.reps = static_cast<int>(cfg.reps);
    pc.alpha0 = alpha0.mean;
    pc.alpha0_std_error = alpha0.std_error;
    pc.seed = cfg.seed;
    pc.critical_p = cfg.critical_p;
    pc.workers = cfg.workers;
    return pc;
}

inline std::vector<ResultRow> run_alpha(const ExperimentConfig& cfg) {
    std::vector<ResultRow> rows;
    for (double p : cfg.p_grid) {
        const WeightParams wp{cfg.a, cfg.b, p};
        for (long long n : cfg.n_grid) {
            const EstimateWithCI e = estimate_alpha_slope(wp, static_cast<int>(n),
                                                          static_cast<int>(cfg.reps), cfg.seed,
                                                          cfg.workers);
            ResultRow r = base_row(cfg, "alpha_slope");
            r.p = p;
            r.n = n;
            r.excluded = static_cast<long long>(e.excluded);
            r.estimate = e.mean;
            r.std_error = e.std_error;
            rows.push_back(r);

            const RatioEstimate re = estimate_alpha_ratio(wp, static_cast<int>(n),
                                                          static_cast<int>(cfg.horizon),
                                                          static_cast<int>(cfg.reps), cfg.seed,
                                                          cfg.workers);
            ResultRow rr = base_row(cfg, "alpha_ratio");
            rr.p = p;
            rr.n = n;
            rr.horizon = cfg.horizon;
            rr.excluded = static_cast<long long>(re.alpha.excluded);
            rr.estimate = re.alpha.mean;
            rr.std_error = re.alpha.std_error;
            rows.push_back(rr);

            ResultRow rk = base_row(cfg, "kappa");
            rk.p = p;
            rk.n = n;
            rk.horizon = cfg.horizon;
            rk.estimate = re.kappa_hat;
            rows.push_back(rk);
        }
    }
    return rows;
}

inline std::vector<ResultRow> run_fpt(const ExperimentConfig& cfg) {
    std::vector<ResultRow> rows;
    for (double p : cfg.p_grid) {
        const WeightParams wp{cfg.a, cfg.b, p};
        for (long long n : cfg.n_grid) {
            const EstimateWithCI e = estimate_time_constant(cfg.x, wp, static_cast<int>(n),
                                                            static_cast<int>(cfg.reps), cfg.seed,
                                                            cfg.workers);
            ResultRow r = base_row(cfg, "time_constant");
            r.p = p;
            r.n = n;
            r.x0 = cfg.x[0];
            r.x1 = cfg.x[1];
            r.estimate = e.mean;
            r.std_error = e.std_error;
            rows.push_back(r);
        }
    }
    return rows;
}

inline std::vector<ResultRow> run_f_curve(const ExperimentConfig& cfg) {
    std::vector<ResultRow> rows;
    const EstimateWithCI alpha0 = frozen_alpha0(cfg, cfg.p0);
    {
        ResultRow r = base_row(cfg, "alpha0");
        r.p = cfg.p0;
        r.p0 = cfg.p0;
        r.n = cfg.alpha_n;
        r.reps = cfg.alpha_reps;
        r.excluded = static_cast<long long>(alpha0.excluded);
        r.estimate = alpha0.mean;
        r.std_error = alpha0.std_error;
        rows.push_back(r);
    }
    for (long long n : cfg.n_grid) {
        const ProbeConfig pc = probe_config(cfg, alpha0, n);
        for (double p : cfg.p_grid) {
            const EstimateWithCI e = estimate_f(pc, p);
            ResultRow r = base_row(cfg, "f");
            r.p = p;
            r.p0 = cfg.p0;
            r.alpha0 = alpha0.mean;
            r.n = n;
            r.estimate = e.mean;
            r.std_error = e.std_error;
            rows.push_back(r);
        }
        const EstimateWithCI e0 = estimate_f(pc, cfg.p0);
        ResultRow r0 = base_row(cfg, "f");
        r0.p = cfg.p0;
        r0.p0 = cfg.p0;
        r0.alpha0 = alpha0.mean;
        r0.n = n;
        r0.estimate = e0.mean;
        r0.std_error = e0.std_error;
        rows.push_back(r0);

        const EstimateWithCI ff = flat_edge_fraction(pc, cfg.p0, static_cast<int>(n));
        ResultRow rf = base_row(cfg, "flat_fraction");
        rf.p = cfg.p0;
        rf.p0 = cfg.p0;
        rf.alpha0 = alpha0.mean;
        rf.n = n;
        rf.estimate = ff.mean;
        rf.std_error = ff.std_error;
        rows.push_back(rf);
    }
    return rows;
}

inline std::vector<ResultRow> run_tail(const ExperimentConfig& cfg) {
    std::vector<ResultRow> rows;
    const double p = cfg.p_grid.front();
    const EstimateWithCI alpha0 = frozen_alpha0(cfg, p);
    {
        ResultRow r = base_row(cfg, "alpha0");
        r.p = p;
        r.n = cfg.alpha_n;
        r.reps = cfg.alpha_reps;
        r.excluded = static_cast<long long>(alpha0.excluded);
        r.estimate = alpha0.mean;
        r.std_error = alpha0.std_error;
        rows.push_back(r);
    }
    const WeightParams wp{cfg.a, cfg.b, p};
    for (long long n : cfg.n_grid) {
        const EstimateWithCI e = estimate_tail_probability(wp, alpha0.mean, cfg.eps,
                                                           static_cast<int>(n),
                                                           static_cast<int>(cfg.reps), cfg.seed,
                                                           cfg.workers);
        ResultRow r = base_row(cfg, "tail_prob");
        r.p = p;
        r.alpha0 = alpha0.mean;
        r.eps = cfg.eps;
        r.n = n;
        r.excluded = static_cast<long long>(e.excluded);
        r.estimate = e.mean;
        r.std_error = e.std_error;
        rows.push_back(r);
    }
    return rows;
}

inline std::vector<ResultRow> run_breakpoints(const ExperimentConfig& cfg) {
    std::vector<ResultRow> rows;
    for (double p : cfg.p_grid) {
        const WeightParams wp{cfg.a, cfg.b, p};
        for (long long n : cfg.n_grid) {
            const RatioEstimate re = estimate_alpha_ratio(wp, static_cast<int>(n),
                                                          static_cast<int>(cfg.horizon),
                                                          static_cast<int>(cfg.reps), cfg.seed,
                                                          cfg.workers);
            ResultRow r = base_row(cfg, "alpha_ratio");
            r.p = p;
            r.n = n;
            r.horizon = cfg.horizon;
            r.excluded = static_cast<long long>(re.alpha.excluded);
            r.estimate = re.alpha.mean;
            r.std_error = re.alpha.std_error;
            rows.push_back(r);

            ResultRow rk = base_row(cfg, "kappa");
            rk.p = p;
            rk.n = n;
            rk.horizon = cfg.horizon;
            rk.estimate = re.kappa_hat;
            rows.push_back(rk);

            ResultRow ra = base_row(cfg, "acceptance_rate");
            ra.p = p;
            ra.n = n;
            ra.horizon = cfg.horizon;
            ra.estimate =
                static_cast<double>(re.runs) / static_cast<double>(re.attempts > 0 ? re.attempts : 1);
            rows.push_back(ra);
        }
    }
    return rows;
}

inline std::vector<ResultRow> run_traces(const ExperimentConfig& cfg) {
    std::vector<ResultRow> rows;
    const EstimateWithCI alpha0 = frozen_alpha0(cfg, cfg.p0);
    for (double p : cfg.p_grid) {
        const WeightParams wp{cfg.a, cfg.b, p};
        for (long long n : cfg.n_grid) {
            const LatticePoint target = target_point(alpha0.mean * static_cast<double>(n),
                                                     static_cast<int>(n));
            const auto reps = static_cast<std::size_t>(cfg.reps);
            std::vector<double> js(reps), subs(reps), agree(reps), budg(reps), xmass(reps);
            parallel_for_index(reps, cfg.workers, [&](std::size_t i) {
                const NoiseField f(derive_seed(cfg.seed, i));
                const PassageResult res = first_passage_time(f, wp, target);
                const TraceDecomposition d = decompose_path(f, wp, res.geodesic);
                const BudgetReport br = suboptimal_budget_check(f, wp, res.geodesic, d);
                js[i] = d.j;
                subs[i] = static_cast<double>(d.suboptimal_count);
                agree[i] = d.d_opt_consistent ? 1.0 : 0.0;
                budg[i] = br.ok ? 1.0 : 0.0;
                xmass[i] = static_cast<double>(d.x_mass);
            });
            const auto push = [&](const char* metric, const std::vector<double>& v) {
                const EstimateWithCI e = mean_and_std_error(v);
                ResultRow r = base_row(cfg, metric);
                r.p = p;
                r.p0 = cfg.p0;
                r.alpha0 = alpha0.mean;
                r.n = n;
                r.estimate = e.mean;
                r.std_error = e.std_error;
                rows.push_back(r);
            };
            push("j_mean", js);
            push("suboptimal_mean", subs);
            push("d_opt_agree_frac", agree);
            push("budget_ok_frac", budg);
            push("x_mass_mean", xmass);

            if (p < cfg.p0) {
                const KBound kb = k_bound(cfg.a, cfg.b, cfg.delta, cfg.p0, p, n);
                ResultRow r = base_row(cfg, "k_bound");
                r.p = p;
                r.p0 = cfg.p0;
                r.n = n;
                r.estimate = static_cast<double>(kb.value);
                rows.push_back(r);
            }
        }
    }
    return rows;
}

inline std::vector<ResultRow> run_probe_cmd(const ExperimentConfig& cfg) {
    std::vector<ResultRow> rows;
    const EstimateWithCI alpha0 = frozen_alpha0(cfg, cfg.p0);
    {
        ResultRow r = base_row(cfg, "alpha0");
        r.p = cfg.p0;
        r.p0 = cfg.p0;
        r.n = cfg.alpha_n;
        r.reps = cfg.alpha_reps;
        r.excluded = static_cast<long long>(alpha0.excluded);
        r.estimate = alpha0.mean;
        r.std_error = alpha0.std_error;
        rows.push_back(r);
    }
    ProbeConfig pc = probe_config(cfg, alpha0, cfg.n_grid.front());
    pc.p_grid = cfg.p_grid;
    const ProbeOutcome out = run_probe(pc);
    for (std::size_t i = 0; i < pc.p_grid.size(); ++i) {
        ResultRow r = base_row(cfg, "f");
        r.p = pc.p_grid[i];
        r.p0 = cfg.p0;
        r.alpha0 = alpha0.mean;
        r.n = static_cast<long long>(pc.n);
        r.estimate = out.f_grid[i].mean;
        r.std_error = out.f_grid[i].std_error;
        rows.push_back(r);

        ResultRow rh = base_row(cfg, "h_excess");
        rh.p = pc.p_grid[i];
        rh.p0 = cfg.p0;
        rh.alpha0 = alpha0.mean;
        rh.n = static_cast<long long>(pc.n);
        rh.estimate = out.h_points[i].h;
        rh.std_error = out.h_points[i].std_error;
        rows.push_back(rh);
    }
    {
        ResultRow r = base_row(cfg, "f");
        r.p = cfg.p0;
        r.p0 = cfg.p0;
        r.alpha0 = alpha0.mean;
        r.n = static_cast<long long>(pc.n);
        r.estimate = out.f_at_p0.mean;
        r.std_error = out.f_at_p0.std_error;
        rows.push_back(r);

        ResultRow rf = base_row(cfg, "flat_fraction");
        rf.p = cfg.p0;
        rf.p0 = cfg.p0;
        rf.alpha0 = alpha0.mean;
        rf.n = static_cast<long long>(pc.n);
        rf.estimate = out.flat_fraction_p0.mean;
        rf.std_error = out.flat_fraction_p0.std_error;
        rows.push_back(rf);

        ResultRow rd = base_row(cfg, "delta_hat");
        rd.p0 = cfg.p0;
        rd.alpha0 = alpha0.mean;
        rd.n = static_cast<long long>(pc.n);
        rd.estimate = out.fit.delta_hat;
        rows.push_back(rd);

        ResultRow rr = base_row(cfg, "fit_residual");
        rr.p0 = cfg.p0;
        rr.alpha0 = alpha0.mean;
        rr.n = static_cast<long long>(pc.n);
        rr.estimate = out.fit.residual_norm;
        rows.push_back(rr);
    }
    return rows;
}

// Fixed table of small windows (16 edges or fewer) with targets reachable
// inside them; the exhaustive check runs every (window, target) pair for
// every replicate seed.
struct OracleCase {
    Window w;
    LatticePoint target;
};

inline const std::vector<OracleCase>& oracle_cases() {
    static const std::vector<OracleCase> cases{
        {{-2, 2, -2, 2}, {0, 2}},  {{-2, 2, -2, 2}, {2, 2}},  {{-2, 2, -2, 2}, {-2, 2}},
        {{-2, 2, -2, 2}, {1, 1}},  {{-2, 2, -2, 2}, {-1, 1}}, {{0, 4, 0, 4}, {4, 4}},
        {{0, 4, 0, 4}, {0, 4}},    {{0, 4, 0, 4}, {2, 2}},    {{-1, 3, 0, 2}, {3, 1}},
        {{-1, 3, 0, 2}, {1, 1}},   {{-3, 1, 0, 2}, {-3, 1}},  {{-1, 1, 0, 4}, {0, 4}},
    };
    return cases;
}

inline std::vector<ResultRow> run_oracle(const ExperimentConfig& cfg) {
    std::vector<ResultRow> rows;
    for (double p : cfg.p_grid) {
        const WeightParams wp{cfg.a, cfg.b, p};
        long long mismatches = 0, checks = 0;
        for (long long i = 0; i < cfg.reps; ++i) {
            const NoiseField f(derive_seed(cfg.seed, static_cast<std::uint64_t>(i)));
            for (const OracleCase& oc : oracle_cases()) {
                const double solver = passage_in_window(f, wp, oc.target, oc.w).time;
                const double brute = brute_force_passage_time(f, wp, oc.target, oc.w);
                ++checks;
                if (solver != brute) ++mismatches;
            }
        }
        ResultRow r = base_row(cfg, "oracle_mismatch");
        r.p = p;
        r.reps = checks;
        r.estimate = static_cast<double>(mismatches);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace detail

inline std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
    validate_config(cfg);
    if (cfg.experiment == "alpha") return detail::run_alpha(cfg);
    if (cfg.experiment == "fpt") return detail::run_fpt(cfg);
    if (cfg.experiment == "f-curve") return detail::run_f_curve(cfg);
    if (cfg.experiment == "tail") return detail::run_tail(cfg);
    if (cfg.experiment == "breakpoints") return detail::run_breakpoints(cfg);
    if (cfg.experiment == "traces") return detail::run_traces(cfg);
    if (cfg.experiment == "probe") return detail::run_probe_cmd(cfg);
    if (cfg.experiment == "oracle") return detail::run_oracle(cfg);
    throw ConfigError("unknown experiment: '" + cfg.experiment + "'");
}

inline void emit_rows(const std::vector<ResultRow>& rows, const ExperimentConfig& cfg,
                      std::ostream& os) {
    if (cfg.format == "json")
        emit_json(rows, os);
    else
        emit_csv(rows, os);
}

}  // namespace fpp
