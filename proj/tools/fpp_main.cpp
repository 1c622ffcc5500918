// Command line driver: one subcommand per experiment, a JSON config as the
// base layer and explicit flags overriding individual fields.  Exit codes:
// 0 success, 2 configuration problem, 3 runtime failure.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include <fpp/experiment.hpp>

namespace {

struct Overrides {
    double a = 0, b = 0, p0 = 0, eps = 0, alpha0 = 0, alpha0_se = 0, delta = 0, critical_p = 0;
    std::vector<double> p;
    std::vector<long long> n;
    std::array<double, 2> x{0.0, 1.0};
    long long horizon = 0, reps = 0, alpha_n = 0, alpha_reps = 0;
    std::uint64_t seed = 0;
    int workers = 0;
    std::string out, format;
};

fpp::ExperimentConfig load_base_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw fpp::ConfigError("cannot read config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::exception& e) {
        throw fpp::ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return fpp::config_from_json(j);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-valued first passage percolation toolkit"};
    app.require_subcommand(1);

    Overrides ov;
    std::string config_path;

    const std::vector<std::pair<const char*, const char*>> subs = {
        {"alpha", "right-edge speed: slope and regeneration-ratio estimators"},
        {"fpt", "passage-time constant along a fixed direction"},
        {"f-curve", "directional passage times toward the frozen speed direction"},
        {"tail", "probability that the right edge outruns its speed by eps"},
        {"breakpoints", "regeneration increments and their pooled ratio"},
        {"traces", "geodesic trace decomposition statistics"},
        {"probe", "near-critical excess of the directional constant, with fit"},
        {"oracle", "solver versus exhaustive search on tiny windows"},
    };
    for (const auto& [name, desc] : subs) {
        CLI::App* s = app.add_subcommand(name, desc);
        s->add_option("--config", config_path, "JSON config file; flags override its fields");
        s->add_option("--a", ov.a, "cheap edge weight");
        s->add_option("--b", ov.b, "expensive edge weight");
        s->add_option("--p", ov.p, "density grid (repeatable)");
        s->add_option("--p0", ov.p0, "reference density");
        s->add_option("--n", ov.n, "level grid (repeatable)");
        s->add_option("--horizon", ov.horizon, "validation depth for regeneration levels");
        s->add_option("--reps", ov.reps, "replicates per grid point");
        s->add_option("--eps", ov.eps, "tail offset above the speed");
        s->add_option("--x", ov.x, "direction as two reals: column, level");
        s->add_option("--alpha0", ov.alpha0, "frozen direction speed; skips the freeze stage");
        s->add_option("--alpha0-se", ov.alpha0_se, "standard error of the frozen speed");
        s->add_option("--alpha-n", ov.alpha_n, "levels used when freezing the speed");
        s->add_option("--alpha-reps", ov.alpha_reps, "replicates used when freezing the speed");
        s->add_option("--delta", ov.delta, "budget parameter for the strip-count cap");
        s->add_option("--critical-p", ov.critical_p, "oriented growth threshold");
        s->add_option("--seed", ov.seed, "experiment seed");
        s->add_option("--workers", ov.workers, "worker threads (default FPP_WORKERS or 1)");
        s->add_option("--out", ov.out, "output path (default stdout)");
        s->add_option("--format", ov.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        fpp::ExperimentConfig cfg;
        if (!config_path.empty()) cfg = load_base_config(config_path);

        CLI::App* sub = app.get_subcommands().front();
        cfg.experiment = sub->get_name();
        const auto given = [&](const char* name) { return sub->get_option(name)->count() > 0; };
        if (given("--a")) cfg.a = ov.a;
        if (given("--b")) cfg.b = ov.b;
        if (given("--p")) cfg.p_grid = ov.p;
        if (given("--p0")) cfg.p0 = ov.p0;
        if (given("--n")) cfg.n_grid = ov.n;
        if (given("--horizon")) cfg.horizon = ov.horizon;
        if (given("--reps")) cfg.reps = ov.reps;
        if (given("--eps")) cfg.eps = ov.eps;
        if (given("--x")) cfg.x = ov.x;
        if (given("--alpha0")) cfg.alpha0 = ov.alpha0;
        if (given("--alpha0-se")) cfg.alpha0_std_error = ov.alpha0_se;
        if (given("--alpha-n")) cfg.alpha_n = ov.alpha_n;
        if (given("--alpha-reps")) cfg.alpha_reps = ov.alpha_reps;
        if (given("--delta")) cfg.delta = ov.delta;
        if (given("--critical-p")) cfg.critical_p = ov.critical_p;
        if (given("--seed")) cfg.seed = ov.seed;
        if (given("--workers")) cfg.workers = ov.workers;
        if (given("--out")) cfg.out = ov.out;
        if (given("--format")) cfg.format = ov.format;

        fpp::validate_config(cfg);
        const std::vector<fpp::ResultRow> rows = fpp::run_experiment(cfg);

        if (cfg.out.empty()) {
            fpp::emit_rows(rows, cfg, std::cout);
        } else {
            std::ofstream os(cfg.out, std::ios::binary);
            if (!os) throw std::runtime_error("cannot open output path: " + cfg.out);
            fpp::emit_rows(rows, cfg, os);
            if (!os) throw std::runtime_error("write failed: " + cfg.out);
        }
        std::cerr << cfg.experiment << ": " << rows.size() << " rows\n";
        return 0;
    } catch (const fpp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
