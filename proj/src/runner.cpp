#include "geomconc/runner.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "geomconc/concentration.hpp"

namespace geomconc {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_u64(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%" PRIu64, v);
    return buf;
}

std::string echo_block(const std::string& subcommand, const ExperimentConfig& cfg) {
    char hash[20];
    std::snprintf(hash, sizeof(hash), "%016" PRIx64, cfg.hash());
    std::ostringstream os;
    os << "# geomconc " << kVersion << "\n";
    os << "# subcommand: " << subcommand << "\n";
    os << "# config_hash: " << hash << "\n";
    os << "# master_seed: " << fmt_u64(cfg.master_seed) << "\n";
    os << "# config: " << cfg.canonical_text() << "\n";
    return os.str();
}

std::vector<double> config_r_grid(const ExperimentConfig& cfg, bool& auto_mode,
                                  int& count, double& mult) {
    auto_mode = false;
    std::vector<double> grid;
    if (!config_has(cfg, "r_grid")) {
        auto_mode = true;
        count = 10;
        mult = 6.0;
        return grid;
    }
    const auto& rg = cfg.doc["r_grid"];
    if (rg.is_array()) {
        for (const auto& v : rg) grid.push_back(v.get<double>());
        require(!grid.empty(), "config: 'r_grid' must be nonempty");
        return grid;
    }
    if (rg.is_object()) {
        auto_mode = true;
        count = static_cast<int>(config_number_or(cfg, "r_grid.count", 10));
        mult = config_number_or(cfg, "r_grid.sqrt_mean_mult", 6.0);
        return grid;
    }
    throw validation_error("config: 'r_grid' must be an array or {count, sqrt_mean_mult}");
}

RunResult run_sample(const ExperimentConfig& cfg) {
    const IntensityModel model = config_model(cfg);
    const Window window = config_window(cfg);
    const std::uint64_t rep = static_cast<std::uint64_t>(config_int_or(cfg, "replication", 0));
    const PointConfig pc = sample_poisson(model, window, cfg.master_seed, rep);

    std::ostringstream os;
    os << echo_block("sample", cfg);
    os << "x";
    if (window.dim >= 2) os << ",y";
    if (window.dim >= 3) os << ",z";
    os << "\n";
    for (const Point& p : pc.points) {
        os << fmt(p[0]);
        for (int a = 1; a < window.dim; ++a) os << "," << fmt(p[a]);
        os << "\n";
    }
    RunResult out;
    out.files.push_back({"points.csv", os.str()});
    out.summary = "points: " + std::to_string(pc.points.size());
    return out;
}

RunResult run_graph_stats(const ExperimentConfig& cfg) {
    const IntensityModel model = config_model(cfg);
    const Window window = config_window(cfg);
    const Shape shape = config_shape(cfg, window.dim);
    const int depth = static_cast<int>(config_int_or(cfg, "census_depth", 4));
    require(depth >= 0 && depth <= 10, "config: 'census_depth' must be in 0..10");
    const std::uint64_t rep = static_cast<std::uint64_t>(config_int_or(cfg, "replication", 0));

    const PointConfig pc = sample_poisson(model, window, cfg.master_seed, rep);
    const GeomGraph g = build_graph(pc, shape);
    const ComponentCensus cs = census(g, depth);

    std::ostringstream os;
    os << echo_block("graph-stats", cfg);
    os << "kind,size,code,count\n";
    os << "total,,," << cs.total_components << "\n";
    os << "vertices,,," << pc.points.size() << "\n";
    os << "edges,,," << g.edge_count() << "\n";
    for (const auto& [size, count] : cs.counts_by_size)
        os << "size," << size << ",," << count << "\n";
    for (const auto& [key, count] : cs.counts_by_isoclass)
        os << "isoclass," << key.first << "," << fmt_u64(key.second) << "," << count << "\n";

    RunResult out;
    out.files.push_back({"graph_stats.csv", os.str()});
    out.summary = "components: " + std::to_string(cs.total_components) +
                  ", vertices: " + std::to_string(pc.points.size());
    return out;
}

RunResult run_tails(const ExperimentConfig& cfg) {
    const IntensityModel model = config_model(cfg);
    const Window window = config_window(cfg);
    const Shape shape = config_shape(cfg, window.dim);
    const Selector selector = config_selector(cfg);
    const std::int64_t reps = config_int_or(cfg, "replications", 10000);

    bool auto_mode = false;
    int count = 10;
    double mult = 6.0;
    const std::vector<double> grid = config_r_grid(cfg, auto_mode, count, mult);
    const TailReport rep =
        auto_mode ? empirical_tails_auto(model, window, shape, selector, count, mult,
                                         reps, cfg.master_seed, cfg.threads)
                  : empirical_tails(model, window, shape, selector, grid, reps,
                                    cfg.master_seed, cfg.threads);

    std::ostringstream os;
    os << echo_block("tails", cfg);
    os << "r,upper_bound,upper_emp,upper_lo,upper_hi,lower_bound,lower_emp,lower_lo,lower_hi\n";
    for (std::size_t i = 0; i < rep.r_grid.size(); ++i) {
        os << fmt(rep.r_grid[i]) << "," << fmt(rep.upper_bound[i]) << ","
           << fmt(rep.upper_emp[i]) << "," << fmt(rep.upper_lo[i]) << ","
           << fmt(rep.upper_hi[i]) << "," << fmt(rep.lower_bound[i]) << ","
           << fmt(rep.lower_emp[i]) << "," << fmt(rep.lower_lo[i]) << ","
           << fmt(rep.lower_hi[i]) << "\n";
    }

    nlohmann::json meta;
    meta["config"] = cfg.doc;
    meta["mean_f"] = rep.mean_f;
    meta["mean_f_se"] = rep.mean_f_se;
    meta["var_f"] = rep.var_f;
    meta["var_bound"] = rep.var_bound;
    meta["a"] = rep.params.a();
    meta["k"] = rep.params.k;
    meta["c_s"] = rep.params.c_s;
    meta["sigma"] = rep.params.sigma;
    meta["cs_certified"] = rep.cs_certified;
    meta["n_replications"] = rep.n_replications;
    meta["master_seed"] = rep.master_seed;

    RunResult out;
    out.files.push_back({"tails.csv", os.str()});
    out.files.push_back({"tails.json", meta.dump(2) + "\n"});
    std::ostringstream sm;
    sm << "mean F = " << rep.mean_f << " (se " << rep.mean_f_se << "), a = "
       << rep.params.a() << (rep.cs_certified ? "" : " [c_S not certified]");
    out.summary = sm.str();
    return out;
}

RunResult run_condition_check(const ExperimentConfig& cfg) {
    const IntensityModel model = config_model(cfg);
    const Window window = config_window(cfg);
    const Shape shape = config_shape(cfg, window.dim);
    const Selector selector = config_selector(cfg);
    const std::int64_t reps = config_int_or(cfg, "replications", 10);
    const std::int64_t mc_points = config_int_or(cfg, "condition_mc_points", 2000);

    std::ostringstream os;
    os << echo_block("condition-check", cfg);
    os << "replication,n_points,f,a,sum_term,integral_estimate,integral_se,"
          "neg_measure_estimate,neg_measure_se,sum_leq_kf,neg_leq_ksf,satisfied,"
          "cs_certified\n";
    std::int64_t violations = 0;
    for (std::int64_t r = 0; r < reps; ++r) {
        const PointConfig pc =
            sample_poisson(model, window, cfg.master_seed, static_cast<std::uint64_t>(r));
        const ConditionRecord rec = condition_check(
            pc, shape, selector, model, mc_points,
            derive_seed(cfg.master_seed, 0xCC00 + static_cast<std::uint64_t>(r)));
        if (!rec.satisfied) ++violations;
        os << r << "," << pc.points.size() << "," << rec.f << "," << fmt(rec.a) << ","
           << fmt(rec.sum_term) << "," << fmt(rec.integral_estimate) << ","
           << fmt(rec.integral_se) << "," << fmt(rec.neg_measure_estimate) << ","
           << fmt(rec.neg_measure_se) << "," << (rec.sum_leq_kf ? 1 : 0) << ","
           << (rec.neg_measure_leq_ksf ? 1 : 0) << "," << (rec.satisfied ? 1 : 0) << ","
           << (rec.cs_certified ? 1 : 0) << "\n";
    }
    RunResult out;
    out.files.push_back({"condition.csv", os.str()});
    out.summary = "violations: " + std::to_string(violations) + " of " +
                  std::to_string(reps) + " replications";
    return out;
}

RunResult run_constants(const ExperimentConfig& cfg) {
    const IntensityModel model = config_model(cfg);
    const Window probe = config_window(cfg); // for the dimension only
    const Shape shape = config_shape(cfg, probe.dim);
    const Selector selector = config_selector(cfg);
    const std::int64_t mc = config_int_or(cfg, "constants_mc_points", 400000);

    std::vector<std::string> which;
    if (config_has(cfg, "constants_which")) {
        for (const auto& v : cfg.doc["constants_which"]) which.push_back(v.get<std::string>());
    } else {
        which = {"s"};
    }

    std::ostringstream os;
    os << echo_block("constants", cfg);
    os << "constant,value,std_error,integrand_evals\n";
    std::ostringstream sm;
    for (const std::string& name : which) {
        AsymptoticsReport rep;
        if (name == "s") {
            rep = sparse_constant(shape, selector, model, mc,
                                  derive_seed(cfg.master_seed, 0x51));
        } else if (name == "t") {
            const double c = config_number(cfg, "c");
            rep = thermo_constant(shape, selector, model, c, mc,
                                  derive_seed(cfg.master_seed, 0x52));
        } else if (name == "d") {
            rep = dense_constant(shape, selector, model, mc,
                                 derive_seed(cfg.master_seed, 0x53));
        } else {
            throw validation_error("config: 'constants_which' entries must be s, t or d");
        }
        os << rep.constant_name << "," << fmt(rep.value) << "," << fmt(rep.std_error)
           << "," << rep.integrand_eval_count << "\n";
        sm << rep.constant_name << " = " << rep.value << " (se " << rep.std_error << ") ";
    }
    RunResult out;
    out.files.push_back({"constants.csv", os.str()});
    out.summary = sm.str();
    return out;
}

RunResult run_regime(const ExperimentConfig& cfg) {
    const IntensityModel model = config_model(cfg);
    const Window probe = config_window(cfg);
    const Shape shape = config_shape(cfg, probe.dim);
    const Selector selector = config_selector(cfg);
    const RegimeSpec regime = config_regime(cfg, probe.dim);
    const ExperimentOptions opts = config_experiment_options(cfg);

    const AsymptoticsReport rep =
        regime_experiment(regime, shape, selector, model, opts, cfg.master_seed);

    std::ostringstream os;
    os << echo_block("regime", cfg);
    os << "# rho_rule: " << regime.rho_desc << "\n";
    os << "# limit_constant: " << fmt(rep.value) << " se " << fmt(rep.std_error) << "\n";
    os << "t,rho,t_rho_d,mean_f_raw,mean_f_eroded,mean_f_se,mean_u,scaled,"
          "ratio_to_limit,kfact_f_over_u,bracket_lo,window_half_extent,"
          "window_tail_bias,replications\n";
    for (const RegimeRow& row : rep.table) {
        os << fmt(row.t) << "," << fmt(row.rho) << "," << fmt(row.t_rho_d) << ","
           << fmt(row.mean_f_raw) << "," << fmt(row.mean_f_eroded) << ","
           << fmt(row.mean_f_se) << "," << fmt(row.mean_u) << "," << fmt(row.scaled)
           << "," << fmt(row.ratio_to_limit) << "," << fmt(row.kfact_f_over_u) << ","
           << fmt(row.bracket_lo) << "," << fmt(row.window_half_extent) << ","
           << fmt(row.window_tail_bias) << "," << row.replications << "\n";
    }
    RunResult out;
    out.files.push_back({"regime.csv", os.str()});
    std::ostringstream sm;
    if (!rep.table.empty())
        sm << "limit " << rep.value << "; final ratio " << rep.table.back().ratio_to_limit;
    out.summary = sm.str();
    return out;
}

RunResult run_strong_law(const ExperimentConfig& cfg) {
    const IntensityModel model = config_model(cfg);
    const Window probe = config_window(cfg);
    const Shape shape = config_shape(cfg, probe.dim);
    const Selector selector = config_selector(cfg);
    const RegimeSpec regime = config_regime(cfg, probe.dim);
    const ExperimentOptions opts = config_experiment_options(cfg);

    const StrongLawReport rep =
        strong_law_experiment(regime, shape, selector, model, opts, cfg.master_seed);

    std::ostringstream os;
    os << echo_block("strong-law", cfg);
    os << "# rho_rule: " << regime.rho_desc << "\n";
    os << "# limit_constant: " << fmt(rep.limit) << "\n";
    os << "# growth_condition: " << (rep.growth_condition_ok ? "ok" : "VIOLATED") << " ("
       << rep.growth_note << ")\n";
    os << "t,rho,scaled,deviation,tail_max_dev\n";
    for (const StrongLawRow& row : rep.rows) {
        os << fmt(row.t) << "," << fmt(row.rho) << "," << fmt(row.scaled) << ","
           << fmt(row.deviation) << "," << fmt(row.tail_max_dev) << "\n";
    }
    RunResult out;
    out.files.push_back({"strong_law.csv", os.str()});
    std::ostringstream sm;
    sm << "limit " << rep.limit;
    if (!rep.rows.empty()) sm << "; final scaled " << rep.rows.back().scaled;
    if (!rep.growth_condition_ok) sm << " [growth condition violated]";
    out.summary = sm.str();
    return out;
}

RunResult run_lemma_check(const ExperimentConfig& cfg) {
    const std::int64_t points = config_int_or(cfg, "lemma_points", 1000000);
    const double a_max = config_number_or(cfg, "lemma_a_max", 10.0);
    const double z_max = config_number_or(cfg, "lemma_z_max", 50.0);
    require(points >= 1, "config: 'lemma_points' must be >= 1");
    require(a_max > 0.0 && z_max > 0.0, "config: lemma sweep bounds must be > 0");

    const LemmaSweepResult res = lemma_sweep(points, a_max, z_max);
    std::ostringstream os;
    os << echo_block("lemma-check", cfg);
    os << "points,lemma_violations,psi_bound_violations,max_lemma_slack\n";
    os << res.points << "," << res.lemma_violations << "," << res.psi_bound_violations
       << "," << fmt(res.max_lemma_slack) << "\n";
    RunResult out;
    out.files.push_back({"lemma_check.csv", os.str()});
    out.summary =
        "violations: " + std::to_string(res.lemma_violations + res.psi_bound_violations);
    return out;
}

} // namespace

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names = {
        "sample",    "graph-stats", "tails",      "condition-check",
        "constants", "regime",      "strong-law", "lemma-check"};
    return names;
}

RunResult run_subcommand(const std::string& subcommand, const ExperimentConfig& cfg) {
    if (subcommand == "sample") return run_sample(cfg);
    if (subcommand == "graph-stats") return run_graph_stats(cfg);
    if (subcommand == "tails") return run_tails(cfg);
    if (subcommand == "condition-check") return run_condition_check(cfg);
    if (subcommand == "constants") return run_constants(cfg);
    if (subcommand == "regime") return run_regime(cfg);
    if (subcommand == "strong-law") return run_strong_law(cfg);
    if (subcommand == "lemma-check") return run_lemma_check(cfg);
    throw usage_error("unknown subcommand '" + subcommand + "'");
}

void write_results(const RunResult& result, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    for (const ResultFile& f : result.files) {
        std::ofstream out(fs::path(dir) / f.name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write result file " + f.name);
        out << f.content;
    }
}

} // namespace geomconc
