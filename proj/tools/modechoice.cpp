#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "modechoice/bass.hpp"
#include "modechoice/config.hpp"
#include "modechoice/csv.hpp"
#include "modechoice/fmt.hpp"
#include "modechoice/harness.hpp"
#include "modechoice/mnl.hpp"
#include "modechoice/policy.hpp"
#include "modechoice/population.hpp"
#include "modechoice/stats.hpp"
#include "modechoice/survey.hpp"
#include "modechoice/svg_plot.hpp"

namespace mc = modechoice;

namespace {

struct CommonRunFlags {
    int reps = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = 1;
    std::string out_dir = "out";
};

mc::BatchOptions batch_options(const CommonRunFlags& f) {
    mc::BatchOptions o;
    o.reps_override = f.reps;
    o.jobs = f.jobs;
    if (f.seed_set) {
        o.seed_overridden = true;
        o.master_seed = f.seed;
    }
    return o;
}

void print_terminal_summary(const mc::RunResult& result, const std::string& label) {
    std::vector<mc::AggregateRow> rows = mc::aggregate(result);
    int last = result.series.front().back().period;
    std::printf("%-40s  terminal year %d over %zu reps\n", label.c_str(),
                result.series.front().back().year, result.series.size());
    for (const auto& r : rows) {
        if (r.period != last) continue;
        if (r.indicator.rfind("share_", 0) != 0) continue;
        std::printf("  %-12s mean %.4f   95%% CI [%.4f, %.4f]\n", r.indicator.c_str(), r.mean,
                    r.ci_low, r.ci_high);
    }
}

mc::mnl::MnlData mnl_data_from_csv(const mc::CsvTable& t, const std::string& choice_col,
                                   const std::string& ref_mode,
                                   const std::vector<std::string>& vars) {
    mc::mnl::MnlData d;
    d.alt_names = {"car", "moto", "pub"};
    int ref = -1;
    for (int j = 0; j < 3; ++j)
        if (d.alt_names[static_cast<std::size_t>(j)] == ref_mode) ref = j;
    if (ref < 0) throw mc::ConfigError("--ref: expected car, moto or pub, got '" + ref_mode + "'");
    d.ref_alt = ref;
    d.n_alternatives = 3;
    d.n_rows = t.rows.size();
    d.var_names.push_back("const");
    for (const auto& v : vars) d.var_names.push_back(v);
    d.n_covariates = d.var_names.size();
    d.x.resize(d.n_rows * d.n_covariates);
    d.choice.resize(d.n_rows);

    int c_choice = t.require_column(choice_col);
    std::vector<int> cols;
    std::vector<double> scales;
    for (const auto& v : vars) {
        // income_m is income_month rescaled to millions, keeping the
        // coefficient magnitudes readable
        if (v == "income_m" && t.column(v) < 0) {
            cols.push_back(t.require_column("income_month"));
            scales.push_back(1e-6);
        } else {
            cols.push_back(t.require_column(v));
            scales.push_back(1.0);
        }
    }

    auto encode = [&](const std::string& s, std::size_t row, const std::string& col) -> double {
        if (s == "F" || s == "f") return 0.0;
        if (s == "M" || s == "m") return 1.0;
        if (s == "low") return 0.0;
        if (s == "mid") return 1.0;
        if (s == "high") return 2.0;
        try {
            std::size_t pos = 0;
            double v = std::stod(s, &pos);
            if (pos == s.size()) return v;
        } catch (const std::exception&) {
        }
        throw mc::DataError("row " + std::to_string(row + 2) + ", column '" + col +
                            "': cannot interpret '" + s + "' as a covariate value");
    };

    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const std::string& chosen = t.cell(i, c_choice);
        int y = -1;
        for (int j = 0; j < 3; ++j)
            if (d.alt_names[static_cast<std::size_t>(j)] == chosen) y = j;
        if (y < 0)
            throw mc::DataError("row " + std::to_string(i + 2) + ": unknown mode '" + chosen + "'");
        d.choice[i] = y;
        d.x[i * d.n_covariates + 0] = 1.0;
        for (std::size_t k = 0; k < cols.size(); ++k)
            d.x[i * d.n_covariates + k + 1] = scales[k] * encode(t.cell(i, cols[k]), i, vars[k]);
    }
    return d;
}

int cmd_run(const std::string& scenario_path, const CommonRunFlags& flags,
            const std::string& dump_population, const std::string& dump_network) {
    mc::ScenarioConfig cfg = mc::ScenarioConfig::load(scenario_path);
    mc::RunResult result = mc::run_batch(cfg, batch_options(flags));
    mc::export_results(cfg, result, flags.out_dir, cfg.name);

    if (!dump_population.empty() || !dump_network.empty()) {
        // Audit exports from replication 0.
        std::vector<mc::Agent> agents = mc::synthesize_population(cfg.population, result.rep_seeds[0]);
        if (!dump_population.empty()) {
            std::ofstream os(dump_population, std::ios::binary);
            if (!os) throw mc::DataError("cannot write " + dump_population);
            mc::dump_population_csv(agents, os);
        }
        if (!dump_network.empty()) {
            mc::SocialGraph g = mc::build_network(agents, cfg.network.m, cfg.network.homophily,
                                                  cfg.network.bonus, result.rep_seeds[0]);
            std::ofstream os(dump_network, std::ios::binary);
            if (!os) throw mc::DataError("cannot write " + dump_network);
            mc::export_edge_list_csv(g, os);
        }
    }

    print_terminal_summary(result, cfg.name);
    double total_ms = 0.0;
    for (double ms : result.runtime_ms) total_ms += ms;
    std::printf("wrote %s/{timeseries.csv,aggregate.csv,meta.json}  (%.1f s simulated)\n",
                flags.out_dir.c_str(), total_ms / 1000.0);
    return 0;
}

int cmd_sweep(const std::string& scenario_path, const std::string& set_spec,
              const CommonRunFlags& flags) {
    mc::ScenarioConfig base = mc::ScenarioConfig::load(scenario_path);
    std::vector<mc::PolicyScenario> variants = mc::combine_policies(set_spec, base.policies);

    std::ofstream summary;
    std::filesystem::create_directories(flags.out_dir);
    summary.open(flags.out_dir + "/summary.csv", std::ios::binary);
    summary << "scenario,indicator,mean,ci_low,ci_high\n";

    for (const mc::PolicyScenario& variant : variants) {
        mc::ScenarioConfig cfg = base;
        cfg.name = base.name + ":" + variant.label;
        cfg.policies = variant.policies;
        mc::RunResult result = mc::run_batch(cfg, batch_options(flags));
        std::string dir = flags.out_dir + "/" + variant.label;
        mc::export_results(cfg, result, dir, cfg.name);
        print_terminal_summary(result, cfg.name);

        std::vector<mc::AggregateRow> rows = mc::aggregate(result);
        int last = result.series.front().back().period;
        for (const auto& r : rows)
            if (r.period == last)
                summary << variant.label << ',' << r.indicator << ',' << mc::fmt_g(r.mean) << ','
                        << mc::fmt_g(r.ci_low) << ',' << mc::fmt_g(r.ci_high) << '\n';
    }
    std::printf("wrote %s/summary.csv\n", flags.out_dir.c_str());
    return 0;
}

int cmd_cv_check(const std::string& scenario_path, const std::string& indicator, int max_reps,
                 double tol) {
    mc::ScenarioConfig cfg = mc::ScenarioConfig::load(scenario_path);
    mc::CvCheckResult res = mc::cv_stabilization(cfg, indicator, max_reps, tol);
    std::printf("reps  cv(%s)\n", indicator.c_str());
    for (std::size_t i = 0; i < res.cv_trace.size(); ++i)
        std::printf("%4zu  %.6f\n", i + 2, res.cv_trace[i]);
    if (res.stabilized)
        std::printf("recommended replications: %d (cv change < %g for 5 consecutive increments)\n",
                    res.recommended_reps, tol);
    else
        std::printf("warning: cv did not stabilize within %d replications; using %d\n", max_reps,
                    res.recommended_reps);
    return 0;
}

int cmd_fit_bass(const std::string& registry_path, const std::string& out_path) {
    mc::CsvTable t = mc::read_csv_file(registry_path);
    int c_year = t.require_column("year");
    int c_count = t.require_column("cumulative_count");
    std::vector<std::pair<double, double>> series;
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        series.emplace_back(mc::csv_double(t, i, c_year), mc::csv_double(t, i, c_count));
    if (series.empty()) throw mc::DataError("registry: no rows");
    double year0 = series.front().first;
    for (auto& [year, count] : series) year = year - year0 + 1.0; // first observation at t=1

    mc::bass::BassParams fit = mc::bass::fit(series);
    std::printf("Bass diffusion fit (%zu yearly observations)\n", series.size());
    std::printf("  p (innovation)     = %.6f\n", fit.p);
    std::printf("  q (imitation)      = %.6f\n", fit.q);
    std::printf("  m (market size)    = %.1f\n", fit.m);
    std::printf("  residual SSE       = %.4g\n", fit.residual_sse);
    std::printf("  peak adoption year = %.2f (offset %.2f)\n",
                year0 + mc::bass::peak_time(fit) - 1.0, mc::bass::peak_time(fit));
    if (!out_path.empty()) {
        std::ofstream os(out_path, std::ios::binary);
        if (!os) throw mc::DataError("cannot write " + out_path);
        os << "bass.p = " << mc::fmt_exact(fit.p) << "\n";
        os << "bass.q = " << mc::fmt_exact(fit.q) << "\n";
        os << "bass.m = " << mc::fmt_exact(fit.m) << "\n";
        os << "bass.sse = " << mc::fmt_exact(fit.residual_sse) << "\n";
        os << "bass.first_year = " << mc::fmt_exact(year0) << "\n";
        std::printf("wrote %s\n", out_path.c_str());
    }
    return 0;
}

int cmd_fit_mnl(const std::string& survey_path, const std::string& choice_col,
                const std::string& ref_mode, const std::string& vars_csv,
                const std::string& out_path) {
    mc::CsvTable t = mc::read_csv_file(survey_path);
    std::vector<std::string> vars;
    {
        std::istringstream is(vars_csv);
        std::string v;
        while (std::getline(is, v, ',')) {
            if (!v.empty()) vars.push_back(v);
        }
    }
    if (vars.empty()) throw mc::ConfigError("--vars: need at least one covariate column");

    mc::mnl::MnlData data = mnl_data_from_csv(t, choice_col, ref_mode, vars);
    mc::mnl::MnlModel model = mc::mnl::fit(data);

    std::printf("multinomial logit, %zu rows, reference alternative: %s\n", data.n_rows,
                ref_mode.c_str());
    std::printf("log-likelihood %.4f after %d iterations%s\n", model.log_lik, model.iterations,
                model.converged ? "" : " (NOT converged)");
    std::printf("%-10s %-14s %12s %12s %10s %10s\n", "alt", "covariate", "estimate", "std.err",
                "Wald", "p");
    for (std::size_t j = 0; j < data.n_alternatives; ++j) {
        if (static_cast<int>(j) == data.ref_alt) continue;
        for (std::size_t k = 0; k < data.n_covariates; ++k) {
            std::size_t idx = model.param_index(static_cast<int>(j), k);
            mc::mnl::WaldResult w = mc::mnl::wald_test(model, idx);
            std::printf("%-10s %-14s %12.5f %12.5f %10.3f %10.4g\n",
                        data.alt_names[j].c_str(), data.var_names[k].c_str(), model.beta[idx],
                        model.standard_error(idx), w.statistic, w.p_value);
        }
    }
    std::printf("joint Wald tests per covariate (df = %zu):\n", data.n_alternatives - 1);
    for (std::size_t k = 0; k < data.n_covariates; ++k) {
        std::vector<std::size_t> idx;
        for (std::size_t j = 0; j < data.n_alternatives; ++j)
            if (static_cast<int>(j) != data.ref_alt)
                idx.push_back(model.param_index(static_cast<int>(j), k));
        mc::mnl::WaldResult w = mc::mnl::wald_test(model, idx);
        std::printf("  %-14s W = %8.3f  p = %.4g\n", data.var_names[k].c_str(), w.statistic,
                    w.p_value);
    }

    if (!out_path.empty()) {
        std::ofstream os(out_path, std::ios::binary);
        if (!os) throw mc::DataError("cannot write " + out_path);
        os << "mnl.log_lik = " << mc::fmt_exact(model.log_lik) << "\n";
        for (std::size_t j = 0; j < data.n_alternatives; ++j) {
            if (static_cast<int>(j) == data.ref_alt) continue;
            for (std::size_t k = 0; k < data.n_covariates; ++k) {
                std::size_t idx = model.param_index(static_cast<int>(j), k);
                os << "mnl.beta." << data.alt_names[j] << "." << data.var_names[k] << " = "
                   << mc::fmt_exact(model.beta[idx]) << "\n";
                os << "mnl.se." << data.alt_names[j] << "." << data.var_names[k] << " = "
                   << mc::fmt_exact(model.standard_error(idx)) << "\n";
            }
        }
        std::printf("wrote %s\n", out_path.c_str());
    }
    return 0;
}

int cmd_stats(const std::string& survey_path, const std::string& out_path) {
    mc::survey::SurveyTable t = mc::survey::load_survey_csv_file(survey_path);

    std::printf("attribute importance by socioeconomic group (%zu respondents)\n", t.rows.size());
    std::printf("%-18s %10s %10s | pairwise Mann-Whitney p: low/mid  low/high  mid/high\n",
                "attribute", "KW H", "p");
    for (int a = 0; a < mc::kNumAttributes; ++a) {
        auto groups = mc::survey::attribute_scores_by_ses(t, static_cast<mc::AttributeId>(a));
        mc::stats::TestResult kw = mc::stats::kruskal_wallis(groups);
        double p_lm = mc::stats::mann_whitney_u(groups[0], groups[1]).p_value;
        double p_lh = mc::stats::mann_whitney_u(groups[0], groups[2]).p_value;
        double p_mh = mc::stats::mann_whitney_u(groups[1], groups[2]).p_value;
        std::printf("%-18s %10.3f %10.4g | %24.4g %9.4g %9.4g\n",
                    mc::attribute_name(static_cast<mc::AttributeId>(a)), kw.statistic, kw.p_value,
                    p_lm, p_lh, p_mh);
    }

    auto table = mc::survey::mode_by_ses_table(t);
    mc::stats::TestResult chi = mc::stats::chi_square_independence(table);
    std::printf("mode x ses chi-square: chi2 = %.3f, df = %.0f, p = %.4g\n", chi.statistic, chi.df,
                chi.p_value);

    auto weights = mc::survey::normalize_weights(t);
    std::printf("normalized weights (likert/5), mean (sd):\n%-18s", "attribute");
    for (int g = 0; g < mc::kNumSes; ++g) std::printf(" %14s", mc::ses_name(static_cast<mc::Ses>(g)));
    std::printf("\n");
    for (int a = 0; a < mc::kNumAttributes; ++a) {
        std::printf("%-18s", mc::attribute_name(static_cast<mc::AttributeId>(a)));
        for (int g = 0; g < mc::kNumSes; ++g)
            std::printf("  %.3f (%.3f)", weights[g][a].mean, weights[g][a].sd);
        std::printf("\n");
    }

    if (!out_path.empty()) {
        std::ofstream os(out_path, std::ios::binary);
        if (!os) throw mc::DataError("cannot write " + out_path);
        os << "# weight summary derived from " << survey_path << "\n[population]\n";
        for (int g = 0; g < mc::kNumSes; ++g) {
            os << "weight_means." << mc::ses_name(static_cast<mc::Ses>(g)) << " =";
            for (int a = 0; a < mc::kNumAttributes; ++a) os << ' ' << mc::fmt_g(weights[g][a].mean, 6);
            os << "\nweight_sds." << mc::ses_name(static_cast<mc::Ses>(g)) << " =";
            for (int a = 0; a < mc::kNumAttributes; ++a) os << ' ' << mc::fmt_g(weights[g][a].sd, 6);
            os << "\n";
        }
        std::printf("wrote %s (scenario fragment)\n", out_path.c_str());
    }
    return 0;
}

int cmd_plot(const std::string& aggregate_path, const std::string& out_path) {
    mc::CsvTable t = mc::read_csv_file(aggregate_path);
    int c_period = t.require_column("period");
    int c_year = t.require_column("year");
    int c_ind = t.require_column("indicator");
    int c_mean = t.require_column("mean");
    int c_lo = t.require_column("ci_low");
    int c_hi = t.require_column("ci_high");
    std::vector<mc::AggregateRow> rows;
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        rows.push_back({static_cast<int>(mc::csv_double(t, i, c_period)),
                        static_cast<int>(mc::csv_double(t, i, c_year)), t.cell(i, c_ind),
                        mc::csv_double(t, i, c_mean), mc::csv_double(t, i, c_lo),
                        mc::csv_double(t, i, c_hi)});

    std::string svg = mc::plot_shares_svg(rows); // throws before the file is opened
    std::ofstream os(out_path, std::ios::binary);
    if (!os) throw mc::DataError("cannot write " + out_path);
    os << svg;
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

int cmd_validate(const std::string& scenario_path, const std::string& registry_path,
                 const CommonRunFlags& flags) {
    mc::ScenarioConfig cfg = mc::ScenarioConfig::load(scenario_path);
    mc::BatchOptions opt = batch_options(flags);
    if (opt.reps_override == 0) opt.reps_override = 100; // replication protocol default
    mc::RunResult result = mc::run_batch(cfg, opt);

    // Short-horizon consistency: user distribution over the first periods.
    std::printf("share trajectory, %zu reps (%s):\n", result.series.size(), cfg.name.c_str());
    std::vector<mc::AggregateRow> rows = mc::aggregate(result);
    int show = std::min(3, result.years);
    for (const auto& r : rows) {
        if (r.period > show || r.indicator.rfind("share_", 0) != 0) continue;
        std::printf("  year %d  %-12s mean %.4f  CI [%.4f, %.4f]\n", r.year, r.indicator.c_str(),
                    r.mean, r.ci_low, r.ci_high);
    }
    {
        double pub0 = 0.0, pubT = 0.0, car0 = 0.0, carT = 0.0;
        int last = result.series.front().back().period;
        for (const auto& r : rows) {
            if (r.indicator == "share_pub" && r.period == 0) pub0 = r.mean;
            if (r.indicator == "share_pub" && r.period == last) pubT = r.mean;
            if (r.indicator == "share_car" && r.period == 0) car0 = r.mean;
            if (r.indicator == "share_car" && r.period == last) carT = r.mean;
        }
        std::printf("emerging behavior: public %s (%.3f -> %.3f), private %s (%.3f -> %.3f)\n",
                    pubT < pub0 ? "declines" : "grows", pub0, pubT,
                    carT > car0 ? "grows" : "declines", car0, carT);
    }

    // Diffusion comparison: cumulative new motorcycle adopters, scaled to
    // city population, against the registry-fitted Bass forecast.
    mc::CsvTable t = mc::read_csv_file(registry_path);
    int c_year = t.require_column("year");
    int c_count = t.require_column("cumulative_count");
    std::vector<std::pair<double, double>> series;
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        series.emplace_back(mc::csv_double(t, i, c_year), mc::csv_double(t, i, c_count));
    double year0 = series.front().first;
    double t_end = series.back().first - year0 + 1.0;
    for (auto& [year, count] : series) year = year - year0 + 1.0;
    mc::bass::BassParams fit = mc::bass::fit(series);
    std::printf("registry Bass fit: p = %.4f, q = %.4f, m = %.0f\n", fit.p, fit.q, fit.m);

    const double scale = cfg.population.city_population / cfg.population.n_agents;
    std::vector<double> abm(static_cast<std::size_t>(result.years), 0.0);
    for (const auto& acq : result.acquisitions) {
        double cum = 0.0;
        for (std::size_t p = 0; p < acq.size(); ++p) {
            cum += acq[p][static_cast<int>(mc::ModeId::Motorcycle)];
            abm[p] += cum * scale / static_cast<double>(result.acquisitions.size());
        }
    }
    std::vector<double> forecast(static_cast<std::size_t>(result.years));
    for (int k = 1; k <= result.years; ++k)
        forecast[static_cast<std::size_t>(k - 1)] =
            mc::bass::cumulative(fit, t_end + k) - mc::bass::cumulative(fit, t_end);
    mc::bass::TrajectoryError err = mc::bass::compare_trajectories(abm, forecast);
    std::printf("new motorcycles, ABM vs Bass forecast over %d years:\n", result.years);
    for (int k = 0; k < result.years; ++k)
        std::printf("  year +%d  abm %10.0f   bass %10.0f\n", k + 1, abm[static_cast<std::size_t>(k)],
                    forecast[static_cast<std::size_t>(k)]);
    std::printf("trajectory error: RMSE = %.1f, MAPE = %.2f%%\n", err.rmse, err.mape);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"modechoice - agent-based commuter mode-choice lab"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run a scenario batch and export CSV results");
    std::string run_scenario;
    CommonRunFlags run_flags;
    std::string dump_population, dump_network;
    run->add_option("scenario", run_scenario, "scenario file")->required();
    run->add_option("--reps", run_flags.reps, "replications (default from scenario)");
    run->add_option("--seed", run_flags.seed, "master seed override")
        ->each([&](const std::string&) { run_flags.seed_set = true; });
    run->add_option("--jobs", run_flags.jobs, "parallel replications");
    run->add_option("--out", run_flags.out_dir, "output directory (default out)");
    run->add_option("--dump-population", dump_population, "write replication-0 population CSV");
    run->add_option("--dump-network", dump_network, "write replication-0 edge list CSV");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "run policy variants against a common base");
    std::string sweep_scenario, sweep_spec;
    CommonRunFlags sweep_flags;
    sweep->add_option("scenario", sweep_scenario, "scenario file")->required();
    sweep->add_option("--policies", sweep_spec,
                      "comma list of variants: none, fare, freq, sec, fare+sec, all, ...")
        ->required();
    sweep->add_option("--reps", sweep_flags.reps, "replications per variant");
    sweep->add_option("--seed", sweep_flags.seed, "master seed override")
        ->each([&](const std::string&) { sweep_flags.seed_set = true; });
    sweep->add_option("--jobs", sweep_flags.jobs, "parallel replications");
    sweep->add_option("--out", sweep_flags.out_dir, "output directory (default out)");

    // cv-check
    auto* cv = app.add_subcommand("cv-check", "replication count at which the CV stabilizes");
    std::string cv_scenario, cv_indicator = "share_pub";
    int cv_max_reps = 120;
    double cv_tol = 0.005;
    cv->add_option("scenario", cv_scenario, "scenario file")->required();
    cv->add_option("--indicator", cv_indicator, "indicator column (default share_pub)");
    cv->add_option("--max-reps", cv_max_reps, "replication budget (default 120)");
    cv->add_option("--tol", cv_tol, "absolute CV change tolerance (default 0.005)");

    // fit-bass
    auto* fb = app.add_subcommand("fit-bass", "fit the Bass diffusion curve to a registry CSV");
    std::string fb_registry, fb_out;
    fb->add_option("registry", fb_registry, "CSV with columns year,cumulative_count")->required();
    fb->add_option("--out", fb_out, "write fitted parameters as key-value file");

    // fit-mnl
    auto* fm = app.add_subcommand("fit-mnl", "fit a multinomial logit to survey choices");
    std::string fm_survey, fm_choice = "mode", fm_ref = "pub", fm_vars, fm_out;
    fm->add_option("survey", fm_survey, "survey CSV")->required();
    fm->add_option("--choice", fm_choice, "choice column (default mode)");
    fm->add_option("--ref", fm_ref, "reference alternative (default pub)");
    fm->add_option("--vars", fm_vars, "comma list of covariate columns")->required();
    fm->add_option("--out", fm_out, "write coefficients as key-value file");

    // stats
    auto* st = app.add_subcommand("stats", "nonparametric group tests + normalized weights");
    std::string st_survey, st_out;
    st->add_option("survey", st_survey, "survey CSV")->required();
    st->add_option("--out", st_out, "write weight summary as a scenario fragment");

    // plot
    auto* pl = app.add_subcommand("plot", "render share trajectories from aggregate.csv as SVG");
    std::string pl_aggregate, pl_out;
    pl->add_option("aggregate", pl_aggregate, "aggregate.csv from a run")->required();
    pl->add_option("-o,--out", pl_out, "output SVG path")->required();

    // validate
    auto* va = app.add_subcommand("validate", "replication protocol + Bass trajectory comparison");
    std::string va_scenario, va_registry = "data/moto_registry.csv";
    CommonRunFlags va_flags;
    va->add_option("scenario", va_scenario, "scenario file")->required();
    va->add_option("--registry", va_registry, "motorcycle registry CSV (year,cumulative_count)");
    va->add_option("--reps", va_flags.reps, "replications (default 100)");
    va->add_option("--jobs", va_flags.jobs, "parallel replications");
    va->add_option("--seed", va_flags.seed, "master seed override")
        ->each([&](const std::string&) { va_flags.seed_set = true; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2; // usage problems are configuration errors
    }

    try {
        if (run->parsed()) return cmd_run(run_scenario, run_flags, dump_population, dump_network);
        if (sweep->parsed()) return cmd_sweep(sweep_scenario, sweep_spec, sweep_flags);
        if (cv->parsed()) return cmd_cv_check(cv_scenario, cv_indicator, cv_max_reps, cv_tol);
        if (fb->parsed()) return cmd_fit_bass(fb_registry, fb_out);
        if (fm->parsed()) return cmd_fit_mnl(fm_survey, fm_choice, fm_ref, fm_vars, fm_out);
        if (st->parsed()) return cmd_stats(st_survey, st_out);
        if (pl->parsed()) return cmd_plot(pl_aggregate, pl_out);
        if (va->parsed()) return cmd_validate(va_scenario, va_registry, va_flags);
    } catch (const mc::ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const mc::DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    }
    return 0;
}
