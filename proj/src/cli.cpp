#include "ddwave/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>

#include <omp.h>

#include <CLI11.hpp>

#include "ddwave/acceptance.hpp"
#include "ddwave/analysis.hpp"
#include "ddwave/config.hpp"
#include "ddwave/propagator.hpp"
#include "ddwave/report.hpp"
#include "ddwave/zones.hpp"

namespace ddw::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kDefaultOutput = "ddwave-out";

struct Options {
    std::string config;
    std::optional<double> a, b, rho, theta;
    std::string out;
    int threads = 0;
};

// A check whose verdict is negative; dispatch turns it into exit code 2.
struct AcceptanceFailure {
    std::string criterion;
};

ExperimentConfig resolve(const Options& opt)
{
    ExperimentConfig cfg = opt.config.empty() ? ExperimentConfig{} : load_config(opt.config);
    if (opt.a) cfg.raw.a = *opt.a;
    if (opt.b) cfg.raw.b = *opt.b;
    if (opt.rho) cfg.raw.rho = *opt.rho;
    if (opt.theta) cfg.raw.theta = *opt.theta;
    if (!opt.out.empty()) {
        cfg.output.directory = opt.out;
    } else if (cfg.output.directory.empty()) {
        const char* env = std::getenv("DDWAVE_OUT");
        cfg.output.directory = (env && *env) ? env : kDefaultOutput;
    }
    cfg.finalize();
    return cfg;
}

json envelope(const ExperimentConfig& cfg, const std::string& command)
{
    return {{"command", command}, {"version", DDWAVE_VERSION}, {"config", cfg.to_json()}};
}

fs::path out_path(const ExperimentConfig& cfg, const std::string& name)
{
    return fs::path(cfg.output.directory) / name;
}

void emit_json(const ExperimentConfig& cfg, const std::string& name, const json& doc)
{
    if (cfg.output.json) write_json(out_path(cfg, name), doc);
}

std::string regime_name(FrequencyRegime r)
{
    return r == FrequencyRegime::Small ? "small" : "large";
}

void eig_sweep(const ExperimentConfig& cfg, std::ostream& out)
{
    const auto& p = cfg.params;
    const auto orders = residual_order_fit(p, cfg.sweep.regime, cfg.sweep.r_min, cfg.sweep.r_max, cfg.sweep.n);
    const double tol = cfg.study.refinement_tolerance;
    const bool ok = residual_orders_consistent(orders, tol);

    if (cfg.output.csv) {
        std::vector<std::vector<double>> rows;
        for (double r : orders.r) {
            const auto q = exact_eigenvalues(p, r);
            std::vector<double> row{r};
            for (int j = 0; j < 4; ++j) {
                row.push_back(q[j].real());
                row.push_back(q[j].imag());
            }
            row.push_back(orders.predicted);
            rows.push_back(std::move(row));
        }
        write_csv(out_path(cfg, "eig_sweep.csv"),
                  {"r", "re_l1", "im_l1", "re_l2", "im_l2", "re_l3", "im_l3", "re_l4", "im_l4", "res_order_pred"}, rows);
    }
    json doc = envelope(cfg, "eig-sweep");
    json branches = json::array();
    for (int j = 0; j < 4; ++j) {
        const auto& b = orders.branch[static_cast<std::size_t>(j)];
        branches.push_back({{"branch", branch_label(j)}, {"slope", b.slope}, {"stderr", b.std_error},
                            {"exact_to_precision", b.exact_to_precision}});
    }
    doc["residual_orders"] = {{"regime", regime_name(orders.regime)}, {"predicted", orders.predicted},
                              {"band", {cfg.sweep.r_min, cfg.sweep.r_max}}, {"n", cfg.sweep.n},
                              {"tolerance", tol}, {"branches", branches}};
    doc["verdict"] = ok ? "pass" : "fail";
    emit_json(cfg, "eig_sweep.json", doc);
    if (cfg.output.svg) {
        std::vector<PlotSeries> plots;
        for (int j = 0; j < 4; ++j) {
            PlotSeries s{std::string(branch_label(j)) + " residual", {}};
            for (std::size_t k = 0; k < orders.r.size(); ++k)
                s.points.push_back({orders.r[k], orders.residual[static_cast<std::size_t>(j)][k]});
            plots.push_back(std::move(s));
        }
        write_loglog_svg(out_path(cfg, "eig_sweep_residuals.svg"), "eigenvalue remainders vs r", plots);
    }
    out << "eig-sweep " << regime_name(orders.regime) << " predicted " << orders.predicted << ":";
    for (int j = 0; j < 4; ++j) {
        const auto& b = orders.branch[static_cast<std::size_t>(j)];
        out << " " << branch_label(j) << "=" << (b.exact_to_precision ? std::string("exact") : format_number(b.slope));
    }
    out << (ok ? " [pass]" : " [fail]") << "\n";
    if (!ok) throw AcceptanceFailure{"remainder orders (" + regime_name(orders.regime) + " frequencies)"};
}

void stability_scan(const ExperimentConfig& cfg, std::ostream& out)
{
    GapCertificate cert;
    try {
        cert = spectral_gap_scan(cfg.params, cfg.zone, cfg.scan.samples);
    } catch (const CheckFailure& e) {
        out << e.what() << "\n";
        throw AcceptanceFailure{"bounded-zone spectral gap"};
    }
    const bool ok = cert.min_real_part >= cfg.scan.min_real_part_floor && cert.identity_margin > 0.0;
    json doc = envelope(cfg, "stability-scan");
    doc["min_real_part"] = cert.min_real_part;
    doc["argmin_r"] = cert.argmin_r;
    doc["samples"] = cert.samples;
    doc["identity_margin"] = cert.identity_margin;
    doc["band"] = {cfg.zone.eps, cfg.zone.N};
    doc["verdict"] = ok ? "pass" : "fail";
    emit_json(cfg, "stability_scan.json", doc);
    out << "stability-scan: min Re lambda " << format_number(cert.min_real_part) << " at r = "
        << format_number(cert.argmin_r) << ", identity margin " << format_number(cert.identity_margin)
        << (ok ? " [pass]" : " [fail]") << "\n";
    if (!ok) throw AcceptanceFailure{"bounded-zone spectral gap"};
}

void pointwise_fit(const ExperimentConfig& cfg, std::ostream& out)
{
    const auto& pw = cfg.pointwise;
    const auto r_samples = log_spaced(pw.r_min, pw.r_max, pw.r_count);
    PointwiseConstants fit;
    try {
        fit = pointwise_constants_fit(cfg.params, r_samples, pw.times);
    } catch (const CheckFailure& e) {
        out << e.what() << "\n";
        throw AcceptanceFailure{"pointwise estimate"};
    }
    if (cfg.output.csv) {
        std::vector<std::vector<double>> rows;
        for (double r : r_samples) {
            for (double t : pw.times) {
                const double norm = operator_norm(block_propagator(cfg.params, r, t));
                rows.push_back({r, t, norm, fit.C * std::exp(-fit.c * eta(cfg.params, r) * t)});
            }
        }
        write_csv(out_path(cfg, "pointwise_fit.csv"), {"r", "t", "norm", "bound"}, rows);
    }
    json doc = envelope(cfg, "pointwise-fit");
    doc["C"] = fit.C;
    doc["c"] = fit.c;
    doc["max_constant"] = kPointwiseMaxConstant;
    doc["verdict"] = "pass";
    emit_json(cfg, "pointwise_fit.json", doc);
    out << "pointwise-fit: c = " << format_number(fit.c) << ", C = " << format_number(fit.C) << " [pass]\n";
}

void simulate(const ExperimentConfig& cfg, std::ostream& out)
{
    StudyConfig study = cfg.study_config();
    study.pipeline = Pipeline::Lattice;
    const InitialData data = make_initial_data(cfg.data, cfg.grid);
    const FourierField W0 = initial_W(data, cfg.params);
    std::vector<NormPoint> series;
    FourierField last = W0;
    for (double t : study.times) {
        last = evolve_to(W0, t, cfg.params);
        series.push_back({t, sobolev_norm(last, study.s)});
    }
    fs::create_directories(cfg.output.directory);
    write_snapshot(last, out_path(cfg, "simulate_final.ddwf").string());
    if (cfg.output.csv) write_series_csv(out_path(cfg, "simulate.csv"), series);
    json doc = envelope(cfg, "simulate");
    doc["initial_norm"] = sobolev_norm(W0, study.s);
    doc["series"] = to_json(series);
    doc["snapshot"] = "simulate_final.ddwf";
    emit_json(cfg, "simulate.json", doc);
    if (cfg.output.svg)
        write_loglog_svg(out_path(cfg, "simulate.svg"), "lattice solution norm", {{"solution", series}});
    out << "simulate: " << series.size() << " snapshots on a " << cfg.grid.n << "^2 lattice; final norm "
        << format_number(series.back().norm) << "\n";
}

void decay_study(const ExperimentConfig& cfg, std::ostream& out)
{
    const StudyConfig study = cfg.study_config();
    const auto series = norm_series(study, NormTarget::Solution);
    const DecayFit fit = fit_decay(series, cfg.study.window_min, cfg.study.window_max);
    const bool zero_mean = cfg.data.kind != DataKind::Gaussian;
    const double selector = cfg.study.data_class == DataClass::Lm ? cfg.study.m : cfg.study.gamma;
    const auto rates = theoretical_rates(cfg.params, cfg.study.s, cfg.study.data_class, selector, zero_mean);
    const bool ok = std::abs(fit.slope + rates.base_rate) <= cfg.study.rate_tolerance;

    if (cfg.output.csv) write_series_csv(out_path(cfg, "decay_series.csv"), series);
    json doc = envelope(cfg, "decay-study");
    doc["fit"] = to_json(fit);
    doc["theoretical"] = {{"base_rate", rates.base_rate}, {"expected_slope", -rates.base_rate},
                          {"refinement_q", rates.refinement_q}};
    doc["tolerance"] = cfg.study.rate_tolerance;
    doc["verdict"] = ok ? "pass" : "fail";
    emit_json(cfg, "decay_study.json", doc);
    if (cfg.output.svg) write_loglog_svg(out_path(cfg, "decay_series.svg"), "solution norm", {{"solution", series}});
    out << "decay-study: slope " << format_number(fit.slope) << " (stderr " << format_number(fit.std_error)
        << "), expected " << format_number(-rates.base_rate) << (ok ? " [pass]" : " [fail]") << "\n";
    if (!ok) throw AcceptanceFailure{"energy decay rate"};
}

void diffusion_study(const ExperimentConfig& cfg, std::ostream& out)
{
    const StudyConfig study = cfg.study_config();
    const auto gap = norm_series(study, NormTarget::DiffusionGap);
    const auto sol = norm_series(study, NormTarget::LocalizedSolution);
    const DecayFit gap_fit = fit_decay(gap, cfg.study.window_min, cfg.study.window_max);
    const DecayFit sol_fit = fit_decay(sol, cfg.study.window_min, cfg.study.window_max);
    const double q = refinement_exponent(cfg.params);
    const double diff = gap_fit.slope - sol_fit.slope;
    const bool ok = diff <= -q + cfg.study.refinement_tolerance;

    if (cfg.output.csv) {
        write_series_csv(out_path(cfg, "diffusion_gap.csv"), gap);
        write_series_csv(out_path(cfg, "diffusion_solution.csv"), sol);
    }
    json doc = envelope(cfg, "diffusion-study");
    doc["gap_fit"] = to_json(gap_fit);
    doc["solution_fit"] = to_json(sol_fit);
    doc["slope_difference"] = diff;
    doc["theoretical"] = {{"refinement_q", q}, {"bound", -q + cfg.study.refinement_tolerance}};
    doc["verdict"] = ok ? "pass" : "fail";
    emit_json(cfg, "diffusion_study.json", doc);
    if (cfg.output.svg)
        write_loglog_svg(out_path(cfg, "diffusion_series.svg"), "small-frequency solution and diffusion gap",
                         {{"localized solution", sol}, {"gap to reference", gap}});
    out << "diffusion-study: gap slope " << format_number(gap_fit.slope) << ", solution slope "
        << format_number(sol_fit.slope) << ", difference " << format_number(diff) << " vs bound "
        << format_number(-q + cfg.study.refinement_tolerance) << (ok ? " [pass]" : " [fail]") << "\n";
    if (!ok) throw AcceptanceFailure{"diffusion refinement"};
}

void gevrey_check(const ExperimentConfig& cfg, std::ostream& out)
{
    const auto& g = cfg.gevrey;
    const auto samples = log_spaced(g.r_min, g.r_max, g.samples);
    const double coeff = exterior_gap_coefficient(cfg.params, samples);
    const double c_prime = g.c_prime ? *g.c_prime : 0.5 * coeff;
    const double indicator = gevrey_indicator(cfg.params, g.t, c_prime, samples);
    const bool ok = indicator <= g.bound;
    if (cfg.output.csv) {
        std::vector<std::vector<double>> rows;
        for (double r : samples) {
            const std::vector<double> one{r};
            rows.push_back({r, gevrey_indicator(cfg.params, g.t, c_prime, one)});
        }
        write_csv(out_path(cfg, "gevrey_check.csv"), {"r", "weighted_norm"}, rows);
    }
    json doc = envelope(cfg, "gevrey-check");
    doc["exterior_coefficient"] = coeff;
    doc["c_prime"] = c_prime;
    doc["weight_exponent"] = gevrey_weight_exponent(cfg.params);
    doc["indicator"] = indicator;
    doc["bound"] = g.bound;
    doc["verdict"] = ok ? "bounded" : "unbounded";
    emit_json(cfg, "gevrey_check.json", doc);
    out << "gevrey-check: weight exponent " << format_number(gevrey_weight_exponent(cfg.params)) << ", c' "
        << format_number(c_prime) << ", indicator " << format_number(indicator) << " vs bound " << format_number(g.bound)
        << (ok ? " [bounded]" : " [unbounded]") << "\n";
    if (!ok) throw AcceptanceFailure{"Gevrey indicator bound"};
}

void verify_all(const ExperimentConfig& cfg, std::ostream& out)
{
    std::vector<std::string> failed;
    const auto results = run_acceptance(cfg.seed, [&](const CriterionResult& r) {
        out << format_result(r) << "\n" << std::flush;
        if (!r.passed) failed.push_back(std::to_string(r.id) + " (" + r.name + ")");
    });
    json doc = envelope(cfg, "verify-all");
    json rows = json::array();
    for (const auto& r : results)
        rows.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail},
                        {"budget_seconds", r.budget}});
    doc["criteria"] = rows;
    doc["passed"] = failed.empty();
    emit_json(cfg, "verify_all.json", doc);
    out << (results.size() - failed.size()) << "/" << results.size() << " criteria passed\n";
    if (!failed.empty()) {
        std::string names;
        for (const auto& f : failed) names += (names.empty() ? "" : ", ") + f;
        throw AcceptanceFailure{"criteria " + names};
    }
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Spectral laboratory for doubly dissipative elastic waves", "ddwave"};
    app.require_subcommand(1);
    Options opt;

    using Handler = void (*)(const ExperimentConfig&, std::ostream&);
    const std::map<std::string, std::pair<Handler, std::string>> commands{
        {"eig-sweep", {eig_sweep, "exact vs principal eigenvalues and remainder orders"}},
        {"stability-scan", {stability_scan, "bounded-zone spectral gap certificate"}},
        {"pointwise-fit", {pointwise_fit, "constants of the pointwise propagator estimate"}},
        {"simulate", {simulate, "lattice evolution of the configured data"}},
        {"decay-study", {decay_study, "decay-rate fit of the solution norm"}},
        {"diffusion-study", {diffusion_study, "gap between solution and reference system"}},
        {"gevrey-check", {gevrey_check, "exterior-zone Gevrey indicator"}},
        {"verify-all", {verify_all, "run every acceptance criterion"}},
    };
    Handler selected = nullptr;
    for (const auto& [name, entry] : commands) {
        CLI::App* sub = app.add_subcommand(name, entry.second);
        sub->add_option("--config", opt.config, "JSON experiment configuration");
        sub->add_option("--a", opt.a, "override params.a");
        sub->add_option("--b", opt.b, "override params.b");
        sub->add_option("--rho", opt.rho, "override params.rho");
        sub->add_option("--theta", opt.theta, "override params.theta");
        sub->add_option("--out", opt.out, "output directory (default: $DDWAVE_OUT or ./ddwave-out)");
        sub->add_option("--threads", opt.threads, "cap on worker threads")->check(CLI::NonNegativeNumber);
        const Handler handler = entry.first;
        sub->callback([&selected, handler] { selected = handler; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (opt.threads > 0) omp_set_num_threads(opt.threads);
        const ExperimentConfig cfg = resolve(opt);
        fs::create_directories(cfg.output.directory);
        selected(cfg, out);
        return kExitOk;
    } catch (const AcceptanceFailure& f) {
        err << "acceptance failure: " << f.criterion << "\n";
        return kExitAcceptance;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const CheckFailure& e) {
        err << "acceptance failure: " << e.what() << "\n";
        return kExitAcceptance;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
}

}  // namespace ddw::cli
