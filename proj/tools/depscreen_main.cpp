#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include <json.hpp>

#include "depscreen/benchmarks.hpp"
#include "depscreen/errors.hpp"
#include "depscreen/indep_tests.hpp"
#include "depscreen/local_regression.hpp"
#include "depscreen/report.hpp"

namespace ds = depscreen;
using nlohmann::json;

namespace {

struct CommonOpts {
    std::optional<std::uint64_t> seed;
    int threads = 0;
    std::string output = "-";
    std::string format = "json";
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--seed", opts.seed, "Master seed (drawn from system entropy when absent)");
    cmd->add_option("--threads", opts.threads,
                    "Worker threads (default: DEPSCREEN_THREADS or hardware concurrency)");
    cmd->add_option("-o,--output", opts.output, "Output path, '-' for stdout")
        ->capture_default_str();
    cmd->add_option("--format", opts.format, "Report format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
}

std::uint64_t resolve_seed(const CommonOpts& opts) {
    if (opts.seed) return *opts.seed;
    std::random_device rd;
    const std::uint64_t seed =
        (static_cast<std::uint64_t>(rd()) << 32) ^ static_cast<std::uint64_t>(rd());
    std::cerr << "seed: " << seed << "\n";
    return seed;
}

int resolve_threads(const CommonOpts& opts) {
    if (opts.threads > 0) return opts.threads;
    if (const char* env = std::getenv("DEPSCREEN_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

ds::ReportFormat parse_format(const std::string& name) {
    return name == "csv" ? ds::ReportFormat::Csv : ds::ReportFormat::Json;
}

double check_alpha_range(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ds::UsageError("--alpha must lie in (0,1)");
    return alpha;
}

int run_measure(const std::string& input, const CommonOpts& opts) {
    const std::uint64_t seed = resolve_seed(opts);
    const ds::Dataset data = ds::load_dataset(input);
    const bool scalar_y = data.output.q() == 1;

    json rows = json::array();
    std::ostringstream csv;
    csv << "index,measure,value\n";
    for (int k = 0; k < data.d(); ++k) {
        const ds::DataColumn& x = data.inputs[static_cast<size_t>(k)];
        json row;
        row["index"] = k;
        auto put = [&](const char* name, double value) {
            row[name] = json::parse(ds::format_sig12(value));
            csv << k << ',' << name << ',' << ds::format_sig12(value) << '\n';
        };
        if (scalar_y) {
            put("pearson", ds::pearson(x, data.output).value);
            put("spearman", ds::spearman(x, data.output).value);
        }
        put("dcov2", ds::dcov2(x, data.output).value);
        put("dcor2", ds::dcor2(x, data.output).value);
        put("hsic", ds::hsic(x, data.output, ds::empirical_bandwidth(x),
                             ds::empirical_bandwidth(data.output))
                        .value);
        put("sup_hsic",
            ds::sup_hsic(x, data.output, ds::default_bandwidth_grid(x, data.output))
                .estimate.value);
        if (scalar_y) {
            try {
                put("borgonovo_delta", ds::borgonovo_delta(x, data.output).value);
            } catch (const ds::InsufficientSample&) {
                // needs n >= 10 * n_classes; omitted for small datasets
            }
        }
        rows.push_back(std::move(row));
    }
    if (parse_format(opts.format) == ds::ReportFormat::Json) {
        json doc;
        doc["seed"] = seed;
        doc["per_input"] = std::move(rows);
        ds::write_text(opts.output, doc.dump(2) + "\n");
    } else {
        ds::write_text(opts.output, csv.str());
    }
    return 0;
}

int run_screen(const std::string& input, const std::string& method_name, double alpha,
               int B, int draws, bool permute, const CommonOpts& opts) {
    check_alpha_range(alpha);
    const std::uint64_t seed = resolve_seed(opts);
    const ds::Dataset data = ds::load_dataset(input);
    const ds::Method method = ds::method_from_name(method_name);

    ds::ScreeningReport report;
    if (method == ds::Method::HsicLasso) {
        ds::Rng rng(ds::derive_seed(seed, 0x4A550));
        report = ds::hsic_lasso_screen(data, ds::CvMode::Modified, 5, rng);
    } else if (method == ds::Method::CoefficientBootstrap) {
        report = ds::coefficient_bootstrap_screen(data, ds::LocalMeasureKind::HsicCenteredKernel,
                                                  B, alpha, seed);
    } else {
        ds::ScreenParams params;
        params.method = method;
        params.alpha = alpha;
        params.B = B;
        params.draws = draws;
        params.with_replacement = !permute;
        params.threads = resolve_threads(opts);
        report = ds::screen(data, params, seed);
    }
    ds::write_text(opts.output,
                   ds::render_screening_report(report, seed, parse_format(opts.format)));
    return 0;
}

int run_lasso(const std::string& input, const std::string& mode_name, int folds,
              const CommonOpts& opts) {
    const std::uint64_t seed = resolve_seed(opts);
    const ds::Dataset data = ds::load_dataset(input);
    const ds::CvMode mode =
        mode_name == "standard" ? ds::CvMode::Standard : ds::CvMode::Modified;
    ds::Rng rng(ds::derive_seed(seed, 0x4A550));
    const ds::ScreeningReport report = ds::hsic_lasso_screen(data, mode, folds, rng);
    ds::write_text(opts.output,
                   ds::render_screening_report(report, seed, parse_format(opts.format)));
    return 0;
}

int run_coef_test(const std::string& input, int B, double alpha, const CommonOpts& opts) {
    check_alpha_range(alpha);
    const std::uint64_t seed = resolve_seed(opts);
    const ds::Dataset data = ds::load_dataset(input);
    const ds::ScreeningReport report = ds::coefficient_bootstrap_screen(
        data, ds::LocalMeasureKind::HsicCenteredKernel, B, alpha, seed);
    ds::write_text(opts.output,
                   ds::render_screening_report(report, seed, parse_format(opts.format)));
    return 0;
}

std::vector<ds::ScreenMethodSpec> table3_methods(const std::vector<std::string>& filter) {
    const std::vector<ds::Method> all = {
        ds::Method::HsicGamma,     ds::Method::DcovQuantile, ds::Method::HsicSpectral,
        ds::Method::DcovSpectral,  ds::Method::HsicBootstrap, ds::Method::DcovBootstrap,
    };
    std::vector<ds::ScreenMethodSpec> specs;
    for (ds::Method m : all) {
        if (!filter.empty() &&
            std::find(filter.begin(), filter.end(), ds::method_name(m)) == filter.end()) {
            continue;
        }
        specs.push_back({m, ds::CvMode::Standard});
    }
    if (specs.empty()) throw ds::UsageError("--methods filter matched nothing");
    return specs;
}

int run_bench(const std::string& table, bool quick, double alpha,
              const std::vector<std::string>& method_filter, const CommonOpts& opts) {
    check_alpha_range(alpha);
    const std::uint64_t seed = resolve_seed(opts);
    const int threads = resolve_threads(opts);
    const ds::ReportFormat format = parse_format(opts.format);

    if (table == "table1") {
        const auto rows = ds::sensitivity_table_additive(1000, 100, seed, threads);
        ds::write_text(opts.output, ds::render_share_table(rows, seed, format));
        return 0;
    }
    if (table == "table2") {
        const int reps = quick ? 50 : 1000;
        const auto rows = ds::sensitivity_table_interaction(
            1000, reps, {0, 1, 2, 4, 5, 6, 7, 8, 9, 10}, seed, threads);
        ds::write_text(opts.output, ds::render_interaction_table(rows, seed, format));
        return 0;
    }
    if (table == "table3" || table == "table4") {
        std::vector<ds::MetricsReport> reports;
        if (table == "table3") {
            for (const int n : {10, 25, 50, 100, 200}) {
                for (const int r : {2, 5, 10}) {
                    ds::ExperimentConfig cfg;
                    cfg.model = ds::BenchModel::Morris;
                    cfg.n = n;
                    cfg.d = 5;
                    cfg.d_check = 5 * r;
                    cfg.repetitions = quick ? 200 : 1000;
                    cfg.alpha = alpha;
                    cfg.B = 500;
                    cfg.draws = quick ? 1000 : 2500;
                    cfg.seed = seed;
                    cfg.threads = threads;
                    cfg.methods = table3_methods(method_filter);
                    reports.push_back(ds::run_experiment(cfg));
                }
            }
        } else {
            for (const int n : {50, 100, 200}) {
                ds::ExperimentConfig cfg;
                cfg.model = ds::BenchModel::Morris;
                cfg.n = n;
                cfg.d = 5;
                cfg.d_check = 5;
                cfg.repetitions = quick ? 200 : 1000;
                cfg.alpha = alpha;
                cfg.B = quick ? 200 : 500;
                cfg.seed = seed;
                cfg.threads = threads;
                cfg.methods = {{ds::Method::CoefficientBootstrap, ds::CvMode::Standard},
                               {ds::Method::HsicLasso, ds::CvMode::Standard},
                               {ds::Method::HsicLasso, ds::CvMode::Modified}};
                reports.push_back(ds::run_experiment(cfg));
            }
        }
        if (format == ds::ReportFormat::Json) {
            json arr = json::array();
            for (const auto& r : reports) arr.push_back(json::parse(ds::render_metrics_report(r, format)));
            json doc;
            doc["seed"] = seed;
            doc["table"] = table;
            doc["cells"] = std::move(arr);
            ds::write_text(opts.output, doc.dump(2) + "\n");
        } else {
            std::string out;
            for (size_t i = 0; i < reports.size(); ++i) {
                std::string cell = ds::render_metrics_report(reports[i], format);
                if (i > 0) cell.erase(0, cell.find('\n') + 1);  // keep one header
                out += cell;
            }
            ds::write_text(opts.output, out);
        }
        return 0;
    }
    throw ds::UsageError("unknown benchmark '" + table + "' (table1..table4)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dependence-measure screening toolkit"};
    app.require_subcommand(1);

    CommonOpts opts;

    std::string input, method = "hsic-gamma", cv_mode = "modified", table;
    std::vector<std::string> method_filter;
    double alpha = 0.05;
    int B = 500, draws = 5000, folds = 5;
    bool quick = false, permute = false;

    CLI::App* measure = app.add_subcommand("measure", "All dependence estimates per input");
    measure->add_option("--input", input, "CSV dataset")->required();
    add_common(measure, opts);

    CLI::App* test = app.add_subcommand("test", "Independence test for every input");
    test->add_option("--input", input, "CSV dataset")->required();
    test->add_option("--method", method, "Test method")->capture_default_str();
    test->add_option("--alpha", alpha, "Significance level")->capture_default_str();
    test->add_option("--B", B, "Bootstrap resamples")->capture_default_str();
    test->add_option("--draws", draws, "Spectral null draws")->capture_default_str();
    test->add_flag("--permute", permute, "Resample without replacement");
    add_common(test, opts);

    CLI::App* screen = app.add_subcommand("screen", "Screening report for every input");
    screen->add_option("--input", input, "CSV dataset")->required();
    screen->add_option("--method", method, "Test method")->capture_default_str();
    screen->add_option("--alpha", alpha, "Significance level")->capture_default_str();
    screen->add_option("--B", B, "Bootstrap resamples")->capture_default_str();
    screen->add_option("--draws", draws, "Spectral null draws")->capture_default_str();
    screen->add_flag("--permute", permute, "Resample without replacement");
    add_common(screen, opts);

    CLI::App* lasso = app.add_subcommand("lasso", "HSIC-Lasso input selection");
    lasso->add_option("--input", input, "CSV dataset")->required();
    lasso->add_option("--cv-mode", cv_mode, "standard or modified")
        ->check(CLI::IsMember({"standard", "modified"}))
        ->capture_default_str();
    lasso->add_option("--folds", folds, "Cross-validation folds")->capture_default_str();
    add_common(lasso, opts);

    CLI::App* coef = app.add_subcommand("coef-test", "Bootstrap coefficient nullity test");
    coef->add_option("--input", input, "CSV dataset")->required();
    coef->add_option("--B", B, "Bootstrap resamples")->capture_default_str();
    coef->add_option("--alpha", alpha, "Significance level")->capture_default_str();
    add_common(coef, opts);

    CLI::App* bench = app.add_subcommand("bench", "Reproduce the numerical experiments");
    bench->add_option("table", table, "table1 | table2 | table3 | table4")->required();
    bench->add_flag("--quick", quick, "Reduced repetition count");
    bench->add_option("--alpha", alpha, "Significance level")->capture_default_str();
    bench->add_option("--methods", method_filter,
                      "Restrict table3 to these methods (comma separated)")
        ->delimiter(',');
    add_common(bench, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (measure->parsed()) return run_measure(input, opts);
        if (test->parsed() || screen->parsed()) {
            return run_screen(input, method, alpha, B, draws, permute, opts);
        }
        if (lasso->parsed()) return run_lasso(input, cv_mode, folds, opts);
        if (coef->parsed()) return run_coef_test(input, B, alpha, opts);
        if (bench->parsed()) return run_bench(table, quick, alpha, method_filter, opts);
        throw ds::UsageError("no subcommand given");
    } catch (const ds::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
