#include "depscreen/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "depscreen/errors.hpp"

namespace depscreen {

using nlohmann::json;

std::string format_sig12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace {

// Numbers are rounded through the 12-significant-digit rendering before they
// enter a JSON document, so re-parsing an emitted report reproduces it.
// Non-finite values become null (JSON has no representation for them).
json num12(double v) {
    if (!std::isfinite(v)) return json();
    return json::parse(format_sig12(v));
}

std::string benchmark_model_name(BenchModel m) {
    switch (m) {
        case BenchModel::Additive: return "additive";
        case BenchModel::Interaction: return "interaction";
        case BenchModel::Morris: return "morris";
    }
    return "?";
}

std::string method_label(const ScreenMethodSpec& spec) {
    std::string label = method_name(spec.method);
    if (spec.method == Method::HsicLasso) {
        label += spec.cv_mode == CvMode::Modified ? "-modified" : "-standard";
    }
    return label;
}

}  // namespace

std::string render_screening_report(const ScreeningReport& report, std::uint64_t seed,
                                    ReportFormat format) {
    if (format == ReportFormat::Json) {
        json doc;
        doc["method"] = method_name(report.method);
        doc["alpha"] = report.outcomes.empty() ? json(nullptr)
                                               : num12(report.outcomes.front().alpha);
        doc["seed"] = seed;
        doc["n"] = report.n;
        json per_input = json::array();
        for (size_t k = 0; k < report.outcomes.size(); ++k) {
            const TestOutcome& o = report.outcomes[k];
            per_input.push_back({{"index", static_cast<int>(k)},
                                 {"statistic", num12(o.statistic)},
                                 {"p_value", num12(o.p_value)},
                                 {"reject", o.reject}});
        }
        doc["per_input"] = std::move(per_input);
        doc["selected"] = report.selected;
        return doc.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "index,method,alpha,statistic,p_value,reject\n";
    for (size_t k = 0; k < report.outcomes.size(); ++k) {
        const TestOutcome& o = report.outcomes[k];
        out << k << ',' << method_name(o.method) << ',' << format_sig12(o.alpha) << ','
            << format_sig12(o.statistic) << ',' << format_sig12(o.p_value) << ','
            << (o.reject ? 1 : 0) << '\n';
    }
    return out.str();
}

ScreeningReport parse_screening_report_json(const std::string& text) {
    const json doc = json::parse(text);
    ScreeningReport report;
    report.method = method_from_name(doc.at("method").get<std::string>());
    report.n = doc.value("n", 0);
    const double alpha = doc.at("alpha").is_null() ? 0.05 : doc.at("alpha").get<double>();
    for (const auto& item : doc.at("per_input")) {
        TestOutcome o;
        o.method = report.method;
        o.alpha = alpha;
        o.statistic = item.at("statistic").get<double>();
        o.p_value = item.at("p_value").get<double>();
        o.reject = item.at("reject").get<bool>();
        report.outcomes.push_back(o);
    }
    report.selected = doc.at("selected").get<std::vector<int>>();
    return report;
}

std::string render_metrics_report(const MetricsReport& report, ReportFormat format) {
    if (format == ReportFormat::Json) {
        json doc;
        doc["model"] = benchmark_model_name(report.config.model);
        doc["n"] = report.config.n;
        doc["d"] = report.config.d;
        doc["d_check"] = report.config.d_check;
        doc["repetitions"] = report.config.repetitions;
        doc["alpha"] = num12(report.config.alpha);
        doc["seed"] = report.config.seed;
        json rows = json::array();
        for (size_t i = 0; i < report.methods.size(); ++i) {
            rows.push_back({{"method", method_label(report.methods[i])},
                            {"non_influential", num12(report.metrics[i].non_influential_rate)},
                            {"influential", num12(report.metrics[i].influential_rate)},
                            {"perfect_screening",
                             num12(report.metrics[i].perfect_screening_rate)}});
        }
        doc["per_method"] = std::move(rows);
        return doc.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "model,n,d,d_check,repetitions,method,non_influential,influential,perfect_screening\n";
    for (size_t i = 0; i < report.methods.size(); ++i) {
        out << benchmark_model_name(report.config.model) << ',' << report.config.n << ','
            << report.config.d << ',' << report.config.d_check << ','
            << report.config.repetitions << ',' << method_label(report.methods[i]) << ','
            << format_sig12(report.metrics[i].non_influential_rate) << ','
            << format_sig12(report.metrics[i].influential_rate) << ','
            << format_sig12(report.metrics[i].perfect_screening_rate) << '\n';
    }
    return out.str();
}

std::string render_share_table(const std::vector<ShareRow>& rows, std::uint64_t seed,
                               ReportFormat format) {
    if (format == ReportFormat::Json) {
        json doc;
        doc["seed"] = seed;
        json arr = json::array();
        for (const auto& r : rows) {
            arr.push_back({{"model", r.model},
                           {"input", r.input},
                           {"effect", r.effect},
                           {"hsic", num12(r.hsic)},
                           {"sup_hsic", num12(r.sup_hsic)},
                           {"dcor", num12(r.dcor)},
                           {"sobol", num12(r.sobol)}});
        }
        doc["rows"] = std::move(arr);
        return doc.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "model,input,effect,hsic,sup_hsic,dcor,sobol\n";
    for (const auto& r : rows) {
        out << r.model << ',' << r.input << ',' << r.effect << ',' << format_sig12(r.hsic)
            << ',' << format_sig12(r.sup_hsic) << ',' << format_sig12(r.dcor) << ','
            << format_sig12(r.sobol) << '\n';
    }
    return out.str();
}

std::string render_interaction_table(const std::vector<InteractionRow>& rows,
                                     std::uint64_t seed, ReportFormat format) {
    if (format == ReportFormat::Json) {
        json doc;
        doc["seed"] = seed;
        json arr = json::array();
        for (const auto& r : rows) {
            arr.push_back({{"alpha", num12(r.alpha)},
                           {"hsic_x1", num12(r.hsic_x1)},
                           {"hsic_x2", num12(r.hsic_x2)},
                           {"delta_x1", num12(r.delta_x1)},
                           {"delta_x2", num12(r.delta_x2)},
                           {"sobol_t1", num12(r.sobol_t1)},
                           {"sobol_t2", num12(r.sobol_t2)}});
        }
        doc["rows"] = std::move(arr);
        return doc.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "alpha,hsic_x1,hsic_x2,delta_x1,delta_x2,sobol_t1,sobol_t2\n";
    for (const auto& r : rows) {
        out << format_sig12(r.alpha) << ',' << format_sig12(r.hsic_x1) << ','
            << format_sig12(r.hsic_x2) << ',' << format_sig12(r.delta_x1) << ','
            << format_sig12(r.delta_x2) << ',' << format_sig12(r.sobol_t1) << ','
            << format_sig12(r.sobol_t2) << '\n';
    }
    return out.str();
}

void write_text(const std::string& path, const std::string& text) {
    if (path == "-" || path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!out) throw IoError("write failed for " + path);
}

}  // namespace depscreen
