#include "depscreen/benchmarks.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

#include "depscreen/errors.hpp"
#include "depscreen/indep_tests.hpp"

namespace depscreen {

namespace {

const double kRt3 = std::sqrt(3.0);
const double kExpA = std::sinh(kRt3) / kRt3;
const double kExpB = std::sqrt(std::sinh(2.0 * kRt3) / (2.0 * kRt3) - kExpA * kExpA);
const double kSinA = 1.0 / std::sqrt(0.5 - std::sin(4.0 * kRt3) / (8.0 * kRt3));

constexpr std::uint64_t kColumnTag = 0x10C0;
constexpr std::uint64_t kAsymTag = 0xFA00;
constexpr std::uint64_t kSpectralFamilyTag = 0xFA02;
constexpr std::uint64_t kBootstrapFamilyTag = 0xFA01;
constexpr std::uint64_t kLassoTag = 0xFA03;
constexpr std::uint64_t kCoefTag = 0xFA04;

}  // namespace

void parallel_for(int count, int threads, const std::function<void(int)>& f) {
    threads = std::max(1, threads);
    if (threads == 1 || count <= 1) {
        for (int i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int workers = std::min(threads, count);
    pool.reserve(static_cast<size_t>(workers));
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) f(i);
        });
    }
    for (auto& th : pool) th.join();
}

double elementary(ElementaryKind kind, double x) {
    switch (kind) {
        case ElementaryKind::Linear: return x;
        case ElementaryKind::Exponential: return (std::exp(x) - kExpA) / kExpB;
        case ElementaryKind::Sinusoidal: return kSinA * std::sin(2.0 * x);
    }
    throw Error("unreachable");
}

double additive_model(const std::array<double, 3>& alpha, const std::array<double, 3>& x) {
    return alpha[0] * elementary(ElementaryKind::Linear, x[0]) +
           alpha[1] * elementary(ElementaryKind::Exponential, x[1]) +
           alpha[2] * elementary(ElementaryKind::Sinusoidal, x[2]);
}

double interaction_model(double alpha, double x1, double x2) {
    if (alpha < 0.0) throw Error("interaction_model: alpha must be nonnegative");
    const double h1 = elementary(ElementaryKind::Exponential, x1);
    const double h2 = elementary(ElementaryKind::Exponential, x2);
    return h1 + alpha * h1 * h2;
}

double morris_model(int d, int d_check, std::span<const double> x) {
    if (d < 1) throw Error("morris_model: d must be positive");
    if (static_cast<int>(x.size()) < d + d_check) {
        throw DimensionMismatch("morris_model: too few inputs");
    }
    const double a = std::sqrt(12.0) - 6.0 * std::sqrt(0.1 * (d - 1));
    const double b = 12.0 * std::sqrt(0.1 * (d - 1));
    double linear = 0.0;
    double inter = 0.0;
    for (int i = 0; i < d; ++i) {
        linear += x[static_cast<size_t>(i)];
        for (int j = i + 1; j < d; ++j) inter += x[static_cast<size_t>(i)] * x[static_cast<size_t>(j)];
    }
    return a * (linear + b * inter);
}

std::array<double, 3> analytic_sobol_additive(const std::array<double, 3>& alpha) {
    const double s = alpha[0] * alpha[0] + alpha[1] * alpha[1] + alpha[2] * alpha[2];
    if (s <= 0.0) throw ZeroModel("additive model with all-zero weights");
    return {alpha[0] * alpha[0] / s, alpha[1] * alpha[1] / s, alpha[2] * alpha[2] / s};
}

InteractionSobol analytic_sobol_interaction(double alpha) {
    if (alpha < 0.0) throw Error("alpha must be nonnegative");
    const double a2 = alpha * alpha;
    return {1.0 / (1.0 + a2), 0.0, 1.0, a2 / (1.0 + a2)};
}

Eigen::MatrixXd sample_inputs(int n, int count, InputDistribution dist, std::uint64_t seed) {
    if (n < 1 || count < 1) throw Error("sample_inputs: empty request");
    Eigen::MatrixXd x(n, count);
    for (int j = 0; j < count; ++j) {
        Rng rng(derive_seed(seed, kColumnTag + static_cast<std::uint64_t>(j)));
        for (int i = 0; i < n; ++i) {
            x(i, j) = dist == InputDistribution::Uniform01 ? rng.uniform01()
                                                           : rng.uniform(-kRt3, kRt3);
        }
    }
    return x;
}

namespace {

struct ModelInstance {
    Eigen::MatrixXd inputs;      // n x (influential + d_check)
    Eigen::VectorXd output;
    int influential = 0;
};

ModelInstance evaluate_model(const ExperimentConfig& cfg, std::uint64_t rep_seed) {
    ModelInstance inst;
    int effect_cols = 0;
    InputDistribution dist = InputDistribution::Uniform01;
    switch (cfg.model) {
        case BenchModel::Morris:
            effect_cols = cfg.d;
            dist = InputDistribution::Uniform01;
            break;
        case BenchModel::Additive:
            effect_cols = 3;
            dist = InputDistribution::UniformSym3;
            break;
        case BenchModel::Interaction:
            effect_cols = 2;
            dist = InputDistribution::UniformSym3;
            break;
    }
    const int total = effect_cols + cfg.d_check;
    inst.inputs = sample_inputs(cfg.n, total, dist, rep_seed);
    inst.output.resize(cfg.n);
    for (int i = 0; i < cfg.n; ++i) {
        switch (cfg.model) {
            case BenchModel::Morris: {
                std::vector<double> row(static_cast<size_t>(total));
                for (int j = 0; j < total; ++j) row[static_cast<size_t>(j)] = inst.inputs(i, j);
                inst.output(i) = morris_model(cfg.d, cfg.d_check, row);
                break;
            }
            case BenchModel::Additive:
                inst.output(i) = additive_model(
                    cfg.additive_alpha, {inst.inputs(i, 0), inst.inputs(i, 1), inst.inputs(i, 2)});
                break;
            case BenchModel::Interaction:
                inst.output(i) =
                    interaction_model(cfg.interaction_alpha, inst.inputs(i, 0), inst.inputs(i, 1));
                break;
        }
    }
    switch (cfg.model) {
        case BenchModel::Morris:
            inst.influential = cfg.d;
            break;
        case BenchModel::Additive: {
            inst.influential = 0;
            for (double a : cfg.additive_alpha) inst.influential += a != 0.0 ? 1 : 0;
            break;
        }
        case BenchModel::Interaction:
            inst.influential = cfg.interaction_alpha > 0.0 ? 2 : 1;
            break;
    }
    return inst;
}

Dataset to_dataset(const ModelInstance& inst) {
    std::vector<DataColumn> inputs;
    inputs.reserve(static_cast<size_t>(inst.inputs.cols()));
    for (Eigen::Index j = 0; j < inst.inputs.cols(); ++j) {
        inputs.emplace_back(Eigen::MatrixXd(inst.inputs.col(j)));
    }
    return Dataset(std::move(inputs), DataColumn(Eigen::MatrixXd(inst.output)));
}

bool is_bootstrap_family(Method m) {
    return m == Method::HsicBootstrap || m == Method::DcovBootstrap ||
           m == Method::PearsonBootstrap || m == Method::SpearmanBootstrap;
}

bool is_spectral_family(Method m) {
    return m == Method::HsicSpectral || m == Method::DcovSpectral;
}

}  // namespace

MetricsReport run_experiment(const ExperimentConfig& cfg) {
    if (cfg.repetitions < 1) throw Error("run_experiment: need at least one repetition");
    if (cfg.methods.empty()) throw Error("run_experiment: no methods configured");
    const int nm = static_cast<int>(cfg.methods.size());

    struct RepCounts {
        std::vector<int> sel_influential;
        std::vector<int> sel_non_influential;
        std::vector<int> perfect;
    };
    std::vector<RepCounts> per_rep(static_cast<size_t>(cfg.repetitions));

    int influential_cols = 0;
    {
        // Influential count is data-independent; probe once.
        ExperimentConfig probe = cfg;
        probe.n = std::max(cfg.n, 6);
        influential_cols = evaluate_model(probe, derive_seed(cfg.seed, 0)).influential;
    }

    parallel_for(cfg.repetitions, cfg.threads, [&](int rep) {
        const std::uint64_t rep_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(rep));
        const ModelInstance inst = evaluate_model(cfg, rep_seed);
        const Dataset ds = to_dataset(inst);
        RepCounts counts;
        counts.sel_influential.assign(static_cast<size_t>(nm), 0);
        counts.sel_non_influential.assign(static_cast<size_t>(nm), 0);
        counts.perfect.assign(static_cast<size_t>(nm), 0);

        for (int mi = 0; mi < nm; ++mi) {
            const ScreenMethodSpec& spec = cfg.methods[static_cast<size_t>(mi)];
            ScreeningReport report;
            if (spec.method == Method::HsicLasso) {
                Rng rng(derive_seed(rep_seed, kLassoTag));
                report = hsic_lasso_screen(ds, spec.cv_mode, cfg.folds, rng);
            } else if (spec.method == Method::CoefficientBootstrap) {
                report = coefficient_bootstrap_screen(ds, LocalMeasureKind::HsicCenteredKernel,
                                                      cfg.B, cfg.alpha,
                                                      derive_seed(rep_seed, kCoefTag));
            } else {
                ScreenParams params;
                params.method = spec.method;
                params.alpha = cfg.alpha;
                params.B = cfg.B;
                params.draws = cfg.draws;
                std::uint64_t tag = kAsymTag;
                if (is_bootstrap_family(spec.method)) tag = kBootstrapFamilyTag;
                if (is_spectral_family(spec.method)) tag = kSpectralFamilyTag;
                report = screen(ds, params, derive_seed(rep_seed, tag));
            }
            int sel_inf = 0;
            int sel_non = 0;
            for (int k = 0; k < ds.d(); ++k) {
                if (!report.outcomes[static_cast<size_t>(k)].reject) continue;
                if (k < inst.influential) {
                    ++sel_inf;
                } else {
                    ++sel_non;
                }
            }
            counts.sel_influential[static_cast<size_t>(mi)] = sel_inf;
            counts.sel_non_influential[static_cast<size_t>(mi)] = sel_non;
            counts.perfect[static_cast<size_t>(mi)] =
                (sel_inf == inst.influential && sel_non == 0) ? 1 : 0;
        }
        per_rep[static_cast<size_t>(rep)] = std::move(counts);
    });

    MetricsReport report;
    report.config = cfg;
    report.methods = cfg.methods;
    report.metrics.resize(static_cast<size_t>(nm));
    const double n_rep = static_cast<double>(cfg.repetitions);
    for (int mi = 0; mi < nm; ++mi) {
        long inf = 0, non = 0, perfect = 0;
        for (const auto& rc : per_rep) {
            inf += rc.sel_influential[static_cast<size_t>(mi)];
            non += rc.sel_non_influential[static_cast<size_t>(mi)];
            perfect += rc.perfect[static_cast<size_t>(mi)];
        }
        MethodMetrics& m = report.metrics[static_cast<size_t>(mi)];
        m.influential_rate = 100.0 * static_cast<double>(inf) / (n_rep * influential_cols);
        m.non_influential_rate =
            cfg.d_check > 0
                ? 100.0 * static_cast<double>(non) / (n_rep * cfg.d_check)
                : 0.0;
        m.perfect_screening_rate = 100.0 * static_cast<double>(perfect) / n_rep;
    }
    return report;
}

std::vector<ShareRow> sensitivity_table_additive(int n, int repetitions, std::uint64_t seed,
                                                 int threads) {
    struct ModelSpec {
        std::string name;
        std::vector<ElementaryKind> effects;
    };
    const std::vector<ModelSpec> models = {
        {"h1+h2", {ElementaryKind::Linear, ElementaryKind::Exponential}},
        {"h1+h3", {ElementaryKind::Linear, ElementaryKind::Sinusoidal}},
        {"h2+h3", {ElementaryKind::Exponential, ElementaryKind::Sinusoidal}},
        {"h1+h2+h3",
         {ElementaryKind::Linear, ElementaryKind::Exponential, ElementaryKind::Sinusoidal}},
    };
    auto effect_name = [](ElementaryKind k) {
        switch (k) {
            case ElementaryKind::Linear: return "linear";
            case ElementaryKind::Exponential: return "monotonous";
            case ElementaryKind::Sinusoidal: return "non-monotonous";
        }
        return "?";
    };

    std::vector<ShareRow> rows;
    for (size_t mi = 0; mi < models.size(); ++mi) {
        const auto& spec = models[mi];
        const int k = static_cast<int>(spec.effects.size());
        Eigen::MatrixXd hsic_shares = Eigen::MatrixXd::Zero(repetitions, k);
        Eigen::MatrixXd sup_shares = Eigen::MatrixXd::Zero(repetitions, k);
        Eigen::MatrixXd dcor_shares = Eigen::MatrixXd::Zero(repetitions, k);

        parallel_for(repetitions, threads, [&](int rep) {
            const std::uint64_t rep_seed =
                derive_seed(seed, (static_cast<std::uint64_t>(mi) << 32) +
                                      static_cast<std::uint64_t>(rep));
            const Eigen::MatrixXd x =
                sample_inputs(n, k, InputDistribution::UniformSym3, rep_seed);
            Eigen::VectorXd y(n);
            for (int i = 0; i < n; ++i) {
                double v = 0.0;
                for (int j = 0; j < k; ++j) {
                    v += elementary(spec.effects[static_cast<size_t>(j)], x(i, j));
                }
                y(i) = v;
            }
            const DataColumn yc{Eigen::MatrixXd(y)};
            std::vector<DependenceEstimate> hs, sups, dc;
            for (int j = 0; j < k; ++j) {
                const DataColumn xc{Eigen::MatrixXd(x.col(j))};
                hs.push_back(hsic(xc, yc, empirical_bandwidth(xc), empirical_bandwidth(yc)));
                sups.push_back(sup_hsic(xc, yc, default_bandwidth_grid(xc, yc)).estimate);
                dc.push_back(dcor2(xc, yc));
            }
            const auto s1 = normalized_shares(hs);
            const auto s2 = normalized_shares(sups);
            const auto s3 = normalized_shares(dc);
            for (int j = 0; j < k; ++j) {
                hsic_shares(rep, j) = s1[static_cast<size_t>(j)];
                sup_shares(rep, j) = s2[static_cast<size_t>(j)];
                dcor_shares(rep, j) = s3[static_cast<size_t>(j)];
            }
        });

        for (int j = 0; j < k; ++j) {
            ShareRow row;
            row.model = spec.name;
            row.input = j + 1;
            row.effect = effect_name(spec.effects[static_cast<size_t>(j)]);
            row.hsic = hsic_shares.col(j).mean();
            row.sup_hsic = sup_shares.col(j).mean();
            row.dcor = dcor_shares.col(j).mean();
            row.sobol = 100.0 / static_cast<double>(k);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::vector<InteractionRow> sensitivity_table_interaction(int n, int repetitions,
                                                          const std::vector<double>& alphas,
                                                          std::uint64_t seed, int threads) {
    std::vector<InteractionRow> rows;
    for (size_t ai = 0; ai < alphas.size(); ++ai) {
        const double alpha = alphas[ai];
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(repetitions, 4);
        parallel_for(repetitions, threads, [&](int rep) {
            const std::uint64_t rep_seed =
                derive_seed(seed, (static_cast<std::uint64_t>(ai) << 32) +
                                      static_cast<std::uint64_t>(rep));
            const Eigen::MatrixXd x =
                sample_inputs(n, 2, InputDistribution::UniformSym3, rep_seed);
            Eigen::VectorXd y(n);
            for (int i = 0; i < n; ++i) y(i) = interaction_model(alpha, x(i, 0), x(i, 1));
            const DataColumn yc{Eigen::MatrixXd(y)};
            const DataColumn x1{Eigen::MatrixXd(x.col(0))};
            const DataColumn x2{Eigen::MatrixXd(x.col(1))};
            const auto bwy = empirical_bandwidth(yc);
            acc(rep, 0) = hsic(x1, yc, empirical_bandwidth(x1), bwy).value;
            acc(rep, 1) = hsic(x2, yc, empirical_bandwidth(x2), bwy).value;
            acc(rep, 2) = borgonovo_delta(x1, yc).value;
            acc(rep, 3) = borgonovo_delta(x2, yc).value;
        });
        InteractionRow row;
        row.alpha = alpha;
        row.hsic_x1 = acc.col(0).mean();
        row.hsic_x2 = acc.col(1).mean();
        row.delta_x1 = acc.col(2).mean();
        row.delta_x2 = acc.col(3).mean();
        const InteractionSobol sobol = analytic_sobol_interaction(alpha);
        row.sobol_t1 = sobol.s1_total;
        row.sobol_t2 = sobol.s2_total;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace depscreen
