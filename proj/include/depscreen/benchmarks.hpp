#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "depscreen/local_regression.hpp"

namespace depscreen {

enum class ElementaryKind { Linear, Exponential, Sinusoidal };

// h1(x) = x; h2(x) = (e^x - a)/b; h3(x) = a sin(2x). Constants make each
// function centered with unit variance under U[-sqrt(3), sqrt(3)].
double elementary(ElementaryKind kind, double x);

double additive_model(const std::array<double, 3>& alpha, const std::array<double, 3>& x);

// f = h2(x1) + alpha * h2(x1) * h2(x2).
double interaction_model(double alpha, double x1, double x2);

// f = a (sum_i x_i + b sum_{i<j} x_i x_j) over the first d inputs,
// a = sqrt(12) - 6 sqrt(0.1 (d-1)), b = 12 sqrt(0.1 (d-1)).
double morris_model(int d, int d_check, std::span<const double> x);

std::array<double, 3> analytic_sobol_additive(const std::array<double, 3>& alpha);

struct InteractionSobol {
    double s1;
    double s2;
    double s1_total;
    double s2_total;
};

InteractionSobol analytic_sobol_interaction(double alpha);

enum class InputDistribution { UniformSym3, Uniform01 };

// i.i.d. input matrix with one deterministic substream per column, so that
// prefixes are reproducible across different n and column counts.
Eigen::MatrixXd sample_inputs(int n, int count, InputDistribution dist, std::uint64_t seed);

enum class BenchModel { Additive, Interaction, Morris };

struct ScreenMethodSpec {
    Method method = Method::HsicGamma;
    CvMode cv_mode = CvMode::Standard;  // only read for hsic-lasso
};

struct ExperimentConfig {
    BenchModel model = BenchModel::Morris;
    std::array<double, 3> additive_alpha{1.0, 1.0, 1.0};
    double interaction_alpha = 1.0;
    int n = 100;
    int d = 5;        // influential inputs (Morris); derived for other models
    int d_check = 10; // non-influential inputs appended to the dataset
    int repetitions = 200;
    double alpha = 0.05;
    int B = 500;
    int draws = 5000;
    int folds = 5;
    std::uint64_t seed = 0;
    int threads = 1;
    std::vector<ScreenMethodSpec> methods;
};

struct MethodMetrics {
    double non_influential_rate = 0.0;  // percent
    double influential_rate = 0.0;      // percent (power)
    double perfect_screening_rate = 0.0;
};

struct MetricsReport {
    ExperimentConfig config;
    std::vector<ScreenMethodSpec> methods;
    std::vector<MethodMetrics> metrics;
};

// Monte-Carlo screening experiment: per repetition, sample inputs, evaluate
// the model, run every configured method on the same dataset, and aggregate
// selection rates. Reproducible for a fixed seed regardless of thread count.
MetricsReport run_experiment(const ExperimentConfig& config);

// Mean normalized shares of HSIC, sup-HSIC and dCor for the additive test
// functions, with the analytic Sobol share as reference.
struct ShareRow {
    std::string model;
    int input = 0;
    std::string effect;
    double hsic = 0.0;
    double sup_hsic = 0.0;
    double dcor = 0.0;
    double sobol = 0.0;
};

std::vector<ShareRow> sensitivity_table_additive(int n, int repetitions, std::uint64_t seed,
                                                 int threads);

// Mean HSIC and Borgonovo delta for the interaction model over a grid of
// interaction weights, with analytic total Sobol indices as reference.
struct InteractionRow {
    double alpha = 0.0;
    double hsic_x1 = 0.0;
    double hsic_x2 = 0.0;
    double delta_x1 = 0.0;
    double delta_x2 = 0.0;
    double sobol_t1 = 0.0;
    double sobol_t2 = 0.0;
};

std::vector<InteractionRow> sensitivity_table_interaction(int n, int repetitions,
                                                          const std::vector<double>& alphas,
                                                          std::uint64_t seed, int threads);

// Runs f(0), f(1), ..., f(count-1) across the requested number of threads.
void parallel_for(int count, int threads, const std::function<void(int)>& f);

}  // namespace depscreen
