#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "depscreen/benchmarks.hpp"
#include "depscreen/errors.hpp"
#include "depscreen/indep_tests.hpp"

using namespace depscreen;

namespace {

DataColumn uniform_column(int n, Rng& rng, double lo = 0.0, double hi = 1.0) {
    Eigen::MatrixXd m(n, 1);
    for (int i = 0; i < n; ++i) m(i, 0) = rng.uniform(lo, hi);
    return DataColumn(std::move(m));
}

Dataset morris_dataset(int n, int d, int d_check, std::uint64_t seed) {
    const Eigen::MatrixXd x =
        sample_inputs(n, d + d_check, InputDistribution::Uniform01, seed);
    Eigen::VectorXd y(n);
    std::vector<double> row(static_cast<size_t>(d + d_check));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d + d_check; ++j) row[static_cast<size_t>(j)] = x(i, j);
        y(i) = morris_model(d, d_check, row);
    }
    std::vector<DataColumn> inputs;
    for (int j = 0; j < d + d_check; ++j) inputs.emplace_back(Eigen::MatrixXd(x.col(j)));
    return Dataset(std::move(inputs), DataColumn(Eigen::MatrixXd(y)));
}

}  // namespace

TEST_CASE("hsic gamma test basics") {
    Rng rng(11);
    const DataColumn x = uniform_column(60, rng);
    const DataColumn y = uniform_column(60, rng);
    const auto out =
        hsic_gamma_test(x, y, empirical_bandwidth(x), empirical_bandwidth(y), 0.05);
    CHECK(out.method == Method::HsicGamma);
    CHECK(out.p_value >= 0.0);
    CHECK(out.p_value <= 1.0);
    CHECK(out.statistic >= 0.0);

    // Strong dependence is detected on a single draw.
    Eigen::MatrixXd yy = x.values();
    const DataColumn copy(yy);
    const auto dep =
        hsic_gamma_test(x, copy, empirical_bandwidth(x), empirical_bandwidth(copy), 0.05);
    CHECK(dep.reject);

    const DataColumn tiny = uniform_column(5, rng);
    CHECK_THROWS_AS(hsic_gamma_test(tiny, tiny, empirical_bandwidth(tiny),
                                    empirical_bandwidth(tiny), 0.05),
                    InsufficientSample);
}

TEST_CASE("hsic gamma test calibration is near the nominal level") {
    Rng rng(2024);
    const int reps = 250;
    int rejects = 0;
    for (int rep = 0; rep < reps; ++rep) {
        const DataColumn x = uniform_column(100, rng);
        const DataColumn y = uniform_column(100, rng);
        const auto out =
            hsic_gamma_test(x, y, empirical_bandwidth(x), empirical_bandwidth(y), 0.05);
        rejects += out.reject ? 1 : 0;
    }
    const double rate = 100.0 * rejects / reps;
    CHECK(rate > 1.0);
    CHECK(rate < 10.0);
}

TEST_CASE("dcov quantile test") {
    Rng rng(5);
    const DataColumn x = uniform_column(50, rng);
    const DataColumn flat = DataColumn::from_vector(std::vector<double>(50, 3.0));
    const auto out = dcov_quantile_test(x, flat, 0.05);
    CHECK(out.statistic == 0.0);
    CHECK_FALSE(out.reject);
    CHECK(out.p_value == 1.0);

    CHECK_THROWS_AS(dcov_quantile_test(x, x, 0.3), AlphaOutOfRange);

    // The decision rule is the squared-normal-quantile threshold.
    const auto dep = dcov_quantile_test(x, x, 0.05);
    CHECK(dep.reject);
    CHECK(dep.statistic > 2.70);
}

TEST_CASE("spectral null sample moments") {
    Rng rng(321);
    const int n = 12;

    // All-zero spectra produce identically zero draws.
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
    for (double v : spectral_null_sample(zero, zero, n, 50, rng)) CHECK(v == 0.0);

    // A single pair lambda = nu = n gives chi-square(1) draws.
    Eigen::VectorXd single = Eigen::VectorXd::Zero(1);
    single(0) = static_cast<double>(n);
    const auto chi = spectral_null_sample(single, single, n, 100000, rng);
    double mean = 0.0;
    for (double v : chi) mean += v;
    mean /= static_cast<double>(chi.size());
    CHECK(std::fabs(mean - 1.0) < 0.05);

    // Mean identity: E[draw] = sum(lambda) * sum(nu) / n^2.
    const DataColumn x = uniform_column(n, rng);
    const DataColumn y = uniform_column(n, rng);
    const Eigen::VectorXd ex =
        sym_eigenvalues(double_center_matrix(gaussian_gram(x, empirical_bandwidth(x)).entries()))
            .cwiseMax(0.0);
    const Eigen::VectorXd ey =
        sym_eigenvalues(double_center_matrix(gaussian_gram(y, empirical_bandwidth(y)).entries()))
            .cwiseMax(0.0);
    const auto draws = spectral_null_sample(ex, ey, n, 100000, rng);
    double m2 = 0.0;
    for (double v : draws) m2 += v;
    m2 /= static_cast<double>(draws.size());
    const double expected = ex.sum() * ey.sum() / (n * n);
    CHECK(std::fabs(m2 - expected) < 0.02 * expected);

    Eigen::VectorXd bad(2);
    bad << 1.0, -1.0;
    CHECK_THROWS_AS(spectral_null_sample(bad, bad, n, 10, rng), NegativeEigenvalue);
}

TEST_CASE("spectral test on a constant output never rejects") {
    Rng rng(9);
    const DataColumn x = uniform_column(30, rng);
    const DataColumn flat = DataColumn::from_vector(std::vector<double>(30, 1.0));
    const auto out = spectral_test(SpectralKind::Dcov, x, flat, 0.05, 1000, rng);
    CHECK_FALSE(out.reject);
    CHECK(out.p_value == 1.0);
}

TEST_CASE("spectral dcov type-I rate matches the reference table") {
    // Reference value 5.0 at n = 25; quick scale widens the tolerance.
    Rng rng(606);
    const int reps = 400;
    int rejects = 0;
    for (int rep = 0; rep < reps; ++rep) {
        const DataColumn x = uniform_column(25, rng);
        const DataColumn y = uniform_column(25, rng);
        Rng draw_rng(derive_seed(606, 1000 + rep));
        const auto out = spectral_test(SpectralKind::Dcov, x, y, 0.05, 2000, draw_rng);
        rejects += out.reject ? 1 : 0;
    }
    const double rate = 100.0 * rejects / reps;
    CHECK(std::fabs(rate - 5.0) < 3.0);
}

TEST_CASE("spectral dcov power matches the reference table") {
    // Reference value 87.5 at n = 50 for the first influential input.
    const int reps = 300;
    int rejects = 0;
    for (int rep = 0; rep < reps; ++rep) {
        const Dataset ds = morris_dataset(50, 5, 10, derive_seed(707, rep));
        Rng draw_rng(derive_seed(707, 40000 + rep));
        const auto out =
            spectral_test(SpectralKind::Dcov, ds.inputs[0], ds.output, 0.05, 2000, draw_rng);
        rejects += out.reject ? 1 : 0;
    }
    const double rate = 100.0 * rejects / reps;
    CHECK(std::fabs(rate - 87.5) < 5.5);
}

TEST_CASE("permutation test") {
    Rng rng(13);
    const DataColumn x = uniform_column(50, rng);
    const auto self = permutation_test(PermMeasure::Dcov, x, x, 200, 0.05, rng);
    CHECK(self.p_value == 0.0);
    CHECK(self.reject);

    CHECK_THROWS_AS(permutation_test(PermMeasure::Dcov, x, x, 50, 0.05, rng),
                    InsufficientResamples);

    // Permutation (without replacement) variant behaves on the null too.
    const DataColumn y = uniform_column(50, rng);
    const auto perm = permutation_test(PermMeasure::Hsic, x, y, 200, 0.05, rng, false);
    CHECK(perm.p_value >= 0.0);
    CHECK(perm.p_value <= 1.0);
}

TEST_CASE("pearson bootstrap keeps the raw sign convention") {
    // A strongly negative correlation yields resampled statistics near zero,
    // hence a p-value close to one under the printed one-sided rule.
    Rng rng(44);
    const int n = 100;
    Eigen::MatrixXd xv(n, 1), yv(n, 1);
    for (int i = 0; i < n; ++i) {
        xv(i, 0) = rng.uniform(0.0, 1.0);
        yv(i, 0) = -2.0 * xv(i, 0) + 0.05 * rng.normal();
    }
    const auto out =
        permutation_test(PermMeasure::Pearson, DataColumn(xv), DataColumn(yv), 200, 0.05, rng);
    CHECK(out.statistic < -0.9);
    CHECK(out.p_value > 0.9);
}

TEST_CASE("screen is deterministic and thread-invariant") {
    const Dataset ds = morris_dataset(40, 5, 5, 31337);
    ScreenParams params;
    params.method = Method::DcovBootstrap;
    params.B = 150;
    params.threads = 1;
    const auto a = screen(ds, params, 777);
    const auto b = screen(ds, params, 777);
    params.threads = 4;
    const auto c = screen(ds, params, 777);
    REQUIRE(a.outcomes.size() == b.outcomes.size());
    for (size_t k = 0; k < a.outcomes.size(); ++k) {
        CHECK(a.outcomes[k].p_value == b.outcomes[k].p_value);
        CHECK(a.outcomes[k].statistic == c.outcomes[k].statistic);
        CHECK(a.outcomes[k].p_value == c.outcomes[k].p_value);
    }
    CHECK(a.selected == c.selected);
}

TEST_CASE("screen finds the single influential input") {
    // y depends on x1 only; independent decoys.
    Rng rng(246);
    const int n = 400;
    Eigen::MatrixXd x1(n, 1), x2(n, 1), x3(n, 1), y(n, 1);
    for (int i = 0; i < n; ++i) {
        x1(i, 0) = rng.uniform(-1.0, 1.0);
        x2(i, 0) = rng.uniform(-1.0, 1.0);
        x3(i, 0) = rng.uniform(-1.0, 1.0);
        y(i, 0) = std::sin(3.0 * x1(i, 0)) + 0.1 * rng.normal();
    }
    std::vector<DataColumn> inputs{DataColumn(x1), DataColumn(x2), DataColumn(x3)};
    const Dataset ds(std::move(inputs), DataColumn(y));
    ScreenParams params;
    params.method = Method::HsicGamma;
    const auto report = screen(ds, params, 1);
    CHECK(report.selected == std::vector<int>{0});
}

TEST_CASE("decisions are invariant to increasing affine rescalings of y") {
    const Dataset ds = morris_dataset(60, 5, 5, 91);
    Eigen::MatrixXd scaled = ds.output.values() * 2.5;
    scaled.array() += 3.0;
    std::vector<DataColumn> inputs = ds.inputs;
    const Dataset ds2(std::move(inputs), DataColumn(scaled));

    for (const Method m : {Method::SpearmanT, Method::HsicGamma, Method::DcovQuantile,
                           Method::HsicBootstrap, Method::DcovBootstrap}) {
        ScreenParams params;
        params.method = m;
        params.B = 150;
        const auto a = screen(ds, params, 5);
        const auto b = screen(ds2, params, 5);
        CHECK(a.selected == b.selected);
    }
}

TEST_CASE("screening level on independent inputs") {
    // With truly independent inputs the expected selected-set size is about
    // alpha * d.
    const int reps = 120;
    const int d = 3;
    double selected = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
        Rng rng(derive_seed(864, rep));
        Eigen::MatrixXd x(60, d), y(60, 1);
        for (int i = 0; i < 60; ++i) {
            for (int j = 0; j < d; ++j) x(i, j) = rng.uniform(0.0, 1.0);
            y(i, 0) = rng.uniform(0.0, 1.0);
        }
        std::vector<DataColumn> inputs;
        for (int j = 0; j < d; ++j) inputs.emplace_back(Eigen::MatrixXd(x.col(j)));
        const Dataset ds(std::move(inputs), DataColumn(y));
        ScreenParams params;
        params.method = Method::HsicGamma;
        selected += static_cast<double>(screen(ds, params, derive_seed(33, rep)).selected.size());
    }
    const double mean_selected = selected / reps;
    CHECK(mean_selected < 0.05 * d * 2.5);
}
