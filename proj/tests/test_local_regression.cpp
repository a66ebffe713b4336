#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "depscreen/benchmarks.hpp"
#include "depscreen/errors.hpp"
#include "depscreen/local_regression.hpp"

using namespace depscreen;

namespace {

Dataset random_dataset(int n, int d, std::uint64_t seed, double signal = 0.0) {
    Rng rng(seed);
    Eigen::MatrixXd x(n, d), y(n, 1);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) x(i, j) = rng.uniform(-1.0, 1.0);
        y(i, 0) = signal * std::sin(2.0 * x(i, 0)) + rng.normal();
    }
    std::vector<DataColumn> inputs;
    for (int j = 0; j < d; ++j) inputs.emplace_back(Eigen::MatrixXd(x.col(j)));
    return Dataset(std::move(inputs), DataColumn(y));
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

LocalDesign synthetic_design(const Eigen::VectorXd& response,
                             const std::vector<Eigen::VectorXd>& predictors, int n) {
    LocalDesign design;
    design.response = response;
    design.predictors = predictors;
    design.n = n;
    design.d = static_cast<int>(predictors.size());
    return design;
}

Eigen::MatrixXd unvectorize(const Eigen::VectorXd& v, int n) {
    Eigen::MatrixXd m(n, n);
    const double inv = 1.0 / std::sqrt(2.0);
    int pos = 0;
    for (int i = 0; i < n; ++i) {
        m(i, i) = v(pos++);
        for (int j = i + 1; j < n; ++j) {
            m(i, j) = v(pos) * inv;
            m(j, i) = v(pos) * inv;
            ++pos;
        }
    }
    return m;
}

double frobenius_objective(const LocalDesign& design, const Eigen::VectorXd& beta) {
    Eigen::VectorXd r = design.response;
    for (int k = 0; k < design.d; ++k) r -= beta(k) * design.predictors[static_cast<size_t>(k)];
    return r.squaredNorm();
}

// Projected gradient reference solver for beta >= 0.
Eigen::VectorXd projected_gradient_nnls(const LocalDesign& design, int iters) {
    const int d = design.d;
    Eigen::MatrixXd m(d, d);
    Eigen::VectorXd c(d);
    for (int k = 0; k < d; ++k) {
        c(k) = design.predictors[static_cast<size_t>(k)].dot(design.response);
        for (int l = 0; l < d; ++l) {
            m(k, l) = design.predictors[static_cast<size_t>(k)].dot(
                design.predictors[static_cast<size_t>(l)]);
        }
    }
    const double step = 1.0 / (m.norm() + 1e-12);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(d);
    for (int it = 0; it < iters; ++it) {
        beta = (beta - step * (m * beta - c)).cwiseMax(0.0);
    }
    return beta;
}

}  // namespace

TEST_CASE("build_design shapes and norms") {
    const Dataset ds = random_dataset(3, 2, 42);
    const LocalDesign design = build_design(ds, LocalMeasureKind::HsicCenteredKernel);
    CHECK(design.response.size() == 6);
    CHECK(design.predictors.size() == 2);

    // ||response||^2 equals n^2 HSIC_n(Y, Y).
    const Dataset big = random_dataset(25, 2, 43);
    const LocalDesign d2 = build_design(big, LocalMeasureKind::HsicCenteredKernel);
    const double self =
        hsic(big.output, big.output, empirical_bandwidth(big.output),
             empirical_bandwidth(big.output))
            .value;
    CHECK(d2.response.squaredNorm() == doctest::Approx(625.0 * self).epsilon(1e-10));

    // Re-expanded predictors are centered matrices.
    const Eigen::MatrixXd back = unvectorize(d2.predictors[0], 25);
    CHECK(back.rowwise().sum().cwiseAbs().maxCoeff() < 1e-9);

    // Duplicated inputs give identical predictor vectors.
    std::vector<DataColumn> inputs{big.inputs[0], big.inputs[0]};
    const Dataset dup(std::move(inputs), big.output);
    const LocalDesign d3 = build_design(dup, LocalMeasureKind::DcovCenteredDistance);
    CHECK((d3.predictors[0] - d3.predictors[1]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("covariance design requires scalar columns") {
    Rng rng(7);
    Eigen::MatrixXd xv(10, 2);
    for (int i = 0; i < 10; ++i) {
        xv(i, 0) = rng.uniform(0.0, 1.0);
        xv(i, 1) = rng.uniform(0.0, 1.0);
    }
    Eigen::MatrixXd yv(10, 1);
    for (int i = 0; i < 10; ++i) yv(i, 0) = rng.uniform(0.0, 1.0);
    std::vector<DataColumn> inputs{DataColumn(xv)};
    const Dataset ds(std::move(inputs), DataColumn(yv));
    CHECK_THROWS_AS(build_design(ds, LocalMeasureKind::Covariance), UnsupportedMeasure);
}

TEST_CASE("nnls_fit") {
    Rng rng(11);
    Eigen::VectorXd p1(10);
    for (int i = 0; i < 10; ++i) p1(i) = rng.uniform(-1.0, 1.0);

    const auto exact = nnls_fit(synthetic_design(2.0 * p1, {p1}, 4));
    CHECK(exact.beta(0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(exact.residual_norm2 == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(exact.active == std::vector<int>{0});

    const auto bound = nnls_fit(synthetic_design(-p1, {p1}, 4));
    CHECK(bound.beta(0) == 0.0);
    CHECK(bound.active.empty());

    // Objective value against a projected-gradient reference.
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        Rng r2(seed);
        std::vector<Eigen::VectorXd> preds;
        Eigen::VectorXd resp(10);
        for (int k = 0; k < 3; ++k) {
            Eigen::VectorXd p(10);
            for (int i = 0; i < 10; ++i) p(i) = r2.uniform(-1.0, 1.0);
            preds.push_back(p);
        }
        for (int i = 0; i < 10; ++i) resp(i) = r2.uniform(-1.0, 1.0);
        const LocalDesign design = synthetic_design(resp, preds, 4);
        const auto fit = nnls_fit(design);
        const Eigen::VectorXd ref = projected_gradient_nnls(design, 400000);
        CHECK(frobenius_objective(design, fit.beta) <=
              frobenius_objective(design, ref) + 1e-8);

        // KKT: active gradients vanish, inactive gradients are nonpositive.
        for (int k = 0; k < design.d; ++k) {
            double grad = -preds[static_cast<size_t>(k)].dot(resp);
            for (int l = 0; l < design.d; ++l) {
                grad += fit.beta(l) *
                        preds[static_cast<size_t>(k)].dot(preds[static_cast<size_t>(l)]);
            }
            const double tol = 1e-8 * resp.squaredNorm();
            if (fit.beta(k) > 0.0) {
                CHECK(std::fabs(grad) <= tol);
            } else {
                CHECK(grad >= -tol);
            }
        }
    }
}

TEST_CASE("objective_expand identities") {
    const Dataset ds = random_dataset(8, 2, 99);
    for (const auto kind :
         {LocalMeasureKind::HsicCenteredKernel, LocalMeasureKind::DcovCenteredDistance,
          LocalMeasureKind::Covariance}) {
        const LocalDesign design = build_design(ds, kind);
        Rng rng(55);
        for (int trial = 0; trial < 4; ++trial) {
            Eigen::VectorXd beta(2);
            beta << rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0);
            const double via_expand = objective_expand(beta, ds, kind);
            const double via_frob = frobenius_objective(design, beta) / 64.0;
            CHECK(via_expand == doctest::Approx(via_frob).epsilon(1e-10));
        }
    }
    // beta = 0 collapses to the self term.
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
    CHECK(objective_expand(zero, ds, LocalMeasureKind::HsicCenteredKernel) ==
          doctest::Approx(hsic(ds.output, ds.output, empirical_bandwidth(ds.output),
                               empirical_bandwidth(ds.output))
                              .value)
              .epsilon(1e-12));
    CHECK(objective_expand(zero, ds, LocalMeasureKind::DcovCenteredDistance) ==
          doctest::Approx(dcov2(ds.output, ds.output).value).epsilon(1e-12));
}

TEST_CASE("positive lars path on orthogonal designs") {
    // Block-orthogonal predictors: knots are the positive inner products.
    const int len = 12;
    std::vector<Eigen::VectorXd> preds;
    Eigen::VectorXd resp = Eigen::VectorXd::Zero(len);
    const std::vector<double> gains = {3.0, 1.5, 0.5};
    for (int k = 0; k < 3; ++k) {
        Eigen::VectorXd p = Eigen::VectorXd::Zero(len);
        p(4 * k) = 1.0;
        p(4 * k + 1) = 1.0;
        preds.push_back(p);
        resp += gains[static_cast<size_t>(k)] * p;
    }
    const LocalDesign design = synthetic_design(resp, preds, 4);
    const LarsPath path = lars_positive_path(design);

    // Inner products <p_k, resp> = 2 * gain_k; entry knots must match.
    REQUIRE(path.knots.size() >= 4);
    CHECK(path.knots[0] == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(path.knots[1] == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(path.knots[2] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(path.betas[0].cwiseAbs().maxCoeff() == 0.0);

    // Soft-threshold solution at an interior lambda: beta_k = (c_k - l)/||p_k||^2.
    const double l = 2.0;
    const Eigen::VectorXd beta = path.at(l);
    CHECK(beta(0) == doctest::Approx((6.0 - l) / 2.0).epsilon(1e-8));
    CHECK(beta(1) == doctest::Approx((3.0 - l) / 2.0).epsilon(1e-8));
    CHECK(beta(2) == 0.0);
}

TEST_CASE("lars path endpoint equals nnls and KKT holds at the knots") {
    for (int trial = 0; trial < 20; ++trial) {
        Rng rng(1000 + static_cast<std::uint64_t>(trial));
        const int d = 2 + static_cast<int>(rng.below(4));
        const int len = 15;
        std::vector<Eigen::VectorXd> preds;
        Eigen::VectorXd resp(len);
        for (int k = 0; k < d; ++k) {
            Eigen::VectorXd p(len);
            for (int i = 0; i < len; ++i) p(i) = rng.uniform(-1.0, 1.0);
            preds.push_back(p);
        }
        for (int i = 0; i < len; ++i) resp(i) = rng.uniform(-1.0, 1.0);
        const LocalDesign design = synthetic_design(resp, preds, 5);

        const LarsPath path = lars_positive_path(design);
        const auto fit = nnls_fit(design);
        CHECK((path.betas.back() - fit.beta).cwiseAbs().maxCoeff() < 1e-6);

        // Stationarity certificates at every knot and at midpoints.
        auto check_kkt = [&](double lambda, const Eigen::VectorXd& beta, double tol) {
            for (int k = 0; k < d; ++k) {
                double grad = -preds[static_cast<size_t>(k)].dot(resp);
                for (int l2 = 0; l2 < d; ++l2) {
                    grad += beta(l2) *
                            preds[static_cast<size_t>(k)].dot(preds[static_cast<size_t>(l2)]);
                }
                const double scale = std::max(1.0, std::fabs(path.knots.front()));
                if (beta(k) > 1e-12) {
                    CHECK(std::fabs(grad + lambda) <= tol * scale);
                } else {
                    CHECK(grad + lambda >= -tol * scale);
                }
            }
        };
        for (size_t i = 0; i < path.knots.size(); ++i) {
            check_kkt(path.knots[i], path.betas[i], 1e-8);
        }
        for (size_t i = 0; i + 1 < path.knots.size(); ++i) {
            const double mid = 0.5 * (path.knots[i] + path.knots[i + 1]);
            check_kkt(mid, path.at(mid), 1e-6);
        }
    }
}

TEST_CASE("duplicated inputs split their weight consistently") {
    Rng rng(8080);
    const int n = 40;
    Eigen::MatrixXd x(n, 1), y(n, 1);
    for (int i = 0; i < n; ++i) {
        x(i, 0) = rng.uniform(-1.0, 1.0);
        y(i, 0) = std::sin(2.0 * x(i, 0)) + 0.2 * rng.normal();
    }
    std::vector<DataColumn> single{DataColumn(x)};
    const Dataset ds1(std::move(single), DataColumn(y));
    std::vector<DataColumn> dup{DataColumn(x), DataColumn(x)};
    const Dataset ds2(std::move(dup), DataColumn(y));

    const auto fit1 = nnls_fit(build_design(ds1, LocalMeasureKind::HsicCenteredKernel));
    const auto fit2 = nnls_fit(build_design(ds2, LocalMeasureKind::HsicCenteredKernel));
    const double total = fit2.beta.sum();
    CHECK(std::fabs(total - fit1.beta(0)) <= 0.05 * fit1.beta(0));

    // The path activates only one of the two copies at any lambda > 0.
    const LarsPath path = lars_positive_path(build_design(ds2, LocalMeasureKind::HsicCenteredKernel));
    for (size_t i = 0; i < path.knots.size(); ++i) {
        if (path.knots[i] > 1e-12) {
            CHECK((path.betas[i](0) > 0.0 && path.betas[i](1) > 0.0) == false);
        }
    }
    CHECK_THROWS_AS(
        lars_positive_path(synthetic_design(Eigen::VectorXd::Ones(4),
                                            {Eigen::VectorXd::Zero(4)}, 2)),
        DegeneratePredictor);
}

TEST_CASE("cv_select modes") {
    const Dataset morris = morris_dataset(60, 5, 5, 2424);
    CvParams params;
    const auto std_sel =
        cv_select(morris, LocalMeasureKind::HsicCenteredKernel, 5, CvMode::Standard, params);
    const auto mod_sel =
        cv_select(morris, LocalMeasureKind::HsicCenteredKernel, 5, CvMode::Modified, params);
    CHECK(mod_sel.lambda_hat >= std_sel.lambda_hat);
    CHECK(std_sel.lambda_grid.size() == 100);

    const LarsPath path =
        lars_positive_path(build_design(morris, LocalMeasureKind::HsicCenteredKernel));
    const int active_std = static_cast<int>((path.at(std_sel.lambda_hat).array() > 0.0).count());
    const int active_mod = static_cast<int>((path.at(mod_sel.lambda_hat).array() > 0.0).count());
    CHECK(active_mod <= active_std);

    CHECK_THROWS_AS(
        cv_select(morris, LocalMeasureKind::HsicCenteredKernel, 40, CvMode::Standard, params),
        InsufficientSample);
}

TEST_CASE("modified cv regularizes harder than standard on noise") {
    int more_regularized = 0;
    const int trials = 10;
    for (int t = 0; t < trials; ++t) {
        const Dataset noise = random_dataset(50, 8, 9000 + static_cast<std::uint64_t>(t));
        CvParams params;
        params.shuffle_seed = static_cast<std::uint64_t>(t);
        const auto s =
            cv_select(noise, LocalMeasureKind::HsicCenteredKernel, 5, CvMode::Standard, params);
        const auto m =
            cv_select(noise, LocalMeasureKind::HsicCenteredKernel, 5, CvMode::Modified, params);
        if (m.lambda_hat >= s.lambda_hat) ++more_regularized;
    }
    CHECK(more_regularized >= 9);
}

TEST_CASE("bootstrap coefficient test") {
    // Output driven by input 3 alone: resampling it destroys the fit. The
    // noise inputs only stay calibrated when residual noise is present, so
    // the test model carries an observation-noise term.
    Rng rng(666);
    const int n = 200;
    Eigen::MatrixXd x(n, 4), y(n, 1), y_pure(n, 1);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < 4; ++j) x(i, j) = rng.uniform(-1.0, 1.0);
        y_pure(i, 0) = elementary(ElementaryKind::Linear, x(i, 3));
        y(i, 0) = y_pure(i, 0) + 0.5 * rng.normal();
    }
    std::vector<DataColumn> inputs;
    for (int j = 0; j < 4; ++j) inputs.emplace_back(Eigen::MatrixXd(x.col(j)));
    const Dataset ds(std::move(inputs), DataColumn(y));

    // Noiseless variant: resampling the only signal column gives p = 0.
    std::vector<DataColumn> inputs_pure = ds.inputs;
    const Dataset ds_pure(std::move(inputs_pure), DataColumn(y_pure));
    Rng test_rng(12);
    const auto influential = bootstrap_coefficient_test(
        ds_pure, 3, LocalMeasureKind::HsicCenteredKernel, 100, 0.05, test_rng);
    CHECK(influential.p_value == 0.0);
    CHECK(influential.reject);

    Rng test_rng2(13);
    const auto noise = bootstrap_coefficient_test(
        ds, 0, LocalMeasureKind::HsicCenteredKernel, 100, 0.05, test_rng2);
    CHECK_FALSE(noise.reject);

    Rng test_rng3(14);
    CHECK_THROWS_AS(bootstrap_coefficient_test(ds, 0, LocalMeasureKind::HsicCenteredKernel,
                                               50, 0.05, test_rng3),
                    InsufficientResamples);
}

TEST_CASE("coefficient bootstrap screen is deterministic") {
    const Dataset ds = morris_dataset(40, 5, 3, 777);
    const auto a =
        coefficient_bootstrap_screen(ds, LocalMeasureKind::HsicCenteredKernel, 100, 0.05, 99);
    const auto b =
        coefficient_bootstrap_screen(ds, LocalMeasureKind::HsicCenteredKernel, 100, 0.05, 99);
    REQUIRE(a.outcomes.size() == b.outcomes.size());
    for (size_t k = 0; k < a.outcomes.size(); ++k) {
        CHECK(a.outcomes[k].p_value == b.outcomes[k].p_value);
    }
}

TEST_CASE("hsic lasso screen") {
    // Single influential input is selected.
    Rng rng(3131);
    const int n = 100;
    Eigen::MatrixXd x(n, 1), y(n, 1);
    for (int i = 0; i < n; ++i) {
        x(i, 0) = rng.uniform(-1.0, 1.0);
        y(i, 0) = x(i, 0) + 0.05 * rng.normal();
    }
    std::vector<DataColumn> inputs{DataColumn(x)};
    const Dataset ds(std::move(inputs), DataColumn(y));
    Rng lasso_rng(5);
    const auto report = hsic_lasso_screen(ds, CvMode::Modified, 5, lasso_rng);
    CHECK(report.selected == std::vector<int>{0});
    CHECK(report.method == Method::HsicLasso);
}
