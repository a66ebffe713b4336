#pragma once

#include <cstdint>

#include "depscreen/measures.hpp"
#include "depscreen/rng.hpp"
#include "depscreen/test_outcome.hpp"

namespace depscreen {

enum class LocalMeasureKind { HsicCenteredKernel, DcovCenteredDistance, Covariance };

// Vectorized local-measure model: response = vec(D(Y)), predictors[k] =
// vec(D(X_k)). Upper triangles (diagonal included) with sqrt(2) weights on
// off-diagonal entries, so vector inner products equal Frobenius inner
// products of the full symmetric matrices.
struct LocalDesign {
    Eigen::VectorXd response;
    std::vector<Eigen::VectorXd> predictors;
    LocalMeasureKind kind = LocalMeasureKind::HsicCenteredKernel;
    int n = 0;
    int d = 0;
};

// Upper-triangle vectorization with sqrt(2) off-diagonal weighting.
Eigen::VectorXd vectorize_symmetric(const Eigen::MatrixXd& m);

LocalDesign build_design(const Dataset& dataset, LocalMeasureKind kind);

struct FitResult {
    Eigen::VectorXd beta;
    // Residual at the measure scale: ||response - sum beta_k predictor_k||^2 / n^2.
    double residual_norm2 = 0.0;
    std::vector<int> active;
};

// Non-negative least squares by the Lawson-Hanson active-set method,
// run on the design's normal equations.
FitResult nnls_fit(const LocalDesign& design);

// eta(beta) via the dependence-measure expansion, equal to the Frobenius
// objective divided by n^2.
double objective_expand(const Eigen::VectorXd& beta, const Dataset& dataset,
                        LocalMeasureKind kind);

// Piecewise-linear positive-lasso path for
// min 0.5 ||response - X beta||^2 + lambda ||beta||_1, beta >= 0.
struct LarsPath {
    std::vector<double> knots;                // decreasing, knots[0] = lambda_max
    std::vector<Eigen::VectorXd> betas;

    Eigen::VectorXd at(double lambda) const;  // linear interpolation between knots
};

LarsPath lars_positive_path(const LocalDesign& design);

enum class CvMode { Standard, Modified };

struct CvParams {
    int grid_size = 100;
    double grid_span = 1e-4;      // grid covers [span * lambda_max, lambda_max]
    double sigma_weight = 0.5;    // width of the uncertainty band in fold sigmas
    std::uint64_t shuffle_seed = 0;
};

struct CvSelection {
    double lambda_hat = 0.0;
    CvMode mode = CvMode::Standard;
    std::vector<double> lambda_grid;
    std::vector<double> mean_error;
    std::vector<double> sd_error;
};

// K-fold cross-validation over observations. Fold designs are rebuilt from
// the training rows only; held-out error uses pairs with both indices in the
// held-out fold. Standard mode minimizes the mean error; modified mode picks
// the largest lambda whose mean error stays within sigma_weight fold standard
// deviations of the minimum.
CvSelection cv_select(const Dataset& dataset, LocalMeasureKind kind, int folds,
                      CvMode mode, const CvParams& params = {});

// Nullity test for beta_k: column k is resampled with replacement B times,
// the fit is repeated, and p = (1/B) #{beta_k^[b] > beta_k}.
TestOutcome bootstrap_coefficient_test(const Dataset& dataset, int k,
                                       LocalMeasureKind kind, int B, double alpha,
                                       Rng& rng);

// Runs the coefficient test for every input with a shared resample-index
// stream per input column.
ScreeningReport coefficient_bootstrap_screen(const Dataset& dataset, LocalMeasureKind kind,
                                             int B, double alpha, std::uint64_t seed);

// HSIC-Lasso screening: builds the kernel design, cross-validates lambda and
// returns the active set of the full-sample path at lambda_hat.
ScreeningReport hsic_lasso_screen(const Dataset& dataset, CvMode mode, int folds,
                                  Rng& rng, const CvParams& params = {});

}  // namespace depscreen
