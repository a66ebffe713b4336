#pragma once

#include <vector>

#include "depscreen/gram.hpp"

namespace depscreen {

enum class Measure {
    Pearson,
    Spearman,
    Dcov2,
    Dcor2,
    Hsic,
    SupHsic,
    BorgonovoDelta,
};

const char* measure_name(Measure m);

struct DependenceEstimate {
    Measure measure;
    double value;
    int input_index = -1;
};

struct BandwidthPair {
    BandwidthVector x;
    BandwidthVector y;
};

// sup-HSIC result carries the bandwidths attaining the maximum.
struct SupHsicEstimate {
    DependenceEstimate estimate;
    BandwidthPair argmax;
};

DependenceEstimate pearson(const DataColumn& x, const DataColumn& y);
DependenceEstimate spearman(const DataColumn& x, const DataColumn& y);

// V^2_n via the double-centered distance Gram products.
DependenceEstimate dcov2(const DataColumn& x, const DataColumn& y);

// R^2_n = V^2(x,y)/sqrt(V^2(x,x) V^2(y,y)), 0 when the denominator vanishes.
DependenceEstimate dcor2(const DataColumn& x, const DataColumn& y);

DependenceEstimate hsic(const DataColumn& x, const DataColumn& y,
                        const BandwidthVector& bw_x, const BandwidthVector& bw_y);

// Tr(Kx H Ky H)/n^2 given a centered x Gram and a raw y Gram.
double hsic_from_grams(const Eigen::MatrixXd& centered_x, const Eigen::MatrixXd& raw_y);

// Average ranks (ties averaged), 1-based.
Eigen::VectorXd average_ranks(const Eigen::VectorXd& v);

// Geometric bandwidth grid {sigma2 * 4^j, j = -2..2} for each side,
// all (j_x, j_y) combinations.
std::vector<BandwidthPair> default_bandwidth_grid(const DataColumn& x, const DataColumn& y);

SupHsicEstimate sup_hsic(const DataColumn& x, const DataColumn& y,
                         const std::vector<BandwidthPair>& grid);

// 100 * value / sum(values); requires nonnegative values with positive sum.
std::vector<double> normalized_shares(const std::vector<DependenceEstimate>& estimates);

// Partition-histogram estimator of Borgonovo's delta: equiprobable x classes,
// shared y bin edges over the pooled range, half the mean L1 distance between
// the conditional and marginal histogram masses.
DependenceEstimate borgonovo_delta(const DataColumn& x, const DataColumn& y,
                                   int n_classes = 10, int n_bins = 20);

}  // namespace depscreen
