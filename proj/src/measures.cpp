#include "depscreen/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "depscreen/errors.hpp"

namespace depscreen {

namespace {

constexpr double kNegTol = 1e-10;

void require_scalar(const DataColumn& c, const char* what) {
    if (c.q() != 1) throw UnsupportedMeasure(std::string(what) + " requires scalar columns");
}

void require_equal_n(const DataColumn& x, const DataColumn& y) {
    if (x.n() != y.n()) throw LengthMismatch("columns have different sample counts");
}

double clamp_nonnegative(double v, const char* what) {
    if (v < -kNegTol) {
        throw InternalConsistency(std::string(what) + " estimate below -1e-10: " +
                                  std::to_string(v));
    }
    return std::max(v, 0.0);
}

double pearson_value(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const Eigen::ArrayXd xc = x.array() - x.mean();
    const Eigen::ArrayXd yc = y.array() - y.mean();
    const double sx = std::sqrt(xc.square().sum());
    const double sy = std::sqrt(yc.square().sum());
    if (sx == 0.0 || sy == 0.0) throw DegenerateColumn("constant column in correlation");
    return (xc * yc).sum() / (sx * sy);
}

}  // namespace

const char* measure_name(Measure m) {
    switch (m) {
        case Measure::Pearson: return "pearson";
        case Measure::Spearman: return "spearman";
        case Measure::Dcov2: return "dcov2";
        case Measure::Dcor2: return "dcor2";
        case Measure::Hsic: return "hsic";
        case Measure::SupHsic: return "sup-hsic";
        case Measure::BorgonovoDelta: return "borgonovo-delta";
    }
    return "?";
}

DependenceEstimate pearson(const DataColumn& x, const DataColumn& y) {
    require_scalar(x, "pearson");
    require_scalar(y, "pearson");
    require_equal_n(x, y);
    return {Measure::Pearson, pearson_value(x.values().col(0), y.values().col(0))};
}

Eigen::VectorXd average_ranks(const Eigen::VectorXd& v) {
    const Eigen::Index n = v.size();
    std::vector<Eigen::Index> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return v(a) < v(b); });
    Eigen::VectorXd ranks(n);
    Eigen::Index i = 0;
    while (i < n) {
        Eigen::Index j = i;
        while (j + 1 < n && v(order[static_cast<size_t>(j + 1)]) == v(order[static_cast<size_t>(i)])) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (Eigen::Index k = i; k <= j; ++k) ranks(order[static_cast<size_t>(k)]) = avg;
        i = j + 1;
    }
    return ranks;
}

DependenceEstimate spearman(const DataColumn& x, const DataColumn& y) {
    require_scalar(x, "spearman");
    require_scalar(y, "spearman");
    require_equal_n(x, y);
    const Eigen::VectorXd rx = average_ranks(x.values().col(0));
    const Eigen::VectorXd ry = average_ranks(y.values().col(0));
    return {Measure::Spearman, pearson_value(rx, ry)};
}

double hsic_from_grams(const Eigen::MatrixXd& centered_x, const Eigen::MatrixXd& raw_y) {
    const double n = static_cast<double>(centered_x.rows());
    return (centered_x.array() * raw_y.array()).sum() / (n * n);
}

DependenceEstimate dcov2(const DataColumn& x, const DataColumn& y) {
    require_equal_n(x, y);
    const Eigen::MatrixXd a = double_center_matrix(distance_gram(x).entries());
    const double v = hsic_from_grams(a, distance_gram(y).entries());
    return {Measure::Dcov2, clamp_nonnegative(v, "dcov2")};
}

DependenceEstimate dcor2(const DataColumn& x, const DataColumn& y) {
    require_equal_n(x, y);
    const Eigen::MatrixXd gx = distance_gram(x).entries();
    const Eigen::MatrixXd gy = distance_gram(y).entries();
    const Eigen::MatrixXd ax = double_center_matrix(gx);
    const Eigen::MatrixXd ay = double_center_matrix(gy);
    const double vxy = clamp_nonnegative(hsic_from_grams(ax, gy), "dcov2");
    const double vxx = clamp_nonnegative(hsic_from_grams(ax, gx), "dcov2");
    const double vyy = clamp_nonnegative(hsic_from_grams(ay, gy), "dcov2");
    const double den = std::sqrt(vxx * vyy);
    double r2 = den > 0.0 ? vxy / den : 0.0;
    r2 = std::min(std::max(r2, 0.0), 1.0);
    return {Measure::Dcor2, r2};
}

DependenceEstimate hsic(const DataColumn& x, const DataColumn& y,
                        const BandwidthVector& bw_x, const BandwidthVector& bw_y) {
    require_equal_n(x, y);
    const Eigen::MatrixXd kx = double_center_matrix(gaussian_gram(x, bw_x).entries());
    const double v = hsic_from_grams(kx, gaussian_gram(y, bw_y).entries());
    return {Measure::Hsic, clamp_nonnegative(v, "hsic")};
}

std::vector<BandwidthPair> default_bandwidth_grid(const DataColumn& x, const DataColumn& y) {
    const BandwidthVector bx = empirical_bandwidth(x);
    const BandwidthVector by = empirical_bandwidth(y);
    std::vector<BandwidthPair> grid;
    for (int jx = -2; jx <= 2; ++jx) {
        for (int jy = -2; jy <= 2; ++jy) {
            const double fx = std::pow(4.0, jx);
            const double fy = std::pow(4.0, jy);
            grid.push_back({BandwidthVector{bx.sigma2 * fx}, BandwidthVector{by.sigma2 * fy}});
        }
    }
    return grid;
}

SupHsicEstimate sup_hsic(const DataColumn& x, const DataColumn& y,
                         const std::vector<BandwidthPair>& grid) {
    if (grid.empty()) throw EmptyGrid("sup_hsic needs a non-empty bandwidth grid");
    // Grids usually repeat the per-side bandwidths; Grams are cached by value.
    std::vector<std::pair<Eigen::VectorXd, Eigen::MatrixXd>> x_cache, y_cache;
    x_cache.reserve(grid.size());
    y_cache.reserve(grid.size());
    auto centered_x_gram = [&](const BandwidthVector& bw) -> const Eigen::MatrixXd& {
        for (const auto& [key, gram] : x_cache) {
            if (key == bw.sigma2) return gram;
        }
        x_cache.emplace_back(bw.sigma2,
                             double_center_matrix(gaussian_gram(x, bw).entries()));
        return x_cache.back().second;
    };
    auto raw_y_gram = [&](const BandwidthVector& bw) -> const Eigen::MatrixXd& {
        for (const auto& [key, gram] : y_cache) {
            if (key == bw.sigma2) return gram;
        }
        y_cache.emplace_back(bw.sigma2, gaussian_gram(y, bw).entries());
        return y_cache.back().second;
    };

    double best = -1.0;
    size_t best_idx = 0;
    for (size_t i = 0; i < grid.size(); ++i) {
        const double v = std::max(
            hsic_from_grams(centered_x_gram(grid[i].x), raw_y_gram(grid[i].y)), 0.0);
        if (v > best) {
            best = v;
            best_idx = i;
        }
    }
    return {{Measure::SupHsic, best}, grid[best_idx]};
}

std::vector<double> normalized_shares(const std::vector<DependenceEstimate>& estimates) {
    double sum = 0.0;
    for (const auto& e : estimates) {
        if (e.value < 0.0) throw InternalConsistency("negative value in normalized_shares");
        sum += e.value;
    }
    if (sum <= 0.0) throw ZeroSum("normalized_shares needs a positive total");
    std::vector<double> shares;
    shares.reserve(estimates.size());
    for (const auto& e : estimates) shares.push_back(100.0 * e.value / sum);
    return shares;
}

DependenceEstimate borgonovo_delta(const DataColumn& x, const DataColumn& y,
                                   int n_classes, int n_bins) {
    require_scalar(x, "borgonovo_delta");
    require_scalar(y, "borgonovo_delta");
    require_equal_n(x, y);
    if (n_classes < 2 || n_bins < 2) throw Error("borgonovo_delta: need >= 2 classes and bins");
    const Eigen::Index n = x.n();
    if (n < static_cast<Eigen::Index>(n_classes) * 10) {
        throw InsufficientSample("borgonovo_delta needs n >= 10 * n_classes");
    }

    const Eigen::VectorXd xv = x.values().col(0);
    const Eigen::VectorXd yv = y.values().col(0);
    const double y_lo = yv.minCoeff();
    const double y_hi = yv.maxCoeff();
    const double width = y_hi > y_lo ? y_hi - y_lo : 1.0;

    auto bin_of = [&](double v) {
        int b = static_cast<int>(static_cast<double>(n_bins) * (v - y_lo) / width);
        return std::min(std::max(b, 0), n_bins - 1);
    };

    std::vector<double> marginal(static_cast<size_t>(n_bins), 0.0);
    for (Eigen::Index i = 0; i < n; ++i) marginal[static_cast<size_t>(bin_of(yv(i)))] += 1.0;
    for (auto& m : marginal) m /= static_cast<double>(n);

    std::vector<Eigen::Index> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return xv(a) < xv(b); });

    double total = 0.0;
    for (int c = 0; c < n_classes; ++c) {
        const Eigen::Index lo = (n * c) / n_classes;
        const Eigen::Index hi = (n * (c + 1)) / n_classes;
        std::vector<double> cond(static_cast<size_t>(n_bins), 0.0);
        for (Eigen::Index i = lo; i < hi; ++i) {
            cond[static_cast<size_t>(bin_of(yv(order[static_cast<size_t>(i)])))] += 1.0;
        }
        const double m = static_cast<double>(hi - lo);
        double l1 = 0.0;
        for (int b = 0; b < n_bins; ++b) {
            l1 += std::fabs(marginal[static_cast<size_t>(b)] - cond[static_cast<size_t>(b)] / m);
        }
        total += l1;
    }
    return {Measure::BorgonovoDelta, 0.5 * total / static_cast<double>(n_classes)};
}

}  // namespace depscreen
