#include "depscreen/gram.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "depscreen/errors.hpp"

namespace depscreen {

namespace {

void validate(const Eigen::MatrixXd& m, GramKind kind, bool centered) {
    if (m.rows() != m.cols()) throw DimensionMismatch("Gram matrix must be square");
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12) throw InternalConsistency("Gram matrix asymmetric beyond 1e-12");
    if (!centered) {
        if (kind == GramKind::GaussianKernel) {
            if ((m.diagonal().array() - 1.0).abs().maxCoeff() > 1e-12) {
                throw InternalConsistency("Gaussian Gram diagonal must be 1");
            }
            // Zero is admitted: exp underflows for very distant pairs.
            if (m.minCoeff() < 0.0 || m.maxCoeff() > 1.0 + 1e-12) {
                throw InternalConsistency("Gaussian Gram entries must lie in [0,1]");
            }
        } else {
            if (m.diagonal().cwiseAbs().maxCoeff() > 1e-12) {
                throw InternalConsistency("distance Gram diagonal must be 0");
            }
            if (m.minCoeff() < 0.0) {
                throw InternalConsistency("distance Gram entries must be nonnegative");
            }
        }
    } else {
        const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
        if (m.rowwise().sum().cwiseAbs().maxCoeff() > 1e-9 * scale * m.rows()) {
            throw InternalConsistency("centered Gram has nonzero row sums");
        }
    }
}

}  // namespace

GramMatrix::GramMatrix(Eigen::MatrixXd entries, GramKind kind, bool centered)
    : entries_(std::move(entries)), kind_(kind), centered_(centered) {
    validate(entries_, kind_, centered_);
}

BandwidthVector empirical_bandwidth(const DataColumn& col) {
    const auto& z = col.values();
    const double n = static_cast<double>(z.rows());
    Eigen::VectorXd sigma2(z.cols());
    for (Eigen::Index j = 0; j < z.cols(); ++j) {
        const double mean = z.col(j).mean();
        const double var = (z.col(j).array() - mean).square().sum() / n;
        if (var <= 0.0) {
            throw DegenerateColumn("coordinate " + std::to_string(j) + " has zero variance");
        }
        sigma2(j) = var;
    }
    return BandwidthVector{std::move(sigma2)};
}

GramMatrix gaussian_gram(const DataColumn& col, const BandwidthVector& bw) {
    const auto& z = col.values();
    if (bw.sigma2.size() != z.cols()) {
        throw DimensionMismatch("bandwidth dimension does not match column");
    }
    if ((bw.sigma2.array() <= 0.0).any()) throw Error("bandwidths must be positive");
    const Eigen::Index n = z.rows();
    Eigen::MatrixXd k(n, n);
    const Eigen::VectorXd inv_s2 = bw.sigma2.cwiseInverse();
    for (Eigen::Index i = 0; i < n; ++i) {
        k(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double d2 = ((z.row(i) - z.row(j)).transpose().array().square() *
                               inv_s2.array())
                                  .sum();
            const double v = std::exp(-d2);
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    return GramMatrix(std::move(k), GramKind::GaussianKernel, false);
}

GramMatrix distance_gram(const DataColumn& col) {
    const auto& z = col.values();
    const Eigen::Index n = z.rows();
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        g(i, i) = 0.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = (z.row(i) - z.row(j)).norm();
            g(i, j) = v;
            g(j, i) = v;
        }
    }
    return GramMatrix(std::move(g), GramKind::EuclideanDistance, false);
}

Eigen::MatrixXd double_center_matrix(const Eigen::MatrixXd& g) {
    const Eigen::VectorXd row_mean = g.rowwise().mean();
    const Eigen::RowVectorXd col_mean = g.colwise().mean();
    const double grand_mean = g.mean();
    Eigen::MatrixXd out = g;
    out.colwise() -= row_mean;
    out.rowwise() -= col_mean;
    out.array() += grand_mean;
    return out;
}

GramMatrix double_center(const GramMatrix& g) {
    if (g.centered()) throw AlreadyCentered("Gram matrix is already centered");
    return GramMatrix(double_center_matrix(g.entries()), g.kind(), true);
}

Eigen::VectorXd sym_eigenvalues(const Eigen::MatrixXd& g) {
    if (g.rows() != g.cols()) throw DimensionMismatch("eigenvalues of a non-square matrix");
    if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, g.cwiseAbs().maxCoeff())) {
        throw InternalConsistency("matrix is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.compute(g, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NonConvergence("symmetric eigensolver did not converge");
    }
    Eigen::VectorXd vals = solver.eigenvalues();
    std::sort(vals.data(), vals.data() + vals.size(), std::greater<double>());
    const double clamp = 1e-10 * vals.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
        if (std::fabs(vals(i)) < clamp) vals(i) = 0.0;
    }
    return vals;
}

Eigen::VectorXd sym_eigenvalues(const GramMatrix& g) { return sym_eigenvalues(g.entries()); }

}  // namespace depscreen
