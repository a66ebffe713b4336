#pragma once

#include <Eigen/Core>

#include "depscreen/dataset.hpp"

namespace depscreen {

enum class GramKind { EuclideanDistance, GaussianKernel };

// Squared correlation lengths of the Gaussian kernel, one per coordinate.
struct BandwidthVector {
    Eigen::VectorXd sigma2;
};

// n-by-n matrix of pairwise kernel values or Euclidean distances.
// Construction validates symmetry and the kind-specific invariants.
class GramMatrix {
public:
    GramMatrix(Eigen::MatrixXd entries, GramKind kind, bool centered);

    const Eigen::MatrixXd& entries() const { return entries_; }
    GramKind kind() const { return kind_; }
    bool centered() const { return centered_; }
    Eigen::Index n() const { return entries_.rows(); }

private:
    Eigen::MatrixXd entries_;
    GramKind kind_;
    bool centered_;
};

// Per-coordinate population variance (1/n convention).
BandwidthVector empirical_bandwidth(const DataColumn& col);

// entries(i,j) = exp(-sum_k (z_ki - z_kj)^2 / sigma2_k).
GramMatrix gaussian_gram(const DataColumn& col, const BandwidthVector& bw);

// entries(i,j) = ||z_i - z_j||_2.
GramMatrix distance_gram(const DataColumn& col);

// HGH via the row-mean/column-mean/grand-mean update.
GramMatrix double_center(const GramMatrix& g);

// All eigenvalues sorted descending; values below 1e-10 * max|lambda|
// in magnitude are clamped to zero.
Eigen::VectorXd sym_eigenvalues(const GramMatrix& g);
Eigen::VectorXd sym_eigenvalues(const Eigen::MatrixXd& symmetric);

// Centering as a plain matrix operation, for callers that hold raw matrices.
Eigen::MatrixXd double_center_matrix(const Eigen::MatrixXd& g);

}  // namespace depscreen
