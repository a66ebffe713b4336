#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace depscreen {

// One variable observed n times: a column of scalars (q = 1) or of
// q-dimensional vectors stored row-wise.
class DataColumn {
public:
    explicit DataColumn(Eigen::MatrixXd values);
    static DataColumn from_vector(const std::vector<double>& values);

    Eigen::Index n() const { return values_.rows(); }
    Eigen::Index q() const { return values_.cols(); }
    const Eigen::MatrixXd& values() const { return values_; }

private:
    Eigen::MatrixXd values_;
};

// d scalar or vector inputs plus one (possibly vector-valued) output,
// all with the same number of rows.
struct Dataset {
    std::vector<DataColumn> inputs;
    DataColumn output;

    Dataset(std::vector<DataColumn> in, DataColumn out);

    Eigen::Index n() const { return output.n(); }
    int d() const { return static_cast<int>(inputs.size()); }
};

// Reads a CSV file with a header row. Columns named x1..xd are scalar
// inputs; columns whose name starts with 'y' form the output coordinates.
// NaN/Inf cells and files with fewer than 6 rows are rejected.
Dataset load_dataset(const std::string& path);

}  // namespace depscreen
