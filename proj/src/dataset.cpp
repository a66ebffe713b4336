#include "depscreen/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "depscreen/errors.hpp"

namespace depscreen {

DataColumn::DataColumn(Eigen::MatrixXd values) : values_(std::move(values)) {
    if (values_.rows() < 2) throw InsufficientSample("DataColumn needs at least 2 rows");
    if (values_.cols() < 1) throw DimensionMismatch("DataColumn needs at least 1 coordinate");
    if (!values_.allFinite()) throw Error("DataColumn contains non-finite entries");
}

DataColumn DataColumn::from_vector(const std::vector<double>& values) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(values.size()), 1);
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, 0) = values[static_cast<size_t>(i)];
    return DataColumn(std::move(m));
}

Dataset::Dataset(std::vector<DataColumn> in, DataColumn out)
    : inputs(std::move(in)), output(std::move(out)) {
    for (const auto& col : inputs) {
        if (col.n() != output.n()) throw LengthMismatch("dataset columns have unequal length");
    }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim surrounding whitespace
        auto b = field.find_first_not_of(" \t\r");
        auto e = field.find_last_not_of(" \t\r");
        fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

double parse_cell(const std::string& cell, int line_no) {
    try {
        size_t pos = 0;
        const double v = std::stod(cell, &pos);
        if (pos != cell.size()) throw std::invalid_argument(cell);
        if (!std::isfinite(v)) {
            throw ParseError("non-finite value at line " + std::to_string(line_no));
        }
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("cannot parse '" + cell + "' at line " + std::to_string(line_no));
    }
}

}  // namespace

Dataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty file: " + path);
    const auto header = split_csv_line(line);

    std::vector<int> input_cols, output_cols;
    for (size_t j = 0; j < header.size(); ++j) {
        std::string name = header[j];
        std::transform(name.begin(), name.end(), name.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (!name.empty() && name[0] == 'x') {
            input_cols.push_back(static_cast<int>(j));
        } else if (!name.empty() && name[0] == 'y') {
            output_cols.push_back(static_cast<int>(j));
        } else {
            throw SchemaError("unrecognised column name '" + header[j] + "'");
        }
    }
    if (output_cols.empty()) throw SchemaError("no output column (y...) in " + path);
    if (input_cols.empty()) throw SchemaError("no input column (x...) in " + path);

    std::vector<std::vector<double>> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size()) {
            throw ParseError("wrong field count at line " + std::to_string(line_no));
        }
        std::vector<double> row(cells.size());
        for (size_t j = 0; j < cells.size(); ++j) row[j] = parse_cell(cells[j], line_no);
        rows.push_back(std::move(row));
    }
    const auto n = static_cast<Eigen::Index>(rows.size());
    if (n < 6) throw InsufficientSample("need at least 6 data rows, got " + std::to_string(n));

    std::vector<DataColumn> inputs;
    for (int j : input_cols) {
        Eigen::MatrixXd col(n, 1);
        for (Eigen::Index i = 0; i < n; ++i) col(i, 0) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
        inputs.emplace_back(std::move(col));
    }
    Eigen::MatrixXd out(n, static_cast<Eigen::Index>(output_cols.size()));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (size_t k = 0; k < output_cols.size(); ++k) {
            out(i, static_cast<Eigen::Index>(k)) =
                rows[static_cast<size_t>(i)][static_cast<size_t>(output_cols[k])];
        }
    }
    return Dataset(std::move(inputs), DataColumn(std::move(out)));
}

}  // namespace depscreen
