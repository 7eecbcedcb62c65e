#ifndef REGRESSLAB_DATASET_HPP
#define REGRESSLAB_DATASET_HPP

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "regresslab/errors.hpp"
#include "regresslab/linalg.hpp"
#include "regresslab/rng.hpp"

namespace regresslab {

// A feature matrix with exactly one label column: either real-valued
// (regression) or 0-based class ids (classification).
struct Dataset {
    Matrix x;
    std::optional<Vector> y_real;
    std::optional<std::vector<int>> y_class;
    std::vector<std::string> feature_names;
    bool bias_augmented = false;

    std::size_t rows() const { return x.rows(); }
    std::size_t cols() const { return x.cols(); }

    int num_classes() const {
        if (!y_class) throw ParameterError("Dataset: no class labels present");
        int k = 0;
        for (int id : *y_class) k = std::max(k, id + 1);
        return k;
    }

    void validate() const {
        if (y_real.has_value() == y_class.has_value()) {
            throw ParameterError("Dataset: exactly one of y_real / y_class must be present");
        }
        const std::size_t m = y_real ? y_real->size() : y_class->size();
        if (m != x.rows()) throw ShapeError("Dataset: label count does not match row count");
        if (!feature_names.empty() && feature_names.size() != x.cols()) {
            throw ShapeError("Dataset: feature name count does not match column count");
        }
        if (y_class) {
            for (int id : *y_class)
                if (id < 0) throw RangeError("Dataset: negative class id");
        }
        if (bias_augmented) {
            for (std::size_t i = 0; i < x.rows(); ++i)
                if (x(i, 0) != 1.0) throw ParameterError("Dataset: bias column is not all ones");
        }
    }
};

inline Dataset make_regression_dataset(Matrix x, Vector y, std::vector<std::string> names = {}) {
    Dataset d;
    d.x = std::move(x);
    d.y_real = std::move(y);
    d.feature_names = std::move(names);
    d.validate();
    return d;
}

inline Dataset make_classification_dataset(Matrix x, std::vector<int> y,
                                           std::vector<std::string> names = {}) {
    Dataset d;
    d.x = std::move(x);
    d.y_class = std::move(y);
    d.feature_names = std::move(names);
    d.validate();
    return d;
}

// Prepends a column of ones (the bias slot of the design matrix).
inline Matrix add_bias_column(const Matrix& x) {
    Matrix out(x.rows(), x.cols() + 1);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        out(i, 0) = 1.0;
        for (std::size_t j = 0; j < x.cols(); ++j) out(i, j + 1) = x(i, j);
    }
    return out;
}

inline Dataset with_bias(const Dataset& d) {
    if (d.bias_augmented) return d;
    Dataset out = d;
    out.x = add_bias_column(d.x);
    out.bias_augmented = true;
    if (!out.feature_names.empty()) {
        out.feature_names.insert(out.feature_names.begin(), "bias");
    }
    return out;
}

// Row subset preserving label kind, names and bias flag.
inline Dataset take_rows(const Dataset& d, const std::vector<std::size_t>& indices) {
    Dataset out;
    out.feature_names = d.feature_names;
    out.bias_augmented = d.bias_augmented;
    Matrix x(indices.size(), d.x.cols());
    for (std::size_t r = 0; r < indices.size(); ++r)
        for (std::size_t j = 0; j < d.x.cols(); ++j) x(r, j) = d.x(indices[r], j);
    out.x = std::move(x);
    if (d.y_real) {
        Vector y(indices.size());
        for (std::size_t r = 0; r < indices.size(); ++r) y[r] = (*d.y_real)[indices[r]];
        out.y_real = std::move(y);
    } else {
        std::vector<int> y(indices.size());
        for (std::size_t r = 0; r < indices.size(); ++r) y[r] = (*d.y_class)[indices[r]];
        out.y_class = std::move(y);
    }
    return out;
}

namespace detail {

// 17 significant digits survive a decimal round trip exactly.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last) {
        throw ParseError("csv: non-numeric cell at row " + std::to_string(row) +
                         ", column " + std::to_string(col) + ": '" + cell + "'");
    }
    return value;
}

inline std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

} // namespace detail

enum class LabelKind { real, cls };

// Comma-separated UTF-8 with a header row; label column chosen by name.
// Class labels must be non-negative integers (pass one_based = true for
// files that count classes from 1).
inline Dataset load_csv(const std::string& path, const std::string& label_column,
                        LabelKind label_kind, bool one_based = false) {
    std::ifstream in(path);
    if (!in) throw SchemaError("csv: cannot open '" + path + "'");
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    if (lines.empty()) throw EmptyInputError("csv: '" + path + "' is empty");

    const std::vector<std::string> header = detail::split_line(lines[0]);
    std::size_t label_idx = header.size();
    for (std::size_t j = 0; j < header.size(); ++j)
        if (header[j] == label_column) label_idx = j;
    if (label_idx == header.size()) {
        throw SchemaError("csv: label column '" + label_column + "' not found in header");
    }
    if (lines.size() == 1) throw EmptyInputError("csv: '" + path + "' has no data rows");

    const std::size_t m = lines.size() - 1;
    const std::size_t n = header.size() - 1;
    Matrix x(m, n);
    Vector y_real(m);
    std::vector<int> y_class(m);
    for (std::size_t r = 0; r < m; ++r) {
        const std::vector<std::string> cells = detail::split_line(lines[r + 1]);
        if (cells.size() != header.size()) {
            throw SchemaError("csv: row " + std::to_string(r + 1) + " has " +
                              std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(header.size()));
        }
        std::size_t out_col = 0;
        for (std::size_t j = 0; j < cells.size(); ++j) {
            const double v = detail::parse_cell(cells[j], r + 1, j);
            if (j == label_idx) {
                if (label_kind == LabelKind::real) {
                    y_real[r] = v;
                } else {
                    if (v != std::floor(v) || v < (one_based ? 1.0 : 0.0)) {
                        throw ParseError("csv: class label at row " + std::to_string(r + 1) +
                                         " is not a valid integer id: '" + cells[j] + "'");
                    }
                    y_class[r] = static_cast<int>(v) - (one_based ? 1 : 0);
                }
            } else {
                x(r, out_col++) = v;
            }
        }
    }

    std::vector<std::string> names;
    for (std::size_t j = 0; j < header.size(); ++j)
        if (j != label_idx) names.push_back(header[j]);

    Dataset d;
    d.x = std::move(x);
    d.feature_names = std::move(names);
    if (label_kind == LabelKind::real)
        d.y_real = std::move(y_real);
    else
        d.y_class = std::move(y_class);
    d.validate();
    return d;
}

inline void save_csv(const Dataset& d, const std::string& path,
                     const std::string& label_column = "y") {
    std::ofstream out(path);
    if (!out) throw SchemaError("csv: cannot write '" + path + "'");
    for (std::size_t j = 0; j < d.cols(); ++j) {
        const std::string name =
            j < d.feature_names.size() ? d.feature_names[j] : "x" + std::to_string(j + 1);
        out << name << ',';
    }
    out << label_column << '\n';
    for (std::size_t i = 0; i < d.rows(); ++i) {
        for (std::size_t j = 0; j < d.cols(); ++j) out << detail::format_double(d.x(i, j)) << ',';
        if (d.y_real)
            out << detail::format_double((*d.y_real)[i]);
        else
            out << (*d.y_class)[i];
        out << '\n';
    }
}

// The six (floor area, monthly rent) pairs of the rental example.
inline Dataset fixture_rental() {
    Matrix x(6, 1, {78, 71, 60, 48, 52, 45});
    Vector y{6600, 6500, 4900, 4500, 3800, 4300};
    return make_regression_dataset(std::move(x), std::move(y), {"area"});
}

// M x k matrix of one-hot rows for 0-based class ids.
inline Matrix one_hot_encode(const std::vector<int>& y_class, int k) {
    if (k < 1) throw ParameterError("one_hot_encode: class count must be positive");
    Matrix out(y_class.size(), static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < y_class.size(); ++i) {
        if (y_class[i] < 0 || y_class[i] >= k) {
            throw RangeError("one_hot_encode: class id " + std::to_string(y_class[i]) +
                             " out of range for k=" + std::to_string(k));
        }
        out(i, static_cast<std::size_t>(y_class[i])) = 1.0;
    }
    return out;
}

struct StandardizeResult {
    Dataset dataset;
    Vector means;
    Vector stds;
};

// Centers and scales each feature column to mean 0, population std 1.
// Constant columns keep std = 1 so they map to all zeros.
inline StandardizeResult standardize(const Dataset& d) {
    if (d.rows() < 2) throw ParameterError("standardize: need at least 2 rows");
    if (d.bias_augmented) throw ParameterError("standardize: apply before bias augmentation");
    const std::size_t m = d.rows();
    const std::size_t n = d.cols();
    Vector means(n);
    Vector stds(n);
    Matrix x = d.x;
    for (std::size_t j = 0; j < n; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < m; ++i) mean += x(i, j);
        mean /= static_cast<double>(m);
        double var = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double dxy = x(i, j) - mean;
            var += dxy * dxy;
        }
        var /= static_cast<double>(m);
        const double sd = var > 0.0 ? std::sqrt(var) : 1.0;
        means[j] = mean;
        stds[j] = sd;
        for (std::size_t i = 0; i < m; ++i) x(i, j) = (x(i, j) - mean) / sd;
    }
    Dataset out = d;
    out.x = std::move(x);
    return {std::move(out), std::move(means), std::move(stds)};
}

// y = sin(2*pi*x) + eps on an inclusive equally spaced grid over [0, 1].
inline Dataset gen_sine(std::size_t m, double noise_std, Rng& rng) {
    if (m < 2) throw ParameterError("gen_sine: need m >= 2");
    if (noise_std < 0.0) throw ParameterError("gen_sine: noise_std must be >= 0");
    Matrix x(m, 1);
    Vector y(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double xi = static_cast<double>(i) / static_cast<double>(m - 1);
        x(i, 0) = xi;
        double yi = std::sin(2.0 * std::numbers::pi * xi);
        if (noise_std > 0.0) yi += noise_std * rng.normal();
        y[i] = yi;
    }
    return make_regression_dataset(std::move(x), std::move(y), {"x"});
}

// Two Gaussian classes with shared covariance: rows [0, m) are class 0 drawn
// as mu0 + L z, rows [m, 2m) are class 1, with L the Cholesky factor of sigma.
inline Dataset gen_two_gaussians(std::size_t m_per_class, const Vector& mu0, const Vector& mu1,
                                 const Matrix& sigma, Rng& rng) {
    if (m_per_class < 1) throw ParameterError("gen_two_gaussians: need m_per_class >= 1");
    if (mu0.size() != mu1.size()) throw ShapeError("gen_two_gaussians: mean dims disagree");
    if (sigma.rows() != mu0.size() || sigma.cols() != mu0.size()) {
        throw ShapeError("gen_two_gaussians: covariance dims disagree");
    }
    const Matrix l = detail::cholesky_factor(sigma);
    const std::size_t d = mu0.size();
    Matrix x(2 * m_per_class, d);
    std::vector<int> y(2 * m_per_class, 0);
    for (int c = 0; c < 2; ++c) {
        const Vector& mu = c == 0 ? mu0 : mu1;
        for (std::size_t i = 0; i < m_per_class; ++i) {
            Vector z(d);
            for (std::size_t j = 0; j < d; ++j) z[j] = rng.normal();
            const Vector lz = matvec(l, z);
            const std::size_t row = static_cast<std::size_t>(c) * m_per_class + i;
            for (std::size_t j = 0; j < d; ++j) x(row, j) = mu[j] + lz[j];
            y[row] = c;
        }
    }
    std::vector<std::string> names;
    for (std::size_t j = 0; j < d; ++j) names.push_back("x" + std::to_string(j + 1));
    return make_classification_dataset(std::move(x), std::move(y), std::move(names));
}

} // namespace regresslab

#endif
