#ifndef REGRESSLAB_METRICS_HPP
#define REGRESSLAB_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "regresslab/errors.hpp"
#include "regresslab/linalg.hpp"

namespace regresslab {

// Probabilities are clamped to [kProbClamp, 1 - kProbClamp] before logs.
inline constexpr double kProbClamp = 1e-12;

struct RegressionMetrics {
    double mse = 0.0;
    double rmse = 0.0;
    double mae = 0.0;
    double mape = 0.0;
    bool mape_defined = true; // false when some y is 0
};

inline RegressionMetrics regression_metrics(const Vector& yhat, const Vector& y) {
    if (yhat.size() != y.size()) throw ShapeError("regression_metrics: length mismatch");
    if (y.size() == 0) throw ShapeError("regression_metrics: empty input");
    const double m = static_cast<double>(y.size());
    RegressionMetrics r;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double e = yhat[i] - y[i];
        r.mse += e * e;
        r.mae += std::fabs(e);
        if (y[i] == 0.0)
            r.mape_defined = false;
        else
            r.mape += std::fabs(e / y[i]);
    }
    r.mse /= m;
    r.mae /= m;
    r.rmse = std::sqrt(r.mse);
    r.mape = r.mape_defined ? r.mape / m : 0.0;
    return r;
}

struct ConfusionCounts {
    long tp = 0;
    long fp = 0;
    long tn = 0;
    long fn = 0;
};

struct ClassificationMetrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    ConfusionCounts counts;
    // 0/0 cases report the value 0 with the matching flag set.
    bool precision_degenerate = false;
    bool recall_degenerate = false;
    bool f1_degenerate = false;
};

inline ClassificationMetrics classification_metrics(const std::vector<int>& yhat_class,
                                                    const std::vector<int>& y_class,
                                                    int positive) {
    if (yhat_class.size() != y_class.size()) {
        throw ShapeError("classification_metrics: length mismatch");
    }
    if (y_class.empty()) throw ShapeError("classification_metrics: empty input");
    ClassificationMetrics r;
    long correct = 0;
    for (std::size_t i = 0; i < y_class.size(); ++i) {
        const bool predicted_pos = yhat_class[i] == positive;
        const bool actual_pos = y_class[i] == positive;
        if (yhat_class[i] == y_class[i]) ++correct;
        if (predicted_pos && actual_pos) ++r.counts.tp;
        if (predicted_pos && !actual_pos) ++r.counts.fp;
        if (!predicted_pos && actual_pos) ++r.counts.fn;
        if (!predicted_pos && !actual_pos) ++r.counts.tn;
    }
    r.accuracy = static_cast<double>(correct) / static_cast<double>(y_class.size());
    if (r.counts.tp + r.counts.fp == 0) {
        r.precision_degenerate = true;
    } else {
        r.precision = static_cast<double>(r.counts.tp) /
                      static_cast<double>(r.counts.tp + r.counts.fp);
    }
    if (r.counts.tp + r.counts.fn == 0) {
        r.recall_degenerate = true;
    } else {
        r.recall =
            static_cast<double>(r.counts.tp) / static_cast<double>(r.counts.tp + r.counts.fn);
    }
    if (r.precision + r.recall == 0.0) {
        r.f1_degenerate = true;
    } else {
        r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
    }
    return r;
}

// Mean over samples of -sum_k y_{m,k} log yhat_{m,k}. Rows of yhat_prob are
// clamped entrywise so the result stays finite even for hard 0/1 inputs.
inline double cross_entropy(const Matrix& yhat_prob, const Matrix& y_onehot) {
    if (yhat_prob.rows() != y_onehot.rows() || yhat_prob.cols() != y_onehot.cols()) {
        throw ShapeError("cross_entropy: shape mismatch");
    }
    if (yhat_prob.rows() == 0) throw ShapeError("cross_entropy: empty input");
    double total = 0.0;
    for (std::size_t i = 0; i < yhat_prob.rows(); ++i) {
        for (std::size_t k = 0; k < yhat_prob.cols(); ++k) {
            const double y = y_onehot(i, k);
            if (y == 0.0) continue;
            const double p = std::clamp(yhat_prob(i, k), kProbClamp, 1.0 - kProbClamp);
            total -= y * std::log(p);
        }
    }
    return total / static_cast<double>(yhat_prob.rows());
}

// Mann-Whitney AUC with average ranks for tied scores.
inline double auc(const Vector& scores, const std::vector<int>& y_class) {
    if (scores.size() != y_class.size()) throw ShapeError("auc: length mismatch");
    const std::size_t m = scores.size();
    std::size_t n_pos = 0;
    for (int y : y_class) {
        if (y != 0 && y != 1) throw ParameterError("auc: labels must be binary 0/1");
        n_pos += static_cast<std::size_t>(y);
    }
    const std::size_t n_neg = m - n_pos;
    if (n_pos == 0 || n_neg == 0) {
        throw UndefinedMetricError("auc: both classes must be present");
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    std::vector<double> rank(m);
    std::size_t i = 0;
    while (i < m) {
        std::size_t j = i;
        while (j + 1 < m && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
        i = j + 1;
    }
    double rank_sum_pos = 0.0;
    for (std::size_t k = 0; k < m; ++k)
        if (y_class[k] == 1) rank_sum_pos += rank[k];
    const double u = rank_sum_pos -
                     static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1.0) / 2.0;
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

} // namespace regresslab

#endif
