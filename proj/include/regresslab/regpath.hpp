#ifndef REGRESSLAB_REGPATH_HPP
#define REGRESSLAB_REGPATH_HPP

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "regresslab/errors.hpp"
#include "regresslab/glm.hpp"
#include "regresslab/linalg.hpp"
#include "regresslab/metrics.hpp"

namespace regresslab {

// Coefficients with |theta_i| <= this count as zero in path reports.
inline constexpr double kPathZeroTol = 1e-10;

enum class PenaltyKind { none, l2, l1 };

struct PenaltySpec {
    PenaltyKind kind = PenaltyKind::none;
    double lambda = 0.0;

    void validate() const {
        if (lambda < 0.0) throw ParameterError("PenaltySpec: lambda must be >= 0");
    }
};

inline double sign(double v) {
    if (v > 0.0) return 1.0;
    if (v < 0.0) return -1.0;
    return 0.0; // subgradient choice at zero
}

// One penalized gradient step. The bias coordinate (index 0) is never
// penalized.
inline Vector penalized_step(const Vector& theta, const Vector& grad, double eta,
                             const PenaltySpec& penalty) {
    if (theta.size() != grad.size()) throw ShapeError("penalized_step: dim mismatch");
    penalty.validate();
    Vector out(theta.size());
    for (std::size_t j = 0; j < theta.size(); ++j) {
        double step = grad[j];
        if (j > 0) {
            if (penalty.kind == PenaltyKind::l2) step += penalty.lambda * theta[j];
            if (penalty.kind == PenaltyKind::l1) step += penalty.lambda * sign(theta[j]);
        }
        out[j] = theta[j] - eta * step;
    }
    return out;
}

inline double soft_threshold(double rho, double t) {
    return sign(rho) * std::max(std::fabs(rho) - t, 0.0);
}

struct LassoResult {
    LinearParams params;
    bool converged = false;
    int sweeps = 0;
    std::vector<double> objective_trace; // objective after each sweep
};

namespace detail {

inline double lasso_objective(const Matrix& x, const Vector& y, const Vector& theta,
                              double lambda) {
    double obj = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        double z = 0.0;
        for (std::size_t j = 0; j < x.cols(); ++j) z += theta[j] * x(i, j);
        const double e = z - y[i];
        obj += e * e;
    }
    for (std::size_t j = 1; j < theta.size(); ++j) obj += lambda * std::fabs(theta[j]);
    return obj;
}

} // namespace detail

// Cyclic coordinate descent for sum_m (theta'x_m - y_m)^2 + lambda sum_{n>=1} |theta_n|.
// Each update is the exact 1-D minimizer soft(rho_n, lambda/2) / z_n; the
// bias is updated unpenalized. Residuals are maintained incrementally.
inline LassoResult lasso_cd(const Matrix& x_aug, const Vector& y, double lambda,
                            int max_sweeps = 1000, double tol = 1e-8,
                            const Vector* warm_start = nullptr) {
    if (x_aug.rows() != y.size()) throw ShapeError("lasso_cd: row count mismatch");
    if (lambda < 0.0) throw ParameterError("lasso_cd: lambda must be >= 0");
    const std::size_t m = x_aug.rows();
    const std::size_t n = x_aug.cols();

    // A zero column (a constant feature after standardization) keeps its
    // coefficient pinned at zero; a zero bias column is a malformed design.
    Vector z_norm(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += x_aug(i, j) * x_aug(i, j);
        if (s == 0.0 && j == 0) {
            throw ParameterError("lasso_cd: bias column is identically zero");
        }
        z_norm[j] = s;
    }

    Vector theta(n);
    if (warm_start) {
        if (warm_start->size() != n) throw ShapeError("lasso_cd: warm start dim mismatch");
        theta = *warm_start;
    }
    // residual r_i = y_i - theta'x_i
    Vector residual = y;
    for (std::size_t i = 0; i < m; ++i) {
        double z = 0.0;
        for (std::size_t j = 0; j < n; ++j) z += theta[j] * x_aug(i, j);
        residual[i] -= z;
    }

    LassoResult result;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double max_change = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (z_norm[j] == 0.0) continue;
            const double old = theta[j];
            double rho = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                rho += x_aug(i, j) * (residual[i] + old * x_aug(i, j));
            }
            double updated;
            if (j == 0) {
                updated = rho / z_norm[j];
            } else {
                updated = soft_threshold(rho, lambda / 2.0) / z_norm[j];
            }
            if (updated != old) {
                const double delta = updated - old;
                for (std::size_t i = 0; i < m; ++i) residual[i] -= delta * x_aug(i, j);
                theta[j] = updated;
            }
            max_change = std::max(max_change, std::fabs(updated - old));
        }
        result.sweeps = sweep + 1;
        result.objective_trace.push_back(detail::lasso_objective(x_aug, y, theta, lambda));
        if (max_change < tol) {
            result.converged = true;
            break;
        }
    }
    result.params = LinearParams{std::move(theta)};
    return result;
}

// Smallest lambda at which the lasso solution has no active features:
// 2 * max_n |x_n'(y - ybar)| under the sum convention (the bias absorbs ybar).
inline double lambda_max(const Matrix& x_aug, const Vector& y) {
    if (x_aug.rows() != y.size()) throw ShapeError("lambda_max: row count mismatch");
    const std::size_t m = x_aug.rows();
    double ybar = 0.0;
    for (std::size_t i = 0; i < m; ++i) ybar += y[i];
    ybar /= static_cast<double>(m);
    double best = 0.0;
    for (std::size_t j = 1; j < x_aug.cols(); ++j) {
        double corr = 0.0;
        for (std::size_t i = 0; i < m; ++i) corr += x_aug(i, j) * (y[i] - ybar);
        best = std::max(best, std::fabs(corr));
    }
    return 2.0 * best;
}

struct PathPoint {
    double lambda = 0.0;
    Vector theta;
    std::size_t nonzero_count = 0; // bias excluded, |theta| > kPathZeroTol
    double train_mse = 0.0;
};

// 60 log-spaced values from lambda_max down to lambda_max * 1e-4.
inline std::vector<double> default_lambda_grid(const Matrix& x_aug, const Vector& y,
                                               int count = 60, double min_ratio = 1e-4) {
    if (count < 2) throw ParameterError("default_lambda_grid: need count >= 2");
    const double top = lambda_max(x_aug, y);
    if (top <= 0.0) throw ParameterError("default_lambda_grid: lambda_max is zero");
    std::vector<double> grid(static_cast<std::size_t>(count));
    const double log_top = std::log(top);
    const double log_bot = std::log(top * min_ratio);
    for (int i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(count - 1);
        grid[static_cast<std::size_t>(i)] = std::exp(log_top + t * (log_bot - log_top));
    }
    return grid;
}

namespace detail {

inline PathPoint make_path_point(const Matrix& x_aug, const Vector& y, double lambda,
                                 Vector theta) {
    PathPoint pt;
    pt.lambda = lambda;
    pt.nonzero_count = 0;
    for (std::size_t j = 1; j < theta.size(); ++j) {
        if (std::fabs(theta[j]) > kPathZeroTol) ++pt.nonzero_count;
    }
    const Vector yhat = matvec(x_aug, theta);
    pt.train_mse = regression_metrics(yhat, y).mse;
    pt.theta = std::move(theta);
    return pt;
}

} // namespace detail

// Solves the penalized problem on a strictly descending lambda grid. Ridge
// points come from the closed form; lasso points from coordinate descent
// warm-started at the previous solution.
inline std::vector<PathPoint> regularization_path(const Matrix& x_aug, const Vector& y,
                                                  PenaltyKind kind,
                                                  const std::vector<double>& lambdas,
                                                  int max_sweeps = 1000, double tol = 1e-8) {
    if (kind == PenaltyKind::none) {
        throw ParameterError("regularization_path: penalty must be l1 or l2");
    }
    if (lambdas.empty()) throw ParameterError("regularization_path: empty grid");
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (lambdas[i] <= 0.0) throw ParameterError("regularization_path: lambdas must be > 0");
        if (i > 0 && lambdas[i] >= lambdas[i - 1]) {
            throw ParameterError("regularization_path: lambdas must be strictly descending");
        }
    }
    std::vector<PathPoint> path;
    path.reserve(lambdas.size());
    Vector warm(x_aug.cols());
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        Vector theta;
        if (kind == PenaltyKind::l2) {
            theta = fit_ridge_closed(x_aug, y, lambdas[i]).theta;
        } else {
            const Vector* start = i == 0 ? nullptr : &warm;
            theta = lasso_cd(x_aug, y, lambdas[i], max_sweeps, tol, start).params.theta;
            warm = theta;
        }
        path.push_back(detail::make_path_point(x_aug, y, lambdas[i], std::move(theta)));
    }
    return path;
}

// CSV rows in ascending-lambda order: lambda, one column per coefficient,
// nonzero_count, train_mse.
inline void path_to_csv(const std::vector<PathPoint>& path,
                        const std::vector<std::string>& coef_names, std::ostream& out) {
    if (path.empty()) throw ParameterError("path_to_csv: empty path");
    out << "lambda";
    for (std::size_t j = 0; j < path.front().theta.size(); ++j) {
        out << ',' << (j < coef_names.size() ? coef_names[j] : "theta" + std::to_string(j));
    }
    out << ",nonzero_count,train_mse\n";
    std::vector<const PathPoint*> ordered;
    ordered.reserve(path.size());
    for (const PathPoint& pt : path) ordered.push_back(&pt);
    std::sort(ordered.begin(), ordered.end(),
              [](const PathPoint* a, const PathPoint* b) { return a->lambda < b->lambda; });
    for (const PathPoint* pt : ordered) {
        out << detail::format_double(pt->lambda);
        for (std::size_t j = 0; j < pt->theta.size(); ++j) {
            out << ',' << detail::format_double(pt->theta[j]);
        }
        out << ',' << pt->nonzero_count << ',' << detail::format_double(pt->train_mse) << '\n';
    }
}

} // namespace regresslab

#endif
