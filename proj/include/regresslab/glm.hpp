#ifndef REGRESSLAB_GLM_HPP
#define REGRESSLAB_GLM_HPP

#include <cmath>
#include <limits>
#include <variant>
#include <vector>

#include "regresslab/dataset.hpp"
#include "regresslab/errors.hpp"
#include "regresslab/linalg.hpp"

namespace regresslab {

// theta = (theta_0, ..., theta_N), bias first; applied to bias-augmented rows.
struct LinearParams {
    Vector theta;
};

// Column k holds theta_k; shape (N+1) x K.
struct SoftmaxParams {
    Matrix thetas;
};

struct GaussianClassModel {
    std::vector<Vector> mus;
    Matrix sigma; // shared covariance
    Vector priors;
};

enum class GlmKind { linear, logistic, softmax };
enum class Reduction { mean, sum };

inline double predict_linear(const LinearParams& p, const Vector& x_aug) {
    return dot(p.theta, x_aug);
}

inline Vector predict_linear(const LinearParams& p, const Matrix& x_aug) {
    return matvec(x_aug, p.theta);
}

// Numerically stable logistic: never exponentiates a large positive value.
inline double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

inline double predict_logistic(const LinearParams& p, const Vector& x_aug) {
    return sigmoid(dot(p.theta, x_aug));
}

inline Vector predict_logistic(const LinearParams& p, const Matrix& x_aug) {
    Vector out = matvec(x_aug, p.theta);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = sigmoid(out[i]);
    return out;
}

inline int logistic_decision(double prob, double threshold = 0.5) {
    return prob > threshold ? 1 : 0;
}

// Lowest index wins ties.
inline int argmax_index(const Vector& v) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < v.size(); ++k)
        if (v[k] > v[best]) best = k;
    return static_cast<int>(best);
}

// Softmax with max-subtraction; entries sum to 1.
inline Vector softmax(const Vector& logits) {
    Vector out(logits.size());
    double zmax = logits[0];
    for (std::size_t k = 1; k < logits.size(); ++k) zmax = std::max(zmax, logits[k]);
    double denom = 0.0;
    for (std::size_t k = 0; k < logits.size(); ++k) {
        out[k] = std::exp(logits[k] - zmax);
        denom += out[k];
    }
    for (std::size_t k = 0; k < logits.size(); ++k) out[k] /= denom;
    return out;
}

inline Vector softmax_logits(const SoftmaxParams& p, const Vector& x_aug) {
    if (p.thetas.rows() != x_aug.size()) throw ShapeError("predict_softmax: dim mismatch");
    Vector z(p.thetas.cols());
    for (std::size_t k = 0; k < p.thetas.cols(); ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j < p.thetas.rows(); ++j) s += p.thetas(j, k) * x_aug[j];
        z[k] = s;
    }
    return z;
}

inline Vector predict_softmax(const SoftmaxParams& p, const Vector& x_aug) {
    return softmax(softmax_logits(p, x_aug));
}

inline Matrix predict_softmax(const SoftmaxParams& p, const Matrix& x_aug) {
    Matrix out(x_aug.rows(), p.thetas.cols());
    for (std::size_t i = 0; i < x_aug.rows(); ++i) {
        const Vector probs = predict_softmax(p, x_aug.row(i));
        for (std::size_t k = 0; k < probs.size(); ++k) out(i, k) = probs[k];
    }
    return out;
}

// Unified gradient: (1/M or 1) * sum_m (yhat_m - y_m) x_m.
inline Vector gradient(GlmKind kind, const LinearParams& p, const Matrix& x_aug, const Vector& y,
                       Reduction reduction) {
    if (kind == GlmKind::softmax) {
        throw ParameterError("gradient: softmax takes one-hot labels (matrix overload)");
    }
    if (x_aug.rows() != y.size()) throw ShapeError("gradient: row count mismatch");
    if (x_aug.cols() != p.theta.size()) throw ShapeError("gradient: parameter dim mismatch");
    Vector g(p.theta.size());
    for (std::size_t i = 0; i < x_aug.rows(); ++i) {
        double z = 0.0;
        for (std::size_t j = 0; j < x_aug.cols(); ++j) z += p.theta[j] * x_aug(i, j);
        const double yhat = kind == GlmKind::linear ? z : sigmoid(z);
        const double err = yhat - y[i];
        for (std::size_t j = 0; j < x_aug.cols(); ++j) g[j] += err * x_aug(i, j);
    }
    if (reduction == Reduction::mean) {
        for (std::size_t j = 0; j < g.size(); ++j) g[j] /= static_cast<double>(x_aug.rows());
    }
    return g;
}

inline Matrix gradient(const SoftmaxParams& p, const Matrix& x_aug, const Matrix& y_onehot,
                       Reduction reduction) {
    if (x_aug.rows() != y_onehot.rows()) throw ShapeError("gradient: row count mismatch");
    if (x_aug.cols() != p.thetas.rows() || y_onehot.cols() != p.thetas.cols()) {
        throw ShapeError("gradient: parameter dim mismatch");
    }
    Matrix g(p.thetas.rows(), p.thetas.cols());
    for (std::size_t i = 0; i < x_aug.rows(); ++i) {
        const Vector probs = predict_softmax(p, x_aug.row(i));
        for (std::size_t k = 0; k < probs.size(); ++k) {
            const double err = probs[k] - y_onehot(i, k);
            for (std::size_t j = 0; j < x_aug.cols(); ++j) g(j, k) += err * x_aug(i, j);
        }
    }
    if (reduction == Reduction::mean) {
        const double m = static_cast<double>(x_aug.rows());
        for (std::size_t j = 0; j < g.rows(); ++j)
            for (std::size_t k = 0; k < g.cols(); ++k) g(j, k) /= m;
    }
    return g;
}

// Training losses paired with the gradients above. The linear loss carries a
// factor 1/2 per sample so its derivative is exactly (yhat - y) x.
inline double linear_loss(const LinearParams& p, const Matrix& x_aug, const Vector& y,
                          Reduction reduction) {
    if (x_aug.rows() != y.size()) throw ShapeError("linear_loss: row count mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < x_aug.rows(); ++i) {
        double z = 0.0;
        for (std::size_t j = 0; j < x_aug.cols(); ++j) z += p.theta[j] * x_aug(i, j);
        const double e = z - y[i];
        total += 0.5 * e * e;
    }
    return reduction == Reduction::mean ? total / static_cast<double>(x_aug.rows()) : total;
}

// Stable per-sample cross entropy: softplus(z) - y z.
inline double logistic_loss(const LinearParams& p, const Matrix& x_aug, const Vector& y,
                            Reduction reduction) {
    if (x_aug.rows() != y.size()) throw ShapeError("logistic_loss: row count mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < x_aug.rows(); ++i) {
        double z = 0.0;
        for (std::size_t j = 0; j < x_aug.cols(); ++j) z += p.theta[j] * x_aug(i, j);
        const double softplus = z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
        total += softplus - y[i] * z;
    }
    return reduction == Reduction::mean ? total / static_cast<double>(x_aug.rows()) : total;
}

// Stable log-sum-exp cross entropy for one-hot labels.
inline double softmax_loss(const SoftmaxParams& p, const Matrix& x_aug, const Matrix& y_onehot,
                           Reduction reduction) {
    if (x_aug.rows() != y_onehot.rows()) throw ShapeError("softmax_loss: row count mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < x_aug.rows(); ++i) {
        const Vector z = softmax_logits(p, x_aug.row(i));
        double zmax = z[0];
        for (std::size_t k = 1; k < z.size(); ++k) zmax = std::max(zmax, z[k]);
        double lse = 0.0;
        for (std::size_t k = 0; k < z.size(); ++k) lse += std::exp(z[k] - zmax);
        lse = zmax + std::log(lse);
        for (std::size_t k = 0; k < z.size(); ++k) {
            if (y_onehot(i, k) != 0.0) total += y_onehot(i, k) * (lse - z[k]);
        }
    }
    return reduction == Reduction::mean ? total / static_cast<double>(x_aug.rows()) : total;
}

namespace detail {

// Compensated (double-double) accumulator built from 64-bit error-free
// transforms. High-degree polynomial designs push cond(X^T X) past 1/eps,
// where plainly accumulated normal equations lose the least-squares solution
// outright; carrying the entries as hi/lo pairs keeps enough of it for
// iterative refinement to recover.
struct Compensated {
    double hi = 0.0;
    double lo = 0.0;

    void add(double v) {
        const double s = hi + v;
        const double bb = s - hi;
        lo += (hi - (s - bb)) + (v - bb);
        hi = s;
    }
    void add_product(double a, double b) {
        const double p = a * b;
        add(p);
        lo += std::fma(a, b, -p);
    }
    double value() const { return hi + lo; }
};

// X^T X (+ lambda I) and X^T y, with full-precision copies kept for the
// refinement residuals.
struct NormalEquations {
    Matrix a;
    Vector b;
    std::vector<Compensated> a_full; // row-major n x n
    std::vector<Compensated> b_full;
    std::size_t n = 0;
};

inline NormalEquations form_normal_equations(const Matrix& x, const Vector& y,
                                             double ridge_lambda = 0.0) {
    const std::size_t m = x.rows();
    const std::size_t n = x.cols();
    NormalEquations eq;
    eq.n = n;
    eq.a_full.assign(n * n, Compensated{});
    eq.b_full.assign(n, Compensated{});
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double v = x(i, j);
            for (std::size_t k = j; k < n; ++k) eq.a_full[j * n + k].add_product(v, x(i, k));
            eq.b_full[j].add_product(v, y[i]);
        }
    }
    if (ridge_lambda != 0.0) {
        for (std::size_t j = 0; j < n; ++j) eq.a_full[j * n + j].add(ridge_lambda);
    }
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < j; ++k) eq.a_full[j * n + k] = eq.a_full[k * n + j];
    eq.a = Matrix(n, n);
    eq.b = Vector(n);
    for (std::size_t j = 0; j < n; ++j) {
        eq.b[j] = eq.b_full[j].value();
        for (std::size_t k = 0; k < n; ++k) eq.a(j, k) = eq.a_full[j * n + k].value();
    }
    return eq;
}

// Solves the system and refines against the compensated copy. A handful of
// rounds reaches the fit-residual floor even at cond ~ 1/eps.
inline Vector solve_normal_equations(const NormalEquations& eq, bool use_cholesky) {
    const std::size_t n = eq.n;
    Vector theta = use_cholesky ? cholesky_solve(eq.a, eq.b) : lu_solve(eq.a, eq.b);
    double best_norm = std::numeric_limits<double>::infinity();
    Vector best = theta;
    for (int round = 0; round < 12; ++round) {
        Vector residual(n);
        for (std::size_t j = 0; j < n; ++j) {
            Compensated acc;
            acc.add(eq.b_full[j].hi);
            acc.add(eq.b_full[j].lo);
            for (std::size_t k = 0; k < n; ++k) {
                acc.add_product(-eq.a_full[j * n + k].hi, theta[k]);
                acc.add_product(-eq.a_full[j * n + k].lo, theta[k]);
            }
            residual[j] = acc.value();
        }
        const double norm = inf_norm(residual);
        if (norm < best_norm) {
            best_norm = norm;
            best = theta;
        } else if (norm > 4.0 * best_norm) {
            break;
        }
        if (norm == 0.0) break;
        const Vector delta =
            use_cholesky ? cholesky_solve(eq.a, residual) : lu_solve(eq.a, residual);
        for (std::size_t j = 0; j < n; ++j) theta[j] += delta[j];
    }
    return best;
}

} // namespace detail

// Ordinary least squares via the normal equations.
inline LinearParams fit_ols(const Matrix& x_aug, const Vector& y) {
    if (x_aug.rows() != y.size()) throw ShapeError("fit_ols: row count mismatch");
    if (x_aug.rows() < x_aug.cols()) {
        throw MulticollinearError(
            "fit_ols: fewer samples than parameters; add data or use ridge");
    }
    const detail::NormalEquations eq = detail::form_normal_equations(x_aug, y);
    try {
        return LinearParams{detail::solve_normal_equations(eq, true)};
    } catch (const NotPositiveDefiniteError&) {
        throw MulticollinearError(
            "fit_ols: X^T X is not positive definite (multicollinear or underdetermined "
            "features); consider fit_ridge_closed");
    }
}

// Ridge closed form (X^T X + lambda I)^{-1} X^T y under the sum-loss
// convention; lambda > 0 makes the system positive definite.
inline LinearParams fit_ridge_closed(const Matrix& x_aug, const Vector& y, double lambda) {
    if (x_aug.rows() != y.size()) throw ShapeError("fit_ridge_closed: row count mismatch");
    if (!(lambda > 0.0)) throw ParameterError("fit_ridge_closed: lambda must be > 0");
    const detail::NormalEquations eq = detail::form_normal_equations(x_aug, y, lambda);
    return LinearParams{detail::solve_normal_equations(eq, true)};
}

// Plug-in boundary parameters for the two-class Gaussian model:
// w = Sigma^{-1} (mu1 - mu0), b = (mu0' S mu0 - mu1' S mu1)/2 + log(p1/p0).
inline LinearParams generative_binary_params(const GaussianClassModel& model) {
    if (model.mus.size() != 2) throw ParameterError("generative_binary_params: need 2 classes");
    const std::size_t n = model.mus[0].size();
    Vector diff(n);
    for (std::size_t j = 0; j < n; ++j) diff[j] = model.mus[1][j] - model.mus[0][j];
    const Vector w = cholesky_solve(model.sigma, diff);
    const Vector s0 = cholesky_solve(model.sigma, model.mus[0]);
    const Vector s1 = cholesky_solve(model.sigma, model.mus[1]);
    const double b = 0.5 * (dot(model.mus[0], s0) - dot(model.mus[1], s1)) +
                     std::log(model.priors[1] / model.priors[0]);
    Vector theta(n + 1);
    theta[0] = b;
    for (std::size_t j = 0; j < n; ++j) theta[j + 1] = w[j];
    return LinearParams{std::move(theta)};
}

// Multi-class counterpart: w_k = Sigma^{-1} mu_k,
// b_k = log prior_k - mu_k' Sigma^{-1} mu_k / 2.
inline SoftmaxParams generative_softmax_params(const GaussianClassModel& model) {
    const std::size_t k = model.mus.size();
    if (k < 2) throw ParameterError("generative_softmax_params: need >= 2 classes");
    const std::size_t n = model.mus[0].size();
    Matrix thetas(n + 1, k);
    for (std::size_t c = 0; c < k; ++c) {
        const Vector w = cholesky_solve(model.sigma, model.mus[c]);
        thetas(0, c) = std::log(model.priors[c]) - 0.5 * dot(model.mus[c], w);
        for (std::size_t j = 0; j < n; ++j) thetas(j + 1, c) = w[j];
    }
    return SoftmaxParams{std::move(thetas)};
}

struct GenerativeFit {
    GaussianClassModel model;
    std::variant<LinearParams, SoftmaxParams> params;
};

// Estimates class priors, means, and the pooled (by M) covariance, then maps
// them to discriminative parameters through the closed forms above.
inline GenerativeFit fit_gaussian_generative(const Dataset& d, int k) {
    if (!d.y_class) throw ParameterError("fit_gaussian_generative: dataset has no class labels");
    if (k < 2) throw ParameterError("fit_gaussian_generative: need k >= 2");
    if (d.bias_augmented) {
        throw ParameterError("fit_gaussian_generative: use raw (non-augmented) features");
    }
    const std::size_t m = d.rows();
    const std::size_t n = d.cols();
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (int id : *d.y_class) {
        if (id >= k) throw RangeError("fit_gaussian_generative: class id out of range");
        ++counts[static_cast<std::size_t>(id)];
    }
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] < 2) {
            throw ParameterError("fit_gaussian_generative: class " + std::to_string(c) +
                                 " has fewer than 2 samples");
        }
    }

    GaussianClassModel model;
    model.priors = Vector(static_cast<std::size_t>(k));
    model.mus.assign(static_cast<std::size_t>(k), Vector(n));
    for (std::size_t i = 0; i < m; ++i) {
        const auto c = static_cast<std::size_t>((*d.y_class)[i]);
        for (std::size_t j = 0; j < n; ++j) model.mus[c][j] += d.x(i, j);
    }
    for (std::size_t c = 0; c < model.mus.size(); ++c) {
        model.priors[c] = static_cast<double>(counts[c]) / static_cast<double>(m);
        for (std::size_t j = 0; j < n; ++j) model.mus[c][j] /= static_cast<double>(counts[c]);
    }

    model.sigma = Matrix(n, n);
    for (std::size_t i = 0; i < m; ++i) {
        const auto c = static_cast<std::size_t>((*d.y_class)[i]);
        for (std::size_t a = 0; a < n; ++a) {
            const double da = d.x(i, a) - model.mus[c][a];
            for (std::size_t b = a; b < n; ++b) {
                model.sigma(a, b) += da * (d.x(i, b) - model.mus[c][b]);
            }
        }
    }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b <= a; ++b) {
            model.sigma(a, b) = (model.sigma(b, a) /= static_cast<double>(m));
        }

    GenerativeFit fit;
    if (k == 2) {
        fit.params = generative_binary_params(model);
    } else {
        fit.params = generative_softmax_params(model);
    }
    fit.model = std::move(model);
    return fit;
}

} // namespace regresslab

#endif
