#ifndef REGRESSLAB_KERNEL_HPP
#define REGRESSLAB_KERNEL_HPP

#include <cmath>
#include <vector>

#include "regresslab/errors.hpp"
#include "regresslab/linalg.hpp"

namespace regresslab {

enum class KernelKind { linear, polynomial, rbf, laplacian, sigmoid, fourier };

struct KernelSpec {
    KernelKind kind = KernelKind::linear;
    int degree = 2;        // polynomial: d >= 1
    double bias_c = 0.0;   // polynomial: c >= 0
    double bandwidth = 1.0; // rbf / laplacian: sigma > 0
    double beta = 1.0;     // sigmoid: > 0
    double theta = -1.0;   // sigmoid: < 0
    Vector frequency;      // fourier: w

    void validate() const {
        switch (kind) {
            case KernelKind::linear:
                break;
            case KernelKind::polynomial:
                if (degree < 1) throw ParameterError("KernelSpec: polynomial degree must be >= 1");
                if (bias_c < 0.0) throw ParameterError("KernelSpec: polynomial bias must be >= 0");
                break;
            case KernelKind::rbf:
            case KernelKind::laplacian:
                if (!(bandwidth > 0.0)) throw ParameterError("KernelSpec: bandwidth must be > 0");
                break;
            case KernelKind::sigmoid:
                if (!(beta > 0.0)) throw ParameterError("KernelSpec: beta must be > 0");
                if (!(theta < 0.0)) throw ParameterError("KernelSpec: theta must be < 0");
                break;
            case KernelKind::fourier:
                if (frequency.size() == 0) throw ParameterError("KernelSpec: fourier needs a frequency vector");
                break;
        }
    }
};

inline double kernel_eval(const KernelSpec& spec, const Vector& xi, const Vector& xj) {
    if (xi.size() != xj.size()) throw ShapeError("kernel_eval: dim mismatch");
    spec.validate();
    switch (spec.kind) {
        case KernelKind::linear:
            return dot(xi, xj);
        case KernelKind::polynomial: {
            double base = dot(xi, xj) + spec.bias_c;
            double out = 1.0;
            for (int d = 0; d < spec.degree; ++d) out *= base;
            return out;
        }
        case KernelKind::rbf: {
            double d2 = 0.0;
            for (std::size_t k = 0; k < xi.size(); ++k) {
                const double diff = xi[k] - xj[k];
                d2 += diff * diff;
            }
            return std::exp(-d2 / (2.0 * spec.bandwidth * spec.bandwidth));
        }
        case KernelKind::laplacian: {
            double d2 = 0.0;
            for (std::size_t k = 0; k < xi.size(); ++k) {
                const double diff = xi[k] - xj[k];
                d2 += diff * diff;
            }
            return std::exp(-std::sqrt(d2) / spec.bandwidth);
        }
        case KernelKind::sigmoid:
            return std::tanh(spec.beta * dot(xi, xj) + spec.theta);
        case KernelKind::fourier: {
            if (spec.frequency.size() != xi.size()) {
                throw ShapeError("kernel_eval: fourier frequency dim mismatch");
            }
            double z = 0.0;
            for (std::size_t k = 0; k < xi.size(); ++k) {
                z += spec.frequency[k] * (xi[k] - xj[k]);
            }
            return std::cos(z);
        }
    }
    throw ParameterError("kernel_eval: unknown kernel kind");
}

struct GramMatrix {
    Matrix k;
    double jitter = 0.0; // diagonal shift actually added by the solver
};

// Pairwise kernel matrix; the upper triangle is computed and mirrored so the
// result is symmetric bit for bit.
inline GramMatrix gram(const KernelSpec& spec, const Matrix& x) {
    const std::size_t m = x.rows();
    GramMatrix g{Matrix(m, m), 0.0};
    std::vector<Vector> rows;
    rows.reserve(m);
    for (std::size_t i = 0; i < m; ++i) rows.push_back(x.row(i));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) {
            const double v = kernel_eval(spec, rows[i], rows[j]);
            g.k(i, j) = v;
            g.k(j, i) = v;
        }
    }
    return g;
}

inline Vector kernel_vector(const KernelSpec& spec, const Matrix& x_train, const Vector& x_new) {
    Vector kv(x_train.rows());
    for (std::size_t i = 0; i < x_train.rows(); ++i) {
        kv[i] = kernel_eval(spec, x_train.row(i), x_new);
    }
    return kv;
}

struct KernelRidgeModel {
    Vector alpha;  // dual coefficients (K + lambda I)^{-1} y
    double jitter; // stabilizer added when lambda = 0
};

// Fits the dual system. When lambda = 0 a jitter of 1e-10 * trace(K)/M is
// added so the interpolation system stays solvable.
inline KernelRidgeModel kernel_ridge_fit(const KernelSpec& spec, const Matrix& x_train,
                                         const Vector& y, double lambda) {
    if (x_train.rows() != y.size()) throw ShapeError("kernel_ridge_fit: row count mismatch");
    if (lambda < 0.0) throw ParameterError("kernel_ridge_fit: lambda must be >= 0");
    GramMatrix g = gram(spec, x_train);
    const std::size_t m = g.k.rows();
    double shift = lambda;
    if (lambda == 0.0) {
        double trace = 0.0;
        for (std::size_t i = 0; i < m; ++i) trace += g.k(i, i);
        g.jitter = 1e-10 * trace / static_cast<double>(m);
        shift = g.jitter;
    }
    for (std::size_t i = 0; i < m; ++i) g.k(i, i) += shift;
    Vector alpha(m);
    try {
        alpha = cholesky_solve(g.k, y);
    } catch (const NotPositiveDefiniteError&) {
        // non-PSD kernels (tanh) land here; LU still solves the shifted system
        try {
            alpha = lu_solve(g.k, y);
        } catch (const SingularError&) {
            throw SingularError("kernel_ridge_fit: system singular even after jitter");
        }
    }
    return KernelRidgeModel{std::move(alpha), g.jitter};
}

// yhat_i = sum_m alpha_m kappa(x_m, x_i): a weighted average of training
// labels with kernel-similarity weights.
inline Vector kernel_ridge_predict(const KernelSpec& spec, const Matrix& x_train,
                                   const Vector& alpha, const Matrix& x_new) {
    Vector out(x_new.rows());
    for (std::size_t i = 0; i < x_new.rows(); ++i) {
        const Vector kv = kernel_vector(spec, x_train, x_new.row(i));
        out[i] = dot(alpha, kv);
    }
    return out;
}

struct KernelRidgeResult {
    Vector predictions;
    Vector alpha;
    double jitter;
};

inline KernelRidgeResult kernel_ridge_fit_predict(const KernelSpec& spec, const Matrix& x_train,
                                                  const Vector& y, double lambda,
                                                  const Matrix& x_new) {
    KernelRidgeModel model = kernel_ridge_fit(spec, x_train, y, lambda);
    Vector predictions = kernel_ridge_predict(spec, x_train, model.alpha, x_new);
    return KernelRidgeResult{std::move(predictions), std::move(model.alpha), model.jitter};
}

} // namespace regresslab

#endif
