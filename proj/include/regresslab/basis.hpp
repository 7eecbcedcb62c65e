#ifndef REGRESSLAB_BASIS_HPP
#define REGRESSLAB_BASIS_HPP

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "regresslab/errors.hpp"
#include "regresslab/glm.hpp"
#include "regresslab/linalg.hpp"
#include "regresslab/rng.hpp"

namespace regresslab {

inline constexpr std::size_t kMaxBasisTerms = 10000;

enum class BasisKind { polynomial, rbf, sigmoid, fourier };
enum class InitStrategy { grid, random, kmeans };

// Declarative description of a feature map phi. Only the fields of the
// active kind are meaningful.
struct BasisSpec {
    BasisKind kind = BasisKind::polynomial;
    int degree = 1;      // polynomial: total degree
    Matrix centers;      // rbf: K x N
    double width = 1.0;  // rbf: shared sigma > 0
    Matrix weights;      // sigmoid: K x N, frozen after init
    Vector offsets;      // sigmoid: K
    Matrix frequencies;  // fourier: K x N, each row emits a sin and a cos column

    void validate() const {
        switch (kind) {
            case BasisKind::polynomial:
                if (degree < 0) throw ParameterError("BasisSpec: polynomial degree must be >= 0");
                break;
            case BasisKind::rbf:
                if (!(width > 0.0)) throw ParameterError("BasisSpec: rbf width must be > 0");
                if (centers.rows() == 0) throw ParameterError("BasisSpec: rbf needs centers");
                break;
            case BasisKind::sigmoid:
                if (weights.rows() == 0 || weights.rows() != offsets.size()) {
                    throw ParameterError("BasisSpec: sigmoid weights/offsets disagree");
                }
                break;
            case BasisKind::fourier:
                if (frequencies.rows() == 0) throw ParameterError("BasisSpec: fourier needs frequencies");
                break;
        }
    }
};

struct MultiIndex {
    std::vector<int> exponents;

    int total_degree() const {
        int s = 0;
        for (int e : exponents) s += e;
        return s;
    }
};

namespace detail {

inline void emit_indices(std::vector<MultiIndex>& out, std::vector<int>& current, int pos,
                         int remaining) {
    if (pos == static_cast<int>(current.size()) - 1) {
        current[static_cast<std::size_t>(pos)] = remaining;
        out.push_back(MultiIndex{current});
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        current[static_cast<std::size_t>(pos)] = e;
        emit_indices(out, current, pos + 1, remaining - e);
    }
}

inline std::size_t binomial(std::size_t n, std::size_t k) {
    k = std::min(k, n - k);
    std::size_t result = 1;
    for (std::size_t i = 1; i <= k; ++i) result = result * (n - k + i) / i;
    return result;
}

} // namespace detail

// All exponent vectors with total degree <= k in graded-lexicographic order;
// the first entry is the all-zero (constant) index.
inline std::vector<MultiIndex> enumerate_multi_indices(int n, int k) {
    if (n < 1) throw ParameterError("enumerate_multi_indices: need n >= 1");
    if (k < 0) throw ParameterError("enumerate_multi_indices: need k >= 0");
    const std::size_t count = detail::binomial(static_cast<std::size_t>(n + k),
                                               static_cast<std::size_t>(k));
    if (count > kMaxBasisTerms) {
        throw CombinatorialBlowupError("enumerate_multi_indices: would generate " +
                                       std::to_string(count) + " terms (limit " +
                                       std::to_string(kMaxBasisTerms) + ")");
    }
    std::vector<MultiIndex> out;
    out.reserve(count);
    std::vector<int> current(static_cast<std::size_t>(n), 0);
    for (int d = 0; d <= k; ++d) detail::emit_indices(out, current, 0, d);
    return out;
}

inline std::size_t basis_column_count(const BasisSpec& spec, std::size_t n_features) {
    switch (spec.kind) {
        case BasisKind::polynomial:
            return detail::binomial(n_features + static_cast<std::size_t>(spec.degree),
                                    static_cast<std::size_t>(spec.degree));
        case BasisKind::rbf:
            return 1 + spec.centers.rows();
        case BasisKind::sigmoid:
            return 1 + spec.weights.rows();
        case BasisKind::fourier:
            return 1 + 2 * spec.frequencies.rows();
    }
    return 0;
}

// Applies the feature map row-wise. Column 0 is identically 1 (phi_0);
// fourier rows contribute a sin column followed by a cos column.
inline Matrix expand(const BasisSpec& spec, const Matrix& x) {
    spec.validate();
    const std::size_t m = x.rows();
    const std::size_t n = x.cols();
    switch (spec.kind) {
        case BasisKind::polynomial: {
            const std::vector<MultiIndex> indices = enumerate_multi_indices(
                static_cast<int>(n), spec.degree);
            Matrix phi(m, indices.size());
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t c = 0; c < indices.size(); ++c) {
                    double v = 1.0;
                    for (std::size_t j = 0; j < n; ++j) {
                        for (int e = 0; e < indices[c].exponents[j]; ++e) v *= x(i, j);
                    }
                    phi(i, c) = v;
                }
            }
            return phi;
        }
        case BasisKind::rbf: {
            if (spec.centers.cols() != n) throw ShapeError("expand: rbf center dim mismatch");
            Matrix phi(m, 1 + spec.centers.rows());
            const double denom = 2.0 * spec.width * spec.width;
            for (std::size_t i = 0; i < m; ++i) {
                phi(i, 0) = 1.0;
                for (std::size_t c = 0; c < spec.centers.rows(); ++c) {
                    double d2 = 0.0;
                    for (std::size_t j = 0; j < n; ++j) {
                        const double diff = x(i, j) - spec.centers(c, j);
                        d2 += diff * diff;
                    }
                    phi(i, 1 + c) = std::exp(-d2 / denom);
                }
            }
            return phi;
        }
        case BasisKind::sigmoid: {
            if (spec.weights.cols() != n) throw ShapeError("expand: sigmoid weight dim mismatch");
            Matrix phi(m, 1 + spec.weights.rows());
            for (std::size_t i = 0; i < m; ++i) {
                phi(i, 0) = 1.0;
                for (std::size_t c = 0; c < spec.weights.rows(); ++c) {
                    double z = spec.offsets[c];
                    for (std::size_t j = 0; j < n; ++j) z += spec.weights(c, j) * x(i, j);
                    phi(i, 1 + c) = sigmoid(z);
                }
            }
            return phi;
        }
        case BasisKind::fourier: {
            if (spec.frequencies.cols() != n) {
                throw ShapeError("expand: fourier frequency dim mismatch");
            }
            Matrix phi(m, 1 + 2 * spec.frequencies.rows());
            for (std::size_t i = 0; i < m; ++i) {
                phi(i, 0) = 1.0;
                for (std::size_t c = 0; c < spec.frequencies.rows(); ++c) {
                    double z = 0.0;
                    for (std::size_t j = 0; j < n; ++j) z += spec.frequencies(c, j) * x(i, j);
                    phi(i, 1 + 2 * c) = std::sin(z);
                    phi(i, 2 + 2 * c) = std::cos(z);
                }
            }
            return phi;
        }
    }
    throw ParameterError("expand: unknown basis kind");
}

namespace detail {

struct Box {
    Vector lo;
    Vector hi;
};

inline Box feature_box(const Matrix& x) {
    Box box{Vector(x.cols()), Vector(x.cols())};
    for (std::size_t j = 0; j < x.cols(); ++j) {
        double lo = x(0, j);
        double hi = x(0, j);
        for (std::size_t i = 1; i < x.rows(); ++i) {
            lo = std::min(lo, x(i, j));
            hi = std::max(hi, x(i, j));
        }
        box.lo[j] = lo;
        box.hi[j] = hi;
    }
    return box;
}

// Lloyd's algorithm with seeded Forgy initialization (distinct random rows).
inline Matrix kmeans_centers(const Matrix& x, std::size_t k, Rng& rng, int iterations = 50) {
    if (k > x.rows()) throw ParameterError("kmeans: more centers than samples");
    std::vector<std::size_t> order(x.rows());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    shuffle(order, rng);
    Matrix centers(k, x.cols());
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t j = 0; j < x.cols(); ++j) centers(c, j) = x(order[c], j);

    std::vector<std::size_t> assignment(x.rows(), 0);
    for (int it = 0; it < iterations; ++it) {
        bool changed = false;
        for (std::size_t i = 0; i < x.rows(); ++i) {
            std::size_t best = 0;
            double best_d2 = 0.0;
            for (std::size_t c = 0; c < k; ++c) {
                double d2 = 0.0;
                for (std::size_t j = 0; j < x.cols(); ++j) {
                    const double diff = x(i, j) - centers(c, j);
                    d2 += diff * diff;
                }
                if (c == 0 || d2 < best_d2) {
                    best = c;
                    best_d2 = d2;
                }
            }
            if (assignment[i] != best) {
                assignment[i] = best;
                changed = true;
            }
        }
        Matrix sums(k, x.cols());
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < x.rows(); ++i) {
            ++counts[assignment[i]];
            for (std::size_t j = 0; j < x.cols(); ++j) sums(assignment[i], j) += x(i, j);
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) continue; // empty cluster keeps its center
            for (std::size_t j = 0; j < x.cols(); ++j)
                centers(c, j) = sums(c, j) / static_cast<double>(counts[c]);
        }
        if (!changed && it > 0) break;
    }
    return centers;
}

inline double mean_nearest_center_distance(const Matrix& centers) {
    if (centers.rows() < 2) return 1.0;
    double total = 0.0;
    for (std::size_t a = 0; a < centers.rows(); ++a) {
        double best = 0.0;
        bool first = true;
        for (std::size_t b = 0; b < centers.rows(); ++b) {
            if (a == b) continue;
            double d2 = 0.0;
            for (std::size_t j = 0; j < centers.cols(); ++j) {
                const double diff = centers(a, j) - centers(b, j);
                d2 += diff * diff;
            }
            const double d = std::sqrt(d2);
            if (first || d < best) {
                best = d;
                first = false;
            }
        }
        total += best;
    }
    return total / static_cast<double>(centers.rows());
}

} // namespace detail

// Places K centers over the data box (grid / random / kmeans) and derives the
// remaining parameters of the requested basis family from them. The rbf
// width defaults to the grid spacing in one dimension and to the mean
// nearest-center distance otherwise. Sigmoid weights are fixed to all-ones
// rows with offsets putting each transition at a center; fourier frequencies
// form the harmonic ladder k*pi/L over the 1-D data range [-L, L].
inline BasisSpec init_basis_params(BasisKind kind, const Matrix& x, int count,
                                   InitStrategy strategy, Rng& rng) {
    if (count < 1) throw ParameterError("init_basis_params: need count >= 1");
    const std::size_t k = static_cast<std::size_t>(count);
    const std::size_t n = x.cols();
    const detail::Box box = detail::feature_box(x);

    if (kind == BasisKind::polynomial) {
        BasisSpec spec;
        spec.kind = BasisKind::polynomial;
        spec.degree = count;
        return spec;
    }
    if (kind == BasisKind::fourier) {
        if (n != 1) throw ParameterError("init_basis_params: fourier ladder needs 1-D input");
        const double l = std::max(std::fabs(box.lo[0]), std::fabs(box.hi[0]));
        BasisSpec spec;
        spec.kind = BasisKind::fourier;
        spec.frequencies = Matrix(k, 1);
        for (std::size_t c = 0; c < k; ++c) {
            spec.frequencies(c, 0) = static_cast<double>(c + 1) * std::numbers::pi /
                                     (l > 0.0 ? l : 1.0);
        }
        return spec;
    }

    Matrix centers(k, n);
    switch (strategy) {
        case InitStrategy::grid:
            for (std::size_t c = 0; c < k; ++c)
                for (std::size_t j = 0; j < n; ++j) {
                    const double t = k == 1 ? 0.5
                                            : static_cast<double>(c) / static_cast<double>(k - 1);
                    centers(c, j) = box.lo[j] + t * (box.hi[j] - box.lo[j]);
                }
            break;
        case InitStrategy::random:
            for (std::size_t c = 0; c < k; ++c)
                for (std::size_t j = 0; j < n; ++j)
                    centers(c, j) = rng.uniform(box.lo[j], box.hi[j]);
            break;
        case InitStrategy::kmeans:
            centers = detail::kmeans_centers(x, k, rng);
            break;
    }

    if (kind == BasisKind::rbf) {
        BasisSpec spec;
        spec.kind = BasisKind::rbf;
        double width = 1.0;
        if (n == 1 && strategy == InitStrategy::grid && k >= 2) {
            width = (box.hi[0] - box.lo[0]) / static_cast<double>(k - 1);
        } else {
            width = detail::mean_nearest_center_distance(centers);
        }
        spec.width = width > 0.0 ? width : 1.0;
        spec.centers = std::move(centers);
        return spec;
    }

    // sigmoid: unit-direction weights, transition at each center
    BasisSpec spec;
    spec.kind = BasisKind::sigmoid;
    spec.weights = Matrix(k, n, 0.0);
    spec.offsets = Vector(k);
    for (std::size_t c = 0; c < k; ++c) {
        double wc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            spec.weights(c, j) = 1.0;
            wc += centers(c, j);
        }
        spec.offsets[c] = -wc;
    }
    return spec;
}

// Closed-form fit on the expanded design: OLS when lambda = 0 (with an LU
// fallback on the normal equations when Cholesky fails on an
// ill-conditioned high-degree design), ridge otherwise.
inline LinearParams fit_lbfm_closed(const BasisSpec& spec, const Matrix& x, const Vector& y,
                                    double lambda = 0.0) {
    if (lambda < 0.0) throw ParameterError("fit_lbfm_closed: lambda must be >= 0");
    const Matrix phi = expand(spec, x);
    if (lambda > 0.0) return fit_ridge_closed(phi, y, lambda);
    if (phi.rows() < phi.cols()) {
        throw MulticollinearError("fit_lbfm_closed: fewer samples than basis terms");
    }
    try {
        return fit_ols(phi, y);
    } catch (const MulticollinearError&) {
        const detail::NormalEquations eq = detail::form_normal_equations(phi, y);
        return LinearParams{detail::solve_normal_equations(eq, false)}; // Singular propagates
    }
}

inline Vector predict_lbfm(const BasisSpec& spec, const LinearParams& params, const Matrix& x) {
    return predict_linear(params, expand(spec, x));
}

// Human-readable column names for reports: 1, x1, x1^2*x2, rbf1, ...
inline std::vector<std::string> basis_column_names(const BasisSpec& spec,
                                                   std::size_t n_features) {
    std::vector<std::string> names;
    switch (spec.kind) {
        case BasisKind::polynomial: {
            const auto indices = enumerate_multi_indices(static_cast<int>(n_features),
                                                         spec.degree);
            for (const MultiIndex& mi : indices) {
                std::string name;
                for (std::size_t j = 0; j < mi.exponents.size(); ++j) {
                    if (mi.exponents[j] == 0) continue;
                    if (!name.empty()) name += "*";
                    name += "x" + std::to_string(j + 1);
                    if (mi.exponents[j] > 1) name += "^" + std::to_string(mi.exponents[j]);
                }
                names.push_back(name.empty() ? "1" : name);
            }
            break;
        }
        case BasisKind::rbf:
            names.emplace_back("1");
            for (std::size_t c = 0; c < spec.centers.rows(); ++c)
                names.push_back("rbf" + std::to_string(c + 1));
            break;
        case BasisKind::sigmoid:
            names.emplace_back("1");
            for (std::size_t c = 0; c < spec.weights.rows(); ++c)
                names.push_back("sig" + std::to_string(c + 1));
            break;
        case BasisKind::fourier:
            names.emplace_back("1");
            for (std::size_t c = 0; c < spec.frequencies.rows(); ++c) {
                names.push_back("sin" + std::to_string(c + 1));
                names.push_back("cos" + std::to_string(c + 1));
            }
            break;
    }
    return names;
}

} // namespace regresslab

#endif
