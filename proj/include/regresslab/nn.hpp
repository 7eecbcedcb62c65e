#ifndef REGRESSLAB_NN_HPP
#define REGRESSLAB_NN_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "regresslab/dataset.hpp"
#include "regresslab/errors.hpp"
#include "regresslab/glm.hpp"
#include "regresslab/linalg.hpp"
#include "regresslab/optim.hpp"
#include "regresslab/rng.hpp"

namespace regresslab {

enum class Activation { sigmoid, tanh, relu };
enum class OutputKind { linear, logistic, softmax };
enum class LossKind { mse, xent };

inline double activate(Activation a, double z) {
    switch (a) {
        case Activation::sigmoid:
            return sigmoid(z);
        case Activation::tanh:
            return std::tanh(z);
        case Activation::relu:
            return z > 0.0 ? z : 0.0;
    }
    throw ParameterError("activate: unknown activation");
}

// relu' at 0 is defined as 0 (one-sided derivative).
inline double activate_derivative(Activation a, double z) {
    switch (a) {
        case Activation::sigmoid: {
            const double s = sigmoid(z);
            return s * (1.0 - s);
        }
        case Activation::tanh: {
            const double t = std::tanh(z);
            return 1.0 - t * t;
        }
        case Activation::relu:
            return z > 0.0 ? 1.0 : 0.0;
    }
    throw ParameterError("activate_derivative: unknown activation");
}

// Feedforward net. weights[l] has shape layer_sizes[l+1] x (layer_sizes[l]+1)
// with the bias in column 0. Hidden layers use `activation`; the last layer
// applies the output transform instead.
struct MlpNet {
    std::vector<std::size_t> layer_sizes;
    Activation activation = Activation::tanh;
    OutputKind output_kind = OutputKind::linear;
    std::vector<Matrix> weights;

    std::size_t num_weight_layers() const { return weights.size(); }
    std::size_t input_dim() const { return layer_sizes.front(); }
    std::size_t output_dim() const { return layer_sizes.back(); }

    std::size_t parameter_count() const {
        std::size_t w = 0;
        for (const Matrix& m : weights) w += m.rows() * m.cols();
        return w;
    }

    void validate() const {
        if (layer_sizes.size() < 2) throw ParameterError("MlpNet: need input and output sizes");
        if (weights.size() != layer_sizes.size() - 1) {
            throw ParameterError("MlpNet: weight layer count mismatch");
        }
        for (std::size_t l = 0; l < weights.size(); ++l) {
            if (weights[l].rows() != layer_sizes[l + 1] ||
                weights[l].cols() != layer_sizes[l] + 1) {
                throw ShapeError("MlpNet: weight shape mismatch at layer " + std::to_string(l));
            }
        }
        if (output_kind == OutputKind::softmax && layer_sizes.back() < 2) {
            throw ParameterError("MlpNet: softmax output needs >= 2 units");
        }
        if (output_kind == OutputKind::logistic && layer_sizes.back() != 1) {
            throw ParameterError("MlpNet: logistic output needs exactly 1 unit");
        }
    }
};

// Weights ~ Uniform(-scale, scale) from the seeded stream; biases start at 0.
inline MlpNet init_mlp(std::vector<std::size_t> layer_sizes, Activation activation,
                       OutputKind output_kind, Rng& rng, double scale = 0.5) {
    if (!(scale > 0.0)) throw ParameterError("init_mlp: scale must be > 0");
    MlpNet net;
    net.layer_sizes = std::move(layer_sizes);
    net.activation = activation;
    net.output_kind = output_kind;
    if (net.layer_sizes.size() < 2) throw ParameterError("init_mlp: need >= 2 layer sizes");
    for (std::size_t s : net.layer_sizes) {
        if (s == 0) throw ParameterError("init_mlp: zero-size layer");
    }
    for (std::size_t l = 0; l + 1 < net.layer_sizes.size(); ++l) {
        Matrix w(net.layer_sizes[l + 1], net.layer_sizes[l] + 1);
        for (std::size_t i = 0; i < w.rows(); ++i)
            for (std::size_t j = 1; j < w.cols(); ++j) w(i, j) = rng.uniform(-scale, scale);
        net.weights.push_back(std::move(w));
    }
    net.validate();
    return net;
}

struct ForwardCache {
    std::vector<Vector> zs; // pre-activations per weight layer
    std::vector<Vector> hs; // hs[0] = input, hs[l] = activations of layer l
    std::uint64_t flops = 0;
};

struct ForwardResult {
    Vector yhat; // size 1 for linear/logistic outputs, K for softmax
    ForwardCache cache;
};

inline ForwardResult forward(const MlpNet& net, const Vector& x) {
    if (x.size() != net.input_dim()) throw ShapeError("forward: input dim mismatch");
    ForwardCache cache;
    cache.hs.push_back(x);
    const std::size_t depth = net.num_weight_layers();
    for (std::size_t l = 0; l < depth; ++l) {
        const Matrix& w = net.weights[l];
        const Vector& h = cache.hs.back();
        Vector z(w.rows());
        for (std::size_t i = 0; i < w.rows(); ++i) {
            double s = w(i, 0); // bias
            for (std::size_t j = 0; j < h.size(); ++j) s += w(i, j + 1) * h[j];
            z[i] = s;
        }
        cache.flops += 2ULL * w.rows() * h.size() + w.rows();
        cache.zs.push_back(z);
        if (l + 1 < depth) {
            Vector h_next(z.size());
            for (std::size_t i = 0; i < z.size(); ++i) h_next[i] = activate(net.activation, z[i]);
            cache.flops += z.size();
            cache.hs.push_back(std::move(h_next));
        }
    }

    const Vector& z_out = cache.zs.back();
    Vector yhat;
    switch (net.output_kind) {
        case OutputKind::linear:
            yhat = z_out;
            break;
        case OutputKind::logistic: {
            yhat = Vector(1);
            yhat[0] = sigmoid(z_out[0]);
            cache.flops += 1;
            break;
        }
        case OutputKind::softmax:
            yhat = softmax(z_out);
            cache.flops += 3ULL * z_out.size();
            break;
    }
    return ForwardResult{std::move(yhat), std::move(cache)};
}

struct BackpropResult {
    std::vector<Matrix> grads; // same shapes as net.weights
    Vector yhat;
    std::uint64_t flops = 0;
};

namespace detail {

inline void check_pairing(OutputKind output, LossKind loss) {
    const bool ok = (loss == LossKind::mse && output == OutputKind::linear) ||
                    (loss == LossKind::xent &&
                     (output == OutputKind::logistic || output == OutputKind::softmax));
    if (!ok) {
        throw ConfigError(
            "backprop: loss/output pairing must be mse+linear or xent+logistic/softmax");
    }
}

} // namespace detail

// Single-sample backprop. The output error signal is yhat - y for all three
// supported pairings; hidden signals follow the recursion
// delta_k = sigma'(z_k) * sum_j w_{j,k} delta_j, and every weight gradient is
// error * input (bias slot takes the bare error).
inline BackpropResult backprop(const MlpNet& net, const Vector& x, const Vector& y,
                               LossKind loss) {
    detail::check_pairing(net.output_kind, loss);
    if (y.size() != net.output_dim()) throw ShapeError("backprop: label dim mismatch");
    ForwardResult fwd = forward(net, x);
    const std::size_t depth = net.num_weight_layers();

    BackpropResult result;
    result.flops = fwd.cache.flops;
    result.grads.reserve(depth);
    for (const Matrix& w : net.weights) result.grads.emplace_back(w.rows(), w.cols());

    Vector delta(net.output_dim());
    for (std::size_t i = 0; i < delta.size(); ++i) delta[i] = fwd.yhat[i] - y[i];
    result.flops += delta.size();

    for (std::size_t l = depth; l-- > 0;) {
        const Vector& input = fwd.cache.hs[l];
        Matrix& g = result.grads[l];
        for (std::size_t i = 0; i < g.rows(); ++i) {
            g(i, 0) = delta[i];
            for (std::size_t j = 0; j < input.size(); ++j) g(i, j + 1) = delta[i] * input[j];
        }
        result.flops += g.rows() * input.size();
        if (l == 0) break;
        const Matrix& w = net.weights[l];
        const Vector& z_prev = fwd.cache.zs[l - 1];
        Vector next_delta(net.layer_sizes[l]);
        for (std::size_t k = 0; k < next_delta.size(); ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < w.rows(); ++i) s += w(i, k + 1) * delta[i];
            next_delta[k] = activate_derivative(net.activation, z_prev[k]) * s;
        }
        result.flops += 2ULL * w.rows() * next_delta.size() + 2ULL * next_delta.size();
        delta = std::move(next_delta);
    }
    result.yhat = std::move(fwd.yhat);
    return result;
}

// Per-sample loss consistent with the backprop output signal: 0.5*(yhat-y)^2
// for mse+linear, cross entropy for xent pairings.
inline double mlp_sample_loss(const MlpNet& net, const Vector& x, const Vector& y,
                              LossKind loss) {
    detail::check_pairing(net.output_kind, loss);
    const ForwardResult fwd = forward(net, x);
    if (loss == LossKind::mse) {
        double total = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double e = fwd.yhat[i] - y[i];
            total += 0.5 * e * e;
        }
        return total;
    }
    if (net.output_kind == OutputKind::logistic) {
        const double z = fwd.cache.zs.back()[0];
        const double softplus = z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
        return softplus - y[0] * z;
    }
    // softmax: stable log-sum-exp
    const Vector& z = fwd.cache.zs.back();
    double zmax = z[0];
    for (std::size_t k = 1; k < z.size(); ++k) zmax = std::max(zmax, z[k]);
    double lse = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) lse += std::exp(z[k] - zmax);
    lse = zmax + std::log(lse);
    double total = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) {
        if (y[k] != 0.0) total += y[k] * (lse - z[k]);
    }
    return total;
}

namespace detail {

inline Vector mlp_label_row(const Dataset& d, OutputKind output, std::size_t row,
                            std::size_t output_dim) {
    if (output == OutputKind::linear) {
        if (!d.y_real) throw ParameterError("train_mlp: linear output needs real labels");
        Vector y(1);
        y[0] = (*d.y_real)[row];
        return y;
    }
    if (!d.y_class) throw ParameterError("train_mlp: classifier output needs class labels");
    const int id = (*d.y_class)[row];
    if (output == OutputKind::logistic) {
        if (id != 0 && id != 1) throw RangeError("train_mlp: logistic labels must be 0/1");
        Vector y(1);
        y[0] = static_cast<double>(id);
        return y;
    }
    Vector y(output_dim);
    if (static_cast<std::size_t>(id) >= output_dim) {
        throw RangeError("train_mlp: class id out of range");
    }
    y[static_cast<std::size_t>(id)] = 1.0;
    return y;
}

} // namespace detail

inline double mlp_dataset_loss(const MlpNet& net, const Dataset& d, LossKind loss) {
    double total = 0.0;
    for (std::size_t i = 0; i < d.rows(); ++i) {
        total += mlp_sample_loss(net, d.x.row(i),
                                 detail::mlp_label_row(d, net.output_kind, i, net.output_dim()),
                                 loss);
    }
    return total / static_cast<double>(d.rows());
}

inline Vector flatten(const MlpNet& net) {
    std::vector<double> flat;
    flat.reserve(net.parameter_count());
    for (const Matrix& w : net.weights) {
        flat.insert(flat.end(), w.values().begin(), w.values().end());
    }
    return Vector::from(std::move(flat));
}

inline void unflatten(MlpNet& net, const Vector& flat) {
    if (flat.size() != net.parameter_count()) throw ShapeError("unflatten: length mismatch");
    std::size_t pos = 0;
    for (Matrix& w : net.weights) {
        std::vector<double> block(flat.begin() + static_cast<std::ptrdiff_t>(pos),
                                  flat.begin() +
                                      static_cast<std::ptrdiff_t>(pos + w.rows() * w.cols()));
        w = Matrix::from(w.rows(), w.cols(), std::move(block));
        pos += w.rows() * w.cols();
    }
}

struct MlpTrainResult {
    MlpNet net;
    TraceRecord trace;
};

// Mini-batch training through the shared gd driver: the batch gradient is the
// mean of per-sample backprop gradients accumulated in ascending row order,
// and the stopping rule reads the full-data loss.
inline MlpTrainResult train_mlp(MlpNet net, const Dataset& d, const GdConfig& cfg,
                                LossKind loss) {
    net.validate();
    detail::check_pairing(net.output_kind, loss);
    if (d.x.cols() != net.input_dim()) throw ShapeError("train_mlp: feature dim mismatch");
    cfg.validate();

    BatchScheduler scheduler(d.rows(), cfg.strategy, cfg.seed);
    MlpNet work = net;

    auto loss_fn = [&](const Vector& flat) {
        unflatten(work, flat);
        return mlp_dataset_loss(work, d, loss);
    };
    auto grad_fn = [&](const Vector& flat) {
        unflatten(work, flat);
        const std::vector<std::size_t>& block = scheduler.next();
        Vector g(flat.size());
        for (std::size_t idx : block) {
            const BackpropResult bp =
                backprop(work, d.x.row(idx),
                         detail::mlp_label_row(d, work.output_kind, idx, work.output_dim()),
                         loss);
            std::size_t pos = 0;
            for (const Matrix& gm : bp.grads) {
                for (double v : gm.values()) g[pos++] += v;
            }
        }
        const double b = static_cast<double>(block.size());
        for (std::size_t j = 0; j < g.size(); ++j) g[j] /= b;
        return g;
    };

    GdResult r = gd_minimize(loss_fn, grad_fn, flatten(net), cfg);
    unflatten(net, r.theta);
    return MlpTrainResult{std::move(net), std::move(r.trace)};
}

struct VanishingReport {
    std::vector<double> layer_grad_inf_norms; // one per weight layer, front = layer 1
    double first_to_last_ratio = 0.0;
    bool degenerate = false; // all-zero gradients, ratio meaningless
};

// Gradient infinity norm per layer for one sample, plus the first/last ratio
// that makes the depth decay visible.
inline VanishingReport vanishing_diagnostic(const MlpNet& net, const Vector& x, const Vector& y) {
    if (net.num_weight_layers() < 3) {
        throw ParameterError("vanishing_diagnostic: need at least 2 hidden layers");
    }
    const LossKind loss = net.output_kind == OutputKind::linear ? LossKind::mse : LossKind::xent;
    const BackpropResult bp = backprop(net, x, y, loss);
    VanishingReport report;
    for (const Matrix& g : bp.grads) {
        double norm = 0.0;
        for (double v : g.values()) norm = std::max(norm, std::fabs(v));
        report.layer_grad_inf_norms.push_back(norm);
    }
    const double first = report.layer_grad_inf_norms.front();
    const double last = report.layer_grad_inf_norms.back();
    if (last == 0.0) {
        report.degenerate = true;
    } else {
        report.first_to_last_ratio = first / last;
    }
    return report;
}

// Flop count of one forward+backward pass (data independent).
inline std::uint64_t forward_backward_flops(const MlpNet& net, LossKind loss) {
    Vector x(net.input_dim(), 0.1);
    Vector y(net.output_dim());
    if (net.output_kind == OutputKind::softmax) y[0] = 1.0;
    return backprop(net, x, y, loss).flops;
}

} // namespace regresslab

#endif
