#ifndef REGRESSLAB_OPTIM_HPP
#define REGRESSLAB_OPTIM_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <ostream>
#include <vector>

#include "regresslab/dataset.hpp"
#include "regresslab/errors.hpp"
#include "regresslab/glm.hpp"
#include "regresslab/linalg.hpp"
#include "regresslab/rng.hpp"

namespace regresslab {

enum class ScheduleKind { constant, step, exponential, cosine };

struct Schedule {
    ScheduleKind kind = ScheduleKind::constant;
    double gamma = 0.5; // decay factor for step / exponential, 0 < gamma <= 1
    int step_size = 10; // step decay interval s
    int period = 100;   // cosine horizon T
};

// eta_t for iteration t.
inline double schedule_eval(const Schedule& schedule, double eta0, int t) {
    if (t < 0) throw ParameterError("schedule_eval: t must be >= 0");
    switch (schedule.kind) {
        case ScheduleKind::constant:
            return eta0;
        case ScheduleKind::step:
            return eta0 * std::pow(schedule.gamma, static_cast<double>(t / schedule.step_size));
        case ScheduleKind::exponential:
            return eta0 * std::pow(schedule.gamma, static_cast<double>(t));
        case ScheduleKind::cosine: {
            if (t >= schedule.period) return 0.0;
            const double phase = std::numbers::pi * static_cast<double>(t) /
                                 static_cast<double>(schedule.period);
            return eta0 * (1.0 + std::cos(phase)) / 2.0;
        }
    }
    throw ParameterError("schedule_eval: unknown schedule kind");
}

enum class StrategyKind { batch, stochastic, minibatch };

struct Strategy {
    StrategyKind kind = StrategyKind::batch;
    std::size_t batch_size = 1; // minibatch only
};

struct StopRule {
    double delta = 1e-8;   // stop once the full loss decrease falls below this
    int max_iters = 10000;
};

struct GdConfig {
    double eta = 0.1;
    Schedule schedule;
    Strategy strategy;
    StopRule stop;
    std::uint64_t seed = 0;

    void validate() const {
        // eta = 0 is tolerated as an explicit no-op (training leaves
        // parameters untouched); negative rates are rejected.
        if (eta < 0.0) throw ParameterError("GdConfig: eta must be >= 0");
        if (!(schedule.gamma > 0.0 && schedule.gamma <= 1.0)) {
            throw ParameterError("GdConfig: gamma must be in (0, 1]");
        }
        if (schedule.step_size < 1) throw ParameterError("GdConfig: step_size must be >= 1");
        if (schedule.period < 1) throw ParameterError("GdConfig: period must be >= 1");
        if (strategy.kind == StrategyKind::minibatch && strategy.batch_size < 1) {
            throw ParameterError("GdConfig: batch_size must be >= 1");
        }
        if (stop.delta < 0.0) throw ParameterError("GdConfig: delta must be >= 0");
        if (stop.max_iters < 1) throw ParameterError("GdConfig: max_iters must be >= 1");
    }
};

struct TraceEntry {
    int t;
    double loss;      // full loss at the pre-update iterate
    double eta;       // learning rate used for this step
    double grad_inf_norm;
};

struct TraceRecord {
    std::vector<TraceEntry> entries;

    void to_csv(std::ostream& out) const {
        out << "t,loss,eta,grad_inf_norm\n";
        for (const TraceEntry& e : entries) {
            out << e.t << ',' << detail::format_double(e.loss) << ','
                << detail::format_double(e.eta) << ','
                << detail::format_double(e.grad_inf_norm) << '\n';
        }
    }
};

// Raised when the loss leaves the finite (or 1e12 * initial) envelope.
class DivergedError : public NumericError {
public:
    DivergedError(const std::string& what, TraceRecord trace)
        : NumericError(what), trace(std::move(trace)) {}
    TraceRecord trace;
};

struct GdResult {
    Vector theta;
    TraceRecord trace;
};

// Plain gradient descent: theta <- theta - eta_t * grad(theta). The stopping
// test compares consecutive full-loss values; a negative decrease (the loss
// went up) does not stop the loop, it is left to the divergence guard.
inline GdResult gd_minimize(const std::function<double(const Vector&)>& loss_fn,
                            const std::function<Vector(const Vector&)>& grad_fn,
                            const Vector& theta0, const GdConfig& cfg) {
    cfg.validate();
    Vector theta = theta0;
    TraceRecord trace;
    double loss = loss_fn(theta);
    if (!std::isfinite(loss)) throw ParameterError("gd_minimize: loss not finite at theta0");
    const double initial_loss = loss;
    const double blowup = 1e12 * initial_loss;

    for (int t = 0; t < cfg.stop.max_iters; ++t) {
        const Vector g = grad_fn(theta);
        if (g.size() != theta.size()) throw ShapeError("gd_minimize: gradient dim mismatch");
        double gnorm = 0.0;
        for (double v : g) {
            if (!std::isfinite(v)) {
                throw DivergedError("gd_minimize: non-finite gradient at t=" + std::to_string(t),
                                    std::move(trace));
            }
            gnorm = std::max(gnorm, std::fabs(v));
        }
        const double eta_t = schedule_eval(cfg.schedule, cfg.eta, t);
        trace.entries.push_back(TraceEntry{t, loss, eta_t, gnorm});
        for (std::size_t j = 0; j < theta.size(); ++j) theta[j] -= eta_t * g[j];

        const double new_loss = loss_fn(theta);
        if (!std::isfinite(new_loss) || (initial_loss > 0.0 && new_loss > blowup)) {
            throw DivergedError("gd_minimize: loss diverged at t=" + std::to_string(t),
                                std::move(trace));
        }
        const double decrease = loss - new_loss;
        loss = new_loss;
        if (decrease >= 0.0 && decrease < cfg.stop.delta) break;
    }
    return GdResult{std::move(theta), std::move(trace)};
}

// Deals out index blocks: the whole dataset (batch), single samples from a
// per-epoch shuffle (stochastic), or contiguous shuffle blocks of size B with
// the short remainder kept (minibatch). Indices inside a block are sorted so
// gradient accumulation order is canonical; with B = M this reproduces the
// batch gradient bit for bit.
class BatchScheduler {
public:
    BatchScheduler(std::size_t m, Strategy strategy, std::uint64_t seed)
        : m_(m), strategy_(strategy), rng_(seed) {
        if (m == 0) throw ParameterError("BatchScheduler: empty dataset");
        if (strategy.kind == StrategyKind::minibatch && strategy.batch_size > m) {
            throw ParameterError("BatchScheduler: batch size exceeds dataset size");
        }
        if (strategy_.kind == StrategyKind::batch) {
            block_.resize(m_);
            for (std::size_t i = 0; i < m_; ++i) block_[i] = i;
        }
    }

    const std::vector<std::size_t>& next() {
        if (strategy_.kind == StrategyKind::batch) return block_;
        if (cursor_ >= epoch_.size()) new_epoch();
        const std::size_t b =
            strategy_.kind == StrategyKind::stochastic ? 1 : strategy_.batch_size;
        const std::size_t take = std::min(b, epoch_.size() - cursor_);
        block_.assign(epoch_.begin() + static_cast<std::ptrdiff_t>(cursor_),
                      epoch_.begin() + static_cast<std::ptrdiff_t>(cursor_ + take));
        std::sort(block_.begin(), block_.end());
        cursor_ += take;
        return block_;
    }

private:
    void new_epoch() {
        epoch_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) epoch_[i] = i;
        shuffle(epoch_, rng_);
        cursor_ = 0;
    }

    std::size_t m_;
    Strategy strategy_;
    Rng rng_;
    std::vector<std::size_t> epoch_;
    std::vector<std::size_t> block_;
    std::size_t cursor_ = 0;
};

namespace detail {

inline Vector flatten_matrix(const Matrix& m) {
    return Vector::from(m.values());
}

inline Matrix unflatten_matrix(const Vector& v, std::size_t rows, std::size_t cols) {
    return Matrix::from(rows, cols, v.values());
}

} // namespace detail

// Per-iteration gradient source for the three GLM kinds. Parameters travel
// through the driver as a flat vector (softmax matrices are flattened
// row-major). Each call computes the mean gradient over the next block.
class GradientStrategy {
public:
    GradientStrategy(GlmKind kind, Strategy strategy, Matrix x_aug, Vector y,
                     std::uint64_t seed)
        : kind_(kind),
          x_(std::move(x_aug)),
          y_(std::move(y)),
          scheduler_(x_.rows(), strategy, seed) {
        if (kind == GlmKind::softmax) {
            throw ParameterError("GradientStrategy: softmax labels must be one-hot");
        }
        if (x_.rows() != y_.size()) throw ShapeError("GradientStrategy: row count mismatch");
    }

    GradientStrategy(Strategy strategy, Matrix x_aug, Matrix y_onehot, std::uint64_t seed)
        : kind_(GlmKind::softmax),
          x_(std::move(x_aug)),
          y_onehot_(std::move(y_onehot)),
          scheduler_(x_.rows(), strategy, seed) {
        if (x_.rows() != y_onehot_.rows()) {
            throw ShapeError("GradientStrategy: row count mismatch");
        }
    }

    Vector operator()(const Vector& flat_params) {
        const std::vector<std::size_t>& block = scheduler_.next();
        if (kind_ == GlmKind::softmax) {
            const std::size_t k = y_onehot_.cols();
            const SoftmaxParams p{detail::unflatten_matrix(flat_params, x_.cols(), k)};
            Matrix g(x_.cols(), k);
            for (std::size_t idx : block) {
                const Vector probs = predict_softmax(p, x_.row(idx));
                for (std::size_t c = 0; c < k; ++c) {
                    const double err = probs[c] - y_onehot_(idx, c);
                    for (std::size_t j = 0; j < x_.cols(); ++j) g(j, c) += err * x_(idx, j);
                }
            }
            const double b = static_cast<double>(block.size());
            for (std::size_t j = 0; j < g.rows(); ++j)
                for (std::size_t c = 0; c < g.cols(); ++c) g(j, c) /= b;
            return detail::flatten_matrix(g);
        }
        Vector g(x_.cols());
        for (std::size_t idx : block) {
            double z = 0.0;
            for (std::size_t j = 0; j < x_.cols(); ++j) z += flat_params[j] * x_(idx, j);
            const double yhat = kind_ == GlmKind::linear ? z : sigmoid(z);
            const double err = yhat - y_[idx];
            for (std::size_t j = 0; j < x_.cols(); ++j) g[j] += err * x_(idx, j);
        }
        for (std::size_t j = 0; j < g.size(); ++j) g[j] /= static_cast<double>(block.size());
        return g;
    }

private:
    GlmKind kind_;
    Matrix x_;
    Vector y_;
    Matrix y_onehot_;
    BatchScheduler scheduler_;
};

inline GradientStrategy make_gradient_strategy(GlmKind kind, Strategy strategy,
                                               const Matrix& x_aug, const Vector& y,
                                               std::uint64_t seed) {
    return GradientStrategy(kind, strategy, x_aug, y, seed);
}

inline GradientStrategy make_gradient_strategy(Strategy strategy, const Matrix& x_aug,
                                               const Matrix& y_onehot, std::uint64_t seed) {
    return GradientStrategy(strategy, x_aug, y_onehot, seed);
}

// Cyclic coordinate descent. With partials available each coordinate takes a
// scalar gradient step; otherwise the derivative-free rule compares the loss
// at theta_k - eta, theta_k, theta_k + eta and moves only if a neighbor
// strictly improves on both alternatives. Stops early once a full sweep
// leaves every coordinate unchanged.
inline Vector coordinate_descent(
    const std::function<double(const Vector&)>& loss_fn, const Vector& theta0, double eta,
    int max_sweeps, bool derivative_free = false,
    const std::function<double(const Vector&, std::size_t)>& partial_fn = nullptr) {
    if (!(eta > 0.0)) throw ParameterError("coordinate_descent: eta must be > 0");
    if (max_sweeps < 1) throw ParameterError("coordinate_descent: max_sweeps must be >= 1");
    if (!derivative_free && !partial_fn) {
        throw ParameterError("coordinate_descent: need partial_fn unless derivative_free");
    }
    Vector theta = theta0;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool moved = false;
        for (std::size_t k = 0; k < theta.size(); ++k) {
            if (derivative_free) {
                const double here = loss_fn(theta);
                Vector up = theta;
                up[k] += eta;
                Vector down = theta;
                down[k] -= eta;
                const double loss_up = loss_fn(up);
                const double loss_down = loss_fn(down);
                if (!std::isfinite(here) || !std::isfinite(loss_up) || !std::isfinite(loss_down)) {
                    throw DivergedError("coordinate_descent: non-finite loss", TraceRecord{});
                }
                if (std::min(here, loss_down) > loss_up) {
                    theta = up;
                    moved = true;
                } else if (std::min(here, loss_up) > loss_down) {
                    theta = down;
                    moved = true;
                }
            } else {
                const double g = partial_fn(theta, k);
                if (!std::isfinite(g)) {
                    throw DivergedError("coordinate_descent: non-finite partial", TraceRecord{});
                }
                if (g != 0.0) {
                    theta[k] -= eta * g;
                    moved = true;
                }
                const double value = loss_fn(theta);
                if (!std::isfinite(value)) {
                    throw DivergedError("coordinate_descent: non-finite loss", TraceRecord{});
                }
            }
        }
        if (!moved) break;
    }
    return theta;
}

struct GlmGdFit {
    std::variant<LinearParams, SoftmaxParams> params;
    TraceRecord trace;
};

// Trains a GLM with gradient descent. The stopping criterion always reads
// the full-data mean loss, whatever gradient strategy is running.
inline GlmGdFit fit_glm_gd(GlmKind kind, const Matrix& x_aug, const Vector& y_real_or_class,
                           const Matrix& y_onehot, const GdConfig& cfg,
                           const Vector& theta0_flat) {
    cfg.validate();
    if (kind == GlmKind::softmax) {
        GradientStrategy strategy(cfg.strategy, x_aug, y_onehot, cfg.seed);
        const std::size_t k = y_onehot.cols();
        auto loss = [&](const Vector& flat) {
            return softmax_loss(SoftmaxParams{detail::unflatten_matrix(flat, x_aug.cols(), k)},
                                x_aug, y_onehot, Reduction::mean);
        };
        auto grad = [&](const Vector& flat) { return strategy(flat); };
        GdResult r = gd_minimize(loss, grad, theta0_flat, cfg);
        return GlmGdFit{SoftmaxParams{detail::unflatten_matrix(r.theta, x_aug.cols(), k)},
                        std::move(r.trace)};
    }
    GradientStrategy strategy(kind, cfg.strategy, x_aug, y_real_or_class, cfg.seed);
    auto loss = [&](const Vector& theta) {
        return kind == GlmKind::linear
                   ? linear_loss(LinearParams{theta}, x_aug, y_real_or_class, Reduction::mean)
                   : logistic_loss(LinearParams{theta}, x_aug, y_real_or_class, Reduction::mean);
    };
    auto grad = [&](const Vector& theta) { return strategy(theta); };
    GdResult r = gd_minimize(loss, grad, theta0_flat, cfg);
    return GlmGdFit{LinearParams{std::move(r.theta)}, std::move(r.trace)};
}

} // namespace regresslab

#endif
