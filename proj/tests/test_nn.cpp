#include <gtest/gtest.h>

#include <cmath>

#include "regresslab/dataset.hpp"
#include "regresslab/nn.hpp"

using namespace regresslab;

namespace {

double rel_err(double a, double b) {
    return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
}

// central finite difference through the flattened parameter vector
double max_fd_error(MlpNet net, const Vector& x, const Vector& y, LossKind loss) {
    const BackpropResult bp = backprop(net, x, y, loss);
    Vector flat = flatten(net);
    std::vector<double> analytic;
    for (const Matrix& g : bp.grads)
        for (double v : g.values()) analytic.push_back(v);
    double worst = 0.0;
    for (std::size_t p = 0; p < flat.size(); ++p) {
        const double h = 1e-6 * (1.0 + std::fabs(flat[p]));
        Vector up = flat;
        Vector down = flat;
        up[p] += h;
        down[p] -= h;
        unflatten(net, up);
        const double lu = mlp_sample_loss(net, x, y, loss);
        unflatten(net, down);
        const double ld = mlp_sample_loss(net, x, y, loss);
        const double fd = (lu - ld) / (2.0 * h);
        worst = std::max(worst, rel_err(analytic[p], fd));
    }
    return worst;
}

} // namespace

TEST(InitMlp, TinyScaleOutputsNearBias) {
    Rng rng(1);
    const MlpNet net = init_mlp({3, 8, 1}, Activation::sigmoid, OutputKind::linear, rng, 1e-12);
    const ForwardResult r = forward(net, Vector{0.5, -1.0, 2.0});
    EXPECT_NEAR(r.yhat[0], 0.0, 1e-10); // output bias is zero
}

TEST(InitMlp, SeedDeterminesWeightsBitExactly) {
    Rng a(42);
    Rng b(42);
    const MlpNet na = init_mlp({2, 4, 1}, Activation::tanh, OutputKind::linear, a);
    const MlpNet nb = init_mlp({2, 4, 1}, Activation::tanh, OutputKind::linear, b);
    for (std::size_t l = 0; l < na.weights.size(); ++l)
        for (std::size_t i = 0; i < na.weights[l].values().size(); ++i)
            EXPECT_EQ(na.weights[l].values()[i], nb.weights[l].values()[i]);
}

TEST(InitMlp, BiasesStartAtZero) {
    Rng rng(3);
    const MlpNet net = init_mlp({2, 3, 2}, Activation::relu, OutputKind::softmax, rng);
    for (const Matrix& w : net.weights)
        for (std::size_t i = 0; i < w.rows(); ++i) EXPECT_DOUBLE_EQ(w(i, 0), 0.0);
}

TEST(Forward, HandEvaluatedReluChain) {
    // 1-1-1 net, positive pre-activation: x=2, z1 = 0.1 + 0.5*2 = 1.1,
    // h = relu(1.1) = 1.1, yhat = -1 + 2*1.1 = 1.2
    MlpNet net;
    net.layer_sizes = {1, 1, 1};
    net.activation = Activation::relu;
    net.output_kind = OutputKind::linear;
    net.weights.push_back(Matrix(1, 2, {0.1, 0.5}));
    net.weights.push_back(Matrix(1, 2, {-1.0, 2.0}));
    const ForwardResult r = forward(net, Vector{2.0});
    EXPECT_DOUBLE_EQ(r.yhat[0], 1.2);
    EXPECT_DOUBLE_EQ(r.cache.hs[1][0], 1.1);
}

TEST(Forward, ZeroWeightSigmoidHiddenIsHalf) {
    MlpNet net;
    net.layer_sizes = {2, 3, 1};
    net.activation = Activation::sigmoid;
    net.output_kind = OutputKind::linear;
    net.weights.push_back(Matrix(3, 3));
    net.weights.push_back(Matrix(1, 4, {0.5, 1.0, -2.0, 3.0}));
    const ForwardResult r = forward(net, Vector{7.0, -3.0});
    for (std::size_t k = 0; k < 3; ++k) EXPECT_DOUBLE_EQ(r.cache.hs[1][k], 0.5);
    EXPECT_DOUBLE_EQ(r.yhat[0], 0.5 + 0.5 * (1.0 - 2.0 + 3.0));
}

TEST(Forward, LogisticOutputWithZeroFinalLayerIsHalf) {
    Rng rng(4);
    MlpNet net = init_mlp({2, 4, 1}, Activation::tanh, OutputKind::logistic, rng);
    net.weights.back() = Matrix(1, 5);
    const ForwardResult r = forward(net, Vector{0.3, -0.8});
    EXPECT_DOUBLE_EQ(r.yhat[0], 0.5);
}

TEST(Forward, SoftmaxOutputSumsToOne) {
    Rng rng(5);
    const MlpNet net = init_mlp({3, 6, 4}, Activation::tanh, OutputKind::softmax, rng);
    const ForwardResult r = forward(net, Vector{0.1, 0.2, -0.9});
    double sum = 0.0;
    for (double p : r.yhat) sum += p;
    EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(Backprop, ZeroResidualGivesZeroGradients) {
    Rng rng(6);
    const MlpNet net = init_mlp({2, 3, 1}, Activation::tanh, OutputKind::linear, rng);
    const Vector x{0.4, -0.6};
    const ForwardResult fwd = forward(net, x);
    const BackpropResult bp = backprop(net, x, fwd.yhat, LossKind::mse);
    for (const Matrix& g : bp.grads)
        for (double v : g.values()) EXPECT_DOUBLE_EQ(v, 0.0);
}

TEST(Backprop, OutputLayerGradientIsErrorTimesHidden) {
    Rng rng(7);
    const MlpNet net = init_mlp({2, 5, 1}, Activation::sigmoid, OutputKind::linear, rng);
    const Vector x{1.0, -0.5};
    const Vector y{0.3};
    const ForwardResult fwd = forward(net, x);
    const BackpropResult bp = backprop(net, x, y, LossKind::mse);
    const double err = fwd.yhat[0] - y[0];
    const Matrix& g_out = bp.grads.back();
    EXPECT_DOUBLE_EQ(g_out(0, 0), err);
    for (std::size_t k = 0; k < 5; ++k) {
        EXPECT_DOUBLE_EQ(g_out(0, k + 1), err * fwd.cache.hs[1][k]);
    }
}

TEST(Backprop, MatchesFiniteDifferencesSmoothActivations) {
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const Activation act = trial % 2 == 0 ? Activation::sigmoid : Activation::tanh;
        MlpNet net = init_mlp({3, 5, 4, 1}, act, OutputKind::linear, rng);
        Vector x(3);
        for (std::size_t j = 0; j < 3; ++j) x[j] = rng.uniform(-1.0, 1.0);
        const Vector y{rng.normal()};
        EXPECT_LT(max_fd_error(net, x, y, LossKind::mse), 1e-5);
    }
}

TEST(Backprop, MatchesFiniteDifferencesXentPairings) {
    Rng rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        MlpNet logistic_net = init_mlp({2, 4, 1}, Activation::tanh, OutputKind::logistic, rng);
        Vector x{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const Vector y{static_cast<double>(rng.next_below(2))};
        EXPECT_LT(max_fd_error(logistic_net, x, y, LossKind::xent), 1e-5);

        MlpNet softmax_net = init_mlp({2, 4, 3}, Activation::sigmoid, OutputKind::softmax, rng);
        Vector onehot(3);
        onehot[rng.next_below(3)] = 1.0;
        EXPECT_LT(max_fd_error(softmax_net, x, onehot, LossKind::xent), 1e-5);
    }
}

TEST(Backprop, ReluCheckedAwayFromKinks) {
    Rng rng(10);
    int checked = 0;
    while (checked < 10) {
        MlpNet net = init_mlp({2, 4, 1}, Activation::relu, OutputKind::linear, rng);
        Vector x{rng.uniform(0.5, 1.5), rng.uniform(0.5, 1.5)};
        // keep away from the kink: skip nets with any |z| below a margin
        const ForwardResult fwd = forward(net, x);
        bool safe = true;
        for (const Vector& z : fwd.cache.zs)
            for (double v : z)
                if (std::fabs(v) < 1e-3) safe = false;
        if (!safe) continue;
        ++checked;
        EXPECT_LT(max_fd_error(net, x, Vector{0.7}, LossKind::mse), 1e-5);
    }
}

TEST(Backprop, MismatchedPairingThrows) {
    Rng rng(11);
    MlpNet net = init_mlp({2, 3, 1}, Activation::tanh, OutputKind::linear, rng);
    EXPECT_THROW(backprop(net, Vector{0.1, 0.2}, Vector{1.0}, LossKind::xent), ConfigError);
    MlpNet cls = init_mlp({2, 3, 1}, Activation::tanh, OutputKind::logistic, rng);
    EXPECT_THROW(backprop(cls, Vector{0.1, 0.2}, Vector{1.0}, LossKind::mse), ConfigError);
}

TEST(Backprop, OutputLayerMatchesGlmUnifiedGradient) {
    // relu kept in its positive (identity) regime: the output layer is a
    // linear model on the hidden features, so its backprop gradient must
    // match the glm gradient on those features
    Rng rng(12);
    MlpNet net = init_mlp({2, 4, 1}, Activation::relu, OutputKind::linear, rng);
    for (Matrix& w : net.weights)
        for (std::size_t i = 0; i < w.rows(); ++i) {
            w(i, 0) = 2.0; // large positive bias keeps every relu active
            for (std::size_t j = 1; j < w.cols(); ++j) w(i, j) = std::fabs(w(i, j));
        }
    const Vector x{0.5, 0.25};
    const Vector y{1.0};
    const ForwardResult fwd = forward(net, x);
    const BackpropResult bp = backprop(net, x, y, LossKind::mse);
    Matrix h_aug(1, 5);
    h_aug(0, 0) = 1.0;
    for (std::size_t k = 0; k < 4; ++k) h_aug(0, k + 1) = fwd.cache.hs[1][k];
    Vector theta_out(5);
    for (std::size_t j = 0; j < 5; ++j) theta_out[j] = net.weights[1](0, j);
    const Vector glm_grad = gradient(GlmKind::linear, LinearParams{theta_out}, h_aug,
                                     Vector{y[0]}, Reduction::mean);
    for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(bp.grads[1](0, j), glm_grad[j], 1e-12);
}

TEST(TrainMlp, LearnsTheSineCurve) {
    Rng data_rng(7);
    const Dataset d = gen_sine(50, 0.05, data_rng);
    Rng init_rng(1);
    MlpNet net = init_mlp({1, 20, 1}, Activation::tanh, OutputKind::linear, init_rng, 0.5);
    GdConfig cfg;
    cfg.eta = 0.15;
    cfg.stop.max_iters = 4000;
    cfg.stop.delta = 0.0;
    cfg.seed = 2;
    const MlpTrainResult r = train_mlp(net, d, cfg, LossKind::mse);
    double sq = 0.0;
    for (std::size_t i = 0; i < d.rows(); ++i) {
        const ForwardResult f = forward(r.net, d.x.row(i));
        const double e = f.yhat[0] - (*d.y_real)[i];
        sq += e * e;
    }
    EXPECT_LT(std::sqrt(sq / static_cast<double>(d.rows())), 0.1);
}

TEST(TrainMlp, ZeroLearningRateLeavesNetUnchanged) {
    Rng data_rng(3);
    const Dataset d = gen_sine(10, 0.1, data_rng);
    Rng init_rng(4);
    MlpNet net = init_mlp({1, 5, 1}, Activation::tanh, OutputKind::linear, init_rng);
    GdConfig cfg;
    cfg.eta = 0.0;
    cfg.stop.max_iters = 5;
    cfg.stop.delta = 0.0;
    const MlpTrainResult r = train_mlp(net, d, cfg, LossKind::mse);
    for (std::size_t l = 0; l < net.weights.size(); ++l)
        for (std::size_t i = 0; i < net.weights[l].values().size(); ++i)
            EXPECT_EQ(r.net.weights[l].values()[i], net.weights[l].values()[i]);
}

TEST(TrainMlp, SameSeedBitIdenticalWeights) {
    Rng data_rng(5);
    const Dataset d = gen_sine(20, 0.1, data_rng);
    auto run = [&]() {
        Rng init_rng(6);
        MlpNet net = init_mlp({1, 8, 1}, Activation::sigmoid, OutputKind::linear, init_rng);
        GdConfig cfg;
        cfg.eta = 0.2;
        cfg.strategy.kind = StrategyKind::minibatch;
        cfg.strategy.batch_size = 5;
        cfg.stop.max_iters = 60;
        cfg.stop.delta = 0.0;
        cfg.seed = 17;
        return train_mlp(net, d, cfg, LossKind::mse);
    };
    const MlpTrainResult a = run();
    const MlpTrainResult b = run();
    for (std::size_t l = 0; l < a.net.weights.size(); ++l)
        for (std::size_t i = 0; i < a.net.weights[l].values().size(); ++i)
            EXPECT_EQ(a.net.weights[l].values()[i], b.net.weights[l].values()[i]);
}

TEST(VanishingDiagnostic, DeepSigmoidNetDecays) {
    Rng rng(3);
    std::vector<std::size_t> sizes{8};
    for (int l = 0; l < 10; ++l) sizes.push_back(8);
    sizes.push_back(1);
    const MlpNet net = init_mlp(sizes, Activation::sigmoid, OutputKind::linear, rng, 0.5);
    Vector x(8);
    for (std::size_t j = 0; j < 8; ++j) x[j] = rng.uniform(-1.0, 1.0);
    const VanishingReport report = vanishing_diagnostic(net, x, Vector{1.0});
    EXPECT_FALSE(report.degenerate);
    EXPECT_LT(report.first_to_last_ratio, 1e-3);
}

TEST(VanishingDiagnostic, ZeroResidualIsDegenerate) {
    Rng rng(4);
    const MlpNet net = init_mlp({2, 4, 4, 1}, Activation::tanh, OutputKind::linear, rng);
    const Vector x{0.2, -0.2};
    const ForwardResult fwd = forward(net, x);
    const VanishingReport report = vanishing_diagnostic(net, x, fwd.yhat);
    EXPECT_TRUE(report.degenerate);
    for (double n : report.layer_grad_inf_norms) EXPECT_DOUBLE_EQ(n, 0.0);
}

TEST(Flops, LinearInParameterCountAcrossWidths) {
    Rng rng(5);
    std::vector<double> ratios;
    for (std::size_t width : {8u, 16u, 32u, 64u}) {
        const MlpNet net = init_mlp({8, width, width, 1}, Activation::tanh,
                                    OutputKind::linear, rng);
        const std::uint64_t flops = forward_backward_flops(net, LossKind::mse);
        ratios.push_back(static_cast<double>(flops) /
                         static_cast<double>(net.parameter_count()));
    }
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    EXPECT_LT(*hi / *lo, 1.2);
}

TEST(SaveLoadShapes, FlattenUnflattenRoundTrip) {
    Rng rng(6);
    MlpNet net = init_mlp({3, 7, 2}, Activation::tanh, OutputKind::softmax, rng);
    const Vector flat = flatten(net);
    MlpNet copy = net;
    Vector perturbed = flat;
    for (std::size_t i = 0; i < perturbed.size(); ++i) perturbed[i] += 1.0;
    unflatten(copy, perturbed);
    unflatten(copy, flat);
    for (std::size_t l = 0; l < net.weights.size(); ++l)
        for (std::size_t i = 0; i < net.weights[l].values().size(); ++i)
            EXPECT_EQ(copy.weights[l].values()[i], net.weights[l].values()[i]);
}
