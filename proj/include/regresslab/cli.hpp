#ifndef REGRESSLAB_CLI_HPP
#define REGRESSLAB_CLI_HPP

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "regresslab/cv.hpp"
#include "regresslab/io.hpp"
#include "regresslab/metrics.hpp"
#include "regresslab/optim.hpp"
#include "regresslab/regpath.hpp"
#include "regresslab/regresslab.hpp"

namespace regresslab {
namespace cli {

inline constexpr const char* kVersion = "0.1.0";

// exit codes: 0 ok, 2 configuration problem, 3 numerical failure
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

namespace detail {

inline std::uint64_t effective_seed(std::uint64_t configured) {
    if (const char* env = std::getenv("REGRESSLAB_SEED")) {
        return static_cast<std::uint64_t>(std::strtoull(env, nullptr, 10));
    }
    return configured;
}

inline Vector parse_number_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) values.push_back(std::stod(cell));
    return Vector::from(std::move(values));
}

// ---------------------------------------------------------------- run config

struct DataConfig {
    std::string path;
    std::string label = "y";
    LabelKind label_kind = LabelKind::real;
    bool one_based = false;
    // generator alternative
    std::string generator; // "", "sine", "two-gaussians", "rental"
    std::size_t m = 10;
    double noise_std = 0.2;
    std::size_t m_per_class = 100;
    Vector mu0{-1.0, 0.0};
    Vector mu1{1.0, 0.0};
    std::uint64_t seed = 42;
};

struct ModelConfig {
    std::string kind; // linear|logistic|softmax|lbfm|kernel-ridge|mlp
    // lbfm
    json basis;
    // kernel-ridge
    json kernel;
    // mlp
    std::vector<std::size_t> hidden{20};
    std::string activation = "tanh";
    std::string output; // default derived from label kind
    double init_scale = 0.5;
};

struct TrainingConfig {
    bool closed_form = true;
    GdConfig gd;
};

struct PenaltyConfig {
    PenaltyKind kind = PenaltyKind::none;
    double lambda = 0.0;
    int grid_count = 60;
    double grid_min_ratio = 1e-4;
    bool standardize = true; // sweep paths standardize features by default
};

struct CvConfig {
    std::string kind = "loocv"; // loocv|kfold|holdout
    int k = 5;
    double frac = 0.2;
    std::uint64_t seed = 0;
};

struct RunConfig {
    DataConfig data;
    ModelConfig model;
    TrainingConfig training;
    PenaltyConfig penalty;
    CvConfig cv;
    std::string output_dir = ".";
};

inline PenaltyKind penalty_kind_from_name(const std::string& name) {
    if (name == "none") return PenaltyKind::none;
    if (name == "l1") return PenaltyKind::l1;
    if (name == "l2") return PenaltyKind::l2;
    throw ConfigError("unknown penalty kind '" + name + "'");
}

inline std::string penalty_kind_name(PenaltyKind kind) {
    switch (kind) {
        case PenaltyKind::none: return "none";
        case PenaltyKind::l1: return "l1";
        case PenaltyKind::l2: return "l2";
    }
    throw ConfigError("unknown penalty kind");
}

inline GdConfig gd_config_from_json(const json& j) {
    GdConfig cfg;
    cfg.eta = j.value("eta", cfg.eta);
    cfg.stop.delta = j.value("delta", cfg.stop.delta);
    cfg.stop.max_iters = j.value("max_iters", cfg.stop.max_iters);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("schedule")) {
        const json& s = j.at("schedule");
        const std::string kind = s.value("kind", "constant");
        if (kind == "constant") cfg.schedule.kind = ScheduleKind::constant;
        else if (kind == "step") cfg.schedule.kind = ScheduleKind::step;
        else if (kind == "exponential") cfg.schedule.kind = ScheduleKind::exponential;
        else if (kind == "cosine") cfg.schedule.kind = ScheduleKind::cosine;
        else throw ConfigError("unknown schedule kind '" + kind + "'");
        cfg.schedule.gamma = s.value("gamma", cfg.schedule.gamma);
        cfg.schedule.step_size = s.value("step", cfg.schedule.step_size);
        cfg.schedule.period = s.value("period", cfg.schedule.period);
    }
    if (j.contains("strategy")) {
        const json& s = j.at("strategy");
        const std::string kind = s.value("kind", "batch");
        if (kind == "batch") cfg.strategy.kind = StrategyKind::batch;
        else if (kind == "stochastic" || kind == "sgd") cfg.strategy.kind = StrategyKind::stochastic;
        else if (kind == "minibatch") cfg.strategy.kind = StrategyKind::minibatch;
        else throw ConfigError("unknown strategy kind '" + kind + "'");
        cfg.strategy.batch_size = s.value("batch_size", cfg.strategy.batch_size);
    }
    cfg.validate();
    return cfg;
}

inline RunConfig run_config_from_json(const json& j) {
    RunConfig cfg;
    if (!j.contains("data")) throw ConfigError("config: missing 'data' section");
    const json& data = j.at("data");
    const bool has_path = data.contains("path");
    const bool has_gen = data.contains("generator");
    if (has_path == has_gen) {
        throw ConfigError("config: data must have exactly one of 'path' / 'generator'");
    }
    if (has_path) {
        cfg.data.path = data.at("path").get<std::string>();
        cfg.data.label = data.value("label", cfg.data.label);
        const std::string kind = data.value("label_kind", "real");
        if (kind == "real") cfg.data.label_kind = LabelKind::real;
        else if (kind == "class") cfg.data.label_kind = LabelKind::cls;
        else throw ConfigError("config: label_kind must be 'real' or 'class'");
        cfg.data.one_based = data.value("one_based", false);
    } else {
        const json& gen = data.at("generator");
        cfg.data.generator = gen.at("kind").get<std::string>();
        cfg.data.m = gen.value("m", cfg.data.m);
        cfg.data.noise_std = gen.value("noise_std", cfg.data.noise_std);
        cfg.data.m_per_class = gen.value("m_per_class", cfg.data.m_per_class);
        if (gen.contains("mu0")) cfg.data.mu0 = io::vector_from_json(gen.at("mu0"));
        if (gen.contains("mu1")) cfg.data.mu1 = io::vector_from_json(gen.at("mu1"));
        cfg.data.seed = gen.value("seed", cfg.data.seed);
    }

    if (!j.contains("model")) throw ConfigError("config: missing 'model' section");
    const json& model = j.at("model");
    cfg.model.kind = model.at("kind").get<std::string>();
    const std::vector<std::string> known{"linear",       "logistic", "softmax",
                                         "lbfm",         "mlp",      "kernel-ridge"};
    if (std::find(known.begin(), known.end(), cfg.model.kind) == known.end()) {
        throw ConfigError("config: unknown model kind '" + cfg.model.kind + "'");
    }
    if (model.contains("basis")) cfg.model.basis = model.at("basis");
    if (model.contains("kernel")) cfg.model.kernel = model.at("kernel");
    if (model.contains("net")) {
        const json& net = model.at("net");
        if (net.contains("hidden")) {
            cfg.model.hidden = net.at("hidden").get<std::vector<std::size_t>>();
        }
        cfg.model.activation = net.value("activation", cfg.model.activation);
        cfg.model.output = net.value("output", cfg.model.output);
        cfg.model.init_scale = net.value("init_scale", cfg.model.init_scale);
    }

    if (j.contains("training")) {
        const json& training = j.at("training");
        if (training.contains("gd")) {
            cfg.training.closed_form = false;
            cfg.training.gd = gd_config_from_json(training.at("gd"));
        } else {
            cfg.training.closed_form = training.value("closed_form", true);
        }
    }

    if (j.contains("penalty")) {
        const json& penalty = j.at("penalty");
        cfg.penalty.kind = penalty_kind_from_name(penalty.value("kind", "none"));
        cfg.penalty.lambda = penalty.value("lambda", 0.0);
        if (penalty.contains("grid")) {
            cfg.penalty.grid_count = penalty.at("grid").value("count", 60);
            cfg.penalty.grid_min_ratio = penalty.at("grid").value("min_ratio", 1e-4);
        }
        cfg.penalty.standardize = penalty.value("standardize", true);
        if (cfg.penalty.lambda < 0.0) throw ConfigError("config: penalty lambda must be >= 0");
    }

    if (j.contains("cv")) {
        const json& cv = j.at("cv");
        cfg.cv.kind = cv.value("kind", cfg.cv.kind);
        cfg.cv.k = cv.value("k", cfg.cv.k);
        cfg.cv.frac = cv.value("frac", cfg.cv.frac);
        cfg.cv.seed = cv.value("seed", cfg.cv.seed);
    }

    if (j.contains("output")) cfg.output_dir = j.at("output").value("dir", cfg.output_dir);
    return cfg;
}

// ------------------------------------------------------------------ dataset

inline Dataset load_configured_dataset(const DataConfig& cfg) {
    if (!cfg.generator.empty()) {
        const std::uint64_t seed = effective_seed(cfg.seed);
        if (cfg.generator == "rental") return fixture_rental();
        if (cfg.generator == "sine") {
            Rng rng(seed);
            return gen_sine(cfg.m, cfg.noise_std, rng);
        }
        if (cfg.generator == "two-gaussians") {
            Rng rng(seed);
            return gen_two_gaussians(cfg.m_per_class, cfg.mu0, cfg.mu1,
                                     Matrix::identity(cfg.mu0.size()), rng);
        }
        throw ConfigError("unknown generator kind '" + cfg.generator + "'");
    }
    return load_csv(cfg.path, cfg.label, cfg.label_kind, cfg.one_based);
}

// ------------------------------------------------------------- model output

inline BasisSpec resolve_basis(const json& basis_json, const Matrix& x, std::uint64_t seed) {
    if (basis_json.is_null()) {
        throw ConfigError("lbfm model needs a 'basis' section");
    }
    const std::string kind_name = basis_json.at("kind").get<std::string>();
    const BasisKind kind = io::basis_kind_from_name(kind_name);
    if (kind == BasisKind::polynomial) {
        BasisSpec spec;
        spec.kind = kind;
        spec.degree = basis_json.value("degree", 3);
        return spec;
    }
    // explicit parameters win over init strategies
    if (basis_json.contains("centers") || basis_json.contains("weights") ||
        basis_json.contains("frequencies")) {
        return io::basis_spec_from_json(basis_json);
    }
    const int count = basis_json.value("count", 9);
    const std::string strategy_name = basis_json.value("init", "grid");
    InitStrategy strategy = InitStrategy::grid;
    if (strategy_name == "grid") strategy = InitStrategy::grid;
    else if (strategy_name == "random") strategy = InitStrategy::random;
    else if (strategy_name == "kmeans") strategy = InitStrategy::kmeans;
    else throw ConfigError("unknown basis init strategy '" + strategy_name + "'");
    Rng rng(seed);
    BasisSpec spec = init_basis_params(kind, x, count, strategy, rng);
    if (basis_json.contains("width")) spec.width = basis_json.at("width").get<double>();
    spec.validate();
    return spec;
}

struct FitArtifacts {
    json model;
    json report;
    std::optional<TraceRecord> trace;
};

inline json coefficient_table(const std::vector<std::string>& names, const Vector& theta) {
    json j;
    j["names"] = names;
    j["values"] = theta.values();
    return j;
}

inline std::vector<std::string> augmented_names(const Dataset& d) {
    std::vector<std::string> names{"bias"};
    for (std::size_t j = 0; j < d.cols(); ++j) {
        names.push_back(j < d.feature_names.size() ? d.feature_names[j]
                                                   : "x" + std::to_string(j + 1));
    }
    return names;
}

// final_loss matches what `eval` recomputes on the same data: mse for real
// labels, mean cross entropy for class labels.
inline double report_loss_real(const Vector& yhat, const Vector& y) {
    return regression_metrics(yhat, y).mse;
}

inline FitArtifacts fit_linear_family(const RunConfig& cfg, const Dataset& d) {
    const Dataset aug = with_bias(d);
    if (!d.y_real) throw ConfigError("linear model needs real labels");
    const Vector& y = *d.y_real;
    FitArtifacts out;
    Vector theta;
    int iterations = 0;
    if (cfg.training.closed_form) {
        if (cfg.penalty.kind == PenaltyKind::l2 && cfg.penalty.lambda > 0.0) {
            theta = fit_ridge_closed(aug.x, y, cfg.penalty.lambda).theta;
        } else if (cfg.penalty.kind == PenaltyKind::l1 && cfg.penalty.lambda > 0.0) {
            const LassoResult lasso = lasso_cd(aug.x, y, cfg.penalty.lambda);
            theta = lasso.params.theta;
            iterations = lasso.sweeps;
        } else {
            theta = fit_ols(aug.x, y).theta;
        }
    } else {
        GdConfig gd = cfg.training.gd;
        gd.seed = effective_seed(gd.seed);
        if (cfg.penalty.kind == PenaltyKind::none) {
            GlmGdFit fit = fit_glm_gd(GlmKind::linear, aug.x, y, Matrix(), gd,
                                      Vector(aug.x.cols()));
            theta = std::get<LinearParams>(fit.params).theta;
            iterations = static_cast<int>(fit.trace.entries.size());
            out.trace = std::move(fit.trace);
        } else {
            // penalized gradient steps on the mean loss
            GradientStrategy strategy(GlmKind::linear, gd.strategy, aug.x, y, gd.seed);
            PenaltySpec pen{cfg.penalty.kind, cfg.penalty.lambda};
            auto loss = [&](const Vector& t) {
                double value = linear_loss(LinearParams{t}, aug.x, y, Reduction::mean);
                for (std::size_t j = 1; j < t.size(); ++j) {
                    value += pen.kind == PenaltyKind::l2 ? pen.lambda * t[j] * t[j]
                                                         : pen.lambda * std::fabs(t[j]);
                }
                return value;
            };
            auto grad = [&](const Vector& t) {
                Vector g = strategy(t);
                for (std::size_t j = 1; j < t.size(); ++j) {
                    g[j] += pen.kind == PenaltyKind::l2 ? 2.0 * pen.lambda * t[j]
                                                        : pen.lambda * sign(t[j]);
                }
                return g;
            };
            GdResult r = gd_minimize(loss, grad, Vector(aug.x.cols()), gd);
            theta = std::move(r.theta);
            iterations = static_cast<int>(r.trace.entries.size());
            out.trace = std::move(r.trace);
        }
    }
    const Vector yhat = predict_linear(LinearParams{theta}, aug.x);
    out.model["model"] = "linear";
    out.model["theta"] = theta.values();
    out.model["label_kind"] = "real";
    out.model["feature_names"] = augmented_names(d);
    out.report["model"] = "linear";
    out.report["iterations"] = iterations;
    out.report["final_loss"] = report_loss_real(yhat, y);
    out.report["coefficients"] = coefficient_table(augmented_names(d), theta);
    return out;
}

inline FitArtifacts fit_logistic_or_softmax(const RunConfig& cfg, const Dataset& d) {
    if (!d.y_class) throw ConfigError(cfg.model.kind + " model needs class labels");
    const Dataset aug = with_bias(d);
    const int k = d.num_classes();
    FitArtifacts out;
    int iterations = 0;
    if (cfg.model.kind == "logistic") {
        if (k > 2) throw ConfigError("logistic model needs binary labels");
        Vector y(d.rows());
        for (std::size_t i = 0; i < d.rows(); ++i) y[i] = (*d.y_class)[i];
        Vector theta;
        if (cfg.training.closed_form) {
            // Gaussian generative route
            const GenerativeFit fit = fit_gaussian_generative(d, 2);
            theta = std::get<LinearParams>(fit.params).theta;
        } else {
            GdConfig gd = cfg.training.gd;
            gd.seed = effective_seed(gd.seed);
            GlmGdFit fit = fit_glm_gd(GlmKind::logistic, aug.x, y, Matrix(), gd,
                                      Vector(aug.x.cols()));
            theta = std::get<LinearParams>(fit.params).theta;
            iterations = static_cast<int>(fit.trace.entries.size());
            out.trace = std::move(fit.trace);
        }
        const LinearParams params{theta};
        Matrix probs(d.rows(), 2);
        for (std::size_t i = 0; i < d.rows(); ++i) {
            const double p1 = predict_logistic(params, aug.x.row(i));
            probs(i, 0) = 1.0 - p1;
            probs(i, 1) = p1;
        }
        out.model["model"] = "logistic";
        out.model["theta"] = theta.values();
        out.model["label_kind"] = "class";
        out.model["feature_names"] = augmented_names(d);
        out.report["model"] = "logistic";
        out.report["iterations"] = iterations;
        out.report["final_loss"] = cross_entropy(probs, one_hot_encode(*d.y_class, 2));
        out.report["coefficients"] = coefficient_table(augmented_names(d), theta);
        return out;
    }

    // softmax
    const Matrix y_onehot = one_hot_encode(*d.y_class, k);
    Matrix thetas;
    if (cfg.training.closed_form) {
        const GenerativeFit fit = fit_gaussian_generative(d, k);
        thetas = std::get<SoftmaxParams>(fit.params).thetas;
    } else {
        GdConfig gd = cfg.training.gd;
        gd.seed = effective_seed(gd.seed);
        GlmGdFit fit = fit_glm_gd(GlmKind::softmax, aug.x, Vector(), y_onehot, gd,
                                  Vector(aug.x.cols() * static_cast<std::size_t>(k)));
        thetas = std::get<SoftmaxParams>(fit.params).thetas;
        iterations = static_cast<int>(fit.trace.entries.size());
        out.trace = std::move(fit.trace);
    }
    const SoftmaxParams params{thetas};
    const Matrix probs = predict_softmax(params, aug.x);
    out.model["model"] = "softmax";
    out.model["thetas"] = io::matrix_to_json(thetas);
    out.model["label_kind"] = "class";
    out.model["feature_names"] = augmented_names(d);
    out.report["model"] = "softmax";
    out.report["iterations"] = iterations;
    out.report["final_loss"] = cross_entropy(probs, y_onehot);
    out.report["coefficients"] = {{"names", augmented_names(d)},
                                  {"per_class", io::matrix_to_json(thetas)}};
    return out;
}

inline FitArtifacts fit_lbfm(const RunConfig& cfg, const Dataset& d) {
    if (!d.y_real) throw ConfigError("lbfm model needs real labels");
    const std::uint64_t seed = effective_seed(cfg.data.seed);
    const BasisSpec spec = resolve_basis(cfg.model.basis, d.x, seed);
    const Vector& y = *d.y_real;
    FitArtifacts out;
    Vector theta;
    int iterations = 0;
    if (cfg.training.closed_form) {
        if (cfg.penalty.kind == PenaltyKind::l1 && cfg.penalty.lambda > 0.0) {
            const Matrix phi = expand(spec, d.x);
            const LassoResult lasso = lasso_cd(phi, y, cfg.penalty.lambda);
            theta = lasso.params.theta;
            iterations = lasso.sweeps;
        } else {
            const double lambda =
                cfg.penalty.kind == PenaltyKind::l2 ? cfg.penalty.lambda : 0.0;
            theta = fit_lbfm_closed(spec, d.x, y, lambda).theta;
        }
    } else {
        GdConfig gd = cfg.training.gd;
        gd.seed = effective_seed(gd.seed);
        const Matrix phi = expand(spec, d.x);
        GlmGdFit fit =
            fit_glm_gd(GlmKind::linear, phi, y, Matrix(), gd, Vector(phi.cols()));
        theta = std::get<LinearParams>(fit.params).theta;
        iterations = static_cast<int>(fit.trace.entries.size());
        out.trace = std::move(fit.trace);
    }
    const Vector yhat = predict_lbfm(spec, LinearParams{theta}, d.x);
    const std::vector<std::string> names = basis_column_names(spec, d.cols());
    out.model["model"] = "lbfm";
    out.model["basis"] = io::basis_spec_to_json(spec);
    out.model["theta"] = theta.values();
    out.model["label_kind"] = "real";
    out.report["model"] = "lbfm";
    out.report["iterations"] = iterations;
    out.report["final_loss"] = report_loss_real(yhat, y);
    out.report["coefficients"] = coefficient_table(names, theta);
    return out;
}

inline FitArtifacts fit_kernel_ridge(const RunConfig& cfg, const Dataset& d) {
    if (!d.y_real) throw ConfigError("kernel-ridge model needs real labels");
    if (cfg.model.kernel.is_null()) throw ConfigError("kernel-ridge needs a 'kernel' section");
    const KernelSpec spec = io::kernel_spec_from_json(cfg.model.kernel);
    const double lambda = cfg.penalty.lambda;
    const KernelRidgeModel model = kernel_ridge_fit(spec, d.x, *d.y_real, lambda);
    const Vector yhat = kernel_ridge_predict(spec, d.x, model.alpha, d.x);
    FitArtifacts out;
    out.model["model"] = "kernel-ridge";
    out.model["kernel"] = io::kernel_spec_to_json(spec);
    out.model["lambda"] = lambda;
    out.model["jitter"] = model.jitter;
    out.model["alpha"] = model.alpha.values();
    out.model["x_train"] = io::matrix_to_json(d.x);
    out.model["label_kind"] = "real";
    out.report["model"] = "kernel-ridge";
    out.report["iterations"] = 0;
    out.report["final_loss"] = report_loss_real(yhat, *d.y_real);
    return out;
}

inline OutputKind default_output_kind(const Dataset& d) {
    if (d.y_real) return OutputKind::linear;
    return d.num_classes() <= 2 ? OutputKind::logistic : OutputKind::softmax;
}

inline FitArtifacts fit_mlp_model(const RunConfig& cfg, const Dataset& d) {
    const OutputKind output = cfg.model.output.empty()
                                  ? default_output_kind(d)
                                  : io::output_kind_from_name(cfg.model.output);
    std::vector<std::size_t> sizes;
    sizes.push_back(d.cols());
    for (std::size_t h : cfg.model.hidden) sizes.push_back(h);
    sizes.push_back(output == OutputKind::softmax ? static_cast<std::size_t>(d.num_classes())
                                                  : 1);
    GdConfig gd = cfg.training.gd;
    gd.seed = effective_seed(gd.seed);
    Rng init_rng(gd.seed);
    MlpNet net = init_mlp(sizes, io::activation_from_name(cfg.model.activation), output,
                          init_rng, cfg.model.init_scale);
    const LossKind loss = output == OutputKind::linear ? LossKind::mse : LossKind::xent;
    MlpTrainResult result = train_mlp(std::move(net), d, gd, loss);

    FitArtifacts out;
    out.model["model"] = "mlp";
    out.model["net"] = io::mlp_to_json(result.net);
    out.model["label_kind"] = d.y_real ? "real" : "class";
    out.report["model"] = "mlp";
    out.report["iterations"] = static_cast<int>(result.trace.entries.size());
    out.report["parameter_count"] = result.net.parameter_count();
    if (d.y_real) {
        Vector yhat(d.rows());
        for (std::size_t i = 0; i < d.rows(); ++i) {
            yhat[i] = forward(result.net, d.x.row(i)).yhat[0];
        }
        out.report["final_loss"] = report_loss_real(yhat, *d.y_real);
    } else {
        const int k = d.num_classes();
        Matrix probs(d.rows(), static_cast<std::size_t>(k));
        for (std::size_t i = 0; i < d.rows(); ++i) {
            const Vector yhat = forward(result.net, d.x.row(i)).yhat;
            if (output == OutputKind::logistic) {
                probs(i, 0) = 1.0 - yhat[0];
                probs(i, 1) = yhat[0];
            } else {
                for (std::size_t c = 0; c < yhat.size(); ++c) probs(i, c) = yhat[c];
            }
        }
        out.report["final_loss"] = cross_entropy(probs, one_hot_encode(*d.y_class, k));
    }
    out.trace = std::move(result.trace);
    return out;
}

inline FitArtifacts fit_model(const RunConfig& cfg, const Dataset& d) {
    if (cfg.model.kind == "linear") return fit_linear_family(cfg, d);
    if (cfg.model.kind == "logistic" || cfg.model.kind == "softmax") {
        return fit_logistic_or_softmax(cfg, d);
    }
    if (cfg.model.kind == "lbfm") return fit_lbfm(cfg, d);
    if (cfg.model.kind == "kernel-ridge") return fit_kernel_ridge(cfg, d);
    if (cfg.model.kind == "mlp") return fit_mlp_model(cfg, d);
    throw ConfigError("unknown model kind '" + cfg.model.kind + "'");
}

// -------------------------------------------------------------- prediction

struct Predictions {
    Vector values;           // real predictions (regression models)
    std::vector<int> classes; // class decisions (classifier models)
    Matrix probabilities;     // per-class probabilities (classifiers)
    bool is_classifier = false;
};

inline Predictions predict_with_model(const json& model, const Dataset& d) {
    const std::string kind = model.at("model").get<std::string>();
    Predictions out;
    if (kind == "linear") {
        const LinearParams p{Vector::from(model.at("theta").get<std::vector<double>>())};
        out.values = predict_linear(p, add_bias_column(d.x));
        return out;
    }
    if (kind == "lbfm") {
        const LinearParams p{Vector::from(model.at("theta").get<std::vector<double>>())};
        const BasisSpec spec = io::basis_spec_from_json(model.at("basis"));
        out.values = predict_lbfm(spec, p, d.x);
        return out;
    }
    if (kind == "kernel-ridge") {
        const KernelSpec spec = io::kernel_spec_from_json(model.at("kernel"));
        const Matrix x_train = io::matrix_from_json(model.at("x_train"));
        const Vector alpha = Vector::from(model.at("alpha").get<std::vector<double>>());
        out.values = kernel_ridge_predict(spec, x_train, alpha, d.x);
        return out;
    }
    if (kind == "logistic") {
        const LinearParams p{Vector::from(model.at("theta").get<std::vector<double>>())};
        const Matrix aug = add_bias_column(d.x);
        out.is_classifier = true;
        out.probabilities = Matrix(d.rows(), 2);
        out.classes.resize(d.rows());
        out.values = Vector(d.rows());
        for (std::size_t i = 0; i < d.rows(); ++i) {
            const double p1 = predict_logistic(p, aug.row(i));
            out.probabilities(i, 0) = 1.0 - p1;
            out.probabilities(i, 1) = p1;
            out.classes[i] = logistic_decision(p1);
            out.values[i] = p1;
        }
        return out;
    }
    if (kind == "softmax") {
        const SoftmaxParams p{io::matrix_from_json(model.at("thetas"))};
        const Matrix aug = add_bias_column(d.x);
        out.is_classifier = true;
        out.probabilities = predict_softmax(p, aug);
        out.classes.resize(d.rows());
        for (std::size_t i = 0; i < d.rows(); ++i) {
            out.classes[i] = argmax_index(out.probabilities.row(i));
        }
        return out;
    }
    if (kind == "mlp") {
        const MlpNet net = io::mlp_from_json(model.at("net"));
        if (net.output_kind == OutputKind::linear) {
            out.values = Vector(d.rows());
            for (std::size_t i = 0; i < d.rows(); ++i) {
                out.values[i] = forward(net, d.x.row(i)).yhat[0];
            }
            return out;
        }
        out.is_classifier = true;
        const std::size_t k = net.output_kind == OutputKind::logistic ? 2 : net.output_dim();
        out.probabilities = Matrix(d.rows(), k);
        out.classes.resize(d.rows());
        out.values = Vector(d.rows());
        for (std::size_t i = 0; i < d.rows(); ++i) {
            const Vector yhat = forward(net, d.x.row(i)).yhat;
            if (net.output_kind == OutputKind::logistic) {
                out.probabilities(i, 0) = 1.0 - yhat[0];
                out.probabilities(i, 1) = yhat[0];
                out.classes[i] = logistic_decision(yhat[0]);
                out.values[i] = yhat[0];
            } else {
                for (std::size_t c = 0; c < k; ++c) out.probabilities(i, c) = yhat[c];
                out.classes[i] = argmax_index(yhat);
            }
        }
        return out;
    }
    throw ConfigError("model file has unknown kind '" + kind + "'");
}

inline json evaluate_predictions(const Predictions& pred, const Dataset& d) {
    json j;
    if (!pred.is_classifier) {
        if (!d.y_real) throw ConfigError("eval: regression model against class labels");
        const RegressionMetrics m = regression_metrics(pred.values, *d.y_real);
        j["mse"] = m.mse;
        j["rmse"] = m.rmse;
        j["mae"] = m.mae;
        j["mape"] = m.mape;
        j["mape_defined"] = m.mape_defined;
        return j;
    }
    if (!d.y_class) throw ConfigError("eval: classifier model against real labels");
    const int k = static_cast<int>(pred.probabilities.cols());
    const ClassificationMetrics m = classification_metrics(pred.classes, *d.y_class, 1);
    j["accuracy"] = m.accuracy;
    j["precision"] = m.precision;
    j["recall"] = m.recall;
    j["f1"] = m.f1;
    j["counts"] = {{"tp", m.counts.tp},
                   {"fp", m.counts.fp},
                   {"tn", m.counts.tn},
                   {"fn", m.counts.fn}};
    j["precision_degenerate"] = m.precision_degenerate;
    j["recall_degenerate"] = m.recall_degenerate;
    j["cross_entropy"] = cross_entropy(pred.probabilities, one_hot_encode(*d.y_class, k));
    if (k == 2) {
        bool both = false;
        for (int y : *d.y_class)
            if (y == 1) both = true;
        bool zero = false;
        for (int y : *d.y_class)
            if (y == 0) zero = true;
        if (both && zero) j["auc"] = auc(pred.probabilities.col(1), *d.y_class);
    }
    return j;
}

// ------------------------------------------------------------- subcommands

inline void ensure_dir(const std::string& dir) {
    std::filesystem::create_directories(dir);
}

inline int cmd_synth(const std::string& kind, const std::string& out_path, std::size_t m,
                     double noise, std::size_t m_per_class, const std::string& mu0,
                     const std::string& mu1, std::uint64_t seed) {
    DataConfig cfg;
    cfg.generator = kind;
    cfg.m = m;
    cfg.noise_std = noise;
    cfg.m_per_class = m_per_class;
    cfg.mu0 = parse_number_list(mu0);
    cfg.mu1 = parse_number_list(mu1);
    cfg.seed = seed;
    const Dataset d = load_configured_dataset(cfg);
    const std::string label = kind == "rental" ? "rent" : "y";
    save_csv(d, out_path, label);
    return kExitOk;
}

inline int cmd_fit(const RunConfig& cfg) {
    const Dataset d = load_configured_dataset(cfg.data);
    const FitArtifacts artifacts = fit_model(cfg, d);
    ensure_dir(cfg.output_dir);
    const std::filesystem::path dir(cfg.output_dir);
    io::write_json_file(artifacts.model, (dir / "model.json").string());
    io::write_json_file(artifacts.report, (dir / "fit_report.json").string());
    if (artifacts.trace) {
        std::ofstream trace_out(dir / "trace.csv");
        artifacts.trace->to_csv(trace_out);
    }
    return kExitOk;
}

inline int cmd_eval(const std::string& model_path, const DataConfig& data,
                    const std::string& out_path) {
    const json model = io::read_json_file(model_path);
    DataConfig data_cfg = data;
    if (model.value("label_kind", "real") == "class") data_cfg.label_kind = LabelKind::cls;
    const Dataset d = load_configured_dataset(data_cfg);
    const Predictions pred = predict_with_model(model, d);
    const json metrics = evaluate_predictions(pred, d);
    io::write_json_file(metrics, out_path);
    return kExitOk;
}

inline int cmd_sweep_penalty(const RunConfig& cfg, bool standardize_features) {
    Dataset d = load_configured_dataset(cfg.data);
    if (!d.y_real) throw ConfigError("sweep: penalty paths need real labels");
    std::vector<std::string> names = augmented_names(d);
    if (standardize_features) {
        d = standardize(d).dataset;
    }
    const Dataset aug = with_bias(d);
    const Vector& y = *d.y_real;
    const std::vector<double> grid =
        default_lambda_grid(aug.x, y, cfg.penalty.grid_count, cfg.penalty.grid_min_ratio);
    const std::vector<PathPoint> path =
        regularization_path(aug.x, y, cfg.penalty.kind, grid);
    ensure_dir(cfg.output_dir);
    const std::filesystem::path dir(cfg.output_dir);
    {
        std::ofstream out(dir / "path.csv");
        path_to_csv(path, names, out);
    }
    // validation score per lambda on the same folds
    Rng rng(cfg.cv.seed);
    FoldPlan plan;
    if (cfg.cv.kind == "loocv") plan = split_loocv(d.rows(), rng);
    else if (cfg.cv.kind == "kfold") plan = split_kfold(d.rows(), cfg.cv.k, rng);
    else if (cfg.cv.kind == "holdout") plan = split_holdout(d.rows(), cfg.cv.frac, rng);
    else throw ConfigError("unknown cv kind '" + cfg.cv.kind + "'");
    const PenaltyKind pen = cfg.penalty.kind;
    const auto selection = select_hyperparameter<double>(
        d, plan, grid,
        [pen](double lambda) {
            return [pen, lambda](const Dataset& train) {
                const Matrix x_aug = add_bias_column(train.x);
                const Vector theta =
                    pen == PenaltyKind::l2
                        ? fit_ridge_closed(x_aug, *train.y_real, lambda).theta
                        : lasso_cd(x_aug, *train.y_real, lambda).params.theta;
                return [theta](const Matrix& x) {
                    return predict_linear(LinearParams{theta}, add_bias_column(x));
                };
            };
        },
        [](const Vector& yhat, const Vector& yy) {
            return regression_metrics(yhat, yy).rmse;
        });
    {
        std::ofstream out(dir / "cv_scores.csv");
        score_table_to_csv(selection.table, out);
    }
    json summary;
    summary["penalty"] = penalty_kind_name(cfg.penalty.kind);
    summary["best_lambda"] = selection.best;
    summary["standardized"] = standardize_features;
    io::write_json_file(summary, (dir / "sweep_summary.json").string());
    return kExitOk;
}

inline int cmd_sweep_degrees(const RunConfig& cfg, const std::vector<int>& degrees) {
    const Dataset d = load_configured_dataset(cfg.data);
    if (!d.y_real) throw ConfigError("sweep: degree sweeps need real labels");
    Rng rng(cfg.cv.seed);
    FoldPlan plan;
    if (cfg.cv.kind == "loocv") plan = split_loocv(d.rows(), rng);
    else if (cfg.cv.kind == "kfold") plan = split_kfold(d.rows(), cfg.cv.k, rng);
    else if (cfg.cv.kind == "holdout") plan = split_holdout(d.rows(), cfg.cv.frac, rng);
    else throw ConfigError("unknown cv kind '" + cfg.cv.kind + "'");
    // tiny uniform ridge keeps high degrees solvable on reduced folds
    const double lambda = cfg.penalty.kind == PenaltyKind::l2 ? cfg.penalty.lambda : 1e-12;
    const auto selection = select_hyperparameter<int>(
        d, plan, degrees,
        [lambda](int degree) {
            return [degree, lambda](const Dataset& train) {
                BasisSpec spec;
                spec.kind = BasisKind::polynomial;
                spec.degree = degree;
                const LinearParams params =
                    fit_lbfm_closed(spec, train.x, *train.y_real, lambda);
                return [spec, params](const Matrix& x) {
                    return predict_lbfm(spec, params, x);
                };
            };
        },
        [](const Vector& yhat, const Vector& yy) {
            return regression_metrics(yhat, yy).rmse;
        });
    ensure_dir(cfg.output_dir);
    const std::filesystem::path dir(cfg.output_dir);
    {
        std::ofstream out(dir / "cv_scores.csv");
        score_table_to_csv(selection.table, out);
    }
    json summary;
    summary["best_degree"] = selection.best;
    io::write_json_file(summary, (dir / "sweep_summary.json").string());
    return kExitOk;
}

// finite-difference gradient audit over random draws; glm families plus mlp
inline json gradcheck_report(std::uint64_t seed, int draws) {
    Rng rng(seed);
    double worst_glm = 0.0;
    double worst_nn = 0.0;
    auto rel = [](double a, double b) {
        return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
    };

    const int per_family = std::max(1, draws / 5);
    for (int trial = 0; trial < per_family; ++trial) {
        const std::size_t m = 6 + rng.next_below(6);
        const std::size_t n = 2 + rng.next_below(3);
        Matrix x(m, n);
        Vector y_real(m);
        Vector y_bin(m);
        for (std::size_t i = 0; i < m; ++i) {
            x(i, 0) = 1.0;
            for (std::size_t j = 1; j < n; ++j) x(i, j) = rng.uniform(-1.0, 1.0);
            y_real[i] = rng.normal();
            y_bin[i] = static_cast<double>(rng.next_below(2));
        }
        Vector theta(n);
        for (std::size_t j = 0; j < n; ++j) theta[j] = rng.uniform(-1.5, 1.5);
        for (GlmKind kind : {GlmKind::linear, GlmKind::logistic}) {
            const Vector& y = kind == GlmKind::linear ? y_real : y_bin;
            const Vector analytic =
                gradient(kind, LinearParams{theta}, x, y, Reduction::mean);
            for (std::size_t j = 0; j < n; ++j) {
                const double h = 1e-6 * (1.0 + std::fabs(theta[j]));
                Vector up = theta;
                Vector down = theta;
                up[j] += h;
                down[j] -= h;
                const double lu =
                    kind == GlmKind::linear
                        ? linear_loss(LinearParams{up}, x, y, Reduction::mean)
                        : logistic_loss(LinearParams{up}, x, y, Reduction::mean);
                const double ld =
                    kind == GlmKind::linear
                        ? linear_loss(LinearParams{down}, x, y, Reduction::mean)
                        : logistic_loss(LinearParams{down}, x, y, Reduction::mean);
                worst_glm = std::max(worst_glm, rel(analytic[j], (lu - ld) / (2.0 * h)));
            }
        }
        // softmax
        const std::size_t k = 3;
        std::vector<int> ids(m);
        for (std::size_t i = 0; i < m; ++i) ids[i] = static_cast<int>(rng.next_below(k));
        const Matrix onehot = one_hot_encode(ids, static_cast<int>(k));
        Matrix thetas(n, k);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t c = 0; c < k; ++c) thetas(j, c) = rng.uniform(-1.0, 1.0);
        const Matrix analytic = gradient(SoftmaxParams{thetas}, x, onehot, Reduction::mean);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t c = 0; c < k; ++c) {
                const double h = 1e-6 * (1.0 + std::fabs(thetas(j, c)));
                Matrix up = thetas;
                Matrix down = thetas;
                up(j, c) += h;
                down(j, c) -= h;
                const double fd =
                    (softmax_loss(SoftmaxParams{up}, x, onehot, Reduction::mean) -
                     softmax_loss(SoftmaxParams{down}, x, onehot, Reduction::mean)) /
                    (2.0 * h);
                worst_glm = std::max(worst_glm, rel(analytic(j, c), fd));
            }
        // lbfm: polynomial features, linear gradient
        BasisSpec spec;
        spec.kind = BasisKind::polynomial;
        spec.degree = 3;
        Matrix raw(m, 1);
        for (std::size_t i = 0; i < m; ++i) raw(i, 0) = rng.uniform(-1.0, 1.0);
        const Matrix phi = expand(spec, raw);
        Vector ptheta(phi.cols());
        for (std::size_t j = 0; j < ptheta.size(); ++j) ptheta[j] = rng.uniform(-1.0, 1.0);
        const Vector panalytic =
            gradient(GlmKind::linear, LinearParams{ptheta}, phi, y_real, Reduction::mean);
        for (std::size_t j = 0; j < ptheta.size(); ++j) {
            const double h = 1e-6 * (1.0 + std::fabs(ptheta[j]));
            Vector up = ptheta;
            Vector down = ptheta;
            up[j] += h;
            down[j] -= h;
            const double fd =
                (linear_loss(LinearParams{up}, phi, y_real, Reduction::mean) -
                 linear_loss(LinearParams{down}, phi, y_real, Reduction::mean)) /
                (2.0 * h);
            worst_glm = std::max(worst_glm, rel(panalytic[j], fd));
        }
    }

    for (int trial = 0; trial < per_family; ++trial) {
        const Activation act = trial % 2 == 0 ? Activation::sigmoid : Activation::tanh;
        const std::size_t width = 3 + rng.next_below(4);
        MlpNet net = init_mlp({2, width, width, 1}, act, OutputKind::linear, rng);
        Vector x{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        const Vector y{rng.normal()};
        const BackpropResult bp = backprop(net, x, y, LossKind::mse);
        Vector flat = flatten(net);
        std::vector<double> analytic;
        for (const Matrix& g : bp.grads)
            for (double v : g.values()) analytic.push_back(v);
        for (std::size_t p = 0; p < flat.size(); ++p) {
            const double h = 1e-6 * (1.0 + std::fabs(flat[p]));
            Vector up = flat;
            Vector down = flat;
            up[p] += h;
            down[p] -= h;
            unflatten(net, up);
            const double lu = mlp_sample_loss(net, x, y, LossKind::mse);
            unflatten(net, down);
            const double ld = mlp_sample_loss(net, x, y, LossKind::mse);
            unflatten(net, flat);
            worst_nn = std::max(worst_nn, rel(analytic[p], (lu - ld) / (2.0 * h)));
        }
    }

    const double tolerance = 1e-5;
    json report;
    report["draws"] = draws;
    report["seed"] = seed;
    report["tolerance"] = tolerance;
    report["glm"] = {{"max_rel_error", worst_glm}, {"pass", worst_glm < tolerance}};
    report["nn"] = {{"max_rel_error", worst_nn}, {"pass", worst_nn < tolerance}};
    report["pass"] = worst_glm < tolerance && worst_nn < tolerance;
    return report;
}

inline int cmd_gradcheck(const std::string& out_path, std::uint64_t seed, int draws) {
    const json report = gradcheck_report(seed, draws);
    io::write_json_file(report, out_path);
    return report.at("pass").get<bool>() ? kExitOk : kExitNumeric;
}

} // namespace detail

// Entry point shared by the binary and the tests. args excludes argv[0].
inline int run(const std::vector<std::string>& args) {
    CLI::App app{"regresslab: small-scale regression analysis toolkit"};
    app.require_subcommand(0, 1);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a dataset CSV");
    std::string synth_kind = "sine";
    std::string synth_out = "data.csv";
    std::size_t synth_m = 10;
    double synth_noise = 0.2;
    std::size_t synth_mpc = 100;
    std::string synth_mu0 = "-1,0";
    std::string synth_mu1 = "1,0";
    std::uint64_t synth_seed = 42;
    synth->add_option("--kind", synth_kind, "sine | two-gaussians | rental")
        ->check(CLI::IsMember({"sine", "two-gaussians", "rental"}));
    synth->add_option("--out", synth_out, "output CSV path")->required();
    synth->add_option("--m", synth_m, "sample count (sine)");
    synth->add_option("--noise", synth_noise, "noise std (sine)");
    synth->add_option("--m-per-class", synth_mpc, "samples per class (two-gaussians)");
    synth->add_option("--mu0", synth_mu0, "class-0 mean, comma separated");
    synth->add_option("--mu1", synth_mu1, "class-1 mean, comma separated");
    synth->add_option("--seed", synth_seed, "generator seed");

    // fit
    auto* fit = app.add_subcommand("fit", "fit a model and write model/report JSON");
    std::string fit_config;
    std::string fit_model = "linear";
    std::string fit_data;
    std::string fit_label;
    bool fit_closed_form = false;
    bool fit_gd = false;
    std::string fit_out_dir = ".";
    double fit_eta = 0.1;
    int fit_iters = 10000;
    double fit_delta = 1e-8;
    std::string fit_strategy = "batch";
    std::size_t fit_batch = 8;
    std::uint64_t fit_seed = 0;
    std::string fit_penalty = "none";
    double fit_lambda = 0.0;
    int fit_degree = 3;
    std::string fit_basis = "polynomial";
    std::string fit_kernel = "rbf";
    double fit_bandwidth = 0.5;
    std::string fit_hidden = "20";
    std::string fit_activation = "tanh";
    std::string fit_label_kind;
    fit->add_option("--config", fit_config, "JSON run configuration");
    fit->add_option("--model", fit_model,
                    "linear | logistic | softmax | lbfm | kernel-ridge | mlp");
    fit->add_option("--data", fit_data, "training CSV");
    fit->add_option("--label", fit_label, "label column (default: last column)");
    fit->add_flag("--closed-form", fit_closed_form, "use the closed-form estimator");
    fit->add_flag("--gd", fit_gd, "use gradient descent");
    fit->add_option("--out-dir", fit_out_dir, "output directory");
    fit->add_option("--eta", fit_eta, "learning rate");
    fit->add_option("--iters", fit_iters, "max iterations");
    fit->add_option("--delta", fit_delta, "loss-decrease stopping threshold");
    fit->add_option("--strategy", fit_strategy, "batch | sgd | minibatch");
    fit->add_option("--batch-size", fit_batch, "minibatch size");
    fit->add_option("--seed", fit_seed, "training seed");
    fit->add_option("--penalty", fit_penalty, "none | l1 | l2");
    fit->add_option("--lambda", fit_lambda, "penalty strength");
    fit->add_option("--degree", fit_degree, "polynomial degree (lbfm)");
    fit->add_option("--basis", fit_basis, "polynomial | rbf | sigmoid | fourier (lbfm)");
    fit->add_option("--kernel", fit_kernel, "kernel kind (kernel-ridge)");
    fit->add_option("--bandwidth", fit_bandwidth, "kernel bandwidth");
    fit->add_option("--hidden", fit_hidden, "mlp hidden sizes, comma separated");
    fit->add_option("--activation", fit_activation, "mlp activation");
    fit->add_option("--label-kind", fit_label_kind, "real | class (default: by model kind)");

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate a saved model on a dataset");
    std::string eval_model;
    std::string eval_data;
    std::string eval_label;
    std::string eval_out = "metrics.json";
    eval->add_option("--model", eval_model, "model JSON")->required();
    eval->add_option("--data", eval_data, "dataset CSV")->required();
    eval->add_option("--label", eval_label, "label column (default: last column)");
    eval->add_option("--out", eval_out, "metrics JSON path");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "lambda paths or degree sweeps with CV");
    std::string sweep_config;
    std::string sweep_penalty;
    std::string sweep_degrees;
    std::string sweep_data;
    std::string sweep_label;
    std::string sweep_out_dir = ".";
    std::string sweep_cv = "loocv";
    int sweep_folds = 5;
    std::uint64_t sweep_seed = 0;
    bool sweep_no_standardize = false;
    int sweep_grid = 60;
    sweep->add_option("--config", sweep_config, "JSON run configuration");
    sweep->add_option("--penalty", sweep_penalty, "l1 | l2 path sweep");
    sweep->add_option("--degrees", sweep_degrees, "degree list, e.g. 0,1,...,9 or 0:9");
    sweep->add_option("--data", sweep_data, "dataset CSV");
    sweep->add_option("--label", sweep_label, "label column (default: last column)");
    sweep->add_option("--out-dir", sweep_out_dir, "output directory");
    sweep->add_option("--cv", sweep_cv, "loocv | kfold | holdout");
    sweep->add_option("--folds", sweep_folds, "fold count for kfold");
    sweep->add_option("--seed", sweep_seed, "fold seed");
    sweep->add_flag("--no-standardize", sweep_no_standardize,
                    "skip feature standardization before l1 paths");
    sweep->add_option("--grid", sweep_grid, "lambda grid size");

    // gradcheck
    auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference gradient audit");
    std::string gradcheck_out = "gradcheck.json";
    std::uint64_t gradcheck_seed = 1;
    int gradcheck_draws = 500;
    gradcheck->add_option("--out", gradcheck_out, "report JSON path");
    gradcheck->add_option("--seed", gradcheck_seed, "audit seed");
    gradcheck->add_option("--draws", gradcheck_draws, "number of random draws");

    auto* version = app.add_subcommand("version", "print the toolkit version");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help() << std::flush;
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        std::cerr << "regresslab: " << e.what() << '\n';
        std::cerr << app.help() << std::flush;
        return kExitConfig;
    }

    try {
        if (version->parsed()) {
            std::cout << "regresslab " << kVersion << '\n';
            return kExitOk;
        }
        if (synth->parsed()) {
            return detail::cmd_synth(synth_kind, synth_out, synth_m, synth_noise, synth_mpc,
                                     synth_mu0, synth_mu1,
                                     detail::effective_seed(synth_seed));
        }
        if (fit->parsed()) {
            detail::RunConfig cfg;
            if (!fit_config.empty()) {
                cfg = detail::run_config_from_json(io::read_json_file(fit_config));
            } else {
                if (fit_data.empty()) {
                    throw ConfigError("fit: provide --config or --data");
                }
                cfg.data.path = fit_data;
                cfg.data.label = fit_label;
                cfg.model.kind = fit_model;
                if (!fit_label_kind.empty()) {
                    if (fit_label_kind == "real") cfg.data.label_kind = LabelKind::real;
                    else if (fit_label_kind == "class") cfg.data.label_kind = LabelKind::cls;
                    else throw ConfigError("fit: --label-kind must be real or class");
                } else {
                    cfg.data.label_kind = (fit_model == "logistic" || fit_model == "softmax")
                                              ? LabelKind::cls
                                              : LabelKind::real;
                }
                cfg.training.closed_form = !fit_gd;
                if (fit_gd) {
                    cfg.training.gd.eta = fit_eta;
                    cfg.training.gd.stop.max_iters = fit_iters;
                    cfg.training.gd.stop.delta = fit_delta;
                    cfg.training.gd.seed = fit_seed;
                    if (fit_strategy == "batch") {
                        cfg.training.gd.strategy.kind = StrategyKind::batch;
                    } else if (fit_strategy == "sgd") {
                        cfg.training.gd.strategy.kind = StrategyKind::stochastic;
                    } else if (fit_strategy == "minibatch") {
                        cfg.training.gd.strategy.kind = StrategyKind::minibatch;
                        cfg.training.gd.strategy.batch_size = fit_batch;
                    } else {
                        throw ConfigError("fit: unknown strategy '" + fit_strategy + "'");
                    }
                }
                cfg.penalty.kind = detail::penalty_kind_from_name(fit_penalty);
                cfg.penalty.lambda = fit_lambda;
                cfg.output_dir = fit_out_dir;
                if (fit_model == "lbfm") {
                    cfg.model.basis = json{{"kind", fit_basis}, {"degree", fit_degree}};
                    if (fit_basis != "polynomial") {
                        cfg.model.basis = json{{"kind", fit_basis}, {"count", fit_degree}};
                    }
                }
                if (fit_model == "kernel-ridge") {
                    cfg.model.kernel = json{{"kind", fit_kernel}, {"bandwidth", fit_bandwidth}};
                    if (fit_kernel == "linear") cfg.model.kernel = json{{"kind", "linear"}};
                }
                if (fit_model == "mlp") {
                    cfg.model.hidden.clear();
                    const Vector sizes = detail::parse_number_list(fit_hidden);
                    for (double s : sizes) {
                        cfg.model.hidden.push_back(static_cast<std::size_t>(s));
                    }
                    cfg.model.activation = fit_activation;
                    cfg.training.closed_form = false;
                    cfg.training.gd.eta = fit_eta;
                    cfg.training.gd.stop.max_iters = fit_iters;
                    cfg.training.gd.stop.delta = fit_delta;
                    cfg.training.gd.seed = fit_seed;
                }
            }
            if (cfg.data.label.empty() && !cfg.data.path.empty()) {
                // default label column: last column of the header
                std::ifstream header_in(cfg.data.path);
                if (!header_in) throw SchemaError("csv: cannot open '" + cfg.data.path + "'");
                std::string header;
                std::getline(header_in, header);
                if (!header.empty() && header.back() == '\r') header.pop_back();
                const auto pos = header.find_last_of(',');
                if (pos == std::string::npos) {
                    throw SchemaError("csv: header has a single column, no features");
                }
                cfg.data.label = header.substr(pos + 1);
            }
            return detail::cmd_fit(cfg);
        }
        if (eval->parsed()) {
            detail::DataConfig data;
            data.path = eval_data;
            if (eval_label.empty()) {
                std::ifstream header_in(eval_data);
                if (!header_in) throw SchemaError("csv: cannot open '" + eval_data + "'");
                std::string header;
                std::getline(header_in, header);
                if (!header.empty() && header.back() == '\r') header.pop_back();
                const auto pos = header.find_last_of(',');
                if (pos == std::string::npos) {
                    throw SchemaError("csv: header has a single column, no features");
                }
                data.label = header.substr(pos + 1);
            } else {
                data.label = eval_label;
            }
            return detail::cmd_eval(eval_model, data, eval_out);
        }
        if (sweep->parsed()) {
            detail::RunConfig cfg;
            if (!sweep_config.empty()) {
                cfg = detail::run_config_from_json(io::read_json_file(sweep_config));
            } else {
                if (sweep_data.empty()) throw ConfigError("sweep: provide --config or --data");
                cfg.data.path = sweep_data;
                cfg.data.label = sweep_label.empty() ? "y" : sweep_label;
                cfg.cv.kind = sweep_cv;
                cfg.cv.k = sweep_folds;
                cfg.cv.seed = sweep_seed;
                cfg.output_dir = sweep_out_dir;
                cfg.penalty.grid_count = sweep_grid;
                if (!sweep_penalty.empty()) {
                    cfg.penalty.kind = detail::penalty_kind_from_name(sweep_penalty);
                }
            }
            if (cfg.penalty.kind != PenaltyKind::none && sweep_degrees.empty()) {
                const bool standardize_features =
                    sweep_no_standardize ? false : cfg.penalty.standardize;
                return detail::cmd_sweep_penalty(cfg, standardize_features);
            }
            std::vector<int> degrees;
            if (sweep_degrees.empty()) {
                for (int k = 0; k <= 9; ++k) degrees.push_back(k);
            } else if (sweep_degrees.find(':') != std::string::npos) {
                const auto colon = sweep_degrees.find(':');
                const int lo = std::stoi(sweep_degrees.substr(0, colon));
                const int hi = std::stoi(sweep_degrees.substr(colon + 1));
                for (int k = lo; k <= hi; ++k) degrees.push_back(k);
            } else {
                const Vector values = detail::parse_number_list(sweep_degrees);
                for (double v : values) degrees.push_back(static_cast<int>(v));
            }
            return detail::cmd_sweep_degrees(cfg, degrees);
        }
        if (gradcheck->parsed()) {
            return detail::cmd_gradcheck(gradcheck_out,
                                         detail::effective_seed(gradcheck_seed),
                                         gradcheck_draws);
        }
        std::cerr << "regresslab: missing subcommand\n" << app.help() << std::flush;
        return kExitConfig;
    } catch (const NumericError& e) {
        std::cerr << "regresslab: numerical failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const Error& e) {
        std::cerr << "regresslab: " << e.what() << '\n';
        return kExitConfig;
    } catch (const json::exception& e) {
        std::cerr << "regresslab: config error: " << e.what() << '\n';
        return kExitConfig;
    }
}

inline int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

} // namespace cli
} // namespace regresslab

#endif
