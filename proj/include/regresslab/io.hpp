#ifndef REGRESSLAB_IO_HPP
#define REGRESSLAB_IO_HPP

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "regresslab/basis.hpp"
#include "regresslab/errors.hpp"
#include "regresslab/glm.hpp"
#include "regresslab/kernel.hpp"
#include "regresslab/nn.hpp"

namespace regresslab {

using json = nlohmann::json;

namespace io {

inline json vector_to_json(const Vector& v) {
    return json(v.values());
}

inline Vector vector_from_json(const json& j) {
    return Vector::from(j.get<std::vector<double>>());
}

inline json matrix_to_json(const Matrix& m) {
    json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    j["data"] = m.values(); // row-major
    return j;
}

inline Matrix matrix_from_json(const json& j) {
    return Matrix::from(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                        j.at("data").get<std::vector<double>>());
}

inline std::string basis_kind_name(BasisKind kind) {
    switch (kind) {
        case BasisKind::polynomial: return "polynomial";
        case BasisKind::rbf: return "rbf";
        case BasisKind::sigmoid: return "sigmoid";
        case BasisKind::fourier: return "fourier";
    }
    throw ConfigError("unknown basis kind");
}

inline BasisKind basis_kind_from_name(const std::string& name) {
    if (name == "polynomial") return BasisKind::polynomial;
    if (name == "rbf") return BasisKind::rbf;
    if (name == "sigmoid") return BasisKind::sigmoid;
    if (name == "fourier") return BasisKind::fourier;
    throw ConfigError("unknown basis kind '" + name + "'");
}

inline json basis_spec_to_json(const BasisSpec& spec) {
    json j;
    j["kind"] = basis_kind_name(spec.kind);
    switch (spec.kind) {
        case BasisKind::polynomial:
            j["degree"] = spec.degree;
            break;
        case BasisKind::rbf:
            j["centers"] = matrix_to_json(spec.centers);
            j["width"] = spec.width;
            break;
        case BasisKind::sigmoid:
            j["weights"] = matrix_to_json(spec.weights);
            j["offsets"] = vector_to_json(spec.offsets);
            break;
        case BasisKind::fourier:
            j["frequencies"] = matrix_to_json(spec.frequencies);
            break;
    }
    return j;
}

inline BasisSpec basis_spec_from_json(const json& j) {
    BasisSpec spec;
    spec.kind = basis_kind_from_name(j.at("kind").get<std::string>());
    switch (spec.kind) {
        case BasisKind::polynomial:
            spec.degree = j.at("degree").get<int>();
            break;
        case BasisKind::rbf:
            spec.centers = matrix_from_json(j.at("centers"));
            spec.width = j.at("width").get<double>();
            break;
        case BasisKind::sigmoid:
            spec.weights = matrix_from_json(j.at("weights"));
            spec.offsets = vector_from_json(j.at("offsets"));
            break;
        case BasisKind::fourier:
            spec.frequencies = matrix_from_json(j.at("frequencies"));
            break;
    }
    spec.validate();
    return spec;
}

inline std::string kernel_kind_name(KernelKind kind) {
    switch (kind) {
        case KernelKind::linear: return "linear";
        case KernelKind::polynomial: return "polynomial";
        case KernelKind::rbf: return "rbf";
        case KernelKind::laplacian: return "laplacian";
        case KernelKind::sigmoid: return "sigmoid";
        case KernelKind::fourier: return "fourier";
    }
    throw ConfigError("unknown kernel kind");
}

inline KernelKind kernel_kind_from_name(const std::string& name) {
    if (name == "linear") return KernelKind::linear;
    if (name == "polynomial") return KernelKind::polynomial;
    if (name == "rbf") return KernelKind::rbf;
    if (name == "laplacian") return KernelKind::laplacian;
    if (name == "sigmoid") return KernelKind::sigmoid;
    if (name == "fourier") return KernelKind::fourier;
    throw ConfigError("unknown kernel kind '" + name + "'");
}

inline json kernel_spec_to_json(const KernelSpec& spec) {
    json j;
    j["kind"] = kernel_kind_name(spec.kind);
    switch (spec.kind) {
        case KernelKind::linear:
            break;
        case KernelKind::polynomial:
            j["degree"] = spec.degree;
            j["c"] = spec.bias_c;
            break;
        case KernelKind::rbf:
        case KernelKind::laplacian:
            j["bandwidth"] = spec.bandwidth;
            break;
        case KernelKind::sigmoid:
            j["beta"] = spec.beta;
            j["theta"] = spec.theta;
            break;
        case KernelKind::fourier:
            j["frequency"] = vector_to_json(spec.frequency);
            break;
    }
    return j;
}

inline KernelSpec kernel_spec_from_json(const json& j) {
    KernelSpec spec;
    spec.kind = kernel_kind_from_name(j.at("kind").get<std::string>());
    switch (spec.kind) {
        case KernelKind::linear:
            break;
        case KernelKind::polynomial:
            spec.degree = j.at("degree").get<int>();
            spec.bias_c = j.value("c", 0.0);
            break;
        case KernelKind::rbf:
        case KernelKind::laplacian:
            spec.bandwidth = j.at("bandwidth").get<double>();
            break;
        case KernelKind::sigmoid:
            spec.beta = j.at("beta").get<double>();
            spec.theta = j.at("theta").get<double>();
            break;
        case KernelKind::fourier:
            spec.frequency = vector_from_json(j.at("frequency"));
            break;
    }
    spec.validate();
    return spec;
}

inline std::string activation_name(Activation a) {
    switch (a) {
        case Activation::sigmoid: return "sigmoid";
        case Activation::tanh: return "tanh";
        case Activation::relu: return "relu";
    }
    throw ConfigError("unknown activation");
}

inline Activation activation_from_name(const std::string& name) {
    if (name == "sigmoid") return Activation::sigmoid;
    if (name == "tanh") return Activation::tanh;
    if (name == "relu") return Activation::relu;
    throw ConfigError("unknown activation '" + name + "'");
}

inline std::string output_kind_name(OutputKind kind) {
    switch (kind) {
        case OutputKind::linear: return "linear";
        case OutputKind::logistic: return "logistic";
        case OutputKind::softmax: return "softmax";
    }
    throw ConfigError("unknown output kind");
}

inline OutputKind output_kind_from_name(const std::string& name) {
    if (name == "linear") return OutputKind::linear;
    if (name == "logistic") return OutputKind::logistic;
    if (name == "softmax") return OutputKind::softmax;
    throw ConfigError("unknown output kind '" + name + "'");
}

// layer sizes, activation, output kind, and the flattened weights
inline json mlp_to_json(const MlpNet& net) {
    json j;
    j["layer_sizes"] = net.layer_sizes;
    j["activation"] = activation_name(net.activation);
    j["output"] = output_kind_name(net.output_kind);
    j["weights"] = flatten(net).values();
    return j;
}

inline MlpNet mlp_from_json(const json& j) {
    MlpNet net;
    net.layer_sizes = j.at("layer_sizes").get<std::vector<std::size_t>>();
    net.activation = activation_from_name(j.at("activation").get<std::string>());
    net.output_kind = output_kind_from_name(j.at("output").get<std::string>());
    if (net.layer_sizes.size() < 2) throw ConfigError("mlp: need >= 2 layer sizes");
    for (std::size_t l = 0; l + 1 < net.layer_sizes.size(); ++l) {
        net.weights.emplace_back(net.layer_sizes[l + 1], net.layer_sizes[l] + 1);
    }
    unflatten(net, Vector::from(j.at("weights").get<std::vector<double>>()));
    net.validate();
    return net;
}

inline void write_json_file(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("invalid JSON in '" + path + "': " + e.what());
    }
}

} // namespace io
} // namespace regresslab

#endif
