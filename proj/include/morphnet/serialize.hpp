#pragma once

// JSON wire formats and file helpers.
//
// Network:   {"node_kind": "...", "activation": "...", "layers": [
//              {"weights": [[...]], "biases": [...], "signs": [[...]]}]}
//            where "activation" is omitted for the max-sum kinds and "signs"
//            appears only for signed-max-sum.
// Canonical: {"kind": "tropical", "w0": ..., "w1": ...}
//            {"kind": "fclass", "c1"?: ..., "c2"?: ..., "c3"?: ...}
//
// Everything uses ordered_json so that emitted documents are byte-stable.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>

#include <json.hpp>

#include "morphnet/canonical.hpp"
#include "morphnet/errors.hpp"
#include "morphnet/network.hpp"

namespace morphnet {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

inline std::string node_kind_to_string(NodeKind kind) {
    switch (kind.op) {
        case NodeOp::SumProduct: return "sum-product";
        case NodeOp::MaxSum: return "max-sum";
        case NodeOp::SignedMaxSum: return "signed-max-sum";
        case NodeOp::MaxStarSum: return "max-star-sum";
        case NodeOp::Lns: return "lns";
    }
    return "?";
}

inline NodeOp node_op_from_string(const std::string& s) {
    if (s == "sum-product") return NodeOp::SumProduct;
    if (s == "max-sum") return NodeOp::MaxSum;
    if (s == "signed-max-sum") return NodeOp::SignedMaxSum;
    if (s == "max-star-sum") return NodeOp::MaxStarSum;
    if (s == "lns") return NodeOp::Lns;
    throw KindError("unknown node kind '" + s +
                    "' (valid: sum-product, max-sum, signed-max-sum, max-star-sum, lns)");
}

inline std::string activation_to_string(Activation a) {
    switch (a) {
        case Activation::Identity: return "identity";
        case Activation::Relu: return "relu";
        case Activation::Softplus: return "softplus";
    }
    return "?";
}

inline Activation activation_from_string(const std::string& s) {
    if (s == "identity") return Activation::Identity;
    if (s == "relu") return Activation::Relu;
    if (s == "softplus") return Activation::Softplus;
    throw ValidationError("unknown activation '" + s + "' (valid: identity, relu, softplus)");
}

inline ordered_json network_to_json(const NetworkSpec& net) {
    ordered_json j;
    j["node_kind"] = node_kind_to_string(net.kind);
    if (net.kind.has_activation()) j["activation"] = activation_to_string(net.kind.activation);
    j["layers"] = ordered_json::array();
    for (const auto& layer : net.layers) {
        ordered_json lj;
        lj["weights"] = layer.weights;
        lj["biases"] = layer.biases;
        if (net.kind.uses_signs()) lj["signs"] = layer.signs;
        j["layers"].push_back(std::move(lj));
    }
    return j;
}

inline NetworkSpec network_from_json(const ordered_json& j) {
    if (!j.is_object() || !j.contains("node_kind"))
        throw ValidationError("network json: missing node_kind");
    NetworkSpec net;
    net.kind.op = node_op_from_string(j.at("node_kind").get<std::string>());
    net.kind.activation = Activation::Identity;
    if (j.contains("activation")) {
        NodeKind probe{net.kind.op, Activation::Identity};
        if (!probe.has_activation())
            throw ValidationError("network json: activation not allowed for node kind " +
                                  node_kind_to_string(probe));
        net.kind.activation = activation_from_string(j.at("activation").get<std::string>());
    }
    if (!j.contains("layers") || !j.at("layers").is_array())
        throw ValidationError("network json: missing layers array");
    for (const auto& lj : j.at("layers")) {
        LayerSpec layer;
        layer.weights = lj.at("weights").get<std::vector<std::vector<double>>>();
        layer.biases = lj.at("biases").get<std::vector<double>>();
        if (lj.contains("signs")) layer.signs = lj.at("signs").get<std::vector<std::vector<int>>>();
        net.layers.push_back(std::move(layer));
    }
    validate(net);
    return net;
}

inline ordered_json canonical_to_json(const TropicalAffineForm& f) {
    ordered_json j;
    j["kind"] = "tropical";
    j["w0"] = f.w0;
    j["w1"] = f.w1;
    return j;
}

inline ordered_json canonical_to_json(const FClassForm& f) {
    ordered_json j;
    j["kind"] = "fclass";
    if (f.c1) j["c1"] = *f.c1;
    if (f.c2) j["c2"] = *f.c2;
    if (f.c3) j["c3"] = *f.c3;
    return j;
}

using CanonicalForm = std::variant<TropicalAffineForm, FClassForm>;

inline CanonicalForm canonical_from_json(const ordered_json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "tropical")
        return TropicalAffineForm{j.at("w0").get<double>(), j.at("w1").get<double>()};
    if (kind == "fclass") {
        FClassForm f;
        if (j.contains("c1")) f.c1 = j.at("c1").get<double>();
        if (j.contains("c2")) f.c2 = j.at("c2").get<double>();
        if (j.contains("c3")) f.c3 = j.at("c3").get<double>();
        if (!f.well_formed()) throw ValidationError("fclass json: no terms present");
        return f;
    }
    throw KindError("unknown canonical form kind '" + kind + "'");
}

inline double eval_canonical(const CanonicalForm& form, double x) {
    return std::visit([x](const auto& f) { return f.eval(x); }, form);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Write via temp file + rename so readers never observe a partial artifact.
inline void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::ios_base::failure("cannot open " + tmp + " for writing");
        out << content;
        if (!out) throw std::ios_base::failure("write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::ios_base::failure("rename failed for " + path);
}

}  // namespace morphnet
