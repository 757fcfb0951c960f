#pragma once

// Layered scalar-input scalar-output networks over any node kind, plus
// central-difference derivative probes with kink detection.
//
// Layer l has width n_l units; unit j of layer l takes the full previous
// layer as input (fully connected). The first layer sees the scalar input
// broadcast as a 1-vector, the last layer has width 1, and no activation is
// applied at the output layer for any kind.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "morphnet/errors.hpp"
#include "morphnet/nodes.hpp"

namespace morphnet {

struct LayerSpec {
    std::vector<std::vector<double>> weights;  // [unit][input]
    std::vector<double> biases;                // [unit]
    std::vector<std::vector<int>> signs;       // [unit][input], SignedMaxSum only

    int width() const { return static_cast<int>(biases.size()); }
    int in_dim() const { return weights.empty() ? 0 : static_cast<int>(weights.front().size()); }
};

struct NetworkSpec {
    NodeKind kind;
    std::vector<LayerSpec> layers;  // d hidden layers followed by the output layer

    int depth() const { return static_cast<int>(layers.size()) - 1; }
};

inline void validate(const NetworkSpec& net) {
    if (net.layers.empty()) throw ValidationError("network: no layers");
    int expected_in = 1;
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        const LayerSpec& layer = net.layers[l];
        const std::string where = "layer " + std::to_string(l);
        if (layer.width() == 0) throw ValidationError(where + ": empty layer");
        if (static_cast<int>(layer.weights.size()) != layer.width())
            throw ValidationError(where + ": weights/biases row count mismatch");
        for (const auto& row : layer.weights)
            if (static_cast<int>(row.size()) != expected_in)
                throw ValidationError(where + ": expected in-dim " + std::to_string(expected_in) +
                                      ", got " + std::to_string(row.size()));
        if (net.kind.uses_signs()) {
            if (static_cast<int>(layer.signs.size()) != layer.width())
                throw ValidationError(where + ": missing sign rows");
            for (const auto& row : layer.signs) {
                if (static_cast<int>(row.size()) != expected_in)
                    throw ValidationError(where + ": sign row has wrong length");
                for (int s : row)
                    if (s != 1 && s != -1) throw ValidationError(where + ": sign entries must be -1 or +1");
            }
        } else if (!layer.signs.empty()) {
            throw ValidationError(where + ": sign rows present but node kind has no signs");
        }
        expected_in = layer.width();
    }
    if (net.layers.back().width() != 1) throw ValidationError("output layer must have width 1");
}

inline double evaluate(const NetworkSpec& net, double x) {
    validate(net);
    const bool lns = net.kind.op == NodeOp::Lns;
    std::vector<double> cur{x};
    std::vector<SignedLogValue> cur_log;
    if (lns) cur_log = {from_linear(x)};

    std::vector<double> next;
    std::vector<SignedLogValue> next_log;
    std::vector<SignedLogValue> wlog;
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        const LayerSpec& layer = net.layers[l];
        const bool output_layer = (l + 1 == net.layers.size());
        const Activation act = output_layer ? Activation::Identity : net.kind.activation;
        if (lns) {
            next_log.assign(layer.width(), SignedLogValue::zero());
            for (int j = 0; j < layer.width(); ++j) {
                wlog.clear();
                for (double w : layer.weights[j]) wlog.push_back(from_linear(w));
                next_log[j] = node_lns(cur_log, wlog, from_linear(layer.biases[j]), act);
            }
            cur_log.swap(next_log);
        } else {
            next.assign(layer.width(), 0.0);
            for (int j = 0; j < layer.width(); ++j) {
                switch (net.kind.op) {
                    case NodeOp::SumProduct:
                        next[j] = node_sum_product(cur, layer.weights[j], layer.biases[j], act);
                        break;
                    case NodeOp::MaxSum:
                        next[j] = node_max_sum(cur, layer.weights[j], layer.biases[j]);
                        break;
                    case NodeOp::SignedMaxSum:
                        next[j] = node_signed_max_sum(cur, layer.weights[j], layer.signs[j],
                                                      layer.biases[j]);
                        break;
                    case NodeOp::MaxStarSum:
                        next[j] = node_max_star_sum(cur, layer.weights[j], layer.biases[j], act);
                        break;
                    case NodeOp::Lns: break;  // handled above
                }
            }
            cur.swap(next);
        }
    }
    return lns ? to_linear(cur_log[0]) : cur[0];
}

// Forward evaluation carrying (value, d value / d x) pairs and flagging
// proximity to non-differentiable points. A pair of max arguments (or a relu
// pre-activation vs 0) counts as near a kink when the value gap is at most
// margin * max(1, slope gap); the slope factor turns the value gap into a
// horizontal distance, so steep sum-product units are flagged correctly too.
struct Traced {
    double value = 0.0;
    double slope = 0.0;
    bool near_kink = false;
};

namespace detail {

struct Dual {
    double v = 0.0;
    double d = 0.0;
};

inline bool pair_near_tie(const Dual& a, const Dual& b, double margin) {
    return std::fabs(a.v - b.v) <= margin * std::max(1.0, std::fabs(a.d - b.d));
}

inline Dual max_of_terms(const std::vector<Dual>& terms, double margin, bool& kink) {
    Dual best = terms[0];
    for (std::size_t i = 1; i < terms.size(); ++i)
        if (terms[i].v > best.v) best = terms[i];
    for (std::size_t i = 0; i < terms.size(); ++i)
        for (std::size_t j = i + 1; j < terms.size(); ++j)
            if (pair_near_tie(terms[i], terms[j], margin)) kink = true;
    return best;
}

inline Dual activate(Dual s, Activation act, double margin, bool& kink) {
    switch (act) {
        case Activation::Identity: return s;
        case Activation::Relu:
            if (std::fabs(s.v) <= margin * std::max(1.0, std::fabs(s.d))) kink = true;
            return s.v > 0.0 ? s : Dual{0.0, 0.0};
        case Activation::Softplus:
            return {apply_activation(act, s.v), activation_slope(act, s.v) * s.d};
    }
    return s;
}

}  // namespace detail

inline Traced evaluate_traced(const NetworkSpec& net, double x, double kink_margin) {
    validate(net);
    using detail::Dual;
    std::vector<Dual> cur{{x, 1.0}};
    bool kink = false;
    std::vector<Dual> next, terms;
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        const LayerSpec& layer = net.layers[l];
        const bool output_layer = (l + 1 == net.layers.size());
        const Activation act = output_layer ? Activation::Identity : net.kind.activation;
        next.assign(layer.width(), Dual{});
        for (int j = 0; j < layer.width(); ++j) {
            const auto& w = layer.weights[j];
            const double b = layer.biases[j];
            switch (net.kind.op) {
                case NodeOp::SumProduct:
                case NodeOp::Lns: {
                    // the LNS node computes the same function as sum-product,
                    // so its kinks and slope are traced in the linear domain
                    Dual s{b, 0.0};
                    for (std::size_t i = 0; i < cur.size(); ++i) {
                        s.v += w[i] * cur[i].v;
                        s.d += w[i] * cur[i].d;
                    }
                    next[j] = detail::activate(s, act, kink_margin, kink);
                    break;
                }
                case NodeOp::MaxSum:
                case NodeOp::SignedMaxSum: {
                    terms.assign(1, Dual{b, 0.0});
                    for (std::size_t i = 0; i < cur.size(); ++i) {
                        const double a = net.kind.uses_signs() ? layer.signs[j][i] : 1.0;
                        terms.push_back({a * (w[i] + cur[i].v), a * cur[i].d});
                    }
                    next[j] = detail::max_of_terms(terms, kink_margin, kink);
                    break;
                }
                case NodeOp::MaxStarSum: {
                    terms.assign(1, Dual{b, 0.0});
                    for (std::size_t i = 0; i < cur.size(); ++i)
                        terms.push_back({cur[i].v + w[i], cur[i].d});
                    double m = terms[0].v;
                    for (const auto& t : terms) m = std::max(m, t.v);
                    double z = 0.0, dz = 0.0;
                    for (const auto& t : terms) {
                        const double e = std::exp(t.v - m);
                        z += e;
                        dz += e * t.d;
                    }
                    next[j] = detail::activate({m + std::log(z), dz / z}, act, kink_margin, kink);
                    break;
                }
            }
        }
        cur.swap(next);
    }
    return {cur[0].v, cur[0].d, kink};
}

struct DerivativeProbe {
    double x = 0.0;
    double h = 0.0;
    int order = 1;
    double value = 0.0;
    bool near_kink = false;
};

// Central difference of given order; near_kink uses a margin of 10 h around
// max ties and activation kinks, which keeps the whole stencil inside one
// smooth piece whenever the flag is clear.
inline DerivativeProbe finite_diff(const NetworkSpec& net, double x, double h, int order) {
    if (!(h >= 1e-8 && h <= 1e-3)) throw std::invalid_argument("finite_diff: h outside [1e-8, 1e-3]");
    if (order != 1 && order != 2) throw std::invalid_argument("finite_diff: order must be 1 or 2");
    const double fp = evaluate(net, x + h);
    const double fm = evaluate(net, x - h);
    const double value =
        order == 1 ? (fp - fm) / (2.0 * h) : (fp - 2.0 * evaluate(net, x) + fm) / (h * h);
    const bool near_kink = evaluate_traced(net, x, 10.0 * h).near_kink;
    return {x, h, order, value, near_kink};
}

// Deterministic random network: weights and biases uniform in [-2, 2], signs
// uniform in {-1, +1}; draw order is layer by layer, unit by unit, weights
// before bias before signs, so a seed pins the spec bitwise.
inline NetworkSpec random_network(NodeKind kind, int depth, std::span<const int> widths,
                                  std::uint64_t seed) {
    if (depth != static_cast<int>(widths.size()))
        throw std::invalid_argument("random_network: depth must equal |widths|");
    for (int w : widths)
        if (w <= 0) throw std::invalid_argument("random_network: widths must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    std::uniform_int_distribution<int> coin(0, 1);

    NetworkSpec net;
    net.kind = kind;
    int in_dim = 1;
    for (int l = 0; l <= depth; ++l) {
        const int width = l < depth ? widths[l] : 1;
        LayerSpec layer;
        for (int j = 0; j < width; ++j) {
            std::vector<double> row(in_dim);
            for (double& w : row) w = unif(rng);
            layer.weights.push_back(std::move(row));
            layer.biases.push_back(unif(rng));
            if (kind.uses_signs()) {
                std::vector<int> srow(in_dim);
                for (int& s : srow) s = coin(rng) ? 1 : -1;
                layer.signs.push_back(std::move(srow));
            }
        }
        net.layers.push_back(std::move(layer));
        in_dim = width;
    }
    return net;
}

// Upper bound on |f'| used to scale curvature tolerances. Sum-product layers
// can amplify by their max absolute row sum; the max families and max* are
// 1-Lipschitz per layer, and every activation has slope at most 1.
inline double lipschitz_bound(const NetworkSpec& net) {
    validate(net);
    if (net.kind.op != NodeOp::SumProduct && net.kind.op != NodeOp::Lns) return 1.0;
    double bound = 1.0;
    for (const LayerSpec& layer : net.layers) {
        double gain = 0.0;
        for (const auto& row : layer.weights) {
            double s = 0.0;
            for (double w : row) s += std::fabs(w);
            gain = std::max(gain, s);
        }
        bound *= std::max(1.0, gain);
    }
    return bound;
}

}  // namespace morphnet
