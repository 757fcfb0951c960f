#pragma once

// The five node kernels as pure functions of (inputs, weights, bias, signs,
// activation). All built-in activations have slope in [0, 1] everywhere they
// are differentiable.

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

#include "morphnet/signed_log.hpp"

namespace morphnet {

enum class Activation { Identity, Relu, Softplus };

inline double apply_activation(Activation a, double x) {
    switch (a) {
        case Activation::Identity: return x;
        case Activation::Relu: return x > 0.0 ? x : 0.0;
        case Activation::Softplus:
            // ln(1 + e^x), overflow-safe on both sides
            return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
    }
    return x;
}

// Derivative where defined; relu reports 0 at the kink itself.
inline double activation_slope(Activation a, double x) {
    switch (a) {
        case Activation::Identity: return 1.0;
        case Activation::Relu: return x > 0.0 ? 1.0 : 0.0;
        case Activation::Softplus: return 1.0 / (1.0 + std::exp(-x));
    }
    return 1.0;
}

enum class NodeOp { SumProduct, MaxSum, SignedMaxSum, MaxStarSum, Lns };

// A node kind plus its activation. The max-sum and signed max-sum kinds are
// inherently nonlinear and carry no activation (it is pinned to Identity).
struct NodeKind {
    NodeOp op = NodeOp::SumProduct;
    Activation activation = Activation::Identity;

    static NodeKind sum_product(Activation a = Activation::Identity) { return {NodeOp::SumProduct, a}; }
    static NodeKind max_sum() { return {NodeOp::MaxSum, Activation::Identity}; }
    static NodeKind signed_max_sum() { return {NodeOp::SignedMaxSum, Activation::Identity}; }
    static NodeKind max_star_sum(Activation a = Activation::Relu) { return {NodeOp::MaxStarSum, a}; }
    static NodeKind lns(Activation a = Activation::Identity) { return {NodeOp::Lns, a}; }

    bool has_activation() const { return op != NodeOp::MaxSum && op != NodeOp::SignedMaxSum; }
    bool uses_signs() const { return op == NodeOp::SignedMaxSum; }

    friend bool operator==(const NodeKind&, const NodeKind&) = default;
};

namespace detail {
inline void require_same_length(std::size_t nx, std::size_t nw, const char* who) {
    if (nx != nw || nx == 0)
        throw std::invalid_argument(std::string(who) + ": input/weight length mismatch (" +
                                    std::to_string(nx) + " vs " + std::to_string(nw) + ")");
}
}  // namespace detail

// sigma(b + sum_i w_i x_i). Plain left-to-right accumulation, kept that way
// so results are reproducible run to run.
inline double node_sum_product(std::span<const double> x, std::span<const double> w, double b,
                               Activation act) {
    detail::require_same_length(x.size(), w.size(), "node_sum_product");
    double acc = b;
    for (std::size_t i = 0; i < x.size(); ++i) acc += w[i] * x[i];
    return apply_activation(act, acc);
}

// max(b, max_i (w_i + x_i))
inline double node_max_sum(std::span<const double> x, std::span<const double> w, double b) {
    detail::require_same_length(x.size(), w.size(), "node_max_sum");
    double acc = b;
    for (std::size_t i = 0; i < x.size(); ++i) acc = std::max(acc, w[i] + x[i]);
    return acc;
}

// max(b, max_i a_i (w_i + x_i)), a_i in {-1, +1}. With all a_i = +1 this is
// bitwise identical to node_max_sum.
inline double node_signed_max_sum(std::span<const double> x, std::span<const double> w,
                                  std::span<const int> a, double b) {
    detail::require_same_length(x.size(), w.size(), "node_signed_max_sum");
    if (a.size() != x.size())
        throw std::invalid_argument("node_signed_max_sum: sign vector length mismatch");
    double acc = b;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (a[i] != 1 && a[i] != -1)
            throw std::invalid_argument("node_signed_max_sum: sign entry must be -1 or +1");
        acc = std::max(acc, a[i] * (w[i] + x[i]));
    }
    return acc;
}

// sigma(ln(e^b + sum_i e^{x_i + w_i})) via the stable max* fold.
inline double node_max_star_sum(std::span<const double> x, std::span<const double> w, double b,
                                Activation act) {
    detail::require_same_length(x.size(), w.size(), "node_max_star_sum");
    double acc = b;
    for (std::size_t i = 0; i < x.size(); ++i) acc = max_star(acc, x[i] + w[i]);
    return apply_activation(act, acc);
}

// LNS image of sigma(b + sum_i w_i x_i): fold lns_add over lns_mul(x_i, w_i)
// starting from b, then apply the activation in the linear domain. Identity
// needs no conversion, and relu only needs the sign bit, so those two stay
// exact in the log domain.
inline SignedLogValue node_lns(std::span<const SignedLogValue> x,
                               std::span<const SignedLogValue> w, const SignedLogValue& b,
                               Activation act) {
    detail::require_same_length(x.size(), w.size(), "node_lns");
    SignedLogValue acc = b;
    for (std::size_t i = 0; i < x.size(); ++i) acc = lns_add(acc, lns_mul(x[i], w[i]));
    switch (act) {
        case Activation::Identity: return acc;
        case Activation::Relu: return (acc.is_zero || acc.sign < 0) ? SignedLogValue::zero() : acc;
        case Activation::Softplus: return from_linear(apply_activation(act, to_linear(acc)));
    }
    return acc;
}

}  // namespace morphnet
