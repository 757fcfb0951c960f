#pragma once

// Symbolic collapse of max-sum and signed max-sum networks into closed
// forms.
//
// Max-sum networks reduce exactly: every such network denotes
// max(w0, w1 + x) for some constants, and reduce_pair performs the one
// rewrite the reduction needs, folding two terms of shape a + (b v x) into
// that form by case analysis on b1 vs b2 and c = a2 - a1.
//
// Signed max-sum networks are composed over the three-slope class
//   max over present terms of { c1, c2 - x, c3 + x },
// which is closed under join (componentwise max), constant shift, and sign
// flip of a single affine term. The class is NOT closed under pointwise
// negation of a multi-term member: -max(p, q) = min(-p, -q) has a concave
// kink that no member can express. canonicalize_signed_max_sum therefore
// returns an exact form whenever no -1 sign wraps a multi-term subform;
// otherwise it applies the term-flip map and the result is only a
// three-slope surrogate (a single flip over-approximates, but a second
// negation higher up can push the surrogate below the network, so no
// one-sided bound survives composition). The detail variant counts the
// flips so callers can tell the exact case apart.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "morphnet/errors.hpp"
#include "morphnet/network.hpp"

namespace morphnet {

// x |-> max(w0, w1 + x)
struct TropicalAffineForm {
    double w0 = 0.0;
    double w1 = 0.0;

    double eval(double x) const { return std::max(w0, w1 + x); }
    double slope_at(double x) const { return w1 + x > w0 ? 1.0 : 0.0; }

    friend bool operator==(const TropicalAffineForm&, const TropicalAffineForm&) = default;
};

// (a1 + (b1 v x)) v (a2 + (b2 v x))  ==  w0 v (w1 + x).
//
// With c = a2 - a1 and b1 > b2:
//   c <= 0:  w0 = a1 + b1,             w1 = a1
//   c  > 0:  w0 = a1 + (b1 v (b2+c)),  w1 = a1 + c
// b2 > b1 swaps the operands (the expression is symmetric); a tie b1 = b2
// orders by a so that c <= 0 and the first formula applies. Both formulas
// agree in the limit c -> 0.
inline TropicalAffineForm reduce_pair(double a1, double b1, double a2, double b2) {
    if (b2 > b1 || (b1 == b2 && a2 > a1)) {
        std::swap(a1, a2);
        std::swap(b1, b2);
    }
    const double c = a2 - a1;
    if (c <= 0.0) return {a1 + b1, a1};
    return {a1 + std::max(b1, b2 + c), a1 + c};
}

namespace detail {

// a + (b v x) pair form; interconverts with TropicalAffineForm via
// b v (w + x) = w + ((b - w) v x).
struct TropicalPair {
    double a = 0.0;
    double b = 0.0;
};

inline TropicalPair to_pair(const TropicalAffineForm& f) { return {f.w1, f.w0 - f.w1}; }
inline TropicalAffineForm to_form(const TropicalPair& p) { return {p.a + p.b, p.a}; }

}  // namespace detail

// Collapse a max-sum network to max(w0, w1 + x): units of the first layer
// are already in form, each later unit folds its terms left to right through
// reduce_pair and then joins its bias, layers bottom-up.
inline TropicalAffineForm canonicalize_max_sum(const NetworkSpec& net) {
    if (net.kind.op != NodeOp::MaxSum)
        throw KindError("canonicalize_max_sum: node kind is not max-sum");
    validate(net);

    std::vector<TropicalAffineForm> forms;
    for (int j = 0; j < net.layers[0].width(); ++j)
        forms.push_back({net.layers[0].biases[j], net.layers[0].weights[j][0]});

    for (std::size_t l = 1; l < net.layers.size(); ++l) {
        const LayerSpec& layer = net.layers[l];
        std::vector<TropicalAffineForm> next;
        for (int j = 0; j < layer.width(); ++j) {
            detail::TropicalPair acc;
            for (std::size_t i = 0; i < forms.size(); ++i) {
                detail::TropicalPair term{layer.weights[j][i] + forms[i].w1,
                                          forms[i].w0 - forms[i].w1};
                if (i == 0) {
                    acc = term;
                } else {
                    acc = detail::to_pair(reduce_pair(acc.a, acc.b, term.a, term.b));
                }
            }
            TropicalAffineForm unit = detail::to_form(acc);
            unit.w0 = std::max(unit.w0, layer.biases[j]);
            next.push_back(unit);
        }
        forms.swap(next);
    }
    return forms[0];
}

// max over present terms of { c1, c2 - x, c3 + x }; at least one present.
struct FClassForm {
    std::optional<double> c1;  // constant
    std::optional<double> c2;  // slope -1 term
    std::optional<double> c3;  // slope +1 term

    static FClassForm constant(double c) { return {c, std::nullopt, std::nullopt}; }
    static FClassForm down(double c) { return {std::nullopt, c, std::nullopt}; }
    static FClassForm up(double c) { return {std::nullopt, std::nullopt, c}; }

    int term_count() const { return (c1 ? 1 : 0) + (c2 ? 1 : 0) + (c3 ? 1 : 0); }
    bool single_term() const { return term_count() == 1; }
    bool well_formed() const { return term_count() >= 1; }

    double eval(double x) const {
        double v = -std::numeric_limits<double>::infinity();
        if (c1) v = std::max(v, *c1);
        if (c2) v = std::max(v, *c2 - x);
        if (c3) v = std::max(v, *c3 + x);
        return v;
    }

    double slope_at(double x) const {
        double best = -std::numeric_limits<double>::infinity(), slope = 0.0;
        if (c1 && *c1 > best) { best = *c1; slope = 0.0; }
        if (c2 && *c2 - x > best) { best = *c2 - x; slope = -1.0; }
        if (c3 && *c3 + x > best) { best = *c3 + x; slope = 1.0; }
        return slope;
    }

    friend bool operator==(const FClassForm&, const FClassForm&) = default;
};

// Componentwise max; a term present in either operand is present in the
// result. This is exactly pointwise max of the two functions.
inline FClassForm f_join(const FClassForm& f, const FClassForm& g) {
    auto join = [](std::optional<double> a, std::optional<double> b) -> std::optional<double> {
        if (a && b) return std::max(*a, *b);
        return a ? a : b;
    };
    return {join(f.c1, g.c1), join(f.c2, g.c2), join(f.c3, g.c3)};
}

// (f + k)(x): shift every present term.
inline FClassForm f_add_const(const FClassForm& f, double k) {
    FClassForm out = f;
    if (out.c1) *out.c1 += k;
    if (out.c2) *out.c2 += k;
    if (out.c3) *out.c3 += k;
    return out;
}

// a * f for a in {-1, +1}. For a = -1 each term is negated and the two
// affine slopes swap roles: (c1, c2, c3) -> (-c1, -c3, -c2). On a
// single-term form that IS the pointwise negation; on a multi-term form the
// result is max of the negated pieces, which upper-bounds the true pointwise
// negation min of them. Such calls are rejected unless the caller opts in
// via allow_term_flip (the canonicalizer does, and counts them).
inline FClassForm scale_by_sign(const FClassForm& f, int a, bool allow_term_flip = false) {
    if (a != 1 && a != -1) throw std::invalid_argument("scale_by_sign: a must be -1 or +1");
    if (a == 1) return f;
    if (!f.single_term() && !allow_term_flip)
        throw FClassNegationError(
            "scale_by_sign: pointwise negation of a multi-term form leaves the class");
    FClassForm out;
    if (f.c1) out.c1 = -*f.c1;
    if (f.c3) out.c2 = -*f.c3;
    if (f.c2) out.c3 = -*f.c2;
    return out;
}

struct SignedCanonResult {
    FClassForm form;
    int flipped_joins = 0;  // -1 signs applied to multi-term subforms

    // exact() means form(x) == network(x) for all x; with any flip the form
    // is a surrogate and need not match pointwise.
    bool exact() const { return flipped_joins == 0; }
};

// Compose a signed max-sum network over the three-slope class: first-layer
// terms a(w + x) enter as single affine terms with the sign applied exactly,
// later units shift each input form by their weight, apply the unit sign,
// and join everything with the bias, left to right, layers bottom-up.
inline SignedCanonResult canonicalize_signed_max_sum_detail(const NetworkSpec& net) {
    if (net.kind.op != NodeOp::SignedMaxSum)
        throw KindError("canonicalize_signed_max_sum: node kind is not signed-max-sum");
    validate(net);

    int flips = 0;
    auto apply_sign = [&flips](const FClassForm& f, int a) {
        if (a == -1 && !f.single_term()) ++flips;
        return scale_by_sign(f, a, /*allow_term_flip=*/true);
    };

    std::vector<FClassForm> forms;
    for (int j = 0; j < net.layers[0].width(); ++j) {
        const double w = net.layers[0].weights[j][0];
        const int a = net.layers[0].signs[j][0];
        const FClassForm leaf = a == 1 ? FClassForm::up(w) : FClassForm::down(-w);
        forms.push_back(f_join(FClassForm::constant(net.layers[0].biases[j]), leaf));
    }

    for (std::size_t l = 1; l < net.layers.size(); ++l) {
        const LayerSpec& layer = net.layers[l];
        std::vector<FClassForm> next;
        for (int j = 0; j < layer.width(); ++j) {
            FClassForm unit = FClassForm::constant(layer.biases[j]);
            for (std::size_t i = 0; i < forms.size(); ++i) {
                const FClassForm term =
                    apply_sign(f_add_const(forms[i], layer.weights[j][i]), layer.signs[j][i]);
                unit = f_join(unit, term);
            }
            next.push_back(unit);
        }
        forms.swap(next);
    }
    return {forms[0], flips};
}

inline FClassForm canonicalize_signed_max_sum(const NetworkSpec& net) {
    return canonicalize_signed_max_sum_detail(net).form;
}

}  // namespace morphnet
