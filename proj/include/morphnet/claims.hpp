#pragma once

// One named check per mathematical claim the library rests on, runnable at
// smoke or full scale, fully deterministic per seed. Checks sample; the
// report language is deliberately "evidence", not "verified".
//
// Claim ids: eq6-lns-equiv, lemma1, lemma2, lemma3, prop1, thm1, thm2, thm3.
// Results merge in claim-id order. The lemma2 and eq6 checks accept the
// function under test as a parameter so a deliberately broken variant can be
// used to prove the checks are not vacuous.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "morphnet/fit.hpp"
#include "morphnet/serialize.hpp"

namespace morphnet {

enum class ClaimScale { Smoke, Full };

inline std::string scale_to_string(ClaimScale s) {
    return s == ClaimScale::Smoke ? "smoke" : "full";
}

inline ClaimScale scale_from_string(const std::string& s) {
    if (s == "smoke") return ClaimScale::Smoke;
    if (s == "full") return ClaimScale::Full;
    throw ValidationError("unknown scale '" + s + "' (valid: smoke, full)");
}

struct ClaimCheck {
    std::string id;
    bool pass = false;
    ordered_json evidence;
    std::string anchor;
};

// Derivative probes run on a fixed interval chosen so that max*-sum units
// built from [-2, 2] parameters keep their saturation gap well above the
// 1e-6 assertion margin (the gap shrinks like e^{-(|x|+4)}).
inline constexpr double kProbeLo = -6.0;
inline constexpr double kProbeHi = 6.0;
inline constexpr double kProbeStep = 1e-5;
inline constexpr double kCurvatureStep = 1e-3;

// Canonical-form agreement is checked on this grid.
inline constexpr double kAgreeLo = -20.0;
inline constexpr double kAgreeHi = 20.0;
inline constexpr int kAgreeGrid = 1000;

struct ClaimConfig {
    int nets = 500;         // networks per canonicalization / probe claim
    int probes = 200;       // non-kink probe points per network
    int lemma2_tuples = 10000;
    int eq6_cases = 1000;
    int lns_nets = 50;      // networks for the LNS/linear twin comparison
    int prop1_nets = 200;
    long fit_budget = 4000;
    int fit_seeds = 3;
};

inline ClaimConfig claim_config(ClaimScale scale) {
    if (scale == ClaimScale::Smoke) return {50, 50, 1000, 200, 10, 50, 1200, 1};
    return {};
}

inline const std::vector<std::string>& claim_ids() {
    static const std::vector<std::string> ids = {"eq6-lns-equiv", "lemma1", "lemma2", "lemma3",
                                                 "prop1",         "thm1",   "thm2",   "thm3"};
    return ids;
}

inline std::string claim_anchor(const std::string& id) {
    if (id == "eq6-lns-equiv") return "log-domain multiply-accumulate equals max* over summed logs";
    if (id == "lemma1") return "derivative-bounded families pay a sup-norm floor against steeper targets";
    if (id == "lemma2") return "a pair of shifted max-affine terms collapses to w0 v (w1 + x)";
    if (id == "lemma3") return "three-slope max forms are closed under pointwise max";
    if (id == "prop1") return "relu sum-product networks have zero second derivative off kinks";
    if (id == "thm1") return "max-sum networks denote max(w0, w1 + x)";
    if (id == "thm2") return "signed max-sum: three-slope canonical form, slopes in {-1,0,1}";
    if (id == "thm3") return "max*-sum networks have first derivative in [0, 1)";
    throw ValidationError("unknown claim id '" + id + "'");
}

namespace detail {

inline std::uint64_t claim_seed(std::uint64_t seed, std::uint64_t salt) {
    return seed * 0x9e3779b97f4a7c15ull + salt;
}

inline std::vector<int> random_widths(std::mt19937_64& rng, int depth, int max_width) {
    std::uniform_int_distribution<int> w(1, max_width);
    std::vector<int> widths(depth);
    for (int& x : widths) x = w(rng);
    return widths;
}

inline double dist_to_set(double v, std::initializer_list<double> set) {
    double d = std::numeric_limits<double>::infinity();
    for (double s : set) d = std::min(d, std::fabs(v - s));
    return d;
}

// Draw up to `want` probes at non-kink points; returns how many were found.
template <typename Fn>
int sample_probes(const NetworkSpec& net, int want, double h, int order, std::mt19937_64& rng,
                  Fn&& fn) {
    std::uniform_real_distribution<double> xs(kProbeLo, kProbeHi);
    int found = 0;
    for (int attempt = 0; attempt < 40 * want && found < want; ++attempt) {
        const DerivativeProbe p = finite_diff(net, xs(rng), h, order);
        if (p.near_kink) continue;
        fn(p);
        ++found;
    }
    return found;
}

// Smallest |unit pre-activation| / (|bias| + sum |w_i x_i|) over all units of
// the linear (sum-product) twin; points where this drops below the threshold
// sit near an exact cancellation and are excluded from relative comparisons.
inline double min_cancellation_ratio(const NetworkSpec& net, double x) {
    std::vector<double> cur{x};
    double worst = 1.0;
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        const LayerSpec& layer = net.layers[l];
        const bool output_layer = (l + 1 == net.layers.size());
        const Activation act = output_layer ? Activation::Identity : net.kind.activation;
        std::vector<double> next(layer.width());
        for (int j = 0; j < layer.width(); ++j) {
            double acc = layer.biases[j];
            double mag = std::fabs(layer.biases[j]);
            for (std::size_t i = 0; i < cur.size(); ++i) {
                acc += layer.weights[j][i] * cur[i];
                mag += std::fabs(layer.weights[j][i] * cur[i]);
            }
            if (mag > 0.0) worst = std::min(worst, std::fabs(acc) / mag);
            next[j] = apply_activation(act, acc);
        }
        cur.swap(next);
    }
    return worst;
}

}  // namespace detail

using ReducePairFn = TropicalAffineForm (*)(double, double, double, double);

// Pairwise reduction agrees with the unreduced expression pointwise.
inline ClaimCheck check_lemma2(std::uint64_t seed, ClaimScale scale,
                               ReducePairFn reduce_fn = &reduce_pair) {
    const ClaimConfig cfg = claim_config(scale);
    std::mt19937_64 rng(detail::claim_seed(seed, 0x4c32));
    std::uniform_real_distribution<double> coef(-5.0, 5.0);
    const auto xs = linspace(kAgreeLo, kAgreeHi, 100);

    double max_dev = 0.0;
    for (int t = 0; t < cfg.lemma2_tuples; ++t) {
        double a1 = coef(rng), b1 = coef(rng), a2 = coef(rng), b2 = coef(rng);
        if (t % 10 == 0) a2 = a1;            // c = 0 boundary
        if (t % 10 == 1) b2 = b1;            // tie between breakpoints
        if (t % 10 == 2) { a2 = a1; b2 = b1; }
        const TropicalAffineForm f = reduce_fn(a1, b1, a2, b2);
        for (double x : xs) {
            const double direct =
                std::max(a1 + std::max(b1, x), a2 + std::max(b2, x));
            max_dev = std::max(max_dev, std::fabs(f.eval(x) - direct));
        }
    }
    ClaimCheck c{"lemma2", max_dev <= 1e-12, {}, claim_anchor("lemma2")};
    c.evidence["tuples"] = cfg.lemma2_tuples;
    c.evidence["points_per_tuple"] = 100;
    c.evidence["max_deviation"] = max_dev;
    c.evidence["tolerance"] = 1e-12;
    return c;
}

// Class closure: join is pointwise max and stays well-formed; shifts and
// single-term sign flips behave; multi-term negation is rejected.
inline ClaimCheck check_lemma3(std::uint64_t seed, ClaimScale scale) {
    const ClaimConfig cfg = claim_config(scale);
    std::mt19937_64 rng(detail::claim_seed(seed, 0x4c33));
    std::uniform_real_distribution<double> coef(-5.0, 5.0);
    std::uniform_int_distribution<int> mask(1, 7);
    const auto xs = linspace(-10.0, 10.0, 64);

    auto random_form = [&] {
        FClassForm f;
        const int m = mask(rng);
        if (m & 1) f.c1 = coef(rng);
        if (m & 2) f.c2 = coef(rng);
        if (m & 4) f.c3 = coef(rng);
        return f;
    };

    const int samples = cfg.nets * 4;
    double max_dev = 0.0;
    bool ok = true;
    int guarded = 0;
    for (int t = 0; t < samples; ++t) {
        const FClassForm f = random_form(), g = random_form();
        const FClassForm j = f_join(f, g);
        ok = ok && j.well_formed();
        const double k = coef(rng);
        const FClassForm shifted = f_add_const(f, k);
        ok = ok && shifted.well_formed();
        for (double x : xs) {
            max_dev = std::max(max_dev, std::fabs(j.eval(x) - std::max(f.eval(x), g.eval(x))));
            max_dev = std::max(max_dev, std::fabs(shifted.eval(x) - (f.eval(x) + k)));
        }
        if (f.single_term()) {
            const FClassForm neg = scale_by_sign(f, -1);
            ok = ok && neg.well_formed();
            for (double x : xs) max_dev = std::max(max_dev, std::fabs(neg.eval(x) + f.eval(x)));
        } else {
            try {
                (void)scale_by_sign(f, -1);
                ok = false;  // guard must reject
            } catch (const FClassNegationError&) {
                ++guarded;
            }
        }
    }
    ClaimCheck c{"lemma3", ok && max_dev <= 1e-12, {}, claim_anchor("lemma3")};
    c.evidence["samples"] = samples;
    c.evidence["max_deviation"] = max_dev;
    c.evidence["guarded_negations"] = guarded;
    c.evidence["tolerance"] = 1e-12;
    return c;
}

// Max-sum networks canonicalize exactly and their slopes sit in {0, 1}.
inline ClaimCheck check_thm1(std::uint64_t seed, ClaimScale scale) {
    const ClaimConfig cfg = claim_config(scale);
    std::mt19937_64 rng(detail::claim_seed(seed, 0x5431));
    const auto grid = linspace(kAgreeLo, kAgreeHi, kAgreeGrid);

    double max_dev = 0.0, max_slope_gap = 0.0;
    long probe_points = 0;
    for (int n = 0; n < cfg.nets; ++n) {
        const int depth = 1 + n % 4;
        const auto widths = detail::random_widths(rng, depth, 8);
        const NetworkSpec net = random_network(NodeKind::max_sum(), depth, widths, rng());
        const TropicalAffineForm form = canonicalize_max_sum(net);
        for (double x : grid)
            max_dev = std::max(max_dev, std::fabs(form.eval(x) - evaluate(net, x)));
        probe_points += detail::sample_probes(
            net, cfg.probes / 4, kProbeStep, 1, rng, [&](const DerivativeProbe& p) {
                max_slope_gap = std::max(max_slope_gap, detail::dist_to_set(p.value, {0.0, 1.0}));
            });
    }
    ClaimCheck c{"thm1", max_dev <= 1e-9 && max_slope_gap <= 1e-5, {}, claim_anchor("thm1")};
    c.evidence["nets"] = cfg.nets;
    c.evidence["grid_points"] = kAgreeGrid;
    c.evidence["max_deviation"] = max_dev;
    c.evidence["probe_points"] = probe_points;
    c.evidence["max_slope_gap"] = max_slope_gap;
    c.evidence["tolerances"] = {{"agreement", 1e-9}, {"slope", 1e-5}};
    return c;
}

// Signed max-sum networks: slopes lie in {-1, 0, 1} (holds), and the
// composed three-slope form agrees pointwise (holds only when no -1 sign
// wraps a multi-term subform; the composition is an upper envelope
// otherwise, so this check reports honest failure statistics).
inline ClaimCheck check_thm2(std::uint64_t seed, ClaimScale scale) {
    const ClaimConfig cfg = claim_config(scale);
    std::mt19937_64 rng(detail::claim_seed(seed, 0x5432));
    const auto grid = linspace(kAgreeLo, kAgreeHi, kAgreeGrid);

    double max_dev = 0.0, safe_max_dev = 0.0, max_slope_gap = 0.0;
    int agreeing = 0, sign_safe = 0;
    long probe_points = 0;
    for (int n = 0; n < cfg.nets; ++n) {
        const int depth = 1 + n % 4;
        const auto widths = detail::random_widths(rng, depth, 8);
        const NetworkSpec net = random_network(NodeKind::signed_max_sum(), depth, widths, rng());
        const SignedCanonResult canon = canonicalize_signed_max_sum_detail(net);
        double dev = 0.0;
        for (double x : grid)
            dev = std::max(dev, std::fabs(canon.form.eval(x) - evaluate(net, x)));
        max_dev = std::max(max_dev, dev);
        if (dev <= 1e-9) ++agreeing;
        if (canon.exact()) {
            ++sign_safe;
            safe_max_dev = std::max(safe_max_dev, dev);
        }
        probe_points += detail::sample_probes(
            net, cfg.probes, kProbeStep, 1, rng, [&](const DerivativeProbe& p) {
                max_slope_gap =
                    std::max(max_slope_gap, detail::dist_to_set(p.value, {-1.0, 0.0, 1.0}));
            });
    }
    const bool membership_ok = agreeing == cfg.nets;
    const bool slopes_ok = max_slope_gap <= 1e-5;
    ClaimCheck c{"thm2", membership_ok && slopes_ok, {}, claim_anchor("thm2")};
    c.evidence["nets"] = cfg.nets;
    c.evidence["agreeing_nets"] = agreeing;
    c.evidence["max_deviation"] = max_dev;
    c.evidence["sign_safe_nets"] = sign_safe;
    c.evidence["sign_safe_max_deviation"] = safe_max_dev;
    c.evidence["probe_points"] = probe_points;
    c.evidence["max_slope_gap"] = max_slope_gap;
    c.evidence["slope_clause_pass"] = slopes_ok;
    c.evidence["membership_clause_pass"] = membership_ok;
    c.evidence["tolerances"] = {{"agreement", 1e-9}, {"slope", 1e-5}};
    return c;
}

// Max*-sum first differences stay inside [-1e-6, 1 - 1e-6] off kinks.
inline ClaimCheck check_thm3(std::uint64_t seed, ClaimScale scale) {
    const ClaimConfig cfg = claim_config(scale);
    std::mt19937_64 rng(detail::claim_seed(seed, 0x5433));

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    long probe_points = 0;
    for (int n = 0; n < cfg.nets; ++n) {
        const int depth = 1 + n % 4;
        const auto widths = detail::random_widths(rng, depth, 8);
        const NetworkSpec net =
            random_network(NodeKind::max_star_sum(Activation::Relu), depth, widths, rng());
        probe_points += detail::sample_probes(net, cfg.probes, kProbeStep, 1, rng,
                                              [&](const DerivativeProbe& p) {
                                                  lo = std::min(lo, p.value);
                                                  hi = std::max(hi, p.value);
                                              });
    }
    ClaimCheck c{"thm3", lo >= -1e-6 && hi <= 1.0 - 1e-6, {}, claim_anchor("thm3")};
    c.evidence["nets"] = cfg.nets;
    c.evidence["probe_points"] = probe_points;
    c.evidence["min_probe"] = lo;
    c.evidence["max_probe"] = hi;
    c.evidence["bounds"] = {-1e-6, 1.0 - 1e-6};
    return c;
}

// Relu sum-product networks: second differences vanish off kinks (scaled by
// the squared Lipschitz bound), yet a width-16 one fits the square target.
inline ClaimCheck check_prop1(std::uint64_t seed, ClaimScale scale) {
    const ClaimConfig cfg = claim_config(scale);
    std::mt19937_64 rng(detail::claim_seed(seed, 0x5031));

    double max_ratio = 0.0;
    long probe_points = 0;
    for (int n = 0; n < cfg.prop1_nets; ++n) {
        const int depth = 1 + n % 3;
        const auto widths = detail::random_widths(rng, depth, 6);
        const NetworkSpec net =
            random_network(NodeKind::sum_product(Activation::Relu), depth, widths, rng());
        const double scale2 = lipschitz_bound(net) * lipschitz_bound(net);
        probe_points += detail::sample_probes(
            net, cfg.probes / 4, kCurvatureStep, 2, rng, [&](const DerivativeProbe& p) {
                max_ratio = std::max(max_ratio, std::fabs(p.value) / (1e-4 * scale2));
            });
    }

    const TargetFunction& square = target_by_id("square");
    const NetworkSpec init = relu_interpolation_network(square, 16);
    const ApproxReport report = fit(init, square, cfg.fit_budget / 2, seed + 1);
    const double pl_err = pl_interpolation_error(square, 16);

    // the fitted net is still piecewise linear: probe its curvature too
    double fitted_ratio = 0.0;
    const double fitted_scale2 =
        lipschitz_bound(report.trained) * lipschitz_bound(report.trained);
    detail::sample_probes(report.trained, 20, kCurvatureStep, 2, rng,
                          [&](const DerivativeProbe& p) {
                              fitted_ratio =
                                  std::max(fitted_ratio, std::fabs(p.value) / (1e-4 * fitted_scale2));
                          });

    const bool ok = max_ratio <= 1.0 && fitted_ratio <= 1.0 && report.sup_error < 0.05;
    ClaimCheck c{"prop1", ok, {}, claim_anchor("prop1")};
    c.evidence["nets"] = cfg.prop1_nets;
    c.evidence["probe_points"] = probe_points;
    c.evidence["max_curvature_ratio"] = max_ratio;
    c.evidence["square_fit_sup_error"] = report.sup_error;
    c.evidence["pl_interpolation_error"] = pl_err;
    c.evidence["fitted_net_curvature_ratio"] = fitted_ratio;
    return c;
}

// Non-universality floors and the universality contrast.
inline ClaimCheck check_lemma1(std::uint64_t seed, ClaimScale scale) {
    const ClaimConfig cfg = claim_config(scale);
    const TargetFunction& square = target_by_id("square");
    const TargetFunction& twice = target_by_id("double");
    const TargetFunction& halfslope = target_by_id("halfslope");

    const double tropical_sq = tropical_floor(square).sup_error;
    const double box_double = lower_bound_floor(twice, 0.0, 1.0);
    const double fclass_half = fclass_floor(halfslope).sup_error;

    bool ok = true;
    double maxsum_best = std::numeric_limits<double>::infinity();
    ordered_json maxsum_fits = ordered_json::array();
    const std::vector<std::pair<int, std::vector<int>>> shapes =
        scale == ClaimScale::Smoke
            ? std::vector<std::pair<int, std::vector<int>>>{{0, {}}, {1, {4}}}
            : std::vector<std::pair<int, std::vector<int>>>{{0, {}}, {1, {4}}, {2, {4, 4}}};
    for (const auto& [depth, widths] : shapes) {
        for (int s = 0; s < cfg.fit_seeds; ++s) {
            const NetworkSpec n0 = random_network(NodeKind::max_sum(), depth, widths, seed + s);
            const ApproxReport r = fit(n0, square, cfg.fit_budget, seed + 17 * s);
            maxsum_fits.push_back(r.sup_error);
            maxsum_best = std::min(maxsum_best, r.sup_error);
            ok = ok && r.sup_error >= tropical_sq - 1e-6;
        }
    }

    double maxstar_worst_margin = std::numeric_limits<double>::infinity();
    for (int s = 0; s < std::max(1, cfg.fit_seeds - 1); ++s) {
        const std::vector<int> w{6};
        const NetworkSpec n0 =
            random_network(NodeKind::max_star_sum(Activation::Relu), 1, w, seed + 31 * s);
        const ApproxReport r = fit(n0, twice, cfg.fit_budget / 2, seed + 7 * s);
        maxstar_worst_margin = std::min(maxstar_worst_margin, r.sup_error);
        ok = ok && r.sup_error >= 0.25 - 1e-3;                 // analytic floor clause
        ok = ok && r.sup_error >= box_double - 1e-6;           // derivative-box floor
    }

    // signed max-sum slopes are bounded by 1 in magnitude, so the square
    // target's [-1, 1] box floor binds its fits as well
    const double box_square_signed = lower_bound_floor(square, -1.0, 1.0);
    double signed_square_best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < std::max(1, cfg.fit_seeds - 1); ++s) {
        const std::vector<int> w{4};
        const NetworkSpec n0 = random_network(NodeKind::signed_max_sum(), 1, w, seed + 13 * s);
        const ApproxReport r = fit(n0, square, cfg.fit_budget / 2, seed + 5 * s);
        signed_square_best = std::min(signed_square_best, r.sup_error);
        ok = ok && r.sup_error >= box_square_signed - 1e-6;
    }
    // informative only: what the signed family actually reaches on a
    // slope-1/2 target vs the three-slope form-family floor
    const ApproxReport signed_half =
        fit(random_network(NodeKind::signed_max_sum(), 1, std::vector<int>{4}, seed + 19),
            halfslope, cfg.fit_budget / 2, seed + 6);

    // universality contrast: constructive init plus polish
    const NetworkSpec sp_init = relu_interpolation_network(square, 16);
    const ApproxReport sp_fit = fit(sp_init, square, cfg.fit_budget / 2, seed + 3);
    NetworkSpec lns_init = sp_fit.trained;
    lns_init.kind = NodeKind::lns(Activation::Relu);
    const double lns_err = sup_error(lns_init, square);
    const NetworkSpec sp2_init = relu_interpolation_network(twice, 16);
    const ApproxReport sp2_fit = fit(sp2_init, twice, cfg.fit_budget / 2, seed + 4);
    NetworkSpec lns2 = sp2_fit.trained;
    lns2.kind = NodeKind::lns(Activation::Relu);
    const double lns2_err = sup_error(lns2, twice);
    ok = ok && sp_fit.sup_error < 0.05 && lns_err < 0.05 && sp2_fit.sup_error < 0.05 &&
         lns2_err < 0.05;
    ok = ok && std::fabs(lns_err - sp_fit.sup_error) <= 1e-6;

    ClaimCheck c{"lemma1", ok, {}, claim_anchor("lemma1")};
    c.evidence["tropical_floor_square"] = tropical_sq;
    c.evidence["maxsum_fit_errors"] = maxsum_fits;
    c.evidence["maxsum_best"] = maxsum_best;
    c.evidence["maxstar_double_best"] = maxstar_worst_margin;
    c.evidence["maxstar_floor_analytic"] = 0.25;
    c.evidence["box_floor_double"] = box_double;
    c.evidence["sumproduct_square"] = sp_fit.sup_error;
    c.evidence["lns_square"] = lns_err;
    c.evidence["sumproduct_double"] = sp2_fit.sup_error;
    c.evidence["lns_double"] = lns2_err;
    c.evidence["box_floor_square_signed"] = box_square_signed;
    c.evidence["signed_square_best"] = signed_square_best;
    c.evidence["fclass_floor_halfslope"] = fclass_half;
    c.evidence["signed_halfslope_fit"] = signed_half.sup_error;
    return c;
}

using LnsMulFn = SignedLogValue (*)(const SignedLogValue&, const SignedLogValue&);

// Log-domain arithmetic equals linear arithmetic: the positive-operand
// identity, signed multiply-accumulate chains, and whole networks against
// their linear twins.
inline ClaimCheck check_eq6_lns(std::uint64_t seed, ClaimScale scale,
                                LnsMulFn mul_fn = &lns_mul) {
    const ClaimConfig cfg = claim_config(scale);
    std::mt19937_64 rng(detail::claim_seed(seed, 0x4536));
    std::uniform_real_distribution<double> logmag(-10.0, 10.0);
    std::uniform_real_distribution<double> lin(-8.0, 8.0);
    std::uniform_int_distribution<int> coin(0, 1);

    // ln(sum a_i b_i) == max*_i(ln a_i + ln b_i) for positive operands
    double max_identity_dev = 0.0;
    for (int t = 0; t < cfg.eq6_cases; ++t) {
        std::array<double, 8> logs{};
        double linear_sum = 0.0;
        for (int i = 0; i < 8; ++i) {
            const double la = logmag(rng) * 0.5, lb = logmag(rng) * 0.5;
            logs[i] = la + lb;
            linear_sum += std::exp(la) * std::exp(lb);
        }
        const double lhs = std::log(linear_sum);
        const double rhs = max_star_n(logs);
        max_identity_dev = std::max(max_identity_dev, std::fabs(lhs - rhs));
    }

    // signed multiply-accumulate chains through the log domain
    double max_mac_rel = 0.0;
    for (int t = 0; t < cfg.eq6_cases; ++t) {
        SignedLogValue acc = from_linear(lin(rng));
        double linear = to_linear(acc);
        double scale_mag = std::fabs(linear);
        for (int i = 0; i < 6; ++i) {
            const double xi = lin(rng) * (coin(rng) ? 1.0 : -1.0);
            const double wi = lin(rng) * (coin(rng) ? 1.0 : -1.0);
            acc = lns_add(acc, mul_fn(from_linear(xi), from_linear(wi)));
            linear += xi * wi;
            scale_mag += std::fabs(xi * wi);
        }
        const double denom = std::max(scale_mag, 1e-12);
        max_mac_rel = std::max(max_mac_rel, std::fabs(to_linear(acc) - linear) / denom);
    }

    // whole networks against their linear twins, skipping near-cancellation
    double max_net_rel = 0.0;
    long net_points = 0, excluded = 0;
    const std::array<Activation, 3> acts{Activation::Identity, Activation::Relu,
                                         Activation::Softplus};
    for (int n = 0; n < cfg.lns_nets; ++n) {
        const int depth = 1 + n % 3;
        const auto widths = detail::random_widths(rng, depth, 6);
        NetworkSpec lin_net =
            random_network(NodeKind::sum_product(acts[n % acts.size()]), depth, widths, rng());
        NetworkSpec lns_net = lin_net;
        lns_net.kind = NodeKind::lns(lin_net.kind.activation);
        std::uniform_real_distribution<double> xs(-4.0, 4.0);
        for (int p = 0; p < 40; ++p) {
            const double x = xs(rng);
            if (detail::min_cancellation_ratio(lin_net, x) < 1e-3) {
                ++excluded;
                continue;
            }
            const double a = evaluate(lin_net, x), b = evaluate(lns_net, x);
            max_net_rel = std::max(max_net_rel, std::fabs(a - b) / std::max(std::fabs(a), 1e-12));
            ++net_points;
        }
    }

    const bool ok = max_identity_dev <= 1e-11 && max_mac_rel <= 1e-10 && max_net_rel <= 1e-9;
    ClaimCheck c{"eq6-lns-equiv", ok, {}, claim_anchor("eq6-lns-equiv")};
    c.evidence["identity_cases"] = cfg.eq6_cases;
    c.evidence["max_identity_deviation"] = max_identity_dev;
    c.evidence["mac_cases"] = cfg.eq6_cases;
    c.evidence["max_mac_relative_error"] = max_mac_rel;
    c.evidence["net_points"] = net_points;
    c.evidence["excluded_near_cancellation"] = excluded;
    c.evidence["max_net_relative_error"] = max_net_rel;
    c.evidence["tolerances"] = {{"identity", 1e-11}, {"mac", 1e-10}, {"net", 1e-9}};
    return c;
}

inline std::vector<ClaimCheck> run_all(std::uint64_t seed, ClaimScale scale) {
    std::vector<ClaimCheck> checks;
    checks.push_back(check_eq6_lns(seed, scale));
    checks.push_back(check_lemma1(seed, scale));
    checks.push_back(check_lemma2(seed, scale));
    checks.push_back(check_lemma3(seed, scale));
    checks.push_back(check_prop1(seed, scale));
    checks.push_back(check_thm1(seed, scale));
    checks.push_back(check_thm2(seed, scale));
    checks.push_back(check_thm3(seed, scale));
    std::sort(checks.begin(), checks.end(),
              [](const ClaimCheck& a, const ClaimCheck& b) { return a.id < b.id; });
    return checks;
}

inline ordered_json claims_report_json(const std::vector<ClaimCheck>& checks, std::uint64_t seed,
                                       ClaimScale scale) {
    const ClaimConfig cfg = claim_config(scale);
    ordered_json j;
    j["version"] = kVersion;
    j["seed"] = seed;
    j["scale"] = scale_to_string(scale);
    j["config"] = {{"nets", cfg.nets},
                   {"probes", cfg.probes},
                   {"lemma2_tuples", cfg.lemma2_tuples},
                   {"eq6_cases", cfg.eq6_cases},
                   {"lns_nets", cfg.lns_nets},
                   {"prop1_nets", cfg.prop1_nets},
                   {"fit_budget", cfg.fit_budget},
                   {"fit_seeds", cfg.fit_seeds},
                   {"probe_interval", {kProbeLo, kProbeHi}},
                   {"agreement_grid", {kAgreeLo, kAgreeHi, kAgreeGrid}}};
    j["claims"] = ordered_json::array();
    for (const ClaimCheck& c : checks) {
        ordered_json cj;
        cj["claim"] = c.id;
        cj["status"] = c.pass ? "pass" : "fail";
        cj["evidence"] = c.evidence;
        cj["anchor"] = c.anchor;
        j["claims"].push_back(std::move(cj));
    }
    return j;
}

}  // namespace morphnet
