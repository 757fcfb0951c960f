#pragma once

// Target functions for the approximation experiments, derivative-gap lower
// bounds, and brute-force floors over the two canonical form families.

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "morphnet/canonical.hpp"
#include "morphnet/errors.hpp"

namespace morphnet {

struct TargetFunction {
    std::string id;
    std::function<double(double)> f;
    double lo = 0.0;
    double hi = 1.0;
};

inline const std::vector<TargetFunction>& builtin_targets() {
    static const std::vector<TargetFunction> targets = {
        {"square", [](double x) { return x * x; }, 0.0, 1.0},
        {"double", [](double x) { return 2.0 * x; }, 0.0, 1.0},
        {"neg", [](double x) { return -x; }, 0.0, 1.0},
        {"halfslope", [](double x) { return 0.5 * x; }, 0.0, 1.0},
        {"sinewave", [](double x) { return std::sin(2.0 * std::numbers::pi * x); }, 0.0, 1.0},
    };
    return targets;
}

inline const TargetFunction& target_by_id(const std::string& id) {
    std::string known;
    for (const auto& t : builtin_targets()) {
        if (t.id == id) return t;
        known += known.empty() ? t.id : ", " + t.id;
    }
    throw ValidationError("unknown target '" + id + "' (valid: " + known + ")");
}

inline std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    return g;
}

// Max absolute deviation of the network from the target over an inclusive
// n-point grid; the shared metric for fits and floors.
inline double sup_error(const NetworkSpec& net, const TargetFunction& target, int grid_n = 512) {
    double e = 0.0;
    for (double x : linspace(target.lo, target.hi, grid_n))
        e = std::max(e, std::fabs(evaluate(net, x) - target.f(x)));
    return e;
}

// Largest eps such that no function with derivative in [a, b] a.e. can stay
// uniformly within eps of the target: over grid pairs c < d, the gap
//   (h(d) - h(c) - b (d - c)) / 2   or   (a (d - c) - (h(d) - h(c))) / 2
// must be paid by any approximant, clamped at 0.
inline double lower_bound_floor(const TargetFunction& target, double a, double b,
                                int grid_n = 512) {
    const auto grid = linspace(target.lo, target.hi, grid_n);
    std::vector<double> h(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) h[i] = target.f(grid[i]);
    double floor = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = i + 1; j < grid.size(); ++j) {
            const double run = grid[j] - grid[i];
            const double rise = h[j] - h[i];
            floor = std::max(floor, (rise - b * run) / 2.0);
            floor = std::max(floor, (a * run - rise) / 2.0);
        }
    return floor;
}

namespace detail {

// Pattern-search refinement shared by the two brute-force floors: sweep a
// coarse grid, then repeatedly halve the step and hill-descend until the
// step underflows the requested resolution.
template <typename Eval>
double refine_floor(std::vector<double>& point, double coarse_step, Eval&& eval) {
    double best = eval(point);
    std::vector<double> trial = point;
    double step = coarse_step;
    while (step > 1e-10) {
        step *= 0.5;
        bool any = true;
        while (any) {
            any = false;
            for (std::size_t k = 0; k < point.size(); ++k) {
                for (double dir : {+1.0, -1.0}) {
                    trial = point;
                    trial[k] += dir * step;
                    const double e = eval(trial);
                    if (e < best) {
                        best = e;
                        point = trial;
                        any = true;
                    }
                }
            }
        }
    }
    return best;
}

}  // namespace detail

struct TropicalFloor {
    TropicalAffineForm form;
    double sup_error = 0.0;
};

// min over (w0, w1) of sup |max(w0, w1+x) - target| on the grid, by 2-D
// coarse grid plus refinement. The objective is 1-Lipschitz in (w0, w1), so
// the refinement resolves the grid optimum far below 1e-6.
inline TropicalFloor tropical_floor(const TargetFunction& target, int grid_n = 512) {
    const auto grid = linspace(target.lo, target.hi, grid_n);
    std::vector<double> h(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) h[i] = target.f(grid[i]);
    auto eval = [&](const std::vector<double>& p) {
        double e = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            e = std::max(e, std::fabs(std::max(p[0], p[1] + grid[i]) - h[i]));
        return e;
    };
    std::vector<double> best_pt{0.0, 0.0};
    double best = eval(best_pt);
    for (double w0 = -3.0; w0 <= 3.0; w0 += 0.05)
        for (double w1 = -3.0; w1 <= 3.0; w1 += 0.05) {
            const std::vector<double> p{w0, w1};
            const double e = eval(p);
            if (e < best) {
                best = e;
                best_pt = p;
            }
        }
    best = detail::refine_floor(best_pt, 0.05, eval);
    return {{best_pt[0], best_pt[1]}, best};
}

struct FClassFloor {
    FClassForm form;
    double sup_error = 0.0;
};

// Same search over (c1, c2, c3) with all three terms present; dropping a
// term is equivalent to pushing its coefficient far down, which the search
// can do on its own.
inline FClassFloor fclass_floor(const TargetFunction& target, int grid_n = 512) {
    const auto grid = linspace(target.lo, target.hi, grid_n);
    std::vector<double> h(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) h[i] = target.f(grid[i]);
    auto eval = [&](const std::vector<double>& p) {
        double e = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double v = std::max(p[0], std::max(p[1] - grid[i], p[2] + grid[i]));
            e = std::max(e, std::fabs(v - h[i]));
        }
        return e;
    };
    std::vector<double> best_pt{0.0, 0.0, 0.0};
    double best = eval(best_pt);
    for (double c1 = -3.0; c1 <= 3.0; c1 += 0.1)
        for (double c2 = -3.0; c2 <= 3.0; c2 += 0.1)
            for (double c3 = -3.0; c3 <= 3.0; c3 += 0.1) {
                const std::vector<double> p{c1, c2, c3};
                const double e = eval(p);
                if (e < best) {
                    best = e;
                    best_pt = p;
                }
            }
    best = detail::refine_floor(best_pt, 0.1, eval);
    return {{best_pt[0], best_pt[1], best_pt[2]}, best};
}

// One-hidden-layer relu network that interpolates the target piecewise
// linearly: unit j is relu(x - t_j) with knots t_j spaced across the domain,
// output weights carry the slope increments. Used as a constructive starting
// point for the universal families.
inline NetworkSpec relu_interpolation_network(const TargetFunction& target, int width) {
    if (width < 1) throw std::invalid_argument("relu_interpolation_network: width must be >= 1");
    const double span = target.hi - target.lo;
    const double dx = span / width;
    NetworkSpec net;
    net.kind = NodeKind::sum_product(Activation::Relu);
    LayerSpec hidden;
    std::vector<double> knots(width);
    for (int j = 0; j < width; ++j) {
        knots[j] = target.lo + j * dx;
        hidden.weights.push_back({1.0});
        hidden.biases.push_back(-knots[j]);
    }
    LayerSpec out;
    std::vector<double> wrow(width);
    double prev_slope = 0.0;
    for (int j = 0; j < width; ++j) {
        const double x0 = knots[j];
        const double x1 = std::min(target.hi, x0 + dx);
        const double slope = (target.f(x1) - target.f(x0)) / (x1 - x0);
        wrow[j] = slope - prev_slope;
        prev_slope = slope;
    }
    out.weights.push_back(std::move(wrow));
    out.biases.push_back(target.f(target.lo));
    net.layers = {std::move(hidden), std::move(out)};
    return net;
}

// Independent check of what piecewise-linear interpolation achieves on the
// target: sup deviation of the (knots+1)-point interpolant on a fine grid.
// Deliberately built from the target alone, with no NetworkSpec involved.
inline double pl_interpolation_error(const TargetFunction& target, int segments,
                                     int fine_grid = 4096) {
    const auto knots = linspace(target.lo, target.hi, segments + 1);
    std::vector<double> fk(knots.size());
    for (std::size_t i = 0; i < knots.size(); ++i) fk[i] = target.f(knots[i]);
    double e = 0.0;
    for (double x : linspace(target.lo, target.hi, fine_grid)) {
        std::size_t seg = std::min<std::size_t>(
            segments - 1, static_cast<std::size_t>((x - target.lo) / (target.hi - target.lo) *
                                                   segments));
        const double t = (x - knots[seg]) / (knots[seg + 1] - knots[seg]);
        const double pl = fk[seg] + t * (fk[seg + 1] - fk[seg]);
        e = std::max(e, std::fabs(pl - target.f(x)));
    }
    return e;
}

}  // namespace morphnet
