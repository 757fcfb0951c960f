#pragma once

// Derivative-free fitting of a network to a target by coordinate
// perturbation with geometric step decay and restarts. The max families give
// objectives that are piecewise constant in some parameters, so nothing
// gradient-based would work anyway; the point of a fit here is to probe
// representational floors, not training dynamics.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "morphnet/targets.hpp"

namespace morphnet {

struct FitTrace {
    long evaluations = 0;
    int restarts = 0;
    double final_step = 0.0;
};

struct ApproxReport {
    std::string target_id;
    NodeKind kind;
    int depth = 0;
    std::vector<int> widths;
    NetworkSpec trained;
    double sup_error = 0.0;
    int grid_size = 512;
    long budget = 0;
    std::uint64_t seed = 0;
    FitTrace trace;
};

// Proven derivative boxes per node family; families without one (the
// universal ones) return nullopt.
inline std::optional<std::pair<double, double>> derivative_box(NodeKind kind) {
    switch (kind.op) {
        case NodeOp::MaxSum: return {{0.0, 1.0}};
        case NodeOp::SignedMaxSum: return {{-1.0, 1.0}};
        case NodeOp::MaxStarSum: return {{0.0, 1.0}};
        default: return std::nullopt;
    }
}

namespace detail {

// Weights and biases are the searchable parameters; signs stay fixed.
inline std::vector<double> flatten_params(const NetworkSpec& net) {
    std::vector<double> p;
    for (const auto& layer : net.layers) {
        for (const auto& row : layer.weights) p.insert(p.end(), row.begin(), row.end());
        p.insert(p.end(), layer.biases.begin(), layer.biases.end());
    }
    return p;
}

inline void unflatten_params(NetworkSpec& net, const std::vector<double>& p) {
    std::size_t k = 0;
    for (auto& layer : net.layers) {
        for (auto& row : layer.weights)
            for (double& w : row) w = p[k++];
        for (double& b : layer.biases) b = p[k++];
    }
}

}  // namespace detail

inline ApproxReport fit(const NetworkSpec& net0, const TargetFunction& target, long budget,
                        std::uint64_t seed, int grid_size = 512) {
    if (budget < 1) throw std::invalid_argument("fit: budget must be >= 1");
    validate(net0);
    const auto grid = linspace(target.lo, target.hi, grid_size);
    std::vector<double> ht(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) ht[i] = target.f(grid[i]);

    NetworkSpec work = net0;
    long evals = 0;
    auto objective = [&](const std::vector<double>& p) {
        detail::unflatten_params(work, p);
        ++evals;
        double e = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            e = std::max(e, std::fabs(evaluate(work, grid[i]) - ht[i]));
        return e;
    };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);

    const int restarts = 3;
    const long per_restart = std::max<long>(1, budget / restarts);
    std::vector<double> best_params = detail::flatten_params(net0);
    double best = objective(best_params);
    double last_step = 0.0;
    int restarts_run = 0;

    for (int r = 0; r < restarts && evals < budget; ++r) {
        ++restarts_run;
        std::vector<double> params = detail::flatten_params(net0);
        if (r > 0)
            for (double& v : params) v = unif(rng);
        double cur = objective(params);
        double step = 0.5;
        const long restart_cap = std::min<long>(budget, evals + per_restart);
        std::vector<std::size_t> order(params.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        while (step >= 1e-7 && evals < restart_cap) {
            std::shuffle(order.begin(), order.end(), rng);
            bool improved = false;
            for (std::size_t idx : order) {
                if (evals >= restart_cap) break;
                for (double dir : {+1.0, -1.0}) {
                    std::vector<double> trial = params;
                    trial[idx] += dir * step;
                    const double e = objective(trial);
                    if (e < cur) {
                        cur = e;
                        params = std::move(trial);
                        improved = true;
                        break;
                    }
                    if (evals >= restart_cap) break;
                }
            }
            if (!improved) step *= 0.5;
        }
        last_step = step;
        if (cur < best) {
            best = cur;
            best_params = params;
        }
    }

    ApproxReport report;
    report.target_id = target.id;
    report.kind = net0.kind;
    report.depth = net0.depth();
    for (int l = 0; l < net0.depth(); ++l) report.widths.push_back(net0.layers[l].width());
    report.trained = net0;
    detail::unflatten_params(report.trained, best_params);
    report.sup_error = best;
    report.grid_size = grid_size;
    report.budget = budget;
    report.seed = seed;
    report.trace = {evals, restarts_run, last_step};
    return report;
}

inline std::string widths_to_string(const std::vector<int>& widths) {
    if (widths.empty()) return "-";
    std::string s;
    for (std::size_t i = 0; i < widths.size(); ++i)
        s += (i ? "x" : "") + std::to_string(widths[i]);
    return s;
}

}  // namespace morphnet
