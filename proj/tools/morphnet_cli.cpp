// Experiment runner: network canonicalization, derivative probing, target
// fitting, the claims suite, and the LNS equivalence check, from the command
// line.
//
// Exit codes: 0 success, 1 check/claim failure, 2 usage error, 3 wrong or
// unknown node kind, 4 I/O or parse failure.

#include <cstdint>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "morphnet/morphnet.hpp"

namespace {

using namespace morphnet;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitKind = 3;
constexpr int kExitIo = 4;

// command-line level misuse (bad target name, inconsistent depth/widths)
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string csv_preamble(std::uint64_t seed, const std::string& config) {
    std::ostringstream os;
    os << "# version=" << kVersion << "\n";
    os << "# seed=" << seed << "\n";
    os << "# config: " << config << "\n";
    return os.str();
}

std::string format_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

NodeKind kind_from_cli(const std::string& kind, const std::string& activation) {
    NodeKind k;
    k.op = node_op_from_string(kind);  // KindError on unknown kinds
    k.activation = Activation::Identity;
    if (k.has_activation()) {
        k.activation = activation_from_string(activation);
        // max*-sum hidden layers default to relu unless told otherwise
        if (k.op == NodeOp::MaxStarSum && activation == "identity")
            k.activation = Activation::Relu;
    } else if (activation != "identity") {
        throw UsageError("node kind " + kind + " does not take an activation");
    }
    return k;
}

const TargetFunction& target_from_cli(const std::string& id) {
    try {
        return target_by_id(id);
    } catch (const ValidationError& e) {
        throw UsageError(e.what());
    }
}

NetworkSpec random_net_from_cli(NodeKind kind, int depth, std::vector<int> widths,
                                std::uint64_t seed) {
    if (widths.empty()) widths.assign(depth, 4);  // default width 4 per hidden layer
    if (static_cast<int>(widths.size()) != depth)
        throw UsageError("need exactly --depth entries in --widths (got " +
                         std::to_string(widths.size()) + " for depth " + std::to_string(depth) +
                         ")");
    return random_network(kind, depth, widths, seed);
}

int cmd_canon(const std::string& spec_path, const std::string& out_path, std::string report_path,
              int grid_n) {
    const ordered_json j = ordered_json::parse(read_file(spec_path));
    const NetworkSpec net = network_from_json(j);

    ordered_json form_json;
    int flipped = 0;
    CanonicalForm form = TropicalAffineForm{};
    if (net.kind.op == NodeOp::MaxSum) {
        const TropicalAffineForm f = canonicalize_max_sum(net);
        form_json = canonical_to_json(f);
        form = f;
    } else if (net.kind.op == NodeOp::SignedMaxSum) {
        const SignedCanonResult r = canonicalize_signed_max_sum_detail(net);
        form_json = canonical_to_json(r.form);
        form = r.form;
        flipped = r.flipped_joins;
    } else {
        throw KindError("canon: node kind must be max-sum or signed-max-sum, got " +
                        node_kind_to_string(net.kind));
    }

    double max_dev = 0.0;
    for (double x : linspace(kAgreeLo, kAgreeHi, grid_n))
        max_dev = std::max(max_dev, std::fabs(eval_canonical(form, x) - evaluate(net, x)));

    write_file_atomic(out_path, form_json.dump(2) + "\n");
    if (report_path.empty()) report_path = out_path + ".report.json";
    ordered_json report;
    report["version"] = kVersion;
    report["config"] = {{"spec", spec_path},
                        {"out", out_path},
                        {"grid", grid_n},
                        {"interval", {kAgreeLo, kAgreeHi}}};
    report["node_kind"] = node_kind_to_string(net.kind);
    report["form"] = form_json;
    report["max_deviation"] = max_dev;
    report["flipped_joins"] = flipped;
    write_file_atomic(report_path, report.dump(2) + "\n");

    std::cout << "canonical form: " << form_json.dump() << "\n";
    std::cout << "max deviation over " << grid_n << " points: " << max_dev << "\n";
    if (max_dev > 1e-9) {
        if (flipped > 0) {
            std::cerr << "canon: form is a three-slope surrogate, not pointwise equal ("
                      << flipped
                      << " multi-term sign flips; three-slope forms cannot express this"
                         " network exactly)\n";
        } else {
            std::cerr << "canon: internal error, canonical form deviates by " << max_dev << "\n";
        }
        return kExitCheckFailed;
    }
    return kExitOk;
}

int cmd_probe(const std::string& spec_path, const std::string& kind, const std::string& activation,
              int depth, const std::vector<int>& widths, std::uint64_t seed, int points,
              double step, int order, const std::string& out_path) {
    NetworkSpec net;
    if (!spec_path.empty())
        net = network_from_json(ordered_json::parse(read_file(spec_path)));
    else
        net = random_net_from_cli(kind_from_cli(kind, activation), depth, widths, seed);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> xs(kProbeLo, kProbeHi);
    std::ostringstream cfg;
    cfg << "command=probe kind=" << node_kind_to_string(net.kind) << " points=" << points
        << " step=" << step << " order=" << order;
    std::ostringstream csv;
    csv << csv_preamble(seed, cfg.str());
    csv << "x,h,order,value,near_kink\n";
    int kept = 0;
    for (int i = 0; i < points; ++i) {
        const DerivativeProbe p = finite_diff(net, xs(rng), step, order);
        csv << format_double(p.x) << "," << format_double(p.h) << "," << p.order << ","
            << format_double(p.value) << "," << (p.near_kink ? 1 : 0) << "\n";
        if (!p.near_kink) ++kept;
    }
    write_file_atomic(out_path, csv.str());
    std::cout << "wrote " << points << " probes (" << kept << " off-kink) to " << out_path << "\n";
    return kExitOk;
}

int cmd_fit(const std::string& target_id, const std::string& kind, const std::string& activation,
            int depth, const std::vector<int>& widths, std::uint64_t seed, long budget, int grid_n,
            const std::string& init, const std::string& out_path) {
    const TargetFunction& target = target_from_cli(target_id);
    const NodeKind nk = kind_from_cli(kind, activation);
    NetworkSpec net0;
    if (init == "interp") {
        if (nk.op != NodeOp::SumProduct && nk.op != NodeOp::Lns)
            throw UsageError("fit: --init interp requires sum-product or lns");
        const int width = widths.empty() ? 16 : widths[0];
        net0 = relu_interpolation_network(target, width);
        net0.kind = nk;
    } else if (init == "random") {
        net0 = random_net_from_cli(nk, depth, widths, seed);
    } else {
        throw UsageError("fit: --init must be random or interp");
    }

    const ApproxReport r = fit(net0, target, budget, seed, grid_n);

    double floor = 0.0;
    if (nk.op == NodeOp::MaxSum) {
        floor = tropical_floor(target, grid_n).sup_error;
    } else if (auto box = derivative_box(nk)) {
        floor = lower_bound_floor(target, box->first, box->second, grid_n);
    }

    std::ostringstream cfg;
    cfg << "command=fit target=" << target_id << " kind=" << node_kind_to_string(nk)
        << " init=" << init << " grid=" << grid_n << " budget=" << budget;
    std::ostringstream csv;
    csv << csv_preamble(seed, cfg.str());
    csv << "target,node_kind,depth,widths,seed,sup_error,floor,budget\n";
    csv << r.target_id << "," << node_kind_to_string(r.kind) << "," << r.depth << ","
        << widths_to_string(r.widths) << "," << r.seed << "," << format_double(r.sup_error) << ","
        << format_double(floor) << "," << r.budget << "\n";
    write_file_atomic(out_path, csv.str());

    std::ostringstream plot;
    plot << csv_preamble(seed, cfg.str());
    plot << "x,target,model\n";
    for (double x : linspace(target.lo, target.hi, grid_n))
        plot << format_double(x) << "," << format_double(target.f(x)) << ","
             << format_double(evaluate(r.trained, x)) << "\n";
    const std::string plot_path = out_path + ".plot.csv";
    write_file_atomic(plot_path, plot.str());

    std::cout << "sup_error=" << r.sup_error << " floor=" << floor
              << " evals=" << r.trace.evaluations << "\n";
    std::cout << "wrote " << out_path << " and " << plot_path << "\n";
    return kExitOk;
}

int cmd_claims(std::uint64_t seed, const std::string& scale_str, const std::string& out_path) {
    ClaimScale scale;
    try {
        scale = scale_from_string(scale_str);
    } catch (const ValidationError& e) {
        throw UsageError(e.what());
    }
    const std::vector<ClaimCheck> checks = run_all(seed, scale);
    const ordered_json report = claims_report_json(checks, seed, scale);
    if (!out_path.empty()) write_file_atomic(out_path, report.dump(2) + "\n");

    std::cout << std::left << std::setw(16) << "claim" << std::setw(8) << "status"
              << "anchor\n";
    bool all_pass = true;
    for (const ClaimCheck& c : checks) {
        std::cout << std::left << std::setw(16) << c.id << std::setw(8)
                  << (c.pass ? "pass" : "FAIL") << c.anchor << "\n";
        all_pass = all_pass && c.pass;
    }
    std::cout << (all_pass ? "all claims pass" : "some claims failed") << "\n";
    return all_pass ? kExitOk : kExitCheckFailed;
}

int cmd_lns_check(std::uint64_t seed, const std::string& scale_str, const std::string& out_path) {
    ClaimScale scale;
    try {
        scale = scale_from_string(scale_str);
    } catch (const ValidationError& e) {
        throw UsageError(e.what());
    }
    const ClaimCheck c = check_eq6_lns(seed, scale);
    ordered_json report;
    report["version"] = kVersion;
    report["seed"] = seed;
    report["config"] = {{"command", "lns-check"}, {"scale", scale_to_string(scale)}};
    report["status"] = c.pass ? "pass" : "fail";
    report["evidence"] = c.evidence;
    if (!out_path.empty()) write_file_atomic(out_path, report.dump(2) + "\n");
    std::cout << "lns equivalence: " << (c.pass ? "pass" : "FAIL") << "\n"
              << c.evidence.dump(2) << "\n";
    return c.pass ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"morphological / max-like neural node experiments"};
    app.require_subcommand(1);

    std::string spec_path, out_path, report_path, target_id = "square";
    std::string kind = "max-sum", activation = "identity", scale = "smoke", init = "random";
    std::uint64_t seed = 7;
    int canon_grid = 1000, fit_grid = 512, points = 200, order = 1, depth = 1;
    long budget = 4000;
    double step = 1e-5;
    std::vector<int> widths;

    auto* canon = app.add_subcommand("canon", "collapse a max-sum or signed-max-sum network");
    canon->add_option("--spec", spec_path, "network spec JSON")->required();
    canon->add_option("--out", out_path, "canonical form JSON output")->required();
    canon->add_option("--report", report_path, "agreement report path (default <out>.report.json)");
    canon->add_option("--grid", canon_grid, "agreement grid size")->capture_default_str();

    auto* probe = app.add_subcommand("probe", "finite-difference derivative probes");
    probe->add_option("--spec", spec_path, "network spec JSON (otherwise a random net)");
    probe->add_option("--kind", kind, "node kind for random nets")->capture_default_str();
    probe->add_option("--activation", activation, "activation for random nets")
        ->capture_default_str();
    probe->add_option("--depth", depth, "hidden layers for random nets")->capture_default_str();
    probe->add_option("--widths", widths, "hidden layer widths");
    probe->add_option("--seed", seed, "rng seed")->capture_default_str();
    probe->add_option("--points", points, "number of probe points")->capture_default_str();
    probe->add_option("--step", step, "finite difference step h")->capture_default_str();
    probe->add_option("--order", order, "difference order (1 or 2)")->capture_default_str();
    probe->add_option("--out", out_path, "probe CSV output")->required();

    auto* fitc = app.add_subcommand("fit", "fit a network to a built-in target");
    fitc->add_option("--target", target_id, "target id")->capture_default_str();
    fitc->add_option("--kind", kind, "node kind")->capture_default_str();
    fitc->add_option("--activation", activation, "activation")->capture_default_str();
    fitc->add_option("--depth", depth, "hidden layers")->capture_default_str();
    fitc->add_option("--widths", widths, "hidden layer widths");
    fitc->add_option("--seed", seed, "rng seed")->capture_default_str();
    fitc->add_option("--budget", budget, "objective evaluation budget")->capture_default_str();
    fitc->add_option("--grid", fit_grid, "sup-norm grid size")->capture_default_str();
    fitc->add_option("--init", init, "initialization: random or interp")->capture_default_str();
    fitc->add_option("--out", out_path, "report CSV output")->required();

    auto* claims = app.add_subcommand("claims", "run the full claims suite");
    claims->add_option("--seed", seed, "rng seed")->capture_default_str();
    claims->add_option("--scale", scale, "smoke or full")->capture_default_str();
    claims->add_option("--out", out_path, "JSON report path");

    auto* lns = app.add_subcommand("lns-check", "log-domain vs linear equivalence report");
    lns->add_option("--seed", seed, "rng seed")->capture_default_str();
    lns->add_option("--scale", scale, "smoke or full")->capture_default_str();
    lns->add_option("--out", out_path, "JSON report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (canon->parsed()) return cmd_canon(spec_path, out_path, report_path, canon_grid);
        if (probe->parsed())
            return cmd_probe(spec_path, kind, activation, depth, widths, seed, points, step, order,
                             out_path);
        if (fitc->parsed())
            return cmd_fit(target_id, kind, activation, depth, widths, seed, budget, fit_grid,
                           init, out_path);
        if (claims->parsed()) return cmd_claims(seed, scale, out_path);
        if (lns->parsed()) return cmd_lns_check(seed, scale, out_path);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const morphnet::KindError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitKind;
    } catch (const morphnet::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
