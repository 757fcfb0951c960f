#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "morphnet/network.hpp"
#include "morphnet/serialize.hpp"
#include "oracles.hpp"

using namespace morphnet;

namespace {

NetworkSpec relu_net(std::uint64_t seed, int depth, std::vector<int> widths) {
    return random_network(NodeKind::sum_product(Activation::Relu), depth, widths, seed);
}

NetworkSpec single_max_node() {
    NetworkSpec net;
    net.kind = NodeKind::max_sum();
    // weight 0 is the additive identity of w + x, so this is max(0, x)
    net.layers = {{{{0.0}}, {0.0}, {}}};
    return net;
}

}  // namespace

TEST_CASE("depth zero max-sum node is max(b, w + x)") {
    const NetworkSpec net = single_max_node();
    CHECK(net.depth() == 0);
    CHECK(evaluate(net, 2.0) == 2.0);
    CHECK(evaluate(net, -3.0) == 0.0);
}

TEST_CASE("one hidden layer max-sum matches the direct formula") {
    std::mt19937_64 rng(31);
    for (int n = 0; n < 50; ++n) {
        const std::vector<int> widths{1 + static_cast<int>(rng() % 8)};
        const NetworkSpec net = random_network(NodeKind::max_sum(), 1, widths, rng());
        for (double x = -20.0; x <= 20.0; x += 0.5)
            CHECK(std::fabs(evaluate(net, x) - oracles::direct_one_hidden_max_sum(net, x)) <=
                  1e-12);
    }
}

TEST_CASE("depth three relu sum-product matches a naive evaluator") {
    std::mt19937_64 rng(32);
    for (int n = 0; n < 20; ++n) {
        const NetworkSpec net = relu_net(rng(), 3, {5, 4, 6});
        std::uniform_real_distribution<double> xs(-10.0, 10.0);
        for (int p = 0; p < 100; ++p) {
            const double x = xs(rng);
            CHECK(std::fabs(evaluate(net, x) - oracles::naive_relu_net(net, x)) <= 1e-12);
        }
    }
}

TEST_CASE("validation points at the offending layer") {
    NetworkSpec net = relu_net(33, 2, {3, 3});
    net.layers[1].weights[0].push_back(0.5);  // wrong in-dim
    try {
        validate(net);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("layer 1") != std::string::npos);
    }

    NetworkSpec wide = relu_net(34, 1, {3});
    wide.layers[1].weights.push_back({0.0, 0.0, 0.0});
    wide.layers[1].biases.push_back(0.0);
    CHECK_THROWS_AS(validate(wide), ValidationError);  // output width must be 1

    NetworkSpec stray = relu_net(35, 1, {2});
    stray.layers[0].signs = {{1}, {1}};
    CHECK_THROWS_AS(validate(stray), ValidationError);  // signs without signed kind

    NetworkSpec missing = random_network(NodeKind::signed_max_sum(), 1, std::vector<int>{2}, 36);
    missing.layers[0].signs.clear();
    CHECK_THROWS_AS(validate(missing), ValidationError);
}

TEST_CASE("finite differences on max(0, x)") {
    const NetworkSpec net = single_max_node();

    const DerivativeProbe at5 = finite_diff(net, 5.0, 1e-5, 1);
    CHECK(std::fabs(at5.value - 1.0) <= 1e-6);
    CHECK(!at5.near_kink);

    const DerivativeProbe at0 = finite_diff(net, 0.0, 1e-5, 1);
    CHECK(at0.near_kink);

    const DerivativeProbe left = finite_diff(net, -4.0, 1e-5, 1);
    CHECK(std::fabs(left.value) <= 1e-6);
    CHECK(!left.near_kink);

    CHECK_THROWS_AS(finite_diff(net, 1.0, 1e-2, 1), std::invalid_argument);
    CHECK_THROWS_AS(finite_diff(net, 1.0, 1e-9, 1), std::invalid_argument);
    CHECK_THROWS_AS(finite_diff(net, 1.0, 1e-5, 3), std::invalid_argument);
}

TEST_CASE("second differences of relu nets vanish away from kinks") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> xs(-6.0, 6.0);
    for (int n = 0; n < 20; ++n) {
        const NetworkSpec net = relu_net(rng(), 2, {4, 4});
        const double tol = 1e-4 * lipschitz_bound(net) * lipschitz_bound(net);
        int found = 0;
        for (int attempt = 0; attempt < 400 && found < 20; ++attempt) {
            const DerivativeProbe p = finite_diff(net, xs(rng), 1e-3, 2);
            if (p.near_kink) continue;
            ++found;
            CHECK(std::fabs(p.value) <= tol);
        }
        CHECK(found > 0);
    }
}

TEST_CASE("traced slope agrees with finite differences off kinks") {
    std::mt19937_64 rng(38);
    std::uniform_real_distribution<double> xs(-6.0, 6.0);
    const std::vector<NodeKind> kinds{NodeKind::max_sum(), NodeKind::signed_max_sum(),
                                      NodeKind::max_star_sum(Activation::Relu),
                                      NodeKind::sum_product(Activation::Softplus)};
    for (const NodeKind kind : kinds) {
        for (int n = 0; n < 8; ++n) {
            const NetworkSpec net = random_network(kind, 2, std::vector<int>{3, 3}, rng());
            for (int p = 0; p < 40; ++p) {
                const double x = xs(rng);
                const Traced t = evaluate_traced(net, x, 1e-4);
                if (t.near_kink) continue;
                const DerivativeProbe fd = finite_diff(net, x, 1e-5, 1);
                CHECK(std::fabs(t.value - evaluate(net, x)) <= 1e-9);
                CHECK(std::fabs(t.slope - fd.value) <= 1e-5 * std::max(1.0, std::fabs(t.slope)));
            }
        }
    }
}

TEST_CASE("random networks are reproducible and distinct across seeds") {
    const std::vector<int> widths{4, 4};
    const NetworkSpec a = random_network(NodeKind::max_sum(), 2, widths, 1);
    const NetworkSpec b = random_network(NodeKind::max_sum(), 2, widths, 1);
    const NetworkSpec c = random_network(NodeKind::max_sum(), 2, widths, 2);

    REQUIRE(a.layers.size() == b.layers.size());
    bool identical = true, differs = false;
    for (std::size_t l = 0; l < a.layers.size(); ++l) {
        identical = identical && a.layers[l].weights == b.layers[l].weights &&
                    a.layers[l].biases == b.layers[l].biases;
        differs = differs || a.layers[l].weights != c.layers[l].weights ||
                  a.layers[l].biases != c.layers[l].biases;
    }
    CHECK(identical);
    CHECK(differs);

    for (double x = -10.0; x <= 10.0; x += 0.25) CHECK(std::isfinite(evaluate(a, x)));

    CHECK_THROWS_AS(random_network(NodeKind::max_sum(), 3, widths, 1), std::invalid_argument);
}

TEST_CASE("network json round trip is exact") {
    std::mt19937_64 rng(39);
    const std::vector<NodeKind> kinds{
        NodeKind::sum_product(Activation::Relu), NodeKind::max_sum(),
        NodeKind::signed_max_sum(), NodeKind::max_star_sum(Activation::Softplus),
        NodeKind::lns(Activation::Identity)};
    for (const NodeKind kind : kinds) {
        const NetworkSpec net = random_network(kind, 2, std::vector<int>{3, 2}, rng());
        const NetworkSpec back = network_from_json(network_to_json(net));
        CHECK(back.kind == net.kind);
        REQUIRE(back.layers.size() == net.layers.size());
        for (std::size_t l = 0; l < net.layers.size(); ++l) {
            CHECK(back.layers[l].weights == net.layers[l].weights);
            CHECK(back.layers[l].biases == net.layers[l].biases);
            CHECK(back.layers[l].signs == net.layers[l].signs);
        }
    }
}

TEST_CASE("network json rejects bad kinds and misplaced fields") {
    ordered_json j = network_to_json(single_max_node());
    j["node_kind"] = "mean-sum";
    CHECK_THROWS_AS(network_from_json(j), KindError);

    ordered_json j2 = network_to_json(single_max_node());
    j2["activation"] = "relu";
    CHECK_THROWS_AS(network_from_json(j2), ValidationError);

    ordered_json j3 = network_to_json(relu_net(40, 1, {2}));
    j3["layers"][0]["signs"] = {{1}, {1}};
    CHECK_THROWS_AS(network_from_json(j3), ValidationError);

    ordered_json j4 = network_to_json(single_max_node());
    j4.erase("layers");
    CHECK_THROWS_AS(network_from_json(j4), ValidationError);
}

TEST_CASE("lipschitz bound") {
    NetworkSpec net;
    net.kind = NodeKind::sum_product(Activation::Relu);
    net.layers = {{{{2.0}, {-3.0}}, {0.0, 0.0}, {}}, {{{1.0, 1.0}}, {0.0}, {}}};
    CHECK(lipschitz_bound(net) == 6.0);  // max(|2|,|3|) * (|1|+|1|)
    CHECK(lipschitz_bound(single_max_node()) == 1.0);
}
