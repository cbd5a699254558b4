#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"

using namespace mxcomm;
using mxcomm::testing::state;

namespace {

double max_entry_diff(const TransitionModel& a, const TransitionModel& b) {
    REQUIRE(a.num_states() == b.num_states());
    return (mxcomm::testing::dense_matrix(a) - mxcomm::testing::dense_matrix(b)).cwiseAbs().maxCoeff();
}

void check_row_stochastic(const TransitionModel& m) {
    for (StateId u = 0; u < m.num_states(); ++u) {
        if (m.dangling(u)) {
            CHECK(m.row(u).empty());
            continue;
        }
        double total = 0.0;
        for (const auto& t : m.row(u)) {
            CHECK(t.prob >= 0.0);
            CHECK(t.prob <= 1.0);
            total += t.prob;
        }
        CHECK(std::abs(total - 1.0) <= 1e-12);
    }
}

} // namespace

TEST_CASE("classical walk: triangle/path from a@1 with omega = 1") {
    auto net = mxcomm::testing::triangle_path();
    auto m = classical_transition(net, 1.0);
    const auto a1 = state(net, "a@1");
    CHECK(m.probability(a1, state(net, "b@1")) == doctest::Approx(1.0 / 3));
    CHECK(m.probability(a1, state(net, "c@1")) == doctest::Approx(1.0 / 3));
    CHECK(m.probability(a1, state(net, "a@2")) == doctest::Approx(1.0 / 3));
    CHECK(m.row(a1).size() == 3);
}

TEST_CASE("classical walk on one layer is the ordinary random walk") {
    auto net = mxcomm::testing::barbell();
    for (double omega : {0.0, 0.5, 7.0}) {
        auto m = classical_transition(net, omega);
        for (StateId u = 0; u < net.num_states(); ++u) {
            for (StateId w = 0; w < net.num_states(); ++w) {
                CHECK(m.probability(u, w) == net.weight(u, w) / net.out_strength(u));
            }
        }
    }
}

TEST_CASE("classical walk with omega = 0 keeps layers independent") {
    std::mt19937_64 rng(2);
    auto net = mxcomm::testing::random_multiplex(rng, 8, 3, 0.4, false, false);
    auto m = classical_transition(net, 0.0);
    for (StateId u = 0; u < net.num_states(); ++u) {
        for (const auto& t : m.row(u)) CHECK(net.layer_of(t.target) == net.layer_of(u));
    }
}

TEST_CASE("relaxed walk: triangle/path from a@1 with r = 1/2") {
    auto net = mxcomm::testing::triangle_path();
    auto m = relaxed_transition(net, 0.5);
    const auto a1 = state(net, "a@1");
    CHECK(m.probability(a1, state(net, "b@1")) == doctest::Approx(5.0 / 12));
    CHECK(m.probability(a1, state(net, "c@1")) == doctest::Approx(5.0 / 12));
    CHECK(m.probability(a1, state(net, "b@2")) == doctest::Approx(1.0 / 6));
    CHECK(m.probability(a1, state(net, "a@2")) == 0.0);
}

TEST_CASE("relaxed walk with r = 1 depends only on the physical node") {
    auto net = mxcomm::testing::triangle_path();
    auto m = relaxed_transition(net, 1.0);
    const auto a = *net.find_node("a");
    const double total = net.node_strength(a);
    for (StateId source : net.states_of(a)) {
        for (StateId w : net.states_of(a)) {
            for (const Arc& arc : net.out_arcs(w)) {
                CHECK(m.probability(source, arc.target) == doctest::Approx(arc.weight / total));
            }
        }
    }
}

TEST_CASE("relaxed walk folds the stay term for state nodes without intralayer edges") {
    // isolated x@2 next to an active x@1
    MultiplexBuilder b(false);
    const auto x = b.intern_node("x"), y = b.intern_node("y");
    const auto l1 = b.intern_layer("1"), l2 = b.intern_layer("2");
    b.add_edge(l1, x, y);
    b.add_state(x, l2);
    auto net = std::move(b).build();
    auto m = relaxed_transition(net, 0.3);
    const auto x2 = state(net, "x@2");
    CHECK_FALSE(m.dangling(x2));
    CHECK(m.probability(x2, state(net, "y@1")) == doctest::Approx(1.0));
    CHECK(relaxed_transition(net, 0.0).dangling(x2));
    CHECK(classical_transition(net, 0.0).dangling(x2));
}

TEST_CASE("physical walk with identity switches equals independent layer walks") {
    std::mt19937_64 rng(8);
    auto net = mxcomm::testing::random_multiplex(rng, 7, 3, 0.4, true, true);
    auto physical = physical_transition(net, identity_switch_weights(net));
    auto independent = classical_transition(net, 0.0);
    CHECK(max_entry_diff(physical, independent) <= 1e-12);
}

TEST_CASE("walk-model equivalences on random networks") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const bool directed = trial % 2 == 1;
        auto net = mxcomm::testing::random_multiplex(rng, 6 + trial % 4, 1 + trial % 3, 0.35, directed, trial % 3 == 0,
                                                     trial % 5 != 0);
        CAPTURE(trial);

        CHECK(max_entry_diff(relaxed_transition(net, 0.0), classical_transition(net, 0.0)) <= 1e-12);

        for (double r : {0.0, 0.3, 1.0}) {
            auto relaxed = relaxed_transition(net, r);
            auto physical = physical_transition(net, relaxed_switch_weights(net, r));
            CHECK(max_entry_diff(relaxed, physical) <= 1e-12);
            for (StateId u = 0; u < net.num_states(); ++u) CHECK(relaxed.dangling(u) == physical.dangling(u));
        }

        // physical walk == classical walk on the transformed supra-adjacency
        std::uniform_real_distribution<double> unit(0.0, 2.0);
        LayerSwitchWeights sw = identity_switch_weights(net);
        for (auto& block : sw.blocks)
            for (auto& w : block) w = unit(rng) < 0.4 ? 0.0 : unit(rng);
        auto physical = physical_transition(net, sw);
        auto arcs = transformed_physical_arcs(net, sw);
        auto transformed = transition_from_arcs(net.num_states(), arcs);
        CHECK(max_entry_diff(physical, transformed) <= 1e-12);

        for (double omega : {0.0, 0.7, 10.0}) check_row_stochastic(classical_transition(net, omega));
        for (double r : {0.0, 0.5, 1.0}) check_row_stochastic(relaxed_transition(net, r));
        check_row_stochastic(physical);
    }
}

TEST_CASE("transformed network on a 5-state-node example") {
    // node a in layers 1 and 2, b in 1 and 2, c in 1 only
    auto net = mxcomm::testing::load_text("1 a 1 b 2\n1 b 1 c\n2 a 2 b\n", false, true);
    REQUIRE(net.num_states() == 5);
    LayerSwitchWeights sw = identity_switch_weights(net);
    for (NodeId i = 0; i < net.num_nodes(); ++i) {
        const std::size_t k = net.states_of(i).size();
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b) sw.blocks[i][a * k + b] = a == b ? 2.0 : 0.5 + static_cast<double>(i);
    }
    auto physical = physical_transition(net, sw);
    auto arcs = transformed_physical_arcs(net, sw);
    auto transformed = transition_from_arcs(net.num_states(), arcs);
    CHECK(max_entry_diff(physical, transformed) <= 1e-12);
    // hand value: from a@1, switch to a@2 with 0.5 / 2.5, then step to b@2 with 1
    CHECK(physical.probability(state(net, "a@1"), state(net, "b@2")) == doctest::Approx(0.2));
}

TEST_CASE("relaxed walk with r = 1: rows independent of source layer on node-aligned networks") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 5; ++trial) {
        auto net = mxcomm::testing::random_multiplex(rng, 8, 3, 0.9, trial % 2 == 0, true);
        REQUIRE(net.node_aligned());
        auto m = relaxed_transition(net, 1.0);
        auto P = mxcomm::testing::dense_matrix(m);
        for (NodeId i = 0; i < net.num_nodes(); ++i) {
            auto states = net.states_of(i);
            for (StateId u : states) CHECK((P.row(u) - P.row(states[0])).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
}

TEST_CASE("stationary distribution: triangle/path classical omega = 1") {
    auto net = mxcomm::testing::triangle_path();
    auto p = stationary_distribution(classical_transition(net, 1.0));
    CHECK(p[state(net, "a@1")] == doctest::Approx(3.0 / 16).epsilon(1e-10));
    CHECK(p[state(net, "b@2")] == doctest::Approx(3.0 / 16).epsilon(1e-10));
    CHECK(p[state(net, "a@2")] == doctest::Approx(2.0 / 16).epsilon(1e-10));
}

TEST_CASE("stationary distribution: directed cycle is uniform") {
    auto net = mxcomm::testing::load_text("1 a 1 b\n1 b 1 c\n1 c 1 d\n1 d 1 a\n", true);
    auto p = stationary_distribution(classical_transition(net, 0.0));
    for (double x : p) CHECK(x == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("stationary distribution: disconnected components are rejected") {
    auto net = mxcomm::testing::load_text("1 a 1 b\n1 c 1 d\n");
    CHECK_THROWS_AS(stationary_distribution(classical_transition(net, 1.0)), NonErgodicError);
}

TEST_CASE("stationary distribution: dangling nodes need teleportation") {
    auto net = mxcomm::testing::load_text("1 a 1 b\n", true);
    auto m = classical_transition(net, 0.0);
    CHECK(m.num_dangling() == 1);
    CHECK_THROWS_AS(stationary_distribution(m), DanglingError);
    auto tele = enable_teleportation(m, net, 0.05);
    auto p = stationary_distribution(tele);
    // b restarts to in-strength seed (all on b): p(a) = 0
    CHECK(p[state(net, "b@1")] == doctest::Approx(1.0));
}

TEST_CASE("stationary distribution: iteration budget is enforced") {
    std::mt19937_64 rng(1);
    auto net = mxcomm::testing::random_multiplex(rng, 20, 2, 0.2, true, false);
    auto m = classical_transition(net, 0.1);
    CHECK_THROWS_AS(stationary_distribution(m, {1e-15, 2}), ConvergenceError);
}

TEST_CASE("undirected stationary distribution is proportional to out-strength") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 6; ++trial) {
        auto net = mxcomm::testing::random_multiplex(rng, 9, 3, 0.5, false, true);
        const double omega = 0.25 * (trial + 1);
        auto classical = classical_transition(net, omega);
        auto p = stationary_distribution(classical);
        auto v = walk_volumes(classical, net);
        double vsum = 0.0;
        for (StateId u = 0; u < net.num_states(); ++u) {
            CHECK(std::abs(p[u] * static_cast<double>(net.num_states()) - v[u]) <= 1e-10);
            vsum += v[u];
        }
        CHECK(std::abs(vsum - static_cast<double>(net.num_states())) <= 1e-9);

        auto relaxed = relaxed_transition(net, 0.4);
        auto pr = stationary_distribution(relaxed);
        auto vr = walk_volumes(relaxed, net);
        for (StateId u = 0; u < net.num_states(); ++u) {
            CHECK(std::abs(pr[u] * static_cast<double>(net.num_states()) - vr[u]) <= 1e-10);
            CHECK(std::abs(pr[u] - net.out_strength(u) / net.total_weight()) <= 1e-10);
        }
    }
}

TEST_CASE("teleported volumes") {
    SUBCASE("rate 1 reproduces the in-strength seed") {
        auto net = mxcomm::testing::load_text("1 a 1 b 2\n1 b 1 c\n1 c 1 a\n", true, true);
        auto m = classical_transition(net, 0.0);
        auto v = teleported_volumes(m, net, 1.0);
        auto s = in_strength_seed(net, WalkKind::classical, 0.0);
        for (StateId u = 0; u < net.num_states(); ++u) CHECK(v[u] == doctest::Approx(3.0 * s[u]));
    }
    SUBCASE("directed toy matches a dense solve") {
        auto net = mxcomm::testing::load_text("1 a 1 b\n1 b 1 c\n1 c 1 a\n1 a 1 c\n", true);
        auto m = classical_transition(net, 0.0);
        auto v = teleported_volumes(m, net, 0.05);
        auto tele = enable_teleportation(m, net, 0.05);
        auto P = mxcomm::testing::dense_matrix(tele);
        Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(tele.teleportation()->seed.data(), 3);
        Eigen::VectorXd x = mxcomm::testing::dense_ppr(P, s, 0.95);
        for (StateId u = 0; u < 3; ++u) CHECK(std::abs(v[u] - 3.0 * x(u)) <= 1e-10);
        double total = 0.0;
        for (double x : v) total += x;
        CHECK(std::abs(total - 3.0) <= 1e-9);
    }
    SUBCASE("small rate approaches the stationary volumes on undirected networks") {
        std::mt19937_64 rng(6);
        auto net = mxcomm::testing::random_multiplex(rng, 8, 2, 0.4, false, false);
        auto m = classical_transition(net, 1.0);
        auto v = teleported_volumes(m, net, 1e-6);
        auto exact = walk_volumes(m, net);
        for (StateId u = 0; u < net.num_states(); ++u) CHECK(std::abs(v[u] - exact[u]) <= 1e-4);
    }
    SUBCASE("rate 0 on a non-ergodic chain is an error") {
        auto net = mxcomm::testing::load_text("1 a 1 b\n1 c 1 d\n");
        CHECK_THROWS_AS(teleported_volumes(classical_transition(net, 1.0), net, 0.0), NonErgodicError);
    }
}

TEST_CASE("parameter validation") {
    auto net = mxcomm::testing::triangle_path();
    CHECK_THROWS_AS(classical_transition(net, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(relaxed_transition(net, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(enable_teleportation(classical_transition(net, 1.0), net, 0.0), std::invalid_argument);
    LayerSwitchWeights bad;
    CHECK_THROWS_AS(physical_transition(net, bad), std::invalid_argument);
}
