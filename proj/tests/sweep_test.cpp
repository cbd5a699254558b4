#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mxcomm/sweep.hpp"
#include "test_support.hpp"

using namespace mxcomm;
using mxcomm::testing::state;

namespace {

std::vector<StateId> states(const MultiplexNetwork& net, std::initializer_list<const char*> labels) {
    std::vector<StateId> out;
    for (const char* l : labels) out.push_back(state(net, l));
    return out;
}

} // namespace

TEST_CASE("conductance: barbell triangle") {
    auto net = mxcomm::testing::barbell();
    auto m = classical_transition(net, 0.0);
    auto v = walk_volumes(m, net);
    auto tri = states(net, {"1@L", "2@L", "3@L"});
    CHECK(std::abs(conductance(m, v, tri) - 1.0 / 7) <= 1e-14);
    CHECK(std::abs(mxcomm::testing::cut_conductance(net, tri) - 1.0 / 7) <= 1e-14);
}

TEST_CASE("conductance: boundary cases") {
    SUBCASE("a set with no internal flow has conductance 1") {
        auto net = mxcomm::testing::barbell();
        auto m = classical_transition(net, 0.0);
        auto v = walk_volumes(m, net);
        CHECK(conductance(m, v, states(net, {"1@L"})) == doctest::Approx(1.0));
        CHECK(conductance(m, v, states(net, {"1@L", "5@L"})) == doctest::Approx(1.0));
    }
    SUBCASE("a whole connected component has conductance 0") {
        auto net = mxcomm::testing::load_text("1 a 1 b\n1 b 1 c\n1 d 1 e\n");
        auto m = classical_transition(net, 0.0);
        auto v = walk_volumes(m, net);
        CHECK(conductance(m, v, states(net, {"d@1", "e@1"})) == 0.0);
        CHECK(conductance(m, v, states(net, {"a@1", "b@1", "c@1"})) == 0.0);
    }
    SUBCASE("the full set and zero-volume sets") {
        auto net = mxcomm::testing::triangle_path();
        auto m = classical_transition(net, 1.0);
        auto v = walk_volumes(m, net);
        std::vector<StateId> all(net.num_states());
        for (StateId u = 0; u < all.size(); ++u) all[u] = u;
        CHECK(conductance(m, v, all) == 0.0);
        std::vector<double> zero(net.num_states(), 0.0);
        CHECK_THROWS_AS(conductance(m, zero, states(net, {"a@1"})), std::domain_error);
        CHECK_THROWS_AS(conductance(m, v, std::vector<StateId>{}), std::invalid_argument);
    }
}

TEST_CASE("multiplex conductance counts interlayer flow") {
    auto net = mxcomm::testing::triangle_path();
    auto m = classical_transition(net, 1.0);
    auto v = walk_volumes(m, net);
    // layer 1 holds 9/16 of the volume, so the cut is measured from layer 2:
    // volumes 2,3,2 and one omega-arc of flow leaving each
    auto layer1 = states(net, {"a@1", "b@1", "c@1"});
    CHECK(conductance(m, v, layer1) == doctest::Approx(3.0 / 7).epsilon(1e-14));
}

TEST_CASE("sweep over exact PPR on the barbell finds the seed triangle") {
    auto net = mxcomm::testing::barbell();
    auto m = classical_transition(net, 0.0);
    auto v = walk_volumes(m, net);
    auto p = exact_ppr(m, SeedVector::state(state(net, "1@L")), 0.99);
    SparseVector pv;
    for (StateId u = 0; u < p.size(); ++u) pv.emplace_back(u, p[u]);
    auto sweep = sweep_cut(m, v, degree_normalized(pv, v));
    REQUIRE(sweep.order.size() == 6);
    const auto k = sweep.best_size();
    CHECK(k == 3);
    auto best = sweep.prefix(k);
    std::sort(best.begin(), best.end());
    CHECK(best == states(net, {"1@L", "2@L", "3@L"}));
    CHECK(std::abs(sweep.conductance[k - 1] - 1.0 / 7) <= 1e-14);
    CHECK(sweep.conductance.back() == 0.0); // whole network, never the argmin
}

TEST_CASE("incremental sweep conductance matches direct evaluation") {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 20; ++trial) {
        const bool directed = trial % 2 == 1;
        auto net = mxcomm::testing::random_multiplex(rng, 8 + trial % 5, 1 + trial % 3, 0.3, directed, trial % 4 < 2,
                                                     trial % 7 != 0);
        TransitionModel m = trial % 3 == 0 ? classical_transition(net, 0.6) : relaxed_transition(net, 0.35);
        if (directed || m.num_dangling() > 0) m = enable_teleportation(m, net, 0.1);
        auto v = walk_volumes(m, net);
        auto P = mxcomm::testing::dense_matrix(m);

        std::uniform_real_distribution<double> unit(0.0, 1.0);
        SparseVector score;
        for (StateId u = 0; u < net.num_states(); ++u) {
            if (unit(rng) < 0.8) score.emplace_back(u, std::floor(unit(rng) * 5.0));
        }
        if (score.empty()) score.emplace_back(0, 1.0);
        auto sweep = sweep_cut(m, v, score);
        REQUIRE(sweep.order.size() == score.size());
        CAPTURE(trial);
        for (std::size_t k = 1; k <= sweep.order.size(); ++k) {
            auto set = sweep.prefix(k);
            double vol = 0.0;
            for (StateId u : set) vol += v[u];
            if (vol == 0.0) {
                CHECK(std::isinf(sweep.conductance[k - 1]));
                continue;
            }
            const double direct = mxcomm::testing::dense_conductance(P, v, set);
            CHECK(std::abs(sweep.conductance[k - 1] - direct) <= 1e-10);
            CHECK(std::abs(conductance(m, v, set) - direct) <= 1e-10);
            CHECK(sweep.conductance[k - 1] >= 0.0);
            CHECK(sweep.conductance[k - 1] <= 1.0);
        }
    }
}

TEST_CASE("single-layer conductance equals cut over volume") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        auto net = mxcomm::testing::random_multiplex(rng, 12, 1, 0.3, false, true);
        auto m = classical_transition(net, 0.0);
        auto v = walk_volumes(m, net);
        std::vector<StateId> set;
        std::bernoulli_distribution pick(0.4);
        for (StateId u = 0; u < net.num_states(); ++u)
            if (pick(rng)) set.push_back(u);
        if (set.empty() || set.size() == net.num_states()) continue;
        CHECK(std::abs(conductance(m, v, set) - mxcomm::testing::cut_conductance(net, set)) <= 1e-12);
    }
}

TEST_CASE("sweep ordering: descending score, ties by id, zero scores last") {
    auto net = mxcomm::testing::barbell();
    auto m = classical_transition(net, 0.0);
    auto v = walk_volumes(m, net);
    SparseVector score{{4, 0.0}, {3, 0.5}, {0, 0.5}, {5, 2.0}};
    auto sweep = sweep_cut(m, v, score);
    CHECK(sweep.order == std::vector<StateId>{5, 0, 3, 4});
    CHECK(sweep_cut(m, v, SparseVector{}).empty());
    CHECK(SweepResult{}.best_size() == 0);
}

TEST_CASE("degree normalisation") {
    std::vector<double> v{2.0, 0.0, 4.0};
    auto s = degree_normalized({{0, 1.0}, {1, 0.5}, {2, 0.0}}, v);
    REQUIRE(s.size() == 2);
    CHECK(s[0].second == 0.5);
    CHECK(std::isinf(s[1].second));
}
