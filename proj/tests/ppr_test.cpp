#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mxcomm/ppr.hpp"
#include "test_support.hpp"

using namespace mxcomm;
using mxcomm::testing::state;

namespace {

Eigen::VectorXd seed_dense(const SeedVector& s, std::size_t n) { return mxcomm::testing::to_dense(s.weights(), n); }

double l1(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return (a - b).cwiseAbs().sum(); }

} // namespace

TEST_CASE("seed vectors") {
    auto net = mxcomm::testing::triangle_path();
    auto phys = SeedVector::physical(net, *net.find_node("a"));
    REQUIRE(phys.weights().size() == 2);
    for (const auto& [u, w] : phys.weights()) {
        CHECK(net.node_of(u) == *net.find_node("a"));
        CHECK(w == 0.5);
    }
    const StateId set[] = {4, 1, 1, 2};
    auto uni = SeedVector::uniform(set);
    REQUIRE(uni.weights().size() == 3);
    CHECK(uni.weights()[0].first == 1);
    CHECK(uni.weights()[0].second == doctest::Approx(1.0 / 3));
    CHECK_THROWS_AS(SeedVector::uniform(std::span<const StateId>{}), std::invalid_argument);
    auto fw = SeedVector::from_weights({{3, 1.0}, {0, 3.0}, {3, 0.0}});
    CHECK(fw.weights() == SparseVector{{0, 0.75}, {3, 0.25}});
    CHECK_THROWS_AS(SeedVector::from_weights({{0, -1.0}}), std::invalid_argument);
}

TEST_CASE("exact PPR: small cases") {
    SUBCASE("gamma = 0 returns the seed") {
        auto net = mxcomm::testing::triangle_path();
        auto m = classical_transition(net, 1.0);
        auto x = exact_ppr(m, SeedVector::state(2), 0.0);
        for (StateId u = 0; u < x.size(); ++u) CHECK(x[u] == (u == 2 ? 1.0 : 0.0));
    }
    SUBCASE("two-node chain at gamma = 1/2") {
        auto net = mxcomm::testing::load_text("1 u 1 v\n");
        auto m = classical_transition(net, 0.0);
        auto x = exact_ppr(m, SeedVector::state(state(net, "u@1")), 0.5);
        CHECK(x[state(net, "u@1")] == doctest::Approx(2.0 / 3).epsilon(1e-12));
        CHECK(x[state(net, "v@1")] == doctest::Approx(1.0 / 3).epsilon(1e-12));
    }
    SUBCASE("the stationary distribution is a fixed point") {
        std::mt19937_64 rng(12);
        auto net = mxcomm::testing::random_multiplex(rng, 10, 2, 0.3, true, true);
        auto m = relaxed_transition(net, 0.3);
        auto pi = stationary_distribution(m);
        SparseVector w;
        for (StateId u = 0; u < pi.size(); ++u) w.emplace_back(u, pi[u]);
        auto x = exact_ppr(m, SeedVector::from_weights(w), 0.9);
        for (StateId u = 0; u < pi.size(); ++u) CHECK(std::abs(x[u] - pi[u]) <= 1e-10);
    }
    SUBCASE("gamma outside [0,1) is rejected") {
        auto net = mxcomm::testing::barbell();
        auto m = classical_transition(net, 0.0);
        CHECK_THROWS_AS(exact_ppr(m, SeedVector::state(0), 1.0), std::invalid_argument);
        CHECK_THROWS_AS(exact_ppr(m, SeedVector::state(0), -0.1), std::invalid_argument);
    }
    SUBCASE("dangling rows without teleportation are rejected") {
        auto net = mxcomm::testing::load_text("1 a 1 b\n", true);
        CHECK_THROWS_AS(exact_ppr(classical_transition(net, 0.0), SeedVector::state(0), 0.5), DanglingError);
    }
}

TEST_CASE("exact PPR agrees with a dense solve") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        auto net = mxcomm::testing::random_multiplex(rng, 9, 2, 0.3, trial % 2 == 0, true, trial % 3 != 0);
        auto m = relaxed_transition(net, 0.2 * (trial % 5));
        if (m.num_dangling() > 0) m = enable_teleportation(m, net, 0.1);
        const double gamma = trial % 2 == 0 ? 0.85 : 0.99;
        auto seed = SeedVector::state(static_cast<StateId>(trial % net.num_states()));
        auto x = exact_ppr(m, seed, gamma);
        Eigen::VectorXd ref = mxcomm::testing::dense_ppr(mxcomm::testing::dense_matrix(m),
                                                         seed_dense(seed, net.num_states()), gamma);
        CHECK(l1(Eigen::Map<Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())), ref) <= 1e-10);
    }
}

TEST_CASE("push invariant holds after every push") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 6; ++trial) {
        const bool directed = trial % 2 == 1;
        auto net = mxcomm::testing::random_multiplex(rng, 10, 2, 0.3, directed, true);
        auto m = classical_transition(net, 0.5);
        if (directed) m = enable_teleportation(m, net, 0.05);
        auto v = walk_volumes(m, net);
        const double gamma = 0.9;
        const auto n = net.num_states();
        Eigen::MatrixXd P = mxcomm::testing::dense_matrix(m);
        Eigen::MatrixXd solve = (Eigen::MatrixXd::Identity(n, n) - gamma * P.transpose()).inverse() * (1.0 - gamma);
        auto seed = SeedVector::state(static_cast<StateId>(trial));
        Eigen::VectorXd target = solve * seed_dense(seed, n);

        std::size_t observed = 0;
        double worst = 0.0;
        ApprWorkspace ws(n);
        auto res = appr_push(m, v, seed, gamma, 1e-6, ws, [&](std::span<const double> p, std::span<const double> e) {
            Eigen::Map<const Eigen::VectorXd> pv(p.data(), static_cast<Eigen::Index>(n));
            Eigen::Map<const Eigen::VectorXd> ev(e.data(), static_cast<Eigen::Index>(n));
            worst = std::max(worst, l1(pv + solve * ev, target));
            ++observed;
        });
        CHECK(observed == res.pushes);
        CHECK(observed > 0);
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("push: boundary epsilons and gamma") {
    auto net = mxcomm::testing::barbell();
    auto m = classical_transition(net, 0.0);
    auto v = walk_volumes(m, net);

    SUBCASE("epsilon above the seed residual does nothing") {
        auto res = appr_push(m, v, SeedVector::state(0), 0.99, 2.0);
        CHECK(res.pushes == 0);
        CHECK(res.p.empty());
        CHECK(res.residual == SparseVector{{0, 1.0}});
    }
    SUBCASE("gamma = 0 puts all seed mass in p with one push") {
        auto res = appr_push(m, v, SeedVector::state(0), 0.0, 1e-3);
        CHECK(res.pushes == 1);
        CHECK(res.p == SparseVector{{0, 1.0}});
        CHECK(res.residual.empty());
    }
    SUBCASE("bad arguments") {
        CHECK_THROWS_AS(appr_push(m, v, SeedVector::state(0), 1.0, 1e-3), std::invalid_argument);
        CHECK_THROWS_AS(appr_push(m, v, SeedVector::state(0), 0.5, 0.0), std::invalid_argument);
        std::vector<double> short_v(3, 1.0);
        CHECK_THROWS_AS(appr_push(m, short_v, SeedVector::state(0), 0.5, 1e-3), std::invalid_argument);
    }
}

TEST_CASE("push converges to exact PPR as epsilon shrinks; mass is conserved") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 6; ++trial) {
        const bool directed = trial >= 3;
        auto net = mxcomm::testing::random_multiplex(rng, 30, 3, 0.1, directed, trial % 2 == 0);
        auto m = relaxed_transition(net, 0.25);
        if (directed) m = enable_teleportation(m, net, 0.05);
        auto v = walk_volumes(m, net);
        const auto n = net.num_states();
        auto seed = SeedVector::physical(net, static_cast<NodeId>(trial));
        auto exact = exact_ppr(m, seed, 0.95);
        Eigen::Map<Eigen::VectorXd> xe(exact.data(), static_cast<Eigen::Index>(n));

        double previous = std::numeric_limits<double>::infinity();
        ApprWorkspace ws(n);
        for (double eps : {1e-3, 1e-5, 1e-7, 1e-9}) {
            auto res = appr_push(m, v, seed, 0.95, eps, ws);
            Eigen::VectorXd p = mxcomm::testing::to_dense(res.p, n);
            Eigen::VectorXd e = mxcomm::testing::to_dense(res.residual, n);
            CHECK(std::abs(p.sum() + e.sum() - 1.0) <= 1e-12);
            for (Eigen::Index u = 0; u < p.size(); ++u) {
                CHECK(p(u) <= xe(u) + 1e-12);
                CHECK((e(u) == 0.0 || e(u) < eps * v[static_cast<std::size_t>(u)]));
            }
            const double err = l1(p, xe);
            CHECK(err <= previous + 1e-15);
            previous = err;
            if (eps == 1e-9) CHECK(err <= 1e-6);
        }
    }
}

TEST_CASE("push work scales with 1/epsilon, not with the network") {
    std::mt19937_64 rng(8);
    auto small = mxcomm::testing::random_multiplex(rng, 200, 2, 0.02, false, false);
    auto large = mxcomm::testing::random_multiplex(rng, 4000, 2, 0.001, false, false);
    auto run = [](const MultiplexNetwork& net) {
        auto m = classical_transition(net, 1.0);
        auto v = walk_volumes(m, net);
        return appr_push(m, v, SeedVector::state(0), 0.9, 1e-3);
    };
    auto a = run(small);
    auto b = run(large);
    CHECK(b.p.size() < large.num_states() / 4);
    CHECK(b.pushes < 20 * a.pushes + 1000);
}
