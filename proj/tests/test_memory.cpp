#include <doctest.h>

#include <cmath>
#include <random>

#include "evicut/memory.hpp"
#include "evicut/mincut.hpp"
#include "support/brute_force.hpp"
#include "support/test_providers.hpp"

using namespace evicut;
using evicut::testing::ConstantProvider;
using evicut::testing::HookProvider;

TEST_CASE("bayes_posterior: worked examples") {
    CHECK(bayes_posterior(0.6, 0.7) == doctest::Approx(7.0 / 9.0).epsilon(1e-15));
    CHECK(bayes_posterior(0.1, 0.9) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(bayes_posterior(0.8, 0.1) == doctest::Approx(0.08 / 0.26).epsilon(1e-15));
}

TEST_CASE("bayes_posterior: clamps extreme priors") {
    CHECK(bayes_posterior(0.0, 0.5) == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(bayes_posterior(1.0, 0.5) == doctest::Approx(0.99).epsilon(1e-12));
    // Clamping keeps the posterior finite even at degenerate likelihoods.
    CHECK(bayes_posterior(1.0, 0.0) == 0.0);
    CHECK(bayes_posterior(0.0, 1.0) == 1.0);
}

TEST_CASE("bayes_posterior: identities") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    for (int i = 0; i < 500; ++i) {
        const double p = u(rng);
        // Uninformative likelihood leaves the prior untouched.
        CHECK(bayes_posterior(p, 0.5) == doctest::Approx(p).epsilon(1e-12));
        // Certain likelihoods pin the posterior.
        CHECK(bayes_posterior(p, 1.0) == 1.0);
        CHECK(bayes_posterior(p, 0.0) == 0.0);
    }
}

TEST_CASE("bayes_posterior: monotone in both arguments") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    for (int i = 0; i < 500; ++i) {
        const double p = u(rng);
        const double l = u(rng);
        const double bump = 0.005;
        if (p + bump <= 0.99)
            CHECK(bayes_posterior(p + bump, l) >= bayes_posterior(p, l));
        if (l + bump <= 0.99)
            CHECK(bayes_posterior(p, l + bump) >= bayes_posterior(p, l));
    }
}

TEST_CASE("bayes_posterior: sequential updates compose in odds form") {
    // odds(posterior) = odds(prior) * l1/(1-l1) * l2/(1-l2) when no clamp
    // engages in between, so two updates equal one update with the combined
    // likelihood ratio.
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.2, 0.8);
    auto odds = [](double p) { return p / (1.0 - p); };
    for (int i = 0; i < 500; ++i) {
        const double p = u(rng);
        const double l1 = u(rng);
        const double l2 = u(rng);
        const double step1 = bayes_posterior(p, l1);
        REQUIRE(step1 > kPriorClampLo);
        REQUIRE(step1 < kPriorClampHi);
        const double step2 = bayes_posterior(step1, l2);
        const double expected = odds(p) * odds(l1) * odds(l2);
        CHECK(odds(step2) == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("bayes_posterior: rejects out-of-range inputs") {
    CHECK_THROWS_AS(bayes_posterior(-0.1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(bayes_posterior(0.5, 1.5), std::invalid_argument);
}

TEST_CASE("likelihoods: constant provider") {
    ConstantProvider provider(0.81, 0.04);
    const auto [l_s, l_f] = likelihoods("old", {"a", "b", "c"}, provider);
    CHECK(l_s == doctest::Approx(0.81).epsilon(1e-12));
    CHECK(l_f == doctest::Approx(0.04).epsilon(1e-12));
}

TEST_CASE("likelihoods: single evidence text") {
    HookProvider provider;
    provider.on_score = [](const std::string&, const std::string&) {
        return DirectedRelationScores{0.9, 0.4, 0.1, 0.4};
    };
    const auto [l_s, l_f] = likelihoods("old", {"only"}, provider);
    CHECK(l_s == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(l_f == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("likelihoods: mean over mixed evidence") {
    HookProvider provider;
    provider.on_score = [](const std::string&, const std::string& b) {
        if (b == "agree") return DirectedRelationScores{1.0, 1.0, 0.0, 0.0};
        return DirectedRelationScores{0.2, 0.2, 0.5, 0.5};
    };
    const auto [l_s, l_f] = likelihoods("old", {"agree", "other"}, provider);
    CHECK(l_s == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(l_f == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("likelihoods: empty evidence throws") {
    ConstantProvider provider(0.5, 0.5);
    CHECK_THROWS_AS(likelihoods("old", {}, provider), std::invalid_argument);
}

TEST_CASE("build_memory_augmentation: posteriors and links") {
    ConstantProvider provider(0.64, 0.09);
    BeliefState belief;
    belief.pi_s = 0.6;
    belief.pi_f = 0.2;
    const auto aug = build_memory_augmentation("old", belief, {"a", "b"}, provider);
    CHECK(aug.answer_text == "old");
    REQUIRE(aug.links.size() == 2);
    CHECK(aug.links[0] == doctest::Approx(0.64).epsilon(1e-12));
    CHECK(aug.l_s == doctest::Approx(0.64).epsilon(1e-12));
    CHECK(aug.l_f == doctest::Approx(0.09).epsilon(1e-12));
    CHECK(aug.s_old == doctest::Approx(bayes_posterior(0.6, 0.64)).epsilon(1e-15));
    CHECK(aug.f_old == doctest::Approx(bayes_posterior(0.2, 0.09)).epsilon(1e-15));
}

namespace {

FlowNetwork two_doc_net() {
    TerminalCapacities caps;
    caps.s_cap = Eigen::VectorXd(2);
    caps.f_cap = Eigen::VectorXd(2);
    caps.s_cap << 0.4, 0.3;
    caps.f_cap << 0.2, 0.1;
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
    m(0, 1) = m(1, 0) = 0.15;
    return build_static_graph(caps, m);
}

MemoryAugmentation aug_of(double s_old, double f_old, std::vector<double> links) {
    MemoryAugmentation aug;
    aug.answer_text = "prev";
    aug.s_old = s_old;
    aug.f_old = f_old;
    aug.links = std::move(links);
    return aug;
}

}  // namespace

TEST_CASE("augment_graph: adds one node, two terminals, and link pairs") {
    const auto base = two_doc_net();
    REQUIRE(base.node_count == 4);
    REQUIRE(base.edges.size() == 6);

    const auto net = augment_graph(base, aug_of(0.7, 0.2, {0.5, 0.3}));
    CHECK(net.node_count == 5);
    CHECK(net.memory_id == 4);
    CHECK(net.has_memory());
    CHECK(net.doc_count == 2);
    CHECK(net.edges.size() == 6 + 2 + 4);

    // Zero links are dropped just like document pair edges.
    const auto sparse = augment_graph(base, aug_of(0.7, 0.2, {0.0, 0.3}));
    CHECK(sparse.edges.size() == 6 + 2 + 2);
}

TEST_CASE("augment_graph: validation") {
    const auto base = two_doc_net();
    CHECK_THROWS_AS(augment_graph(base, aug_of(0.7, 0.2, {0.5})), std::invalid_argument);
    CHECK_THROWS_AS(augment_graph(base, aug_of(1.2, 0.2, {0.5, 0.3})), std::invalid_argument);
    CHECK_THROWS_AS(augment_graph(base, aug_of(0.7, 0.2, {0.5, -0.1})), std::invalid_argument);

    const auto once = augment_graph(base, aug_of(0.7, 0.2, {0.5, 0.3}));
    CHECK_THROWS_AS(augment_graph(once, aug_of(0.7, 0.2, {0.5, 0.3})), std::invalid_argument);
}

TEST_CASE("augment_graph: isolated memory node is kept iff s_old exceeds f_old") {
    const auto base = two_doc_net();
    {
        const auto lab = solve_mincut(augment_graph(base, aug_of(0.8, 0.2, {0.0, 0.0})));
        CHECK(lab.memory_kept);
    }
    {
        const auto lab = solve_mincut(augment_graph(base, aug_of(0.2, 0.8, {0.0, 0.0})));
        CHECK_FALSE(lab.memory_kept);
    }
    {
        // Exact tie: minimal source side leaves the memory node out.
        const auto lab = solve_mincut(augment_graph(base, aug_of(0.5, 0.5, {0.0, 0.0})));
        CHECK_FALSE(lab.memory_kept);
    }
}

TEST_CASE("augment_graph: strong links pull the memory node to the evidence side") {
    TerminalCapacities caps;
    caps.s_cap = Eigen::VectorXd(2);
    caps.f_cap = Eigen::VectorXd(2);
    caps.s_cap << 0.9, 0.9;
    caps.f_cap << 0.05, 0.05;
    const auto base = build_static_graph(caps, Eigen::MatrixXd::Identity(2, 2));

    // Weak posterior but strong agreement links: cheaper to keep the node.
    const auto net = augment_graph(base, aug_of(0.1, 0.4, {0.9, 0.9}));
    const auto lab = solve_mincut(net);
    CHECK(lab.memory_kept);
    CHECK(lab.y == std::vector<int>{1, 1});

    std::vector<int> best_y;
    int best_mem = 0;
    const double best = evicut::testing::brute_force_min_cut(net, &best_y, &best_mem);
    CHECK(best_mem == 1);
    CHECK(std::abs(lab.cut_value - best) <= energy_tolerance(net.doc_count + 1));
}

TEST_CASE("augmented solve matches brute force over both memory labels") {
    std::mt19937_64 rng(909);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 120; ++trial) {
        const int k = 1 + static_cast<int>(rng() % 5);
        TerminalCapacities caps;
        caps.s_cap = Eigen::VectorXd::NullaryExpr(k, [&] { return u(rng); });
        caps.f_cap = Eigen::VectorXd::NullaryExpr(k, [&] { return u(rng); });
        Eigen::MatrixXd m = Eigen::MatrixXd::Identity(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j) m(i, j) = m(j, i) = u(rng);

        std::vector<double> links(k);
        for (auto& l : links) l = u(rng);
        const auto net = augment_graph(build_static_graph(caps, m),
                                       aug_of(u(rng), u(rng), links));
        const auto lab = solve_mincut(net);
        const double best = evicut::testing::brute_force_min_cut(net);
        CHECK(std::abs(lab.cut_value - best) <= energy_tolerance(k + 1));
    }
}

TEST_CASE("update_priors: likelihoods become the next priors") {
    ConstantProvider provider(0.64, 0.09);
    BeliefState prev;
    prev.pi_s = 0.3;
    prev.pi_f = 0.3;
    prev.step = 4;
    const auto next = update_priors("answer", {"a", "b"}, provider, prev);
    CHECK(next.step == 5);
    CHECK(next.pi_s == doctest::Approx(0.64).epsilon(1e-12));
    CHECK(next.pi_f == doctest::Approx(0.09).epsilon(1e-12));
}

TEST_CASE("update_priors: clamped at the extremes") {
    ConstantProvider certain(1.0, 0.0);
    const auto next = update_priors("answer", {"a"}, certain, BeliefState{});
    CHECK(next.pi_s == doctest::Approx(0.99).epsilon(1e-15));
    CHECK(next.pi_f == doctest::Approx(0.01).epsilon(1e-15));
}

TEST_CASE("update_priors: empty evidence carries the belief forward") {
    ConstantProvider provider(0.9, 0.1);
    BeliefState prev;
    prev.pi_s = 0.42;
    prev.pi_f = 0.13;
    prev.step = 2;
    const auto next = update_priors("answer", {}, provider, prev);
    CHECK(next.pi_s == 0.42);
    CHECK(next.pi_f == 0.13);
    CHECK(next.step == 3);
}

TEST_CASE("flip scenario: posteriors cross over as evidence turns") {
    // Supportive step: prior 0.1 with strong agreement recovers to 0.5.
    CHECK(bayes_posterior(0.1, 0.9) == doctest::Approx(0.5).epsilon(1e-12));
    // Contradicting step: prior 0.8 against weak agreement collapses.
    CHECK(bayes_posterior(0.8, 0.1) == doctest::Approx(0.3076923076923077).epsilon(1e-12));
}
