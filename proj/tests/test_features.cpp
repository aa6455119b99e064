#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <vector>

#include "gedwalk/features.hpp"
#include "gedwalk/oracle.hpp"
#include "support/test_graphs.hpp"

using namespace gedwalk;
using namespace testsupport;

namespace {
TailBoundConfig comb(const Graph &g, double alpha) {
    return TailBoundConfig::combinatorial(g, alpha);
}

double histogram_mass(const FeatureVector &fv) {
    return std::accumulate(fv.values.begin() + 1, fv.values.end(), 0.0);
}
} // namespace

TEST_CASE("feature vector on a star: equal zero leaf gains fill the first bin") {
    const Graph s4 = star(3);
    const double alpha = 0.2;
    const FeatureVector fv = ged_feature_vector(s4, 1, 2, alpha, 0.1, comb(s4, alpha));
    REQUIRE(fv.values.size() == 3);
    CHECK(fv.group == std::vector<node_t>{0});
    CHECK(fv.values[0] > 0.0);
    CHECK(fv.values[1] == 3.0);
    CHECK(fv.values[2] == 0.0);
    // Cross-check: every walk passes the center, so each leaf's marginal
    // gain is identically zero and the all-zero rule applies.
    const double g1 = marginal_partial(s4, fv.group, 1, fv.ell, alpha);
    const double g2 = marginal_partial(s4, fv.group, 2, fv.ell, alpha);
    const double g3 = marginal_partial(s4, fv.group, 3, fv.ell, alpha);
    CHECK(g1 == 0.0);
    CHECK(g1 == g2);
    CHECK(g2 == g3);
}

TEST_CASE("all-zero gains fall into the first bin") {
    // One edge plus three isolated vertices: after S = {0,1} the rest lie on
    // no walk at all.
    const Graph g = from_edges(5, {{0, 1}});
    const FeatureVector fv = ged_feature_vector(g, 2, 2, 0.3, 0.05, comb(g, 0.3));
    REQUIRE(fv.values.size() == 3);
    CHECK(fv.values[1] == 3.0);
    CHECK(fv.values[2] == 0.0);
}

TEST_CASE("K3 feature vector") {
    const Graph k3 = complete(3);
    const double alpha = 0.25;
    const FeatureVector fv = ged_feature_vector(k3, 1, 2, alpha, 0.05, comb(k3, alpha));
    REQUIRE(fv.values.size() == 3);
    // Score tracks GED({0}) = 7/3 within the scorer tolerance regime.
    CHECK(fv.values[0] == Catch::Approx(7.0 / 3.0).margin(0.05));
    CHECK(fv.values[1] == 0.0);
    CHECK(fv.values[2] == 2.0);
}

TEST_CASE("histogram mass always counts the non-members") {
    for (std::uint64_t seed : {1, 2, 3}) {
        const Graph g = largest_connected_component(gen_erdos_renyi(22, 0.15, seed));
        const double alpha = choose_alpha(AlphaMode::combinatorial, g, 0.5);
        const FeatureVector fv = ged_feature_vector(g, 4, 6, alpha, 0.3, comb(g, alpha));
        CHECK(fv.values.size() == 7);
        CHECK(histogram_mass(fv) == static_cast<double>(g.num_vertices() - 4));
        for (double v : fv.values)
            CHECK(v >= 0.0);
    }
}

TEST_CASE("feature vector ignores vertex relabeling when the optimum is unique") {
    // Asymmetric lollipop: triangle {0,1,2} with a tail 2-3-4.
    const Graph g = from_edges(5, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}});
    // Relabeled copy under the permutation 0<->4, 1<->3.
    const Graph h = from_edges(5, {{4, 3}, {3, 2}, {4, 2}, {2, 1}, {1, 0}});
    const double alpha = 0.2;
    const FeatureVector a = ged_feature_vector(g, 1, 3, alpha, 0.05, comb(g, alpha));
    const FeatureVector b = ged_feature_vector(h, 1, 3, alpha, 0.05, comb(h, alpha));
    REQUIRE(a.values.size() == b.values.size());
    // Summation order differs under relabeling, so the score may move by an
    // ulp; the histogram itself must match exactly.
    CHECK(a.values[0] == Catch::Approx(b.values[0]).epsilon(1e-12));
    for (std::size_t i = 1; i < a.values.size(); ++i)
        CHECK(a.values[i] == b.values[i]);
}

TEST_CASE("feature vector argument validation") {
    const Graph k3 = complete(3);
    CHECK_THROWS_AS(ged_feature_vector(k3, 3, 2, 0.25, 0.1, comb(k3, 0.25)),
                    std::invalid_argument);
    CHECK_THROWS_AS(ged_feature_vector(k3, 1, 0, 0.25, 0.1, comb(k3, 0.25)),
                    std::invalid_argument);
}
