#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "tbundle/error.hpp"
#include "tbundle/graph.hpp"
#include "tbundle/metric.hpp"
#include "tbundle/words.hpp"

using namespace tbundle;

namespace {

MetricGraph tree_ball(int k, int radius) {
    return FreeBall(k, radius).materialize().graph;
}

MetricGraph random_tree(int n, std::mt19937_64& rng) {
    std::vector<std::pair<std::string, std::string>> edges;
    for (int v = 1; v < n; ++v) {
        const int parent = static_cast<int>(rng() % static_cast<std::uint64_t>(v));
        edges.emplace_back("v" + std::to_string(parent), "v" + std::to_string(v));
    }
    return MetricGraph::from_edges(edges);
}

}  // namespace

TEST_CASE("graph construction and file parsing") {
    MetricGraph p = MetricGraph::path(4);
    CHECK(p.vertex_count() == 4);
    CHECK(p.edge_count() == 3);
    CHECK(p.is_tree());

    CHECK_THROWS_AS(MetricGraph::from_edges({{"a", "a"}}), Error);
    CHECK_THROWS_AS(MetricGraph::from_edges({{"a", "b"}, {"c", "d"}}), Error);

    // duplicate edges collapse
    MetricGraph d = MetricGraph::from_edges({{"a", "b"}, {"b", "a"}, {"a", "b"}});
    CHECK(d.edge_count() == 1);

    const char* path_file = "test_graph.tsv";
    {
        std::ofstream out(path_file);
        out << "# comment\n";
        out << "x\ty\n";
        out << "y\tz\n";
    }
    MetricGraph f = MetricGraph::from_edge_file(path_file);
    CHECK(f.vertex_count() == 3);
    CHECK(f.id_of("x") >= 0);

    const char* measure_file = "test_measure.tsv";
    {
        std::ofstream out(measure_file);
        out << "x\t2.5\n";
    }
    f.load_measure_file(measure_file);
    CHECK(f.weight(f.id_of("x")) == 2.5);
    CHECK(f.weight(f.id_of("y")) == 1.0);
    CHECK_THROWS_AS(f.set_weight(0, 0.0), Error);
}

TEST_CASE("all-pairs distances: identity, symmetry, triangle inequality") {
    MetricGraph p = MetricGraph::path(4);
    DistanceField d = all_pairs_distances(p);
    CHECK(d(0, 3) == 3);

    std::mt19937_64 rng(7);
    for (int t = 0; t < 4; ++t) {
        MetricGraph g = random_tree(30 + static_cast<int>(rng() % 30), rng);
        DistanceField dist = all_pairs_distances(g);
        const VertexId n = g.vertex_count();
        for (VertexId x = 0; x < n; ++x) {
            CHECK(dist(x, x) == 0);
            for (VertexId y = 0; y < n; ++y) {
                CHECK(dist(x, y) == dist(y, x));
                for (VertexId z = 0; z < n; ++z)
                    CHECK(dist(x, y) <= dist(x, z) + dist(z, y));
            }
        }
    }
}

TEST_CASE("distances on the 4-regular tree ball: root to every leaf") {
    // sphere sizes are 4 * 3^{r-1}: 36 leaves at radius 3, 108 at radius 4
    for (int radius : {3, 4}) {
        MetricGraph b = tree_ball(2, radius);
        CHECK(b.vertex_count() == 2 * static_cast<int>(std::pow(3, radius)) - 1);
        std::vector<std::int32_t> row;
        b.bfs_row(0, row);
        int leaves = 0;
        for (VertexId v = 0; v < b.vertex_count(); ++v) {
            if (b.degree(v) == 1 && v != 0) {
                CHECK(row[static_cast<std::size_t>(v)] == radius);
                ++leaves;
            }
        }
        CHECK(leaves == 4 * static_cast<int>(std::pow(3, radius - 1)));
    }
}

TEST_CASE("gromov product: formula, collapse, tree geodesic oracle") {
    MetricGraph p = MetricGraph::path(11);
    DistanceField d = all_pairs_distances(p);
    CHECK(gromov_product(d, 3, 7, 0) == doctest::Approx(3.0));
    CHECK(gromov_product(d, 5, 5, 2) == doctest::Approx(3.0));  // x = y collapses to d(a,x)

    std::mt19937_64 rng(11);
    MetricGraph t = tree_ball(2, 4);
    DistanceField dt = all_pairs_distances(t);
    for (int s = 0; s < 200; ++s) {
        const VertexId a = static_cast<VertexId>(rng() % static_cast<std::uint64_t>(t.vertex_count()));
        const VertexId x = static_cast<VertexId>(rng() % static_cast<std::uint64_t>(t.vertex_count()));
        const VertexId y = static_cast<VertexId>(rng() % static_cast<std::uint64_t>(t.vertex_count()));
        const double gp = gromov_product(dt, x, y, a);
        CHECK(gp >= 0.0);
        CHECK(gp <= std::min(dt(a, x), dt(a, y)));
        CHECK(gp == doctest::Approx(oracles::dist_to_tree_geodesic(t, a, x, y)));
    }
}

TEST_CASE("hyperbolicity delta: trees are 0, C4 is 1, modes are lower bounds") {
    DeltaOptions exact;
    exact.mode = DeltaMode::exact;

    MetricGraph single = MetricGraph::path(1);
    CHECK(hyperbolicity_delta(single, exact).value == 0.0);

    std::mt19937_64 rng(3);
    for (int t = 0; t < 5; ++t) {
        MetricGraph g = random_tree(10 + static_cast<int>(rng() % 40), rng);
        CHECK(hyperbolicity_delta(g, exact).value == 0.0);
    }

    MetricGraph c4 = MetricGraph::cycle(4);
    const double d4 = hyperbolicity_delta(c4, exact).value;
    CHECK(d4 == doctest::Approx(oracles::brute_force_delta(c4)));
    CHECK(d4 == doctest::Approx(1.0));

    MetricGraph c9 = MetricGraph::cycle(9);
    const double exact9 = hyperbolicity_delta(c9, exact).value;
    CHECK(exact9 == doctest::Approx(oracles::brute_force_delta(c9)));

    DeltaOptions fixed;
    fixed.mode = DeltaMode::fixed_basepoint;
    CHECK(hyperbolicity_delta(c9, fixed).value <= exact9 + 1e-12);

    DeltaOptions sampled;
    sampled.mode = DeltaMode::sampled;
    sampled.samples = 3000;
    sampled.seed = 42;
    const double s9 = hyperbolicity_delta(c9, sampled).value;
    CHECK(s9 <= exact9 + 1e-12);
    CHECK(hyperbolicity_delta(c9, sampled).value == s9);  // deterministic per seed

    DeltaOptions no_seed;
    no_seed.mode = DeltaMode::sampled;
    CHECK_THROWS_AS(hyperbolicity_delta(c9, no_seed), Error);

    DeltaOptions capped;
    capped.mode = DeltaMode::exact;
    capped.exact_cap = 5;
    CHECK_THROWS_AS(hyperbolicity_delta(c9, capped), Error);
}

TEST_CASE("growth profile: tree ball counts, h', entropy, degenerate window") {
    MetricGraph b = tree_ball(2, 10);
    GrowthProfile p = growth_profile(b, 0);
    REQUIRE(p.f.size() == 11);
    for (int r = 0; r <= 10; ++r)
        CHECK(p.f[static_cast<std::size_t>(r)] ==
              doctest::Approx(2.0 * std::pow(3.0, r) - 1.0));
    CHECK(p.h_prime == doctest::Approx(5.0));
    CHECK(p.entropy == doctest::Approx(std::log(3.0)).epsilon(0.05));
    for (std::size_t r = 0; r + 1 < p.f.size(); ++r) {
        CHECK(p.f[r] <= p.f[r + 1]);
        CHECK(p.f[r + 1] <= p.h_prime * p.f[r] * (1 + 1e-12));
    }

    MetricGraph path = MetricGraph::path(101);
    GrowthProfile pp = growth_profile(path, 0);
    CHECK(std::abs(pp.entropy) < 0.05);
    CHECK(pp.f[0] == 1.0);  // counting measure, radius 0

    MetricGraph tiny = MetricGraph::path(2);
    GrowthProfile pt = growth_profile(tiny, 0);
    CHECK(pt.degenerate_window);
    CHECK(pt.entropy == 0.0);
}

TEST_CASE("non-collapsing certificate") {
    MetricGraph p = MetricGraph::path(5);
    CHECK(non_collapsing(p, 0.0).v == doctest::Approx(1.0));
    CHECK(non_collapsing(p, 1.0).v == doctest::Approx(2.0));  // endpoint ball

    MetricGraph b = tree_ball(2, 4);
    NonCollapsingCertificate nc = non_collapsing(b, 1.0);
    CHECK(nc.v == doctest::Approx(2.0));  // attained at truncation leaves
    CHECK(b.degree(nc.witness) == 1);

    CHECK_THROWS_AS(non_collapsing(p, -1.0), Error);
}

TEST_CASE("p threshold") {
    CHECK(p_threshold(std::log(3.0), 0.0) == doctest::Approx(1.0));
    CHECK(p_threshold(0.0, 5.0) == doctest::Approx(1.0));
    CHECK(p_threshold(std::log(3.0), std::log(2.0)) == doctest::Approx(std::log(3.0)));

    // monotone in both arguments
    std::mt19937_64 rng(5);
    for (int t = 0; t < 200; ++t) {
        const double h = static_cast<double>(rng() % 1000) / 100.0;
        const double d = static_cast<double>(rng() % 1000) / 100.0;
        CHECK(p_threshold(h + 0.5, d) >= p_threshold(h, d));
        CHECK(p_threshold(h, d + 0.5) >= p_threshold(h, d));
        CHECK(p_threshold(h, d) >= 1.0);
    }
}
