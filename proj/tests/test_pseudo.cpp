#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tbundle/error.hpp"
#include "tbundle/metric.hpp"
#include "tbundle/pseudo.hpp"
#include "tbundle/words.hpp"

using namespace tbundle;

namespace {
const double kLog2 = std::log(2.0);
}

TEST_CASE("edge cost: closed form, symmetry, limits") {
    // monotone edge: integral of e^{-t} over [2, 3]
    CHECK(edge_cost(2, 3, 1.0) == doctest::Approx(std::exp(-2) * (1 - std::exp(-1))).epsilon(1e-12));
    // level edge: profile dips to the midpoint
    CHECK(edge_cost(2, 2, 1.0) ==
          doctest::Approx(2 * std::exp(-2) * (1 - std::exp(-0.5))).epsilon(1e-12));
    // integrand tends to 1 on the whole edge as epsilon -> 0+
    CHECK(edge_cost(5, 5, 1e-9) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(edge_cost(5, 6, 1e-9) == doctest::Approx(1.0).epsilon(1e-6));

    std::mt19937_64 rng(17);
    for (int t = 0; t < 500; ++t) {
        const double du = static_cast<double>(rng() % 2000) / 100.0;
        const double dv = std::max(0.0, du + static_cast<double>(rng() % 200) / 100.0 - 1.0);
        const double eps = 0.01 + static_cast<double>(rng() % 300) / 100.0;
        const double c = edge_cost(du, dv, eps);
        CHECK(c == doctest::Approx(edge_cost(dv, du, eps)).epsilon(1e-13));
        CHECK(c > 0.0);
        CHECK(c <= 1.0 + 1e-12);  // integrand <= 1 when du, dv >= 0
    }
    CHECK_THROWS_AS(edge_cost(2, 4, 1.0), Error);
}

TEST_CASE("params: defaults and admissibility") {
    PseudoParams p = PseudoParams::defaults(0.0);
    CHECK(p.epsilon == doctest::Approx(kLog2));
    CHECK(p.D == 1.0);
    CHECK(p.alpha() == doctest::Approx(0.25));
    CHECK(p.beta() == doctest::Approx(8.0 / kLog2));

    PseudoParams q = PseudoParams::defaults(1.0);
    CHECK(q.epsilon == doctest::Approx(kLog2 / 2.0));

    PseudoParams bad;
    bad.epsilon = 1.0;
    bad.D = 1.0;
    bad.delta = 1.0;  // 1 * 2 > log 2
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("line closed form: d^0_eps(i,j) = (e^{-eps i} - e^{-eps j})/eps") {
    MetricGraph path = MetricGraph::path(51);
    for (double eps : {0.1, 0.5, kLog2}) {
        PseudoParams params;
        params.epsilon = eps;
        params.D = 1.0;
        params.delta = 0.0;
        PseudoField f = pseudo_field(path, 0, params, {}, PseudoBackend::dijkstra);
        for (int i = 0; i <= 50; ++i)
            for (int j = i + 1; j <= 50; ++j) {
                const double expect = (std::exp(-eps * i) - std::exp(-eps * j)) / eps;
                CHECK(std::abs(f.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                               expect) < 1e-12);
            }
    }
    // the worked example: a = 0, eps = 0.5, pair (2, 5)
    PseudoParams half;
    half.epsilon = 0.5;
    half.D = 1.0;
    half.delta = 0.0;
    PseudoField f = pseudo_field(path, 0, half);
    CHECK(f.at(2, 5) == doctest::Approx((std::exp(-1.0) - std::exp(-2.5)) / 0.5).epsilon(1e-12));
    CHECK(f.at(3, 3) == 0.0);
}

TEST_CASE("tree closed form agrees with the shortest-path route") {
    std::mt19937_64 rng(23);
    auto ball = FreeBall(2, 4).materialize();
    PseudoParams params = PseudoParams::defaults(0.0);
    PseudoField dij = pseudo_field(ball.graph, 0, params, {}, PseudoBackend::dijkstra);
    PseudoField clo = pseudo_field(ball.graph, 0, params, {}, PseudoBackend::tree_closed_form);
    CHECK(std::string(dij.backend) == "dijkstra");
    CHECK(std::string(clo.backend) == "tree-closed-form");
    const std::size_t n = static_cast<std::size_t>(ball.graph.vertex_count());
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            CHECK(std::abs(dij.rows[x][y] - clo.rows[x][y]) < 1e-12);

    // off-root basepoint too
    const VertexId a = static_cast<VertexId>(rng() % n);
    PseudoField dij2 = pseudo_field(ball.graph, a, params, {}, PseudoBackend::dijkstra);
    PseudoField clo2 = pseudo_field(ball.graph, a, params, {}, PseudoBackend::tree_closed_form);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            CHECK(std::abs(dij2.rows[x][y] - clo2.rows[x][y]) < 1e-12);

    MetricGraph cyc = MetricGraph::cycle(6);
    CHECK_THROWS_AS(make_pseudo_rows(cyc, 0, params, PseudoBackend::tree_closed_form), Error);
}

TEST_CASE("pseudo-field axioms: zero diagonal, symmetry, triangle, dominated by d") {
    std::mt19937_64 rng(29);
    for (const MetricGraph& g :
         {MetricGraph::path(20), MetricGraph::cycle(12), FreeBall(2, 3).materialize().graph}) {
        DeltaOptions exact;
        exact.mode = DeltaMode::exact;
        const double delta = hyperbolicity_delta(g, exact).value;
        PseudoParams params = PseudoParams::defaults(delta);
        const VertexId a = static_cast<VertexId>(rng() % static_cast<std::uint64_t>(g.vertex_count()));
        PseudoField f = pseudo_field(g, a, params);
        DistanceField d = all_pairs_distances(g);
        const VertexId n = g.vertex_count();
        for (VertexId x = 0; x < n; ++x) {
            CHECK(f.rows[static_cast<std::size_t>(x)][static_cast<std::size_t>(x)] == 0.0);
            for (VertexId y = 0; y < n; ++y) {
                // raw rows are symmetric to rounding; the table lookup is canonical
                CHECK(std::abs(f.rows[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] -
                               f.rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)]) <
                      1e-12);
                CHECK(f.at(x, y) == f.at(y, x));
                CHECK(f.at(x, y) <= static_cast<double>(d(x, y)) + 1e-12);
            }
        }
        for (int t = 0; t < 2000; ++t) {
            const VertexId x = static_cast<VertexId>(rng() % static_cast<std::uint64_t>(n));
            const VertexId y = static_cast<VertexId>(rng() % static_cast<std::uint64_t>(n));
            const VertexId z = static_cast<VertexId>(rng() % static_cast<std::uint64_t>(n));
            CHECK(f.at(x, y) <= f.at(x, z) + f.at(z, y) + 1e-12);
        }
    }
}

TEST_CASE("monotone in epsilon: smaller epsilon gives larger pseudo-distance") {
    MetricGraph g = FreeBall(2, 3).materialize().graph;
    PseudoParams p1, p2;
    p1.epsilon = 0.3;
    p1.D = 1.0;
    p1.delta = 0.0;
    p2.epsilon = kLog2;
    p2.D = 1.0;
    p2.delta = 0.0;
    PseudoField f1 = pseudo_field(g, 0, p1);
    PseudoField f2 = pseudo_field(g, 0, p2);
    for (std::size_t x = 0; x < f1.rows.size(); ++x)
        for (std::size_t y = 0; y < f1.rows[x].size(); ++y)
            CHECK(f1.rows[x][y] >= f2.rows[x][y] - 1e-12);
}

TEST_CASE("random non-simple walks never beat the computed pseudo-distance") {
    std::mt19937_64 rng(31);
    for (const MetricGraph& g :
         {MetricGraph::path(30), MetricGraph::cycle(10), FreeBall(2, 4).materialize().graph}) {
        DeltaOptions exact;
        exact.mode = DeltaMode::exact;
        PseudoParams params = PseudoParams::defaults(hyperbolicity_delta(g, exact).value);
        const VertexId n = g.vertex_count();
        const VertexId a = static_cast<VertexId>(rng() % static_cast<std::uint64_t>(n));
        PseudoField f = pseudo_field(g, a, params);
        std::vector<std::int32_t> da;
        g.bfs_row(a, da);
        for (int t = 0; t < 400; ++t) {
            const VertexId x = static_cast<VertexId>(rng() % static_cast<std::uint64_t>(n));
            const VertexId y = static_cast<VertexId>(rng() % static_cast<std::uint64_t>(n));
            auto walk = oracles::random_walk_between(g, x, y, static_cast<int>(rng() % 12), rng);
            CHECK(walk_cost(g, walk, da, params.epsilon) >= f.at(x, y) - 1e-12);
        }
    }
}

TEST_CASE("relabeling invariance: pseudo-distance only sees distances") {
    // rotating a cycle relabels everything; d^{ga}(gx, gy) = d^a(x, y)
    MetricGraph g = MetricGraph::cycle(9);
    DeltaOptions exact;
    exact.mode = DeltaMode::exact;
    PseudoParams params = PseudoParams::defaults(hyperbolicity_delta(g, exact).value);
    const VertexId n = g.vertex_count();
    auto rot = [&](VertexId v) { return static_cast<VertexId>((v + 1) % n); };
    PseudoField f0 = pseudo_field(g, 2, params);
    PseudoField f1 = pseudo_field(g, rot(2), params);
    for (VertexId x = 0; x < n; ++x)
        for (VertexId y = 0; y < n; ++y)
            CHECK(std::abs(f0.at(x, y) - f1.at(rot(x), rot(y))) < 1e-12);
}

TEST_CASE("bound certification: zero violations on trees, paths, cycles") {
    // tree ball radius 5 with the tree defaults
    {
        MetricGraph b = FreeBall(2, 5).materialize().graph;
        PseudoParams params = PseudoParams::defaults(0.0);
        for (VertexId a : {VertexId{0}, static_cast<VertexId>(b.vertex_count() - 1)}) {
            BoundReport rep = verify_bounds_stream(b, a, params);
            CHECK(rep.upper_violations == 0);
            CHECK(rep.lower_violations == 0);
            CHECK(rep.worst_upper_ratio <= 1.0);
            CHECK(rep.worst_lower_ratio >= 1.0);
        }
    }
    // path: table route and stream route agree
    {
        MetricGraph path = MetricGraph::path(40);
        PseudoParams params = PseudoParams::defaults(0.0);
        PseudoField f = pseudo_field(path, 0, params);
        DistanceField d = all_pairs_distances(path);
        BoundReport rep = verify_bounds(f, d);
        BoundReport rep2 = verify_bounds_stream(path, 0, params);
        CHECK(rep.pass());
        CHECK(rep2.pass());
        CHECK(rep.pairs_checked == rep2.pairs_checked);
        CHECK(rep.worst_upper_ratio == doctest::Approx(rep2.worst_upper_ratio).epsilon(1e-12));
    }
    // cycle with its exact delta
    {
        MetricGraph c = MetricGraph::cycle(12);
        DeltaOptions exact;
        exact.mode = DeltaMode::exact;
        PseudoParams params = PseudoParams::defaults(hyperbolicity_delta(c, exact).value);
        BoundReport rep = verify_bounds_stream(c, 0, params);
        CHECK(rep.pass());
    }
}

TEST_CASE("inadmissible parameters are rejected before any computation") {
    MetricGraph g = MetricGraph::cycle(8);
    PseudoParams params;
    params.epsilon = kLog2;  // needs delta + D <= 1, but delta(C8) = 2
    params.D = 1.0;
    params.delta = 2.0;
    CHECK_THROWS_AS(pseudo_field(g, 0, params), Error);
    CHECK_THROWS_AS(verify_bounds_stream(g, 0, params), Error);
}
