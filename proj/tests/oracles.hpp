#pragma once

// Test-only oracles, deliberately independent of the library code paths they
// check: plain quadruple scans, explicit path walks, and ball enumerations.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tbundle/graph.hpp"
#include "tbundle/words.hpp"

namespace oracles {

using tbundle::MetricGraph;
using tbundle::VertexId;
using tbundle::Word;

inline std::vector<std::vector<std::int32_t>> all_rows(const MetricGraph& g) {
    std::vector<std::vector<std::int32_t>> rows(static_cast<std::size_t>(g.vertex_count()));
    for (VertexId v = 0; v < g.vertex_count(); ++v) g.bfs_row(v, rows[static_cast<std::size_t>(v)]);
    return rows;
}

/// Four-point condition by direct enumeration of every ordered quadruple.
inline double brute_force_delta(const MetricGraph& g) {
    const auto rows = all_rows(g);
    const VertexId n = g.vertex_count();
    double best = 0.0;
    for (VertexId a = 0; a < n; ++a)
        for (VertexId x = 0; x < n; ++x)
            for (VertexId y = 0; y < n; ++y)
                for (VertexId z = 0; z < n; ++z) {
                    auto gp = [&](VertexId s, VertexId t) {
                        return 0.5 * (rows[a][s] + rows[a][t] - rows[s][t]);
                    };
                    best = std::max(best, std::min(gp(x, z), gp(y, z)) - gp(x, y));
                }
    return best;
}

/// Vertices of the unique tree path from x to y, inclusive.
inline std::vector<VertexId> tree_path(const MetricGraph& tree, VertexId x, VertexId y) {
    std::vector<std::int32_t> dy;
    tree.bfs_row(y, dy);
    std::vector<VertexId> path{x};
    VertexId cur = x;
    while (cur != y) {
        for (const VertexId* it = tree.neighbors_begin(cur); it != tree.neighbors_end(cur); ++it) {
            if (dy[static_cast<std::size_t>(*it)] == dy[static_cast<std::size_t>(cur)] - 1) {
                cur = *it;
                path.push_back(cur);
                break;
            }
        }
    }
    return path;
}

/// Distance from a to the geodesic [x, y] on a tree.
inline std::int32_t dist_to_tree_geodesic(const MetricGraph& tree, VertexId a, VertexId x,
                                          VertexId y) {
    std::vector<std::int32_t> da;
    tree.bfs_row(a, da);
    std::int32_t best = da[static_cast<std::size_t>(x)];
    for (VertexId v : tree_path(tree, x, y)) best = std::min(best, da[static_cast<std::size_t>(v)]);
    return best;
}

/// A random edge walk from x to y that may revisit vertices: a few random
/// steps, then a shortest-path descent to the target.
inline std::vector<VertexId> random_walk_between(const MetricGraph& g, VertexId x, VertexId y,
                                                 int wander, std::mt19937_64& rng) {
    std::vector<VertexId> walk{x};
    VertexId cur = x;
    for (int i = 0; i < wander; ++i) {
        const int deg = g.degree(cur);
        if (deg == 0) break;
        cur = g.neighbors_begin(cur)[rng() % static_cast<std::uint64_t>(deg)];
        walk.push_back(cur);
    }
    std::vector<std::int32_t> dy;
    g.bfs_row(y, dy);
    while (cur != y) {
        for (const VertexId* it = g.neighbors_begin(cur); it != g.neighbors_end(cur); ++it) {
            if (dy[static_cast<std::size_t>(*it)] == dy[static_cast<std::size_t>(cur)] - 1) {
                cur = *it;
                walk.push_back(cur);
                break;
            }
        }
    }
    return walk;
}

/// Reduced words of length <= r, recursively (independent of FreeBall).
inline void enumerate_words(int k, int r, std::vector<Word>& out) {
    out.clear();
    out.push_back(Word{});
    std::size_t head = 0;
    while (head < out.size()) {
        Word w = out[head++];
        if (w.length() == r) continue;
        for (std::int8_t l = 1; l <= static_cast<std::int8_t>(k); ++l)
            for (std::int8_t s : {l, static_cast<std::int8_t>(-l)}) {
                if (!w.letters.empty() && w.letters.back() == static_cast<std::int8_t>(-s)) continue;
                Word c = w;
                c.letters.push_back(s);
                out.push_back(std::move(c));
            }
    }
}

/// l^2(oriented edges) coboundary norm by scanning every oriented edge of the
/// word ball of radius |g|+1: c(g)(u,v) = [v closer to 1] - [v closer to g].
inline std::int64_t brute_edge_cocycle_sq(const Word& g, int k) {
    std::vector<Word> verts;
    enumerate_words(k, g.length() + 1, verts);
    std::int64_t sq = 0;
    for (const Word& u : verts) {
        if (u.length() + 1 > g.length() + 1) continue;
        for (std::int8_t l = 1; l <= static_cast<std::int8_t>(k); ++l)
            for (std::int8_t s : {l, static_cast<std::int8_t>(-l)}) {
                if (!u.letters.empty() && u.letters.back() == static_cast<std::int8_t>(-s)) continue;
                Word v = u;
                v.letters.push_back(s);
                // both orientations of the undirected edge {u, v}
                const Word* ends[2][2] = {{&u, &v}, {&v, &u}};
                for (auto& e : ends) {
                    const int to_one = e[1]->length() < e[0]->length() ? 1 : 0;
                    const int to_g = tbundle::word_distance(*e[1], g) <
                                             tbundle::word_distance(*e[0], g)
                                         ? 1
                                         : 0;
                    const std::int64_t val = to_one - to_g;
                    sq += val * val;
                }
            }
    }
    return sq;
}

/// Nested 2-of-1 norm by scanning every h in the ball: the fiber c(g)(h) is
/// delta at the neighbor toward 1 minus delta at the neighbor toward g.
inline std::int64_t brute_double_cocycle_sq(const Word& g, int k) {
    std::vector<Word> verts;
    enumerate_words(k, g.length() + 1, verts);
    std::int64_t sq = 0;
    for (const Word& h : verts) {
        // neighbor of h closest to 1: drop the last letter (undefined at h = 1)
        // neighbor of h closest to g: step along the geodesic (undefined at h = g)
        bool has_n1 = !h.is_identity();
        bool has_ng = !(h == g);
        Word n1, ng;
        if (has_n1) {
            n1 = h;
            n1.letters.pop_back();
        }
        if (has_ng) {
            const Word rest = tbundle::reduced_concat(tbundle::word_inverse(h), g);
            ng = tbundle::reduced_concat(h, Word{{rest.letters.front()}});
        }
        std::int64_t l1 = 0;
        if (has_n1 && has_ng)
            l1 = (n1 == ng) ? 0 : 2;
        else if (has_n1 || has_ng)
            l1 = 1;
        sq += l1 * l1;
    }
    return sq;
}

}  // namespace oracles
