#include "tbundle/metric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "tbundle/error.hpp"
#include "tbundle/parallel.hpp"

namespace tbundle {

DistanceField all_pairs_distances(const MetricGraph& g, VertexId cap) {
    const VertexId n = g.vertex_count();
    if (n > cap) {
        throw param_error("all-pairs table for " + std::to_string(n) +
                          " vertices exceeds cap " + std::to_string(cap) +
                          "; use per-source rows instead");
    }
    std::vector<std::int32_t> table(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    std::vector<std::vector<std::int32_t>> rows(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), 0, [&](std::size_t s) {
        g.bfs_row(static_cast<VertexId>(s), rows[s]);
    });
    for (std::size_t s = 0; s < static_cast<std::size_t>(n); ++s)
        std::copy(rows[s].begin(), rows[s].end(), table.begin() + static_cast<std::ptrdiff_t>(s * static_cast<std::size_t>(n)));
    return DistanceField(n, std::move(table));
}

namespace {

// Largest four-point defect over all (x,y,z) for one basepoint row of Gromov
// products. gp is n x n row-major, gp[x*n+y] = (x|y)_a.
void scan_basepoint(const std::vector<double>& gp, VertexId n, double& best,
                    VertexId w[3]) {
    const std::size_t N = static_cast<std::size_t>(n);
    for (std::size_t x = 0; x < N; ++x) {
        const double* gx = gp.data() + x * N;
        for (std::size_t y = x + 1; y < N; ++y) {
            const double* gy = gp.data() + y * N;
            const double gxy = gx[y];
            double m = -1.0;
            std::size_t mz = 0;
            for (std::size_t z = 0; z < N; ++z) {
                double v = std::min(gx[z], gy[z]);
                if (v > m) {
                    m = v;
                    mz = z;
                }
            }
            if (m - gxy > best) {
                best = m - gxy;
                w[0] = static_cast<VertexId>(x);
                w[1] = static_cast<VertexId>(y);
                w[2] = static_cast<VertexId>(mz);
            }
        }
    }
}

void fill_gromov(const MetricGraph& g, const std::vector<std::int32_t>& da,
                 std::vector<std::vector<std::int32_t>>& row_cache,
                 std::vector<double>& gp) {
    const std::size_t n = static_cast<std::size_t>(g.vertex_count());
    gp.resize(n * n);
    for (std::size_t x = 0; x < n; ++x) {
        const auto& dx = row_cache[x];
        const double dax = static_cast<double>(da[x]);
        double* out = gp.data() + x * n;
        for (std::size_t y = 0; y < n; ++y)
            out[y] = 0.5 * (dax + static_cast<double>(da[y]) - static_cast<double>(dx[y]));
    }
}

}  // namespace

DeltaResult hyperbolicity_delta(const MetricGraph& g, const DeltaOptions& opt) {
    const VertexId n = g.vertex_count();
    DeltaResult res;
    res.mode = opt.mode;

    if (opt.mode == DeltaMode::exact && n > opt.exact_cap) {
        throw param_error("exact hyperbolicity scan is O(n^4) and capped at " +
                          std::to_string(opt.exact_cap) + " vertices (graph has " +
                          std::to_string(n) + "); use sampled mode with a seed");
    }

    if (opt.mode == DeltaMode::exact || opt.mode == DeltaMode::fixed_basepoint) {
        // Row cache: n BFS rows (n is capped here).
        std::vector<std::vector<std::int32_t>> rows(static_cast<std::size_t>(n));
        parallel_for(static_cast<std::size_t>(n), opt.threads,
                     [&](std::size_t s) { g.bfs_row(static_cast<VertexId>(s), rows[s]); });

        std::vector<VertexId> bases;
        if (opt.mode == DeltaMode::exact) {
            bases.resize(static_cast<std::size_t>(n));
            for (VertexId a = 0; a < n; ++a) bases[static_cast<std::size_t>(a)] = a;
        } else {
            bases.push_back(opt.fixed_basepoint);
            res.lower_bound_only = true;
        }

        std::vector<double> best(bases.size(), -1.0);
        std::vector<std::array<VertexId, 4>> wit(bases.size());
        parallel_for(bases.size(), opt.threads, [&](std::size_t bi) {
            VertexId a = bases[bi];
            std::vector<double> gp;
            fill_gromov(g, rows[static_cast<std::size_t>(a)], rows, gp);
            double b = -1.0;
            VertexId w3[3] = {0, 0, 0};
            scan_basepoint(gp, n, b, w3);
            best[bi] = b;
            wit[bi] = {a, w3[0], w3[1], w3[2]};
        });
        double overall = 0.0;
        std::array<VertexId, 4> w{0, 0, 0, 0};
        for (std::size_t bi = 0; bi < bases.size(); ++bi) {
            if (best[bi] > overall) {
                overall = best[bi];
                w = wit[bi];
            }
        }
        res.value = std::max(0.0, overall);
        for (int i = 0; i < 4; ++i) res.witness[i] = w[static_cast<std::size_t>(i)];
        res.quadruples = static_cast<std::uint64_t>(bases.size()) *
                         static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n) *
                         static_cast<std::uint64_t>(n);
        return res;
    }

    // sampled
    if (!opt.seed) throw param_error("sampled hyperbolicity mode requires a seed");
    res.lower_bound_only = true;
    res.seed = *opt.seed;
    std::mt19937_64 rng(*opt.seed);
    auto draw = [&](VertexId m) {
        return static_cast<VertexId>(rng() % static_cast<std::uint64_t>(m));
    };
    std::vector<std::int32_t> ra, rx, ry;
    VertexId last_a = -1, last_x = -1, last_y = -1;
    double best = 0.0;
    for (std::uint64_t s = 0; s < opt.samples; ++s) {
        VertexId a = draw(n), x = draw(n), y = draw(n), z = draw(n);
        if (a != last_a) { g.bfs_row(a, ra); last_a = a; }
        if (x != last_x) { g.bfs_row(x, rx); last_x = x; }
        if (y != last_y) { g.bfs_row(y, ry); last_y = y; }
        auto gxy = 0.5 * (ra[static_cast<std::size_t>(x)] + ra[static_cast<std::size_t>(y)] - rx[static_cast<std::size_t>(y)]);
        auto gxz = 0.5 * (ra[static_cast<std::size_t>(x)] + ra[static_cast<std::size_t>(z)] - rx[static_cast<std::size_t>(z)]);
        auto gyz = 0.5 * (ra[static_cast<std::size_t>(y)] + ra[static_cast<std::size_t>(z)] - ry[static_cast<std::size_t>(z)]);
        double v = std::min(gxz, gyz) - gxy;
        if (v > best) {
            best = v;
            res.witness[0] = a; res.witness[1] = x; res.witness[2] = y; res.witness[3] = z;
        }
    }
    res.value = best;
    res.quadruples = opt.samples;
    return res;
}

GrowthProfile profile_from_counts(VertexId basepoint, std::vector<double> f,
                                  std::optional<int> window_lo,
                                  std::optional<int> window_hi) {
    GrowthProfile p;
    p.basepoint = basepoint;
    p.f = std::move(f);
    const int ecc = static_cast<int>(p.f.size()) - 1;
    p.h_prime = 1.0;
    for (std::size_t r = 0; r + 1 < p.f.size(); ++r)
        p.h_prime = std::max(p.h_prime, p.f[r + 1] / p.f[r]);

    p.window_lo = window_lo.value_or(1);
    p.window_hi = window_hi.value_or(ecc - 1);  // largest radius with B(o,r) != X
    if (p.window_hi > ecc) p.window_hi = ecc;
    if (p.window_lo > p.window_hi || p.window_lo < 0) {
        p.degenerate_window = true;
        p.entropy = 0.0;
        return p;
    }
    // least-squares slope of log f(r) against r
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int r = p.window_lo; r <= p.window_hi; ++r) {
        double x = r, y = std::log(p.f[static_cast<std::size_t>(r)]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++m;
    }
    double denom = m * sxx - sx * sx;
    if (m < 2 || denom == 0.0) {
        p.degenerate_window = true;
        p.entropy = 0.0;
    } else {
        p.entropy = (m * sxy - sx * sy) / denom;
    }
    return p;
}

GrowthProfile growth_profile(const MetricGraph& g, VertexId o,
                             std::optional<int> window_lo,
                             std::optional<int> window_hi) {
    std::vector<std::int32_t> dist;
    g.bfs_row(o, dist);
    std::int32_t ecc = 0;
    for (std::int32_t d : dist) ecc = std::max(ecc, d);
    std::vector<double> shell(static_cast<std::size_t>(ecc) + 1, 0.0);
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        shell[static_cast<std::size_t>(dist[static_cast<std::size_t>(v)])] += g.weight(v);
    std::vector<double> f(static_cast<std::size_t>(ecc) + 1, 0.0);
    double acc = 0.0;
    for (std::size_t r = 0; r < f.size(); ++r) {
        acc += shell[r];
        f[r] = acc;
    }
    return profile_from_counts(o, std::move(f), window_lo, window_hi);
}

NonCollapsingCertificate non_collapsing(const MetricGraph& g, double C) {
    if (C < 0) throw param_error("non-collapsing radius C must be >= 0");
    NonCollapsingCertificate cert;
    cert.C = C;
    const std::int32_t r = static_cast<std::int32_t>(std::floor(C));
    const VertexId n = g.vertex_count();
    std::vector<double> ball(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), 0, [&](std::size_t x) {
        ball[x] = g.ball_weight(static_cast<VertexId>(x), r);
    });
    cert.v = ball[0];
    cert.witness = 0;
    for (VertexId x = 1; x < n; ++x) {
        if (ball[static_cast<std::size_t>(x)] < cert.v) {
            cert.v = ball[static_cast<std::size_t>(x)];
            cert.witness = x;
        }
    }
    return cert;
}

double p_threshold(double h, double delta) {
    if (h < 0 || delta < 0) throw param_error("p_threshold needs h, delta >= 0");
    return std::max(1.0, h * delta / std::log(2.0));
}

}  // namespace tbundle
