#include "tbundle/pseudo.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "tbundle/error.hpp"
#include "tbundle/parallel.hpp"

namespace tbundle {

PseudoParams PseudoParams::defaults(double delta, std::optional<double> epsilon,
                                    std::optional<double> D) {
    PseudoParams p;
    p.delta = delta;
    p.D = D.value_or(1.0);
    p.epsilon = epsilon.value_or(std::log(2.0) / (delta + p.D));
    p.validate();
    return p;
}

void PseudoParams::validate() const {
    if (!(epsilon > 0.0)) throw param_error("epsilon must be > 0");
    if (!(D > 0.0)) throw param_error("D must be > 0");
    if (delta < 0.0) throw param_error("delta must be >= 0");
    const double lhs = epsilon * (delta + D);
    const double bound = std::log(2.0);
    if (lhs > bound * (1.0 + 1e-12)) {
        throw param_error("inadmissible parameters: epsilon*(delta+D) = " + std::to_string(lhs) +
                          " exceeds log 2 = " + std::to_string(bound));
    }
}

double edge_cost(double du, double dv, double epsilon) {
    if (std::abs(du - dv) > 1.0 + 1e-9)
        throw Error("invalid-edge", "endpoint distances differ by more than the edge length (" +
                                        std::to_string(du) + " vs " + std::to_string(dv) +
                                        "); distance field is inconsistent");
    const double tstar = 0.5 * (dv - du + 1.0);
    // expm1 keeps the 1 - e^{-eps t} factors accurate for small epsilon
    const double left = std::exp(-epsilon * du) * (-std::expm1(-epsilon * tstar));
    const double right = std::exp(-epsilon * dv) * (-std::expm1(-epsilon * (1.0 - tstar)));
    return (left + right) / epsilon;
}

ExpTable::ExpTable(double epsilon, std::int32_t max_k) : eps_(epsilon), max_(max_k) {
    t_.resize(static_cast<std::size_t>(max_k) + 1);
    for (std::int32_t k = 0; k <= max_k; ++k)
        t_[static_cast<std::size_t>(k)] = std::exp(-epsilon * static_cast<double>(k));
}

namespace {

class DijkstraRows final : public PseudoRows {
public:
    DijkstraRows(const MetricGraph& g, VertexId a, const PseudoParams& params)
        : g_(g), a_(a), params_(params) {
        g.bfs_row(a, da_);
        // per-edge costs, indexed like the CSR adjacency
        const VertexId n = g.vertex_count();
        cost_.resize(static_cast<std::size_t>(g.edge_count()) * 2);
        std::size_t pos = 0;
        for (VertexId u = 0; u < n; ++u) {
            const double du = static_cast<double>(da_[static_cast<std::size_t>(u)]);
            for (const VertexId* it = g.neighbors_begin(u); it != g.neighbors_end(u); ++it, ++pos)
                cost_[pos] = edge_cost(du, static_cast<double>(da_[static_cast<std::size_t>(*it)]),
                                       params.epsilon);
        }
        offsets_.resize(static_cast<std::size_t>(n) + 1);
        offsets_[0] = 0;
        for (VertexId u = 0; u < n; ++u)
            offsets_[static_cast<std::size_t>(u) + 1] =
                offsets_[static_cast<std::size_t>(u)] + static_cast<std::size_t>(g.degree(u));
    }

    VertexId basepoint() const override { return a_; }
    const MetricGraph& graph() const override { return g_; }
    const std::vector<std::int32_t>& dist_to_base() const override { return da_; }
    const char* backend_name() const override { return "dijkstra"; }

    void fill_row(VertexId x, std::vector<double>& out) const override {
        const VertexId n = g_.vertex_count();
        out.assign(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
        using Item = std::pair<double, VertexId>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
        out[static_cast<std::size_t>(x)] = 0.0;
        pq.emplace(0.0, x);
        while (!pq.empty()) {
            auto [dist, u] = pq.top();
            pq.pop();
            if (dist > out[static_cast<std::size_t>(u)]) continue;
            const VertexId* nb = g_.neighbors_begin(u);
            const double* cs = cost_.data() + offsets_[static_cast<std::size_t>(u)];
            const int deg = g_.degree(u);
            for (int i = 0; i < deg; ++i) {
                const double nd = dist + cs[i];
                if (nd < out[static_cast<std::size_t>(nb[i])]) {
                    out[static_cast<std::size_t>(nb[i])] = nd;
                    pq.emplace(nd, nb[i]);
                }
            }
        }
    }

private:
    const MetricGraph& g_;
    VertexId a_;
    PseudoParams params_;
    std::vector<std::int32_t> da_;
    std::vector<double> cost_;
    std::vector<std::size_t> offsets_;
};

class TreeRows final : public PseudoRows {
public:
    TreeRows(const MetricGraph& g, VertexId a, const PseudoParams& params)
        : g_(g), a_(a), table_(params.epsilon, 2 * g.eccentricity(a) + 2) {
        g.bfs_row(a, da_);
    }

    VertexId basepoint() const override { return a_; }
    const MetricGraph& graph() const override { return g_; }
    const std::vector<std::int32_t>& dist_to_base() const override { return da_; }
    const char* backend_name() const override { return "tree-closed-form"; }

    void fill_row(VertexId x, std::vector<double>& out) const override {
        const std::size_t n = static_cast<std::size_t>(g_.vertex_count());
        std::vector<std::int32_t> dx;
        g_.bfs_row(x, dx);
        out.resize(n);
        const std::int64_t dax = da_[static_cast<std::size_t>(x)];
        for (std::size_t y = 0; y < n; ++y) {
            const std::int64_t day = da_[y];
            const std::int64_t g2 = dax + day - dx[y];  // 2*(x|y)_a
            out[y] = tree_pseudo(g2, dax, day, table_);
        }
    }

private:
    const MetricGraph& g_;
    VertexId a_;
    ExpTable table_;
    std::vector<std::int32_t> da_;
};

}  // namespace

std::unique_ptr<PseudoRows> make_pseudo_rows(const MetricGraph& g, VertexId a,
                                             const PseudoParams& params, PseudoBackend backend) {
    params.validate();
    if (backend == PseudoBackend::automatic)
        backend = g.is_tree() ? PseudoBackend::tree_closed_form : PseudoBackend::dijkstra;
    if (backend == PseudoBackend::tree_closed_form) {
        if (!g.is_tree()) throw param_error("tree closed-form backend requires a tree");
        return std::make_unique<TreeRows>(g, a, params);
    }
    return std::make_unique<DijkstraRows>(g, a, params);
}

double walk_cost(const MetricGraph& g, const std::vector<VertexId>& walk,
                 const std::vector<std::int32_t>& dist_to_base, double epsilon) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
        VertexId u = walk[i], v = walk[i + 1];
        bool adjacent = std::binary_search(g.neighbors_begin(u), g.neighbors_end(u), v);
        if (!adjacent)
            throw graph_error("walk step " + std::to_string(i) + " is not an edge");
        total += edge_cost(static_cast<double>(dist_to_base[static_cast<std::size_t>(u)]),
                           static_cast<double>(dist_to_base[static_cast<std::size_t>(v)]), epsilon);
    }
    return total;
}

double PseudoField::at(VertexId x, VertexId y) const {
    if (x == y) return 0.0;
    VertexId lo = std::min(x, y), hi = std::max(x, y);
    std::int32_t row = source_index[static_cast<std::size_t>(lo)];
    if (row >= 0) return rows[static_cast<std::size_t>(row)][static_cast<std::size_t>(hi)];
    row = source_index[static_cast<std::size_t>(hi)];
    if (row >= 0) return rows[static_cast<std::size_t>(row)][static_cast<std::size_t>(lo)];
    throw dependency_error("pseudo-field has no row covering pair (" + std::to_string(lo) +
                           ", " + std::to_string(hi) + ")");
}

PseudoField pseudo_field(const MetricGraph& g, VertexId a, const PseudoParams& params,
                         std::vector<VertexId> sources, PseudoBackend backend, int threads) {
    params.validate();
    auto rows = make_pseudo_rows(g, a, params, backend);
    PseudoField f;
    f.basepoint = a;
    f.params = params;
    f.backend = rows->backend_name();
    f.dist_to_base = rows->dist_to_base();
    if (sources.empty()) {
        sources.resize(static_cast<std::size_t>(g.vertex_count()));
        for (VertexId v = 0; v < g.vertex_count(); ++v) sources[static_cast<std::size_t>(v)] = v;
    }
    f.sources = std::move(sources);
    f.source_index.assign(static_cast<std::size_t>(g.vertex_count()), -1);
    for (std::size_t i = 0; i < f.sources.size(); ++i)
        f.source_index[static_cast<std::size_t>(f.sources[i])] = static_cast<std::int32_t>(i);
    f.rows.resize(f.sources.size());
    parallel_for(f.sources.size(), threads,
                 [&](std::size_t i) { rows->fill_row(f.sources[i], f.rows[i]); });
    return f;
}

namespace {

struct BoundAccumulator {
    BoundReport rep;
    double tol_hi = 1.0 + kBoundRelTol;
    double tol_lo = 1.0 - kBoundRelTol;

    void init() { rep.worst_lower_ratio = std::numeric_limits<double>::infinity(); }

    void pair(VertexId x, VertexId y, double deps, double gromov, double d_xy,
              const PseudoParams& p) {
        ++rep.pairs_checked;
        const double decay = std::exp(-p.epsilon * gromov);
        const double upper = p.beta() * decay;
        const double ur = deps / upper;
        if (ur > rep.worst_upper_ratio) {
            rep.worst_upper_ratio = ur;
            rep.worst_upper_pair[0] = x;
            rep.worst_upper_pair[1] = y;
        }
        if (ur > tol_hi) ++rep.upper_violations;
        if (d_xy >= 2.0 * p.D) {
            ++rep.lower_scope_pairs;
            const double lower = p.alpha() * decay;
            const double lr = deps / lower;
            if (lr < rep.worst_lower_ratio) {
                rep.worst_lower_ratio = lr;
                rep.worst_lower_pair[0] = x;
                rep.worst_lower_pair[1] = y;
            }
            if (lr < tol_lo) ++rep.lower_violations;
        }
    }

    void merge(const BoundAccumulator& o) {
        rep.pairs_checked += o.rep.pairs_checked;
        rep.lower_scope_pairs += o.rep.lower_scope_pairs;
        rep.upper_violations += o.rep.upper_violations;
        rep.lower_violations += o.rep.lower_violations;
        if (o.rep.worst_upper_ratio > rep.worst_upper_ratio) {
            rep.worst_upper_ratio = o.rep.worst_upper_ratio;
            rep.worst_upper_pair[0] = o.rep.worst_upper_pair[0];
            rep.worst_upper_pair[1] = o.rep.worst_upper_pair[1];
        }
        if (o.rep.worst_lower_ratio < rep.worst_lower_ratio) {
            rep.worst_lower_ratio = o.rep.worst_lower_ratio;
            rep.worst_lower_pair[0] = o.rep.worst_lower_pair[0];
            rep.worst_lower_pair[1] = o.rep.worst_lower_pair[1];
        }
    }
};

}  // namespace

BoundReport verify_bounds(const PseudoField& field, const DistanceField& d) {
    BoundAccumulator acc;
    acc.init();
    const VertexId n = d.size();
    for (std::size_t i = 0; i < field.sources.size(); ++i) {
        const VertexId x = field.sources[i];
        const auto& row = field.rows[i];
        const std::int32_t* dx = d.row(x);
        const std::int32_t dax = d(field.basepoint, x);
        for (VertexId y = 0; y < n; ++y) {
            if (y == x) continue;
            const double gromov =
                0.5 * (static_cast<double>(dax) + static_cast<double>(d(field.basepoint, y)) -
                       static_cast<double>(dx[static_cast<std::size_t>(y)]));
            acc.pair(x, y, row[static_cast<std::size_t>(y)], gromov,
                     static_cast<double>(dx[static_cast<std::size_t>(y)]), field.params);
        }
    }
    return acc.rep;
}

BoundReport verify_bounds_stream(const MetricGraph& g, VertexId a, const PseudoParams& params,
                                 std::vector<VertexId> sources, PseudoBackend backend,
                                 int threads) {
    auto rows = make_pseudo_rows(g, a, params, backend);
    const VertexId n = g.vertex_count();
    if (sources.empty()) {
        sources.resize(static_cast<std::size_t>(n));
        for (VertexId v = 0; v < n; ++v) sources[static_cast<std::size_t>(v)] = v;
    }
    const auto& da = rows->dist_to_base();
    std::vector<BoundAccumulator> accs(sources.size());
    parallel_for(sources.size(), threads, [&](std::size_t i) {
        accs[i].init();
        const VertexId x = sources[i];
        std::vector<double> row;
        rows->fill_row(x, row);
        std::vector<std::int32_t> dx;
        g.bfs_row(x, dx);
        const double dax = static_cast<double>(da[static_cast<std::size_t>(x)]);
        for (VertexId y = 0; y < n; ++y) {
            if (y == x) continue;
            const double gromov = 0.5 * (dax + static_cast<double>(da[static_cast<std::size_t>(y)]) -
                                         static_cast<double>(dx[static_cast<std::size_t>(y)]));
            accs[i].pair(x, y, row[static_cast<std::size_t>(y)], gromov,
                         static_cast<double>(dx[static_cast<std::size_t>(y)]), params);
        }
    });
    BoundAccumulator total;
    total.init();
    for (const auto& acc : accs) total.merge(acc);
    return total.rep;
}

}  // namespace tbundle
