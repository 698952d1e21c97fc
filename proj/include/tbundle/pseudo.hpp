#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "tbundle/graph.hpp"
#include "tbundle/metric.hpp"

namespace tbundle {

/// Relative tolerance for bound certification.
inline constexpr double kBoundRelTol = 1e-9;
/// Absolute tolerance for algebraic identities checked in floating point.
inline constexpr double kIdentityTol = 1e-9;
/// Absolute tolerance for dual-route agreement checks.
inline constexpr double kAgreementTol = 1e-12;

/// Parameters of the weighted path pseudo-distance. Admissible when
/// epsilon * (delta + D) <= log 2; alpha and beta are derived, never stored.
struct PseudoParams {
    double epsilon = std::log(2.0);
    double D = 1.0;
    double delta = 0.0;  // ambient hyperbolicity bound used for admissibility

    double alpha() const { return D * std::exp(-2.0 * D * epsilon); }
    double beta() const { return 8.0 / epsilon; }

    /// Defaults: D = 1, epsilon = log 2 / (delta + D).
    static PseudoParams defaults(double delta, std::optional<double> epsilon = std::nullopt,
                                 std::optional<double> D = std::nullopt);

    /// Throws a param error if epsilon*(delta+D) > log 2 (1 ulp of slack) or
    /// any parameter is out of range.
    void validate() const;
};

/// Exact integral of exp(-eps * t -> distance-to-basepoint) over one unit
/// edge whose endpoints sit at distances du, dv from the basepoint; the
/// interior profile is min(du + t, dv + 1 - t). Requires |du - dv| <= 1.
double edge_cost(double du, double dv, double epsilon);

/// Precomputed exp(-eps * k) for integer k; hot loops index it directly.
class ExpTable {
public:
    ExpTable(double epsilon, std::int32_t max_k);
    double operator[](std::int64_t k) const {
        return k <= max_ ? t_[static_cast<std::size_t>(k)] : std::exp(-eps_ * static_cast<double>(k));
    }
    double epsilon() const { return eps_; }

private:
    double eps_;
    std::int32_t max_;
    std::vector<double> t_;
};

/// Pseudo-distance on a tree in closed form: along the unique x..y path the
/// distance-to-a profile is V-shaped with minimum (x|y)_a, so the cost
/// telescopes to (2 e^{-eps m} - e^{-eps d(a,x)} - e^{-eps d(a,y)}) / eps.
inline double tree_pseudo(std::int64_t gromov2, std::int64_t dax, std::int64_t day,
                          const ExpTable& T) {
    // gromov2 = 2*(x|y)_a, always an even integer on trees
    return (2.0 * T[gromov2 / 2] - T[dax] - T[day]) / T.epsilon();
}

/// Rows d^a_eps(x, .) for one basepoint a. Two backends share the interface:
/// nonnegative-weight shortest paths (any graph) and the tree closed form.
class PseudoRows {
public:
    virtual ~PseudoRows() = default;
    virtual VertexId basepoint() const = 0;
    virtual const MetricGraph& graph() const = 0;
    /// d(a, .) row.
    virtual const std::vector<std::int32_t>& dist_to_base() const = 0;
    /// Fills out[y] = d^a_eps(x, y) for every vertex y.
    virtual void fill_row(VertexId x, std::vector<double>& out) const = 0;
    virtual const char* backend_name() const = 0;
};

enum class PseudoBackend { automatic, dijkstra, tree_closed_form };

std::unique_ptr<PseudoRows> make_pseudo_rows(const MetricGraph& g, VertexId a,
                                             const PseudoParams& params,
                                             PseudoBackend backend = PseudoBackend::automatic);

/// Cost of an explicit edge walk (vertices may repeat); infinity-free since
/// all edge costs are positive and finite. Throws on non-adjacent steps.
double walk_cost(const MetricGraph& g, const std::vector<VertexId>& walk,
                 const std::vector<std::int32_t>& dist_to_base, double epsilon);

/// The computed pseudo-distance table for one basepoint, full or per-source.
/// Lookups are canonically symmetric: the row of the smaller endpoint wins.
struct PseudoField {
    VertexId basepoint = 0;
    PseudoParams params;
    std::vector<VertexId> sources;             // row order
    std::vector<std::vector<double>> rows;     // rows[i][y] = d^a(sources[i], y)
    std::vector<std::int32_t> source_index;    // vertex -> row or -1
    std::vector<std::int32_t> dist_to_base;    // d(a, .)
    const char* backend = "dijkstra";

    bool covers(VertexId x) const { return source_index[static_cast<std::size_t>(x)] >= 0; }
    double at(VertexId x, VertexId y) const;
};

/// Builds d^a_eps rows by single-source shortest paths (or the certified tree
/// closed form) for the given sources; empty sources = all vertices.
PseudoField pseudo_field(const MetricGraph& g, VertexId a, const PseudoParams& params,
                         std::vector<VertexId> sources = {},
                         PseudoBackend backend = PseudoBackend::automatic,
                         int threads = 0);

/// Two-sided comparison of d^a_eps with e^{-eps (x|y)_a}:
/// upper d^a <= beta e^{-eps (x|y)_a} on all pairs, lower alpha e^{-eps (x|y)_a} <= d^a
/// on pairs with d(x,y) >= 2D. Violations are counted beyond kBoundRelTol.
struct BoundReport {
    std::uint64_t pairs_checked = 0;
    std::uint64_t lower_scope_pairs = 0;
    std::uint64_t upper_violations = 0;
    std::uint64_t lower_violations = 0;
    double worst_upper_ratio = 0.0;  // max d^a / upper bound  (pass: <= 1)
    double worst_lower_ratio = 0.0;  // min d^a / lower bound  (pass: >= 1); 0 pairs -> inf
    VertexId worst_upper_pair[2] = {0, 0};
    VertexId worst_lower_pair[2] = {0, 0};
    bool pass() const { return upper_violations == 0 && lower_violations == 0; }
};

/// Checks every (source, vertex) pair of the field against the distance table.
BoundReport verify_bounds(const PseudoField& field, const DistanceField& d);

/// Streaming variant for large graphs: iterates sources, recomputing rows,
/// never materializing a quadratic table. Sources empty = all vertices.
BoundReport verify_bounds_stream(const MetricGraph& g, VertexId a, const PseudoParams& params,
                                 std::vector<VertexId> sources = {},
                                 PseudoBackend backend = PseudoBackend::automatic,
                                 int threads = 0);

}  // namespace tbundle
