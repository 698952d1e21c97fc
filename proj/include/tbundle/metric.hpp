#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tbundle/graph.hpp"

namespace tbundle {

/// All-pairs graph distances (edge units). Row-major n x n table.
class DistanceField {
public:
    DistanceField(VertexId n, std::vector<std::int32_t> table)
        : n_(n), d_(std::move(table)) {}

    std::int32_t operator()(VertexId x, VertexId y) const {
        return d_[static_cast<std::size_t>(x) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(y)];
    }
    VertexId size() const { return n_; }
    const std::int32_t* row(VertexId x) const {
        return d_.data() + static_cast<std::size_t>(x) * static_cast<std::size_t>(n_);
    }

private:
    VertexId n_;
    std::vector<std::int32_t> d_;
};

/// BFS from every source. Throws if the vertex count exceeds cap (the table
/// is quadratic; per-source rows scale further).
DistanceField all_pairs_distances(const MetricGraph& g, VertexId cap = 8192);

/// (x|y)_a = (d(x,a) + d(y,a) - d(x,y)) / 2.
inline double gromov_product(const DistanceField& d, VertexId x, VertexId y, VertexId a) {
    return 0.5 * (static_cast<double>(d(x, a)) + static_cast<double>(d(y, a)) -
                  static_cast<double>(d(x, y)));
}

enum class DeltaMode { exact, fixed_basepoint, sampled };

struct DeltaResult {
    double value = 0.0;
    DeltaMode mode = DeltaMode::exact;
    bool lower_bound_only = false;
    VertexId witness[4] = {0, 0, 0, 0};  // (a, x, y, z) attaining the max
    std::uint64_t quadruples = 0;
    std::uint64_t seed = 0;
};

struct DeltaOptions {
    DeltaMode mode = DeltaMode::exact;
    VertexId exact_cap = 300;
    VertexId fixed_basepoint = 0;
    std::uint64_t samples = 20000;
    std::optional<std::uint64_t> seed;  // required for sampled mode
    int threads = 1;
};

/// Four-point hyperbolicity constant:
/// max over quadruples (a,x,y,z) of min{(x|z)_a,(y|z)_a} - (x|y)_a, clamped at 0.
/// exact scans all quadruples (O(n^4), guarded by exact_cap); fixed_basepoint
/// fixes a; sampled draws random quadruples. Both latter modes are lower bounds.
DeltaResult hyperbolicity_delta(const MetricGraph& g, const DeltaOptions& opt);

/// Ball growth from a basepoint: f(r) = mu(B(o,r)) tabulated until the ball
/// covers the graph, the max consecutive ratio h', and the entropy estimate
/// (least-squares slope of log f over [window_lo, window_hi]).
struct GrowthProfile {
    VertexId basepoint = 0;
    std::vector<double> f;  // f[r], r = 0..saturation radius
    double h_prime = 1.0;
    double entropy = 0.0;
    int window_lo = 1;
    int window_hi = 0;
    bool degenerate_window = false;

    /// f extended beyond the table by its final (total-measure) value.
    double at(std::int64_t r) const {
        if (r < 0) return f.front();
        std::size_t i = static_cast<std::size_t>(r);
        return i < f.size() ? f[i] : f.back();
    }
    int saturation_radius() const { return static_cast<int>(f.size()) - 1; }
};

GrowthProfile growth_profile(const MetricGraph& g, VertexId o,
                             std::optional<int> window_lo = std::nullopt,
                             std::optional<int> window_hi = std::nullopt);

/// Builds a profile from an already-tabulated cumulative ball measure.
GrowthProfile profile_from_counts(VertexId basepoint, std::vector<double> f,
                                  std::optional<int> window_lo = std::nullopt,
                                  std::optional<int> window_hi = std::nullopt);

/// Non-collapsing constants: v = min_x mu(B(x, C)).
struct NonCollapsingCertificate {
    double C = 0.0;
    double v = 0.0;
    VertexId witness = 0;  // vertex attaining the min
};

NonCollapsingCertificate non_collapsing(const MetricGraph& g, double C);

/// Theorem-level exponent threshold max(1, h*delta/log 2).
double p_threshold(double h, double delta);

}  // namespace tbundle
