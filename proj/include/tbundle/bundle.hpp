#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tbundle/graph.hpp"
#include "tbundle/metric.hpp"
#include "tbundle/pseudo.hpp"

namespace tbundle {

/// Parameters of the discrete tangent bundle
///   ax(xi) = d^a_eps(x, xi) * e^{-d(a,xi)} / f(d(a,xi))^{1/p}.
/// E bounds the shell series sum (h'-1) e^{-pn}; the curvature exponent is
/// kappa = -eps and D_C = E^{1/p} beta e^{eps C} dominates differences of
/// vectors at endpoints d(x,y) <= C.
struct BundleParams {
    PseudoParams pseudo;
    double p = 2.0;
    VertexId o = 0;
    GrowthProfile profile;

    double E() const { return (profile.h_prime - 1.0) / (1.0 - std::exp(-p)); }
    double kappa() const { return -pseudo.epsilon; }
    double norm_bound() const { return pseudo.beta() * std::pow(E(), 1.0 / p); }
    double D_C(double C) const {
        return std::pow(E(), 1.0 / p) * pseudo.beta() * std::exp(pseudo.epsilon * C);
    }
    void validate() const;
};

/// One tangent vector: real values over vertices attached to a basepoint,
/// with its weighted p-norm cached.
class TangentVector {
public:
    TangentVector(VertexId basepoint, std::vector<double> values, double p,
                  const MetricGraph& g);

    VertexId basepoint() const { return basepoint_; }
    double p_exponent() const { return p_; }
    const std::vector<double>& values() const { return values_; }
    double p_norm() const { return p_norm_; }

    /// this - other; basepoints must match.
    TangentVector subtract(const TangentVector& other, const MetricGraph& g) const;

private:
    VertexId basepoint_;
    std::vector<double> values_;
    double p_;
    double p_norm_;
};

/// Builds ax from a row supplier for basepoint a.
TangentVector tangent_vector(const PseudoRows& rows, VertexId x, const BundleParams& params);

/// ax - aa, so the recentered vector vanishes at x = a. All pairwise
/// differences are unchanged; certification paths never route through it.
TangentVector recenter(const TangentVector& ax, const TangentVector& aa, const MetricGraph& g);

/// ||ax - ay||_p computed from raw rows.
double diff_norm(const PseudoRows& rows, VertexId x, VertexId y, const BundleParams& params);

/// Constants of the properness estimate. C defaults to the smallest integer
/// with alpha - beta e^{-eps C} > 0.
struct PropernessConstants {
    double C = 0.0;
    double Cprime = 0.0;   // 2D + 5C/2
    double K = 0.0;        // alpha e^{-eps C} - beta e^{-eps(2D+2C)}
    double Kprime = 0.0;   // v K^p e^{-p(C'+C)} / f(C'+C)
    double v = 0.0;

    static double default_C(const PseudoParams& p);
    static PropernessConstants derive(const BundleParams& params, double v,
                                      std::optional<double> C_override = std::nullopt);
    /// d(x,y) >= 4C' + 2C puts a pair in the properness regime.
    double regime_threshold() const { return 4.0 * Cprime + 2.0 * C; }
};

/// Vertices almost on a geodesic [x,y] and far from both ends:
/// d(x,a) + d(a,y) <= d(x,y) + C and d(a,x), d(a,y) >= C'.
struct WitnessSet {
    VertexId x = 0, y = 0;
    std::vector<VertexId> members;
    double measure = 0.0;
};

WitnessSet witness_set(VertexId x, VertexId y, const PropernessConstants& consts,
                       const MetricGraph& g);

struct ScanOptions {
    enum class Mode { automatic, exhaustive, sampled };
    Mode mode = Mode::automatic;
    std::uint64_t samples = 2000;
    std::optional<std::uint64_t> seed;
    int threads = 0;
    PseudoBackend backend = PseudoBackend::automatic;
    VertexId exhaustive_cap = 2000;  // automatic switches to sampled above this
};

struct TripleWitness {
    VertexId a = 0, x = 0, y = 0;
    double value = 0.0, bound = 0.0;
};

struct NormBoundReport {
    double bound = 0.0;  // beta E^{1/p}
    std::uint64_t pairs_checked = 0;
    std::uint64_t violations = 0;
    double worst_ratio = 0.0;
    VertexId worst_a = 0, worst_x = 0;
};

/// Aggregate of diff norms at one d(a,x) value, for decay plots.
struct DecayBin {
    std::uint64_t count = 0;
    double min = 0.0;
    double max = 0.0;
    double sum_log = 0.0;  // over nonzero norms
};

struct CurvatureReport {
    double C = 0.0;
    double D_C = 0.0;
    std::uint64_t triples_checked = 0;
    std::uint64_t violations = 0;
    double worst_ratio = 0.0;
    TripleWitness worst;
    std::uint64_t lipschitz_violations = 0;  // ||ax-ay|| <= E^{1/p} d^a(x,y)
    double worst_lipschitz_ratio = 0.0;
    double fit_slope = 0.0;  // log diff_norm against d(a,x); expected <= -eps + 0.1
    std::uint64_t fit_points = 0;
    std::vector<DecayBin> decay;  // indexed by d(a,x)
    bool sampled = false;
    std::uint64_t seed = 0;
    const char* backend = "";
};

struct BundleCertification {
    NormBoundReport norms;
    CurvatureReport curvature;
};

/// One pass per basepoint a checking the norm bound for every (a,x), the
/// curvature bound over triples with d(x,y) <= C, and the Lipschitz transfer
/// bound, plus the decay-slope fit. Exhaustive or seeded-sample scan.
BundleCertification certify_bundle(const MetricGraph& g, const BundleParams& params, double C,
                                   const ScanOptions& opt);

struct PropernessPair {
    VertexId x = 0, y = 0;
    std::int32_t d = 0;
    double S = 0.0;        // sum_a ||ax-ay||_p^p mu(a)
    double witness_measure = 0.0;
    double lower = 0.0;    // K' (v/C)(d - 2C' - 2C)
    bool ok = true;
};

struct PropernessReport {
    PropernessConstants consts;
    double threshold = 0.0;
    std::uint64_t pairs_in_scope = 0;
    std::uint64_t pairs_skipped = 0;
    std::uint64_t violations = 0;
    std::uint64_t witness_bound_violations = 0;  // mu(A) >= (v/C)(d-2C'-2C)
    double worst_ratio = 0.0;                    // min S / lower
    double fit_slope = 0.0;                      // S against d over in-scope pairs
    bool graph_too_small = false;
    double required_diameter = 0.0;
    std::vector<PropernessPair> rows;
};

/// Integrated lower bound S(x,y) >= K'(v/C)(d(x,y) - 2C' - 2C) over pairs in
/// the regime d >= 4C'+2C; out-of-regime pairs are reported skipped. An empty
/// pair list scans all vertex pairs (subsampled past max_pairs).
PropernessReport verify_properness(const MetricGraph& g, const BundleParams& params,
                                   const PropernessConstants& consts,
                                   const std::vector<std::pair<VertexId, VertexId>>& pairs,
                                   const ScanOptions& opt, std::size_t max_pairs = 512);

/// Unit first-step indicator on a tree (2-norm fiber over the link of a,
/// embedded as a vertex-indexed vector); the zero vector for x = a.
TangentVector tree_oracle_vector(VertexId a, VertexId x, const MetricGraph& tree);

}  // namespace tbundle
