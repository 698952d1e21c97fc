#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tbundle/bundle.hpp"
#include "tbundle/graph.hpp"
#include "tbundle/pseudo.hpp"
#include "tbundle/words.hpp"

namespace tbundle {

struct PermGenerator {
    std::string label;                 // single letter
    std::vector<VertexId> image;       // image[x] = g(x)
};

struct IsometryReport {
    bool pass = true;
    std::uint64_t edges_checked = 0;
    std::uint64_t weights_checked = 0;
    std::string failure;  // first witness, empty when pass
};

/// A group acting by measure-preserving graph automorphisms: either explicit
/// generator permutations of a finite graph, or left multiplication on a
/// free-group Cayley ball (materialized when it fits, word-level always).
class WordAction {
public:
    static WordAction finite(MetricGraph g, std::vector<PermGenerator> gens,
                             VertexId basepoint = 0);
    static WordAction free_group(int k, int radius, std::size_t materialize_cap = 2000000);

    bool is_free() const { return free_.has_value(); }
    const FreeBall& ball() const;
    bool has_graph() const { return graph_.vertex_count() > 0; }
    const MetricGraph& graph() const;
    const std::vector<Word>& ball_words() const;
    int rank() const;  // number of generators
    VertexId basepoint() const { return basepoint_; }

    Word parse_word(const std::string& text) const { return Word::parse(text, rank()); }

    /// Word applied as a group element (leftmost letter acts last to first
    /// composition order, i.e. (gh).x = g.(h.x)). Free actions throw a
    /// truncation error when the image falls outside the generated ball.
    VertexId apply(const Word& w, VertexId x) const;

    /// Image row; -1 marks vertices whose image leaves a truncated ball.
    std::vector<VertexId> image_row(const Word& w) const;

    /// Edge and weight preservation for every generator: exhaustive on finite
    /// graphs, exhaustive over the truncation for free balls.
    IsometryReport check_isometry() const;

private:
    WordAction() = default;

    MetricGraph graph_;                    // finite graph or materialized ball
    std::vector<PermGenerator> gens_;      // finite case
    std::optional<FreeBall> free_;
    std::vector<Word> words_;              // materialized ball: id -> word
    VertexId basepoint_ = 0;
};

/// Element of L^p(X, TX) on a finite vertex set: one fiber vector per vertex.
struct SectionField {
    double p = 2.0;
    std::vector<std::vector<double>> fibers;  // fibers[x][xi]

    double norm(const MetricGraph& g) const;
    static SectionField zeros(const MetricGraph& g, double p);
};

/// Cocycle and representation machinery over a concrete graph (a finite
/// action or a materialized free ball): c(g)(x) = xo - x,go in T_xX, and
/// pi_g(f)(x) = phi_g(f(g^{-1}x)) with phi_g relabeling coordinates.
class GraphCocycle {
public:
    GraphCocycle(const WordAction& action, BundleParams params,
                 PseudoBackend backend = PseudoBackend::automatic);

    const BundleParams& params() const { return params_; }
    const WordAction& action() const { return *action_; }

    /// xo vector at basepoint x (the base section f_o evaluated at x).
    TangentVector base_vector(VertexId x) const;
    /// Closed-form c(g)(x) = xo - x,go.
    TangentVector cocycle_vector(const Word& g, VertexId x) const;
    /// Definition route c(g)(x) = f_o(x) - phi_g(f_o(g^{-1}x)); coordinates
    /// with no preimage in a truncated ball are NaN.
    TangentVector cocycle_vector_via_representation(const Word& g, VertexId x) const;

    SectionField base_section() const;
    SectionField representation_apply(const Word& g, const SectionField& f) const;
    SectionField cocycle_field(const Word& g) const;
    SectionField affine_apply(const Word& g, const SectionField& v) const;

    /// ||c(g)||_p^p summed over the whole vertex set.
    double cocycle_norm_pow_p(const Word& g, int threads = 0) const;

    struct IdentityReport {
        double max_residual = 0.0;       // max over compared x of ||defect fiber||_p
        std::uint64_t vertices_compared = 0;
        std::uint64_t coords_compared = 0;
        bool pass(double tol) const { return max_residual <= tol; }
    };
    /// Residual of c(gh) = c(g) + pi_g c(h) over comparable vertices
    /// (all when feasible, a seeded sample otherwise).
    IdentityReport verify_identity(const Word& g, const Word& h,
                                   std::size_t max_vertices = 2048,
                                   std::uint64_t seed = 0) const;

    /// Max |closed-form - representation-route| coordinate difference for
    /// c(g), over comparable coordinates.
    double route_agreement(const Word& g, std::size_t max_vertices = 256,
                           std::uint64_t seed = 0) const;

private:
    const WordAction* action_;
    BundleParams params_;
    PseudoBackend backend_;
    std::vector<double> wtab_;  // fiber weight per integer distance
};

/// Per-word cocycle certification row: truncated norm against the shell-sum
/// upper bound and the witness-set properness lower bound.
struct CocycleCertRow {
    std::string word;
    int length = 0;
    std::int32_t dist = 0;        // d(o, g.o)
    double norm_p = 0.0;
    double norm_pow_p = 0.0;
    double upper_bound = 0.0;     // sum_n D_C^p e^{-p eps n}(f(n+1)-f(n)), C = dist
    double tail_bound = 0.0;      // infinite-space remainder; valid iff summable
    bool tail_summable = false;
    double min_tail_p = 0.0;      // log h' / eps
    double witness_measure = 0.0; // mu(A(o, g.o))
    double lower_bound = 0.0;     // K' mu(A)
    bool in_regime = false;       // dist >= 4C' + 2C
    bool ok = true;
};

CocycleCertRow certify_cocycle_word(const GraphCocycle& engine, const Word& g,
                                    const PropernessConstants& consts, int threads = 0);

/// Shell-sum upper bound and geometric tail for ||c(g)||_p^p at displacement
/// dist = d(o, g.o); exposed for reuse by reports.
double cocycle_upper_bound(const BundleParams& params, double dist);
double cocycle_tail_bound(const BundleParams& params, double dist, bool& summable);

/// Word-level evaluator on a free-group ball too large to materialize; all
/// quantities come from reduced-word arithmetic and closed-form shell counts.
class FreeCocycleVirtual {
public:
    FreeCocycleVirtual(FreeBall ball, double epsilon, double p);

    const FreeBall& ball() const { return ball_; }
    const GrowthProfile& profile() const { return prof_; }

    double base_coord(const Word& x, const Word& xi) const;  // xo(xi)
    double cocycle_coord(const Word& g, const Word& x, const Word& xi) const;
    double cocycle_coord_via_representation(const Word& g, const Word& x, const Word& xi) const;

    /// Partial fiber p-norm of the identity defect at x over the probe set.
    double identity_residual(const Word& g, const Word& h, const Word& x,
                             const std::vector<Word>& fiber_probes) const;
    /// Max coordinate difference of the two c(g) routes at x over probes.
    double route_agreement(const Word& g, const Word& x,
                           const std::vector<Word>& fiber_probes) const;

private:
    void guard(const Word& w) const;
    double fiber_weight(int d) const;

    FreeBall ball_;
    double eps_;
    double p_;
    GrowthProfile prof_;
};

/// Sparse element of L^p(ball, TX): finitely many fibers, finitely many
/// coordinates each, all other coordinates zero.
struct SparseSection {
    double p = 2.0;
    // sorted by fiber word; coordinates sorted by word
    std::vector<std::pair<Word, std::vector<std::pair<Word, double>>>> fibers;

    double norm() const;
};

SparseSection random_sparse_section(const FreeBall& ball, int n_fibers, int coords_per_fiber,
                                    int max_radius, double p, std::mt19937_64& rng);
/// pi_g on a sparse section: fibers move x -> gx, coordinates xi -> g xi.
SparseSection sparse_representation_apply(const FreeBall& ball, const Word& g,
                                          const SparseSection& f);

/// l^2(oriented edges) coboundary of the "points toward the identity"
/// indicator: support walks the segment [1, g] in both orientations.
std::int64_t edge_cocycle_norm_sq(const Word& g);
inline double edge_cocycle_norm(const Word& g) {
    return std::sqrt(static_cast<double>(edge_cocycle_norm_sq(g)));
}

/// l^2(G, l^1(G)) coboundary of the Dirac-at-the-neighbor-toward-identity
/// section: outer 2-norm of inner 1-norms along [1, g].
std::int64_t double_cocycle_norm_sq(const Word& g);
inline double double_cocycle_norm(const Word& g) {
    return std::sqrt(static_cast<double>(double_cocycle_norm_sq(g)));
}

}  // namespace tbundle
