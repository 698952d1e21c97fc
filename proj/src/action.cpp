#include "tbundle/action.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "tbundle/error.hpp"
#include "tbundle/parallel.hpp"

namespace tbundle {

WordAction WordAction::finite(MetricGraph g, std::vector<PermGenerator> gens,
                              VertexId basepoint) {
    const VertexId n = g.vertex_count();
    if (gens.empty()) throw param_error("action needs at least one generator");
    for (const auto& gen : gens) {
        if (gen.image.size() != static_cast<std::size_t>(n))
            throw param_error("generator '" + gen.label + "' image has wrong size");
        std::vector<bool> seen(static_cast<std::size_t>(n), false);
        for (VertexId img : gen.image) {
            if (img < 0 || img >= n || seen[static_cast<std::size_t>(img)])
                throw param_error("generator '" + gen.label + "' is not a bijection");
            seen[static_cast<std::size_t>(img)] = true;
        }
    }
    WordAction a;
    a.graph_ = std::move(g);
    a.gens_ = std::move(gens);
    a.basepoint_ = basepoint;
    return a;
}

WordAction WordAction::free_group(int k, int radius, std::size_t materialize_cap) {
    WordAction a;
    a.free_ = FreeBall(k, radius);
    if (a.free_->ball_size(radius) <= static_cast<double>(materialize_cap)) {
        auto mat = a.free_->materialize(materialize_cap);
        a.graph_ = std::move(mat.graph);
        a.words_ = std::move(mat.words);
    }
    a.basepoint_ = 0;
    return a;
}

const FreeBall& WordAction::ball() const {
    if (!free_) throw param_error("not a free-group action");
    return *free_;
}

const MetricGraph& WordAction::graph() const {
    if (graph_.vertex_count() == 0)
        throw truncation_error("free ball too large to materialize; use word-level evaluation",
                               free_ ? free_->radius() : 0);
    return graph_;
}

const std::vector<Word>& WordAction::ball_words() const {
    if (words_.empty() && !(free_ && free_->radius() == 0))
        throw param_error("no materialized ball words available");
    return words_;
}

int WordAction::rank() const {
    return free_ ? free_->rank() : static_cast<int>(gens_.size());
}

VertexId WordAction::apply(const Word& w, VertexId x) const {
    if (free_) {
        const Word& xw = words_.at(static_cast<std::size_t>(x));
        Word img = reduced_concat(w, xw);
        if (img.length() > free_->radius())
            throw truncation_error("image " + img.str() + " leaves the radius-" +
                                       std::to_string(free_->radius()) + " ball",
                                   img.length());
        return graph_.id_of(img.str());
    }
    // leftmost letter acts last: (l1 l2 ... ln).x = l1.(l2.(...(ln.x)))
    VertexId cur = x;
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
        const std::int8_t l = *it;
        const auto& gen = gens_[static_cast<std::size_t>(std::abs(static_cast<int>(l)) - 1)];
        if (l > 0) {
            cur = gen.image[static_cast<std::size_t>(cur)];
        } else {
            // inverse image lookup
            for (VertexId v = 0; v < graph_.vertex_count(); ++v) {
                if (gen.image[static_cast<std::size_t>(v)] == cur) {
                    cur = v;
                    break;
                }
            }
        }
    }
    return cur;
}

std::vector<VertexId> WordAction::image_row(const Word& w) const {
    const VertexId n = graph().vertex_count();
    std::vector<VertexId> row(static_cast<std::size_t>(n));
    if (free_) {
        for (VertexId x = 0; x < n; ++x) {
            Word img = reduced_concat(w, words_[static_cast<std::size_t>(x)]);
            row[static_cast<std::size_t>(x)] =
                img.length() > free_->radius() ? -1 : graph_.id_of(img.str());
        }
        return row;
    }
    // compose letter permutations once
    std::vector<VertexId> cur(static_cast<std::size_t>(n)), next(static_cast<std::size_t>(n));
    for (VertexId x = 0; x < n; ++x) cur[static_cast<std::size_t>(x)] = x;
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
        const std::int8_t l = *it;
        const auto& gen = gens_[static_cast<std::size_t>(std::abs(static_cast<int>(l)) - 1)];
        if (l > 0) {
            for (VertexId x = 0; x < n; ++x)
                next[static_cast<std::size_t>(x)] = gen.image[static_cast<std::size_t>(cur[static_cast<std::size_t>(x)])];
        } else {
            std::vector<VertexId> inv(static_cast<std::size_t>(n));
            for (VertexId v = 0; v < n; ++v) inv[static_cast<std::size_t>(gen.image[static_cast<std::size_t>(v)])] = v;
            for (VertexId x = 0; x < n; ++x)
                next[static_cast<std::size_t>(x)] = inv[static_cast<std::size_t>(cur[static_cast<std::size_t>(x)])];
        }
        cur.swap(next);
    }
    return cur;
}

IsometryReport WordAction::check_isometry() const {
    IsometryReport rep;
    const MetricGraph& g = graph();
    const VertexId n = g.vertex_count();
    std::vector<std::vector<VertexId>> images;
    std::vector<std::string> labels;
    if (free_) {
        for (int l = 1; l <= free_->rank(); ++l) {
            Word w;
            w.letters.push_back(static_cast<std::int8_t>(l));
            images.push_back(image_row(w));
            labels.push_back(w.str());
        }
    } else {
        for (const auto& gen : gens_) {
            images.push_back(gen.image);
            labels.push_back(gen.label);
        }
    }
    for (std::size_t gi = 0; gi < images.size(); ++gi) {
        const auto& img = images[gi];
        for (std::size_t e = 0; e < static_cast<std::size_t>(g.edge_count()); ++e) {
            const VertexId u = g.edge_u()[e], v = g.edge_v()[e];
            const VertexId iu = img[static_cast<std::size_t>(u)], iv = img[static_cast<std::size_t>(v)];
            if (iu < 0 || iv < 0) continue;  // truncated image: not checkable
            ++rep.edges_checked;
            const bool adjacent =
                std::binary_search(g.neighbors_begin(iu), g.neighbors_end(iu), iv);
            if (!adjacent) {
                rep.pass = false;
                if (rep.failure.empty())
                    rep.failure = "generator '" + labels[gi] + "' maps edge (" + g.label(u) +
                                  ", " + g.label(v) + ") to non-edge (" + g.label(iu) + ", " +
                                  g.label(iv) + ")";
            }
        }
        for (VertexId x = 0; x < n; ++x) {
            const VertexId ix = img[static_cast<std::size_t>(x)];
            if (ix < 0) continue;
            ++rep.weights_checked;
            if (g.weight(x) != g.weight(ix)) {
                rep.pass = false;
                if (rep.failure.empty())
                    rep.failure = "generator '" + labels[gi] + "' moves weight " +
                                  std::to_string(g.weight(x)) + " at " + g.label(x) + " onto " +
                                  std::to_string(g.weight(ix)) + " at " + g.label(ix);
            }
        }
    }
    return rep;
}

double SectionField::norm(const MetricGraph& g) const {
    double acc = 0.0;
    for (std::size_t x = 0; x < fibers.size(); ++x) {
        double fiber = 0.0;
        for (std::size_t xi = 0; xi < fibers[x].size(); ++xi)
            fiber += std::pow(std::abs(fibers[x][xi]), p) * g.weight(static_cast<VertexId>(xi));
        acc += fiber * g.weight(static_cast<VertexId>(x));
    }
    return std::pow(acc, 1.0 / p);
}

SectionField SectionField::zeros(const MetricGraph& g, double p) {
    SectionField f;
    f.p = p;
    f.fibers.assign(static_cast<std::size_t>(g.vertex_count()),
                    std::vector<double>(static_cast<std::size_t>(g.vertex_count()), 0.0));
    return f;
}

namespace {

constexpr std::size_t kDenseSectionCap = 4000;

std::vector<double> make_weight_table(const BundleParams& params, std::int32_t max_d) {
    std::vector<double> w(static_cast<std::size_t>(max_d) + 1);
    for (std::int32_t k = 0; k <= max_d; ++k)
        w[static_cast<std::size_t>(k)] =
            std::exp(-static_cast<double>(k)) * std::pow(params.profile.at(k), -1.0 / params.p);
    return w;
}

}  // namespace

GraphCocycle::GraphCocycle(const WordAction& action, BundleParams params, PseudoBackend backend)
    : action_(&action), params_(std::move(params)), backend_(backend) {
    params_.validate();
    const MetricGraph& g = action.graph();
    wtab_ = make_weight_table(params_, 2 * g.eccentricity(action.basepoint()) + 2);
}

TangentVector GraphCocycle::base_vector(VertexId x) const {
    const MetricGraph& g = action_->graph();
    auto rows = make_pseudo_rows(g, x, params_.pseudo, backend_);
    const auto& dx = rows->dist_to_base();
    std::vector<double> row;
    rows->fill_row(action_->basepoint(), row);
    for (std::size_t xi = 0; xi < row.size(); ++xi)
        row[xi] *= wtab_[static_cast<std::size_t>(dx[xi])];
    return TangentVector(x, std::move(row), params_.p, g);
}

TangentVector GraphCocycle::cocycle_vector(const Word& g, VertexId x) const {
    const MetricGraph& gr = action_->graph();
    const VertexId o = action_->basepoint();
    const VertexId go = action_->apply(g, o);
    auto rows = make_pseudo_rows(gr, x, params_.pseudo, backend_);
    const auto& dx = rows->dist_to_base();
    std::vector<double> ro, rgo;
    rows->fill_row(o, ro);
    rows->fill_row(go, rgo);
    for (std::size_t xi = 0; xi < ro.size(); ++xi)
        ro[xi] = (ro[xi] - rgo[xi]) * wtab_[static_cast<std::size_t>(dx[xi])];
    return TangentVector(x, std::move(ro), params_.p, gr);
}

TangentVector GraphCocycle::cocycle_vector_via_representation(const Word& g, VertexId x) const {
    const MetricGraph& gr = action_->graph();
    const Word ginv = word_inverse(g);
    const auto pre = action_->image_row(ginv);
    const VertexId x_pre = pre[static_cast<std::size_t>(x)];
    if (x_pre < 0)
        throw truncation_error("g^{-1} x leaves the ball; representation route undefined at " +
                                   gr.label(x),
                               action_->is_free() ? action_->ball().radius() + g.length() : 0);
    TangentVector fx = base_vector(x);
    TangentVector fpre = base_vector(x_pre);
    std::vector<double> vals(fx.values().size());
    for (std::size_t xi = 0; xi < vals.size(); ++xi) {
        const VertexId xi_pre = pre[xi];
        vals[xi] = xi_pre < 0 ? std::numeric_limits<double>::quiet_NaN()
                              : fx.values()[xi] - fpre.values()[static_cast<std::size_t>(xi_pre)];
    }
    return TangentVector(x, std::move(vals), params_.p, gr);
}

SectionField GraphCocycle::base_section() const {
    const MetricGraph& g = action_->graph();
    if (static_cast<std::size_t>(g.vertex_count()) > kDenseSectionCap)
        throw param_error("dense section fields are quadratic in the vertex count; graph too large");
    SectionField f;
    f.p = params_.p;
    f.fibers.resize(static_cast<std::size_t>(g.vertex_count()));
    for (VertexId x = 0; x < g.vertex_count(); ++x)
        f.fibers[static_cast<std::size_t>(x)] = base_vector(x).values();
    return f;
}

SectionField GraphCocycle::representation_apply(const Word& g, const SectionField& f) const {
    const MetricGraph& gr = action_->graph();
    const auto pre = action_->image_row(word_inverse(g));
    for (VertexId x = 0; x < gr.vertex_count(); ++x) {
        if (pre[static_cast<std::size_t>(x)] < 0)
            throw truncation_error(
                "domain not closed under g^{-1}; enlarge the ball radius by " +
                    std::to_string(g.length()),
                action_->is_free() ? action_->ball().radius() + g.length() : 0);
    }
    SectionField out;
    out.p = f.p;
    out.fibers.resize(f.fibers.size());
    for (std::size_t x = 0; x < f.fibers.size(); ++x) {
        const auto& src = f.fibers[static_cast<std::size_t>(pre[x])];
        auto& dst = out.fibers[x];
        dst.resize(src.size());
        for (std::size_t xi = 0; xi < dst.size(); ++xi)
            dst[xi] = src[static_cast<std::size_t>(pre[xi])];
    }
    return out;
}

SectionField GraphCocycle::cocycle_field(const Word& g) const {
    const MetricGraph& gr = action_->graph();
    if (static_cast<std::size_t>(gr.vertex_count()) > kDenseSectionCap)
        throw param_error("dense section fields are quadratic in the vertex count; graph too large");
    SectionField f;
    f.p = params_.p;
    f.fibers.resize(static_cast<std::size_t>(gr.vertex_count()));
    for (VertexId x = 0; x < gr.vertex_count(); ++x)
        f.fibers[static_cast<std::size_t>(x)] = cocycle_vector(g, x).values();
    return f;
}

SectionField GraphCocycle::affine_apply(const Word& g, const SectionField& v) const {
    SectionField out = representation_apply(g, v);
    SectionField c = cocycle_field(g);
    for (std::size_t x = 0; x < out.fibers.size(); ++x)
        for (std::size_t xi = 0; xi < out.fibers[x].size(); ++xi)
            out.fibers[x][xi] += c.fibers[x][xi];
    return out;
}

double GraphCocycle::cocycle_norm_pow_p(const Word& g, int threads) const {
    const MetricGraph& gr = action_->graph();
    const VertexId o = action_->basepoint();
    const VertexId go = action_->apply(g, o);
    const VertexId n = gr.vertex_count();
    const double p = params_.p;
    std::vector<double> partial(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t x) {
        auto rows = make_pseudo_rows(gr, static_cast<VertexId>(x), params_.pseudo, backend_);
        const auto& dx = rows->dist_to_base();
        std::vector<double> ro, rgo;
        rows->fill_row(o, ro);
        rows->fill_row(go, rgo);
        double acc = 0.0;
        if (p == 2.0) {
            for (std::size_t xi = 0; xi < ro.size(); ++xi) {
                const double d = (ro[xi] - rgo[xi]) * wtab_[static_cast<std::size_t>(dx[xi])];
                acc += d * d * gr.weight(static_cast<VertexId>(xi));
            }
        } else {
            for (std::size_t xi = 0; xi < ro.size(); ++xi) {
                const double d = (ro[xi] - rgo[xi]) * wtab_[static_cast<std::size_t>(dx[xi])];
                acc += std::pow(std::abs(d), p) * gr.weight(static_cast<VertexId>(xi));
            }
        }
        partial[x] = acc * gr.weight(static_cast<VertexId>(x));
    });
    double total = 0.0;
    for (double t : partial) total += t;
    return total;
}

GraphCocycle::IdentityReport GraphCocycle::verify_identity(const Word& g, const Word& h,
                                                           std::size_t max_vertices,
                                                           std::uint64_t /*seed*/) const {
    const MetricGraph& gr = action_->graph();
    const Word gh = reduced_concat(g, h);
    const Word ginv = word_inverse(g);
    const auto pre = action_->image_row(ginv);

    std::vector<VertexId> comparable;
    for (VertexId x = 0; x < gr.vertex_count(); ++x)
        if (pre[static_cast<std::size_t>(x)] >= 0) comparable.push_back(x);
    if (comparable.empty())
        throw truncation_error("no vertex has g^{-1} x inside the ball", g.length());
    if (comparable.size() > max_vertices) {
        std::vector<VertexId> kept;
        const double stride =
            static_cast<double>(comparable.size()) / static_cast<double>(max_vertices);
        for (std::size_t i = 0; i < max_vertices; ++i)
            kept.push_back(comparable[static_cast<std::size_t>(static_cast<double>(i) * stride)]);
        comparable.swap(kept);
    }

    IdentityReport rep;
    const double p = params_.p;
    for (VertexId x : comparable) {
        const VertexId x_pre = pre[static_cast<std::size_t>(x)];
        TangentVector cgh = cocycle_vector(gh, x);
        TangentVector cg = cocycle_vector(g, x);
        TangentVector ch = cocycle_vector(h, x_pre);
        double acc = 0.0;
        for (std::size_t xi = 0; xi < cgh.values().size(); ++xi) {
            const VertexId xi_pre = pre[xi];
            if (xi_pre < 0) continue;
            const double defect = cgh.values()[xi] - cg.values()[xi] -
                                  ch.values()[static_cast<std::size_t>(xi_pre)];
            acc += std::pow(std::abs(defect), p) * gr.weight(static_cast<VertexId>(xi));
            ++rep.coords_compared;
        }
        rep.max_residual = std::max(rep.max_residual, std::pow(acc, 1.0 / p));
        ++rep.vertices_compared;
    }
    return rep;
}

double GraphCocycle::route_agreement(const Word& g, std::size_t max_vertices,
                                     std::uint64_t /*seed*/) const {
    const MetricGraph& gr = action_->graph();
    const auto pre = action_->image_row(word_inverse(g));
    std::vector<VertexId> comparable;
    for (VertexId x = 0; x < gr.vertex_count(); ++x)
        if (pre[static_cast<std::size_t>(x)] >= 0) comparable.push_back(x);
    if (comparable.size() > max_vertices) {
        std::vector<VertexId> kept;
        const double stride =
            static_cast<double>(comparable.size()) / static_cast<double>(max_vertices);
        for (std::size_t i = 0; i < max_vertices; ++i)
            kept.push_back(comparable[static_cast<std::size_t>(static_cast<double>(i) * stride)]);
        comparable.swap(kept);
    }
    double worst = 0.0;
    for (VertexId x : comparable) {
        TangentVector closed = cocycle_vector(g, x);
        TangentVector via = cocycle_vector_via_representation(g, x);
        for (std::size_t xi = 0; xi < closed.values().size(); ++xi) {
            const double v = via.values()[xi];
            if (std::isnan(v)) continue;
            worst = std::max(worst, std::abs(closed.values()[xi] - v));
        }
    }
    return worst;
}

double cocycle_upper_bound(const BundleParams& params, double dist) {
    const double D = params.D_C(dist);
    const double pe = params.p * params.pseudo.epsilon;
    double acc = 0.0;
    const auto& f = params.profile.f;
    for (std::size_t n = 0; n + 1 < f.size(); ++n)
        acc += std::exp(-pe * static_cast<double>(n)) * (f[n + 1] - f[n]);
    return std::pow(D, params.p) * acc;
}

double cocycle_tail_bound(const BundleParams& params, double dist, bool& summable) {
    const double hp = params.profile.h_prime;
    const double pe = params.p * params.pseudo.epsilon;
    summable = hp * std::exp(-pe) < 1.0;
    if (!summable) return std::numeric_limits<double>::infinity();
    const double D = params.D_C(dist);
    const double R = static_cast<double>(params.profile.saturation_radius());
    const double fR = params.profile.f.back();
    return std::pow(D, params.p) * (hp - 1.0) * fR * std::exp(-pe * R) /
           (1.0 - hp * std::exp(-pe));
}

CocycleCertRow certify_cocycle_word(const GraphCocycle& engine, const Word& g,
                                    const PropernessConstants& consts, int threads) {
    const WordAction& action = engine.action();
    const MetricGraph& gr = action.graph();
    const VertexId o = action.basepoint();
    const VertexId go = action.apply(g, o);

    CocycleCertRow row;
    row.word = g.str();
    row.length = g.length();
    std::vector<std::int32_t> do_row;
    gr.bfs_row(o, do_row);
    row.dist = do_row[static_cast<std::size_t>(go)];

    row.norm_pow_p = engine.cocycle_norm_pow_p(g, threads);
    row.norm_p = std::pow(row.norm_pow_p, 1.0 / engine.params().p);
    row.upper_bound = cocycle_upper_bound(engine.params(), static_cast<double>(row.dist));
    row.tail_bound =
        cocycle_tail_bound(engine.params(), static_cast<double>(row.dist), row.tail_summable);
    row.min_tail_p = std::log(engine.params().profile.h_prime) / engine.params().pseudo.epsilon;

    auto ws = witness_set(o, go, consts, gr);
    row.witness_measure = ws.measure;
    row.in_regime = static_cast<double>(row.dist) >= consts.regime_threshold();
    row.lower_bound = consts.Kprime * ws.measure;

    const double upper_total =
        row.upper_bound + (row.tail_summable ? row.tail_bound : 0.0);
    row.ok = row.norm_pow_p <= upper_total * (1.0 + kBoundRelTol);
    if (row.in_regime && row.norm_pow_p < row.lower_bound * (1.0 - kBoundRelTol)) row.ok = false;
    return row;
}

FreeCocycleVirtual::FreeCocycleVirtual(FreeBall ball, double epsilon, double p)
    : ball_(std::move(ball)), eps_(epsilon), p_(p), prof_(ball_.profile()) {
    if (!(epsilon > 0.0)) throw param_error("epsilon must be > 0");
    if (!(p > 1.0)) throw param_error("p must be > 1");
}

void FreeCocycleVirtual::guard(const Word& w) const {
    if (w.length() > ball_.radius())
        throw truncation_error("word " + w.str() + " leaves the radius-" +
                                   std::to_string(ball_.radius()) + " ball",
                               w.length());
}

double FreeCocycleVirtual::fiber_weight(int d) const {
    return std::exp(-static_cast<double>(d)) * std::pow(prof_.at(d), -1.0 / p_);
}

namespace {

// Tree closed form from integer distances; anchors at x.
double word_pseudo(const Word& x, const Word& s, const Word& xi, double eps) {
    const int dxs = word_distance(x, s);
    const int dxxi = word_distance(x, xi);
    const int dsxi = word_distance(s, xi);
    const int m2 = dxs + dxxi - dsxi;  // 2 * (s|xi)_x
    return (2.0 * std::exp(-eps * 0.5 * static_cast<double>(m2)) -
            std::exp(-eps * static_cast<double>(dxs)) -
            std::exp(-eps * static_cast<double>(dxxi))) /
           eps;
}

}  // namespace

double FreeCocycleVirtual::base_coord(const Word& x, const Word& xi) const {
    guard(x);
    guard(xi);
    const Word o;  // identity
    return word_pseudo(x, o, xi, eps_) * fiber_weight(word_distance(x, xi));
}

double FreeCocycleVirtual::cocycle_coord(const Word& g, const Word& x, const Word& xi) const {
    guard(x);
    guard(xi);
    guard(g);
    const Word o;
    const double diff = word_pseudo(x, o, xi, eps_) - word_pseudo(x, g, xi, eps_);
    return diff * fiber_weight(word_distance(x, xi));
}

double FreeCocycleVirtual::cocycle_coord_via_representation(const Word& g, const Word& x,
                                                            const Word& xi) const {
    const Word ginv = word_inverse(g);
    const Word x_pre = reduced_concat(ginv, x);
    const Word xi_pre = reduced_concat(ginv, xi);
    guard(x_pre);
    guard(xi_pre);
    return base_coord(x, xi) - base_coord(x_pre, xi_pre);
}

double FreeCocycleVirtual::identity_residual(const Word& g, const Word& h, const Word& x,
                                             const std::vector<Word>& fiber_probes) const {
    const Word gh = reduced_concat(g, h);
    const Word x_pre = reduced_concat(word_inverse(g), x);
    double acc = 0.0;
    for (const Word& xi : fiber_probes) {
        const Word xi_pre = reduced_concat(word_inverse(g), xi);
        const double defect = cocycle_coord(gh, x, xi) - cocycle_coord(g, x, xi) -
                              cocycle_coord(h, x_pre, xi_pre);
        acc += std::pow(std::abs(defect), p_);
    }
    return std::pow(acc, 1.0 / p_);
}

double FreeCocycleVirtual::route_agreement(const Word& g, const Word& x,
                                           const std::vector<Word>& fiber_probes) const {
    double worst = 0.0;
    for (const Word& xi : fiber_probes)
        worst = std::max(worst, std::abs(cocycle_coord(g, x, xi) -
                                         cocycle_coord_via_representation(g, x, xi)));
    return worst;
}

double SparseSection::norm() const {
    double acc = 0.0;
    for (const auto& [x, coords] : fibers) {
        double fiber = 0.0;
        for (const auto& [xi, v] : coords) fiber += std::pow(std::abs(v), p);
        acc += fiber;
    }
    return std::pow(acc, 1.0 / p);
}

SparseSection random_sparse_section(const FreeBall& ball, int n_fibers, int coords_per_fiber,
                                    int max_radius, double p, std::mt19937_64& rng) {
    SparseSection f;
    f.p = p;
    std::set<Word> used;
    auto draw_word = [&](int maxlen) {
        const int len = static_cast<int>(rng() % static_cast<std::uint64_t>(maxlen + 1));
        return random_reduced_word(len, ball.rank(), rng);
    };
    while (static_cast<int>(f.fibers.size()) < n_fibers) {
        Word x = draw_word(max_radius);
        if (!used.insert(x).second) continue;
        std::vector<std::pair<Word, double>> coords;
        std::set<Word> cused;
        while (static_cast<int>(coords.size()) < coords_per_fiber) {
            Word xi = draw_word(max_radius);
            if (!cused.insert(xi).second) continue;
            // uniform in [-1, 1)
            const double v = static_cast<double>(rng() >> 11) * (2.0 / 9007199254740992.0) - 1.0;
            coords.emplace_back(std::move(xi), v);
        }
        std::sort(coords.begin(), coords.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        f.fibers.emplace_back(std::move(x), std::move(coords));
    }
    std::sort(f.fibers.begin(), f.fibers.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return f;
}

SparseSection sparse_representation_apply(const FreeBall& ball, const Word& g,
                                          const SparseSection& f) {
    SparseSection out;
    out.p = f.p;
    out.fibers.reserve(f.fibers.size());
    for (const auto& [x, coords] : f.fibers) {
        Word gx = reduced_concat(g, x);
        if (gx.length() > ball.radius())
            throw truncation_error("pi_g moves fiber " + x.str() + " outside the ball",
                                   gx.length());
        std::vector<std::pair<Word, double>> moved;
        moved.reserve(coords.size());
        for (const auto& [xi, v] : coords) {
            Word gxi = reduced_concat(g, xi);
            if (gxi.length() > ball.radius())
                throw truncation_error("pi_g moves coordinate " + xi.str() + " outside the ball",
                                       gxi.length());
            moved.emplace_back(std::move(gxi), v);
        }
        std::sort(moved.begin(), moved.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        out.fibers.emplace_back(std::move(gx), std::move(moved));
    }
    std::sort(out.fibers.begin(), out.fibers.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

std::int64_t edge_cocycle_norm_sq(const Word& g) {
    if (g.is_identity()) return 0;
    std::int64_t sq = 0;
    // prefixes 1 = p_0, p_1, ..., p_n = g
    Word prev;
    for (int i = 0; i < g.length(); ++i) {
        Word next = prev;
        next.letters.push_back(g.letters[static_cast<std::size_t>(i)]);
        // both orientations of the undirected edge {prev, next}
        for (const auto& [u, v] : {std::pair<const Word*, const Word*>{&prev, &next}, {&next, &prev}}) {
            const int to_one = (v->length() < u->length()) ? 1 : 0;
            const int to_g = (word_distance(*v, g) < word_distance(*u, g)) ? 1 : 0;
            const std::int64_t val = to_one - to_g;
            sq += val * val;
        }
        prev = std::move(next);
    }
    return sq;
}

std::int64_t double_cocycle_norm_sq(const Word& g) {
    if (g.is_identity()) return 0;
    std::int64_t sq = 0;
    Word h;  // walks the prefixes of g
    for (int i = 0; i <= g.length(); ++i) {
        // c(g)(h) = delta_{n1(h)} - delta_{ng(h)}; n1 drops the last letter of h,
        // ng steps from h toward g; the Dirac vanishes at the respective endpoint.
        std::optional<Word> n1, ng;
        if (!h.is_identity()) {
            Word t = h;
            t.letters.pop_back();
            n1 = std::move(t);
        }
        if (!(h == g)) {
            const Word hg = reduced_concat(word_inverse(h), g);
            Word t = h;
            t.letters.push_back(hg.letters.front());
            ng = std::move(t);
        }
        std::int64_t l1;
        if (n1 && ng)
            l1 = (*n1 == *ng) ? 0 : 2;
        else if (n1 || ng)
            l1 = 1;
        else
            l1 = 0;
        sq += l1 * l1;
        if (i < g.length()) h.letters.push_back(g.letters[static_cast<std::size_t>(i)]);
    }
    return sq;
}

}  // namespace tbundle
