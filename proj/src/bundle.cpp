#include "tbundle/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "tbundle/error.hpp"
#include "tbundle/parallel.hpp"

namespace tbundle {

void BundleParams::validate() const {
    pseudo.validate();
    if (!(p > 1.0)) throw param_error("fiber exponent p must be > 1");
    if (profile.f.empty()) throw param_error("bundle params need a growth profile");
}

TangentVector::TangentVector(VertexId basepoint, std::vector<double> values, double p,
                             const MetricGraph& g)
    : basepoint_(basepoint), values_(std::move(values)), p_(p) {
    double acc = 0.0;
    for (std::size_t xi = 0; xi < values_.size(); ++xi)
        acc += std::pow(std::abs(values_[xi]), p_) * g.weight(static_cast<VertexId>(xi));
    p_norm_ = std::pow(acc, 1.0 / p_);
}

TangentVector TangentVector::subtract(const TangentVector& other, const MetricGraph& g) const {
    if (other.basepoint_ != basepoint_)
        throw param_error("tangent vectors live in different fibers (basepoints " +
                          std::to_string(basepoint_) + " vs " + std::to_string(other.basepoint_) + ")");
    std::vector<double> vals(values_.size());
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = values_[i] - other.values_[i];
    return TangentVector(basepoint_, std::move(vals), p_, g);
}

namespace {

/// Per-distance fiber weight e^{-k} / f(k)^{1/p}, indexed by integer distance.
std::vector<double> fiber_weight_table(const GrowthProfile& profile, double p,
                                       std::int32_t max_d) {
    std::vector<double> w(static_cast<std::size_t>(max_d) + 1);
    for (std::int32_t k = 0; k <= max_d; ++k)
        w[static_cast<std::size_t>(k)] =
            std::exp(-static_cast<double>(k)) * std::pow(profile.at(k), -1.0 / p);
    return w;
}

std::int32_t max_row_value(const std::vector<std::int32_t>& row) {
    std::int32_t m = 0;
    for (auto v : row) m = std::max(m, v);
    return m;
}

}  // namespace

TangentVector tangent_vector(const PseudoRows& rows, VertexId x, const BundleParams& params) {
    params.validate();
    const MetricGraph& g = rows.graph();
    const auto& da = rows.dist_to_base();
    auto w = fiber_weight_table(params.profile, params.p, max_row_value(da));
    std::vector<double> vals;
    rows.fill_row(x, vals);
    for (std::size_t xi = 0; xi < vals.size(); ++xi)
        vals[xi] *= w[static_cast<std::size_t>(da[xi])];
    return TangentVector(rows.basepoint(), std::move(vals), params.p, g);
}

TangentVector recenter(const TangentVector& ax, const TangentVector& aa, const MetricGraph& g) {
    return ax.subtract(aa, g);
}

double diff_norm(const PseudoRows& rows, VertexId x, VertexId y, const BundleParams& params) {
    const MetricGraph& g = rows.graph();
    const auto& da = rows.dist_to_base();
    auto w = fiber_weight_table(params.profile, params.p, max_row_value(da));
    std::vector<double> rx, ry;
    rows.fill_row(x, rx);
    rows.fill_row(y, ry);
    double acc = 0.0;
    for (std::size_t xi = 0; xi < rx.size(); ++xi) {
        const double diff = (rx[xi] - ry[xi]) * w[static_cast<std::size_t>(da[xi])];
        acc += std::pow(std::abs(diff), params.p) * g.weight(static_cast<VertexId>(xi));
    }
    return std::pow(acc, 1.0 / params.p);
}

double PropernessConstants::default_C(const PseudoParams& p) {
    double C = 0.0;
    while (p.alpha() - p.beta() * std::exp(-p.epsilon * C) <= 0.0) {
        C += 1.0;
        if (C > 1e6) throw param_error("no admissible properness slack C below 1e6");
    }
    return C;
}

PropernessConstants PropernessConstants::derive(const BundleParams& params, double v,
                                                std::optional<double> C_override) {
    PropernessConstants c;
    const PseudoParams& ps = params.pseudo;
    c.C = C_override.value_or(default_C(ps));
    if (ps.alpha() - ps.beta() * std::exp(-ps.epsilon * c.C) <= 0.0)
        throw param_error("properness slack C = " + std::to_string(c.C) +
                          " violates alpha - beta e^{-eps C} > 0");
    c.Cprime = 2.0 * ps.D + 2.5 * c.C;
    c.K = ps.alpha() * std::exp(-ps.epsilon * c.C) -
          ps.beta() * std::exp(-ps.epsilon * (2.0 * ps.D + 2.0 * c.C));
    c.v = v;
    const double fCC = params.profile.at(static_cast<std::int64_t>(std::floor(c.Cprime + c.C)));
    c.Kprime = v * std::pow(c.K, params.p) * std::exp(-params.p * (c.Cprime + c.C)) / fCC;
    return c;
}

WitnessSet witness_set(VertexId x, VertexId y, const PropernessConstants& consts,
                       const MetricGraph& g) {
    WitnessSet ws;
    ws.x = x;
    ws.y = y;
    std::vector<std::int32_t> dx, dy;
    g.bfs_row(x, dx);
    g.bfs_row(y, dy);
    const double dxy = static_cast<double>(dx[static_cast<std::size_t>(y)]);
    for (VertexId a = 0; a < g.vertex_count(); ++a) {
        const double ax = dx[static_cast<std::size_t>(a)];
        const double ay = dy[static_cast<std::size_t>(a)];
        if (ax + ay <= dxy + consts.C && ax >= consts.Cprime && ay >= consts.Cprime) {
            ws.members.push_back(a);
            ws.measure += g.weight(a);
        }
    }
    return ws;
}

namespace {

struct FitAccumulator {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::uint64_t n = 0;
    void add(double x, double y) {
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++n;
    }
    void merge(const FitAccumulator& o) {
        sx += o.sx; sy += o.sy; sxx += o.sxx; sxy += o.sxy; n += o.n;
    }
    double slope() const {
        const double denom = static_cast<double>(n) * sxx - sx * sx;
        if (n < 2 || denom == 0.0) return 0.0;
        return (static_cast<double>(n) * sxy - sx * sy) / denom;
    }
};

struct ScanPartial {
    NormBoundReport norms;
    CurvatureReport curv;
    FitAccumulator fit;

    void init(double bound, double C, double DC) {
        norms.bound = bound;
        curv.C = C;
        curv.D_C = DC;
        curv.worst_lipschitz_ratio = 0.0;
    }
    void bin(std::int32_t d, double dn) {
        if (curv.decay.size() <= static_cast<std::size_t>(d))
            curv.decay.resize(static_cast<std::size_t>(d) + 1);
        DecayBin& b = curv.decay[static_cast<std::size_t>(d)];
        if (b.count == 0) {
            b.min = dn;
            b.max = dn;
        } else {
            b.min = std::min(b.min, dn);
            b.max = std::max(b.max, dn);
        }
        ++b.count;
        if (dn > 0.0) b.sum_log += std::log(dn);
    }
    void merge(const ScanPartial& o) {
        norms.pairs_checked += o.norms.pairs_checked;
        norms.violations += o.norms.violations;
        if (o.norms.worst_ratio > norms.worst_ratio) {
            norms.worst_ratio = o.norms.worst_ratio;
            norms.worst_a = o.norms.worst_a;
            norms.worst_x = o.norms.worst_x;
        }
        curv.triples_checked += o.curv.triples_checked;
        curv.violations += o.curv.violations;
        curv.lipschitz_violations += o.curv.lipschitz_violations;
        if (o.curv.worst_ratio > curv.worst_ratio) {
            curv.worst_ratio = o.curv.worst_ratio;
            curv.worst = o.curv.worst;
        }
        curv.worst_lipschitz_ratio = std::max(curv.worst_lipschitz_ratio, o.curv.worst_lipschitz_ratio);
        if (o.curv.decay.size() > curv.decay.size()) curv.decay.resize(o.curv.decay.size());
        for (std::size_t d = 0; d < o.curv.decay.size(); ++d) {
            const DecayBin& ob = o.curv.decay[d];
            if (ob.count == 0) continue;
            DecayBin& b = curv.decay[d];
            if (b.count == 0) {
                b = ob;
            } else {
                b.min = std::min(b.min, ob.min);
                b.max = std::max(b.max, ob.max);
                b.count += ob.count;
                b.sum_log += ob.sum_log;
            }
        }
        fit.merge(o.fit);
    }
};

/// Norm of one row against the bound, p = 2 fast path.
double row_norm_p(const double* row, const double* q, std::size_t n, double p) {
    double acc = 0.0;
    if (p == 2.0) {
        for (std::size_t i = 0; i < n; ++i) acc += row[i] * row[i] * q[i];
        return std::sqrt(acc);
    }
    for (std::size_t i = 0; i < n; ++i) acc += std::pow(std::abs(row[i]), p) * q[i];
    return std::pow(acc, 1.0 / p);
}

double diff_norm_p(const double* rx, const double* ry, const double* q, std::size_t n, double p) {
    double acc = 0.0;
    if (p == 2.0) {
        for (std::size_t i = 0; i < n; ++i) {
            const double d = rx[i] - ry[i];
            acc += d * d * q[i];
        }
        return std::sqrt(acc);
    }
    for (std::size_t i = 0; i < n; ++i)
        acc += std::pow(std::abs(rx[i] - ry[i]), p) * q[i];
    return std::pow(acc, 1.0 / p);
}

// Raw pseudo rows scaled into tangent coordinates: v[xi] = row[xi] * w(d(a,xi)).
// q absorbs both the fiber weight and the measure: q[xi] = w(d)^p * mu(xi),
// so sums over raw rows already carry the full integrand.
void make_q(const MetricGraph& g, const std::vector<std::int32_t>& da,
            const std::vector<double>& wtab, double p, std::vector<double>& q) {
    const std::size_t n = static_cast<std::size_t>(g.vertex_count());
    q.resize(n);
    for (std::size_t xi = 0; xi < n; ++xi)
        q[xi] = std::pow(wtab[static_cast<std::size_t>(da[xi])], p) *
                g.weight(static_cast<VertexId>(xi));
}

}  // namespace

BundleCertification certify_bundle(const MetricGraph& g, const BundleParams& params, double C,
                                   const ScanOptions& opt) {
    params.validate();
    if (C < 0) throw param_error("curvature slack C must be >= 0");
    const VertexId n = g.vertex_count();
    const double p = params.p;
    const double eps = params.pseudo.epsilon;
    const double norm_bound = params.norm_bound();
    const double DC = params.D_C(C);
    const double E_root = std::pow(params.E(), 1.0 / p);
    const double tol = 1.0 + kBoundRelTol;

    bool exhaustive = opt.mode == ScanOptions::Mode::exhaustive ||
                      (opt.mode == ScanOptions::Mode::automatic && n <= opt.exhaustive_cap);
    if (!exhaustive && !opt.seed)
        throw param_error("sampled bundle certification requires a seed");

    const std::int32_t diam_cap = 2 * g.eccentricity(0) + 2;  // distances never exceed this
    auto wtab = fiber_weight_table(params.profile, p, diam_cap);

    std::vector<ScanPartial> parts;

    if (exhaustive) {
        // all-pairs distances for triple selection (int16, n is capped)
        std::vector<std::int16_t> dmat(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
        parallel_for(static_cast<std::size_t>(n), opt.threads, [&](std::size_t s) {
            std::vector<std::int32_t> row;
            g.bfs_row(static_cast<VertexId>(s), row);
            for (std::size_t y = 0; y < static_cast<std::size_t>(n); ++y)
                dmat[s * static_cast<std::size_t>(n) + y] = static_cast<std::int16_t>(row[y]);
        });

        parts.assign(static_cast<std::size_t>(n), ScanPartial{});
        parallel_for(static_cast<std::size_t>(n), opt.threads, [&](std::size_t ai) {
            const VertexId a = static_cast<VertexId>(ai);
            ScanPartial& part = parts[ai];
            part.init(norm_bound, C, DC);

            auto rows = make_pseudo_rows(g, a, params.pseudo, opt.backend);
            const auto& da = rows->dist_to_base();
            std::vector<double> q;
            make_q(g, da, wtab, p, q);

            // all pseudo rows for this basepoint
            const std::size_t N = static_cast<std::size_t>(n);
            std::vector<double> P(N * N);
            std::vector<double> scratch;
            for (std::size_t x = 0; x < N; ++x) {
                rows->fill_row(static_cast<VertexId>(x), scratch);
                std::copy(scratch.begin(), scratch.end(), P.begin() + static_cast<std::ptrdiff_t>(x * N));
            }

            for (std::size_t x = 0; x < N; ++x) {
                const double* rx = P.data() + x * N;
                const double nx = row_norm_p(rx, q.data(), N, p);
                ++part.norms.pairs_checked;
                const double nr = nx / norm_bound;
                if (nr > part.norms.worst_ratio) {
                    part.norms.worst_ratio = nr;
                    part.norms.worst_a = a;
                    part.norms.worst_x = static_cast<VertexId>(x);
                }
                if (nr > tol) ++part.norms.violations;

                const std::int16_t* dx = dmat.data() + x * N;
                for (std::size_t y = x + 1; y < N; ++y) {
                    if (static_cast<double>(dx[y]) > C) continue;
                    const double* ry = P.data() + y * N;
                    const double dn = diff_norm_p(rx, ry, q.data(), N, p);
                    // the larger endpoint distance gives the tighter bound and
                    // covers both ordered instances of the triple
                    const std::int32_t dmax = std::max(da[x], da[y]);
                    const double bound = DC * std::exp(-eps * static_cast<double>(dmax));
                    ++part.curv.triples_checked;
                    const double cr = dn / bound;
                    if (cr > part.curv.worst_ratio) {
                        part.curv.worst_ratio = cr;
                        part.curv.worst = {a, static_cast<VertexId>(x), static_cast<VertexId>(y), dn, bound};
                    }
                    if (cr > tol) ++part.curv.violations;

                    const double lip = E_root * rx[y];
                    if (dn > lip * tol && dn > 1e-300) ++part.curv.lipschitz_violations;
                    if (lip > 0.0)
                        part.curv.worst_lipschitz_ratio =
                            std::max(part.curv.worst_lipschitz_ratio, dn / lip);

                    if (dn > 0.0) {
                        const double l = std::log(dn);
                        part.fit.add(static_cast<double>(da[x]), l);
                        part.fit.add(static_cast<double>(da[y]), l);
                    }
                    part.bin(da[x], dn);
                    part.bin(da[y], dn);
                }
            }
        });
    } else {
        // seeded sample of (a, x, y in B(x, C)) triples
        std::mt19937_64 rng(*opt.seed);
        struct Sample { VertexId a, x, y; };
        std::vector<Sample> samples;
        samples.reserve(opt.samples);
        std::vector<std::int32_t> dxrow;
        std::vector<VertexId> cands;
        for (std::uint64_t t = 0; t < opt.samples; ++t) {
            VertexId a = static_cast<VertexId>(rng() % static_cast<std::uint64_t>(n));
            VertexId x = static_cast<VertexId>(rng() % static_cast<std::uint64_t>(n));
            g.bfs_row(x, dxrow);
            cands.clear();
            for (VertexId y = 0; y < n; ++y)
                if (y != x && static_cast<double>(dxrow[static_cast<std::size_t>(y)]) <= C)
                    cands.push_back(y);
            if (cands.empty()) continue;
            VertexId y = cands[rng() % cands.size()];
            samples.push_back({a, x, y});
        }
        parts.assign(samples.size(), ScanPartial{});
        parallel_for(samples.size(), opt.threads, [&](std::size_t si) {
            const auto [a, x, y] = samples[si];
            ScanPartial& part = parts[si];
            part.init(norm_bound, C, DC);
            auto rows = make_pseudo_rows(g, a, params.pseudo, opt.backend);
            const auto& da = rows->dist_to_base();
            std::vector<double> q;
            make_q(g, da, wtab, p, q);
            std::vector<double> rx, ry;
            rows->fill_row(x, rx);
            rows->fill_row(y, ry);
            const std::size_t N = static_cast<std::size_t>(n);
            for (auto [vx, vid] : {std::pair<const std::vector<double>*, VertexId>{&rx, x}, {&ry, y}}) {
                const double nv = row_norm_p(vx->data(), q.data(), N, p);
                ++part.norms.pairs_checked;
                const double nr = nv / norm_bound;
                if (nr > part.norms.worst_ratio) {
                    part.norms.worst_ratio = nr;
                    part.norms.worst_a = a;
                    part.norms.worst_x = vid;
                }
                if (nr > tol) ++part.norms.violations;
            }
            const double dn = diff_norm_p(rx.data(), ry.data(), q.data(), N, p);
            const std::int32_t dmax = std::max(da[static_cast<std::size_t>(x)], da[static_cast<std::size_t>(y)]);
            const double bound = DC * std::exp(-eps * static_cast<double>(dmax));
            ++part.curv.triples_checked;
            const double cr = dn / bound;
            if (cr > part.curv.worst_ratio) {
                part.curv.worst_ratio = cr;
                part.curv.worst = {a, x, y, dn, bound};
            }
            if (cr > tol) ++part.curv.violations;
            const double lip = E_root * rx[static_cast<std::size_t>(y)];
            if (dn > lip * tol && dn > 1e-300) ++part.curv.lipschitz_violations;
            if (lip > 0.0)
                part.curv.worst_lipschitz_ratio = std::max(part.curv.worst_lipschitz_ratio, dn / lip);
            if (dn > 0.0) {
                const double l = std::log(dn);
                part.fit.add(static_cast<double>(da[static_cast<std::size_t>(x)]), l);
                part.fit.add(static_cast<double>(da[static_cast<std::size_t>(y)]), l);
            }
            part.bin(da[static_cast<std::size_t>(x)], dn);
            part.bin(da[static_cast<std::size_t>(y)], dn);
        });
    }

    ScanPartial total;
    total.init(norm_bound, C, DC);
    for (const auto& part : parts) total.merge(part);

    BundleCertification cert;
    cert.norms = total.norms;
    cert.curvature = total.curv;
    cert.curvature.fit_slope = total.fit.slope();
    cert.curvature.fit_points = total.fit.n;
    cert.curvature.sampled = !exhaustive;
    cert.curvature.seed = opt.seed.value_or(0);
    cert.curvature.backend =
        (opt.backend == PseudoBackend::tree_closed_form ||
         (opt.backend == PseudoBackend::automatic && g.is_tree()))
            ? "tree-closed-form"
            : "dijkstra";
    return cert;
}

PropernessReport verify_properness(const MetricGraph& g, const BundleParams& params,
                                   const PropernessConstants& consts,
                                   const std::vector<std::pair<VertexId, VertexId>>& pairs,
                                   const ScanOptions& opt, std::size_t max_pairs) {
    params.validate();
    const VertexId n = g.vertex_count();
    PropernessReport rep;
    rep.consts = consts;
    rep.threshold = consts.regime_threshold();
    rep.required_diameter = rep.threshold;
    rep.worst_ratio = std::numeric_limits<double>::infinity();

    // collect candidate pairs with their distances
    std::vector<PropernessPair> scoped;
    auto consider = [&](VertexId x, VertexId y, std::int32_t d) {
        if (static_cast<double>(d) >= rep.threshold) {
            PropernessPair pp;
            pp.x = x;
            pp.y = y;
            pp.d = d;
            scoped.push_back(pp);
        } else {
            ++rep.pairs_skipped;
        }
    };
    if (!pairs.empty()) {
        std::vector<std::int32_t> row;
        for (auto [x, y] : pairs) {
            g.bfs_row(x, row);
            consider(x, y, row[static_cast<std::size_t>(y)]);
        }
    } else {
        if (static_cast<std::int64_t>(n) * n > 400000000LL)
            throw param_error("properness pair scan needs an explicit pair list on graphs this large");
        std::vector<std::int32_t> row;
        for (VertexId x = 0; x < n; ++x) {
            g.bfs_row(x, row);
            for (VertexId y = x + 1; y < n; ++y) consider(x, y, row[static_cast<std::size_t>(y)]);
        }
    }

    if (scoped.empty()) {
        rep.graph_too_small = true;
        return rep;
    }
    std::sort(scoped.begin(), scoped.end(), [](const PropernessPair& a, const PropernessPair& b) {
        return std::tie(a.d, a.x, a.y) < std::tie(b.d, b.x, b.y);
    });
    if (scoped.size() > max_pairs) {
        std::vector<PropernessPair> kept;
        kept.reserve(max_pairs);
        const double stride = static_cast<double>(scoped.size()) / static_cast<double>(max_pairs);
        for (std::size_t i = 0; i < max_pairs; ++i)
            kept.push_back(scoped[static_cast<std::size_t>(static_cast<double>(i) * stride)]);
        scoped.swap(kept);
    }
    rep.pairs_in_scope = scoped.size();

    // unique endpoints
    std::vector<VertexId> endpoints;
    for (const auto& pp : scoped) {
        endpoints.push_back(pp.x);
        endpoints.push_back(pp.y);
    }
    std::sort(endpoints.begin(), endpoints.end());
    endpoints.erase(std::unique(endpoints.begin(), endpoints.end()), endpoints.end());
    std::vector<std::int32_t> endpoint_slot(static_cast<std::size_t>(n), -1);
    for (std::size_t i = 0; i < endpoints.size(); ++i)
        endpoint_slot[static_cast<std::size_t>(endpoints[i])] = static_cast<std::int32_t>(i);

    const std::int32_t diam_cap = 2 * g.eccentricity(0) + 2;
    auto wtab = fiber_weight_table(params.profile, params.p, diam_cap);

    // S partial per basepoint, folded in basepoint order
    std::vector<std::vector<double>> partial(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), opt.threads, [&](std::size_t ai) {
        const VertexId a = static_cast<VertexId>(ai);
        auto rows = make_pseudo_rows(g, a, params.pseudo, opt.backend);
        const auto& da = rows->dist_to_base();
        std::vector<double> q;
        make_q(g, da, wtab, params.p, q);
        std::vector<std::vector<double>> endpoint_rows(endpoints.size());
        for (std::size_t i = 0; i < endpoints.size(); ++i)
            rows->fill_row(endpoints[i], endpoint_rows[i]);
        auto& out = partial[ai];
        out.resize(scoped.size());
        const std::size_t N = static_cast<std::size_t>(n);
        for (std::size_t pi = 0; pi < scoped.size(); ++pi) {
            const auto& rx = endpoint_rows[static_cast<std::size_t>(
                endpoint_slot[static_cast<std::size_t>(scoped[pi].x)])];
            const auto& ry = endpoint_rows[static_cast<std::size_t>(
                endpoint_slot[static_cast<std::size_t>(scoped[pi].y)])];
            double acc = 0.0;
            if (params.p == 2.0) {
                for (std::size_t xi = 0; xi < N; ++xi) {
                    const double d = rx[xi] - ry[xi];
                    acc += d * d * q[xi];
                }
            } else {
                for (std::size_t xi = 0; xi < N; ++xi)
                    acc += std::pow(std::abs(rx[xi] - ry[xi]), params.p) * q[xi];
            }
            out[pi] = acc * g.weight(a);
        }
    });

    FitAccumulator fit;
    for (auto& pp : scoped) {
        std::size_t pi = static_cast<std::size_t>(&pp - scoped.data());
        double S = 0.0;
        for (std::size_t ai = 0; ai < partial.size(); ++ai) S += partial[ai][pi];
        pp.S = S;
        auto ws = witness_set(pp.x, pp.y, consts, g);
        pp.witness_measure = ws.measure;
        const double growth = (consts.v / consts.C) *
                              (static_cast<double>(pp.d) - 2.0 * consts.Cprime - 2.0 * consts.C);
        pp.lower = consts.Kprime * growth;
        pp.ok = S >= pp.lower * (1.0 - kBoundRelTol);
        if (!pp.ok) ++rep.violations;
        if (ws.measure < growth * (1.0 - kBoundRelTol)) ++rep.witness_bound_violations;
        if (pp.lower > 0.0) rep.worst_ratio = std::min(rep.worst_ratio, S / pp.lower);
        fit.add(static_cast<double>(pp.d), S);
    }
    rep.fit_slope = fit.slope();
    rep.rows = std::move(scoped);
    return rep;
}

TangentVector tree_oracle_vector(VertexId a, VertexId x, const MetricGraph& tree) {
    if (!tree.is_tree()) throw param_error("tree oracle requires an acyclic graph");
    std::vector<double> vals(static_cast<std::size_t>(tree.vertex_count()), 0.0);
    if (x != a) {
        std::vector<std::int32_t> dx;
        tree.bfs_row(x, dx);
        const std::int32_t dxa = dx[static_cast<std::size_t>(a)];
        for (const VertexId* it = tree.neighbors_begin(a); it != tree.neighbors_end(a); ++it) {
            if (dx[static_cast<std::size_t>(*it)] == dxa - 1) {
                vals[static_cast<std::size_t>(*it)] = 1.0;
                break;
            }
        }
    }
    return TangentVector(a, std::move(vals), 2.0, tree);
}

}  // namespace tbundle
