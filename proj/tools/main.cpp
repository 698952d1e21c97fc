#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "tbundle/pipeline.hpp"
#include "tbundle/version.hpp"

namespace {

using namespace tbundle;

void print_error(const Error& e) {
    Json j;
    j["error"] = Json{{"kind", e.kind()}, {"message", e.what()}};
    for (const auto& [k, v] : e.details()) j["error"][k] = v;
    std::cerr << j.dump(2) << "\n";
}

// Exact delta when the graph is small, otherwise the caller must declare one.
double resolve_delta(const MetricGraph& g, std::optional<double> declared, int cap,
                     int threads) {
    if (declared) return *declared;
    if (g.vertex_count() > cap)
        throw param_error("graph exceeds the exact-delta cap (" + std::to_string(cap) +
                          "); pass --delta with a declared upper bound");
    DeltaOptions opt;
    opt.mode = DeltaMode::exact;
    opt.exact_cap = cap;
    opt.threads = threads;
    return hyperbolicity_delta(g, opt).value;
}

int cmd_analyze(const RunConfig& cfg) {
    RunConfig c = cfg;
    c.identity_pairs = 0;  // metric layer only
    Space sp = build_space(c);
    Json j;
    j["schema"] = kReportSchema;
    j["tool"] = Json{{"name", "tbundle"}, {"version", kVersion}};

    const MetricGraph& g = *sp.graph;
    const VertexId o = sp.basepoint;
    j["vertices"] = g.vertex_count();
    j["edges"] = g.edge_count();
    j["is_tree"] = g.is_tree();
    j["basepoint"] = g.label(o);

    DeltaOptions dopt;
    dopt.exact_cap = static_cast<VertexId>(cfg.delta_cap);
    dopt.samples = cfg.delta_samples;
    dopt.seed = cfg.seed;
    dopt.threads = cfg.threads;
    dopt.fixed_basepoint = o;
    std::string mode = cfg.delta_mode;
    if (mode == "auto") mode = g.vertex_count() <= cfg.delta_cap ? "exact" : "sampled";
    dopt.mode = mode == "exact"   ? DeltaMode::exact
                : mode == "fixed" ? DeltaMode::fixed_basepoint
                                  : DeltaMode::sampled;
    DeltaResult delta = hyperbolicity_delta(g, dopt);
    j["delta"] = Json{{"value", delta.value},
                      {"mode", mode},
                      {"lower_bound_only", delta.lower_bound_only},
                      {"quadruples", delta.quadruples}};

    GrowthProfile growth = growth_profile(g, o);
    j["growth"] = Json{{"f", growth.f},
                       {"h_prime", growth.h_prime},
                       {"entropy", growth.entropy},
                       {"window", Json::array({growth.window_lo, growth.window_hi})},
                       {"degenerate_window", growth.degenerate_window}};

    PseudoParams params = PseudoParams::defaults(delta.value, cfg.epsilon, cfg.D);
    const double C = cfg.properness_C.value_or(PropernessConstants::default_C(params));
    NonCollapsingCertificate nc = non_collapsing(g, C);
    j["non_collapsing"] = Json{{"C", nc.C}, {"v", nc.v}, {"witness", g.label(nc.witness)}};
    j["p_star"] = p_threshold(growth.entropy, delta.value);

    const std::string text = j.dump(2) + "\n";
    if (!cfg.out_json.empty())
        write_text_file(cfg.out_json, text);
    else
        std::cout << text;
    return 0;
}

int cmd_pseudometric(const std::string& graph_path, const std::string& measure_path,
                     const std::string& base, std::optional<double> epsilon,
                     std::optional<double> D, std::optional<double> declared_delta,
                     const std::string& sources_csv, const std::string& out, int threads) {
    MetricGraph g = MetricGraph::from_edge_file(graph_path);
    if (!measure_path.empty()) g.load_measure_file(measure_path);
    const VertexId a = base.empty() ? 0 : g.id_of(base);
    const double delta = resolve_delta(g, declared_delta, 300, threads);
    PseudoParams params = PseudoParams::defaults(delta, epsilon, D);

    std::vector<VertexId> sources;
    if (!sources_csv.empty()) {
        std::size_t pos = 0;
        while (pos < sources_csv.size()) {
            auto comma = sources_csv.find(',', pos);
            if (comma == std::string::npos) comma = sources_csv.size();
            sources.push_back(g.id_of(sources_csv.substr(pos, comma - pos)));
            pos = comma + 1;
        }
    }
    PseudoField field = pseudo_field(g, a, params, sources, PseudoBackend::automatic, threads);

    std::vector<std::int32_t> da;
    g.bfs_row(a, da);
    CsvWriter csv({"x", "y", "d", "gromov_product", "d_eps", "upper_slack", "lower_slack"});
    std::uint64_t upper_viol = 0, lower_viol = 0;
    std::vector<std::int32_t> dx;
    for (std::size_t i = 0; i < field.sources.size(); ++i) {
        const VertexId x = field.sources[i];
        g.bfs_row(x, dx);
        for (VertexId y = 0; y < g.vertex_count(); ++y) {
            if (y == x) continue;
            const double dxy = dx[static_cast<std::size_t>(y)];
            const double gp = 0.5 * (da[static_cast<std::size_t>(x)] +
                                     da[static_cast<std::size_t>(y)] - dxy);
            const double deps = field.rows[i][static_cast<std::size_t>(y)];
            const double decay = std::exp(-params.epsilon * gp);
            const double upper_slack = params.beta() * decay - deps;
            const double lower_slack = deps - params.alpha() * decay;
            if (upper_slack < -kBoundRelTol * params.beta() * decay) ++upper_viol;
            if (dxy >= 2 * params.D && lower_slack < -kBoundRelTol * params.alpha() * decay)
                ++lower_viol;
            csv.row({g.label(x), g.label(y), CsvWriter::num(static_cast<std::int64_t>(dxy)),
                     CsvWriter::num(gp), CsvWriter::num(deps), CsvWriter::num(upper_slack),
                     CsvWriter::num(lower_slack)});
        }
    }
    if (out.empty() || out == "-")
        std::cout << csv.str();
    else
        csv.save(out);
    std::cerr << "pseudometric: " << field.sources.size() << " sources, backend "
              << field.backend << ", upper violations " << upper_viol << ", lower violations "
              << lower_viol << "\n";
    return (upper_viol + lower_viol) == 0 ? 0 : 1;
}

int cmd_bundle_verify(RunConfig cfg) {
    Space sp = build_space(cfg);
    const MetricGraph& g = *sp.graph;
    const VertexId o = sp.basepoint;
    const double delta = resolve_delta(g, cfg.delta_override, cfg.delta_cap, cfg.threads);
    PseudoParams params = PseudoParams::defaults(delta, cfg.epsilon, cfg.D);

    BundleParams bp;
    bp.pseudo = params;
    bp.p = cfg.p;
    bp.o = o;
    bp.profile = growth_profile(g, o);

    ScanOptions scan;
    scan.mode = cfg.scan_mode == "exhaustive"  ? ScanOptions::Mode::exhaustive
                : cfg.scan_mode == "sampled"   ? ScanOptions::Mode::sampled
                                               : ScanOptions::Mode::automatic;
    scan.samples = cfg.scan_samples;
    scan.seed = cfg.seed;
    scan.threads = cfg.threads;

    BundleCertification cert = certify_bundle(g, bp, cfg.curvature_C, scan);
    const double prop_C = cfg.properness_C.value_or(PropernessConstants::default_C(params));
    NonCollapsingCertificate nc = non_collapsing(g, prop_C);
    PropernessConstants consts = PropernessConstants::derive(bp, nc.v, cfg.properness_C);
    PropernessReport prop = verify_properness(g, bp, consts, {}, scan);

    Json j;
    j["schema"] = kReportSchema;
    j["tool"] = Json{{"name", "tbundle"}, {"version", kVersion}};
    j["params"] = Json{{"epsilon", params.epsilon}, {"D", params.D},      {"delta", delta},
                       {"p", bp.p},                 {"alpha", params.alpha()},
                       {"beta", params.beta()},     {"E", bp.E()},        {"kappa", bp.kappa()}};
    j["constants"] = Json{{"D_C", bp.D_C(cfg.curvature_C)},
                          {"C_curvature", cfg.curvature_C},
                          {"C", consts.C},
                          {"C_prime", consts.Cprime},
                          {"K", consts.K},
                          {"K_prime", consts.Kprime},
                          {"v", consts.v}};
    j["norm_bound"] = Json{{"bound", cert.norms.bound},
                           {"pairs_checked", cert.norms.pairs_checked},
                           {"violations", cert.norms.violations},
                           {"worst_ratio", json_number(cert.norms.worst_ratio)}};
    j["curvature"] = Json{{"mode", cert.curvature.sampled ? "sampled" : "exhaustive"},
                          {"triples_checked", cert.curvature.triples_checked},
                          {"violations", cert.curvature.violations},
                          {"worst_ratio", json_number(cert.curvature.worst_ratio)},
                          {"lipschitz_violations", cert.curvature.lipschitz_violations},
                          {"fit_slope", cert.curvature.fit_slope}};
    j["properness"] = Json{{"pairs_in_scope", prop.pairs_in_scope},
                           {"pairs_skipped", prop.pairs_skipped},
                           {"violations", prop.violations},
                           {"fit_slope", prop.fit_slope},
                           {"graph_too_small", prop.graph_too_small}};
    const bool pass = cert.norms.violations == 0 && cert.curvature.violations == 0 &&
                      cert.curvature.lipschitz_violations == 0 && prop.violations == 0;
    j["pass"] = pass;
    const std::string text = j.dump(2) + "\n";
    if (!cfg.out_json.empty())
        write_text_file(cfg.out_json, text);
    else
        std::cout << text;
    return pass ? 0 : 1;
}

int cmd_cocycle(const RunConfig& cfg, const std::string& words_file, int random_words,
                const std::string& out) {
    Space sp = build_space(cfg);
    if (!sp.action) throw param_error("cocycle needs --action free:k or an action file");
    const WordAction& action = *sp.action;
    const MetricGraph& g = *sp.graph;
    const VertexId o = sp.basepoint;

    const double delta =
        g.is_tree() ? 0.0 : resolve_delta(g, cfg.delta_override, cfg.delta_cap, cfg.threads);
    PseudoParams params = PseudoParams::defaults(delta, cfg.epsilon, cfg.D);
    BundleParams bp;
    bp.pseudo = params;
    bp.p = cfg.p;
    bp.o = o;
    bp.profile = growth_profile(g, o);
    const double prop_C = cfg.properness_C.value_or(PropernessConstants::default_C(params));
    NonCollapsingCertificate nc = non_collapsing(g, prop_C);
    PropernessConstants consts = PropernessConstants::derive(bp, nc.v, cfg.properness_C);

    std::vector<Word> words;
    if (!words_file.empty()) {
        std::ifstream in(words_file);
        if (!in) throw io_error("cannot open words file: " + words_file);
        std::string line;
        while (std::getline(in, line)) {
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            words.push_back(action.parse_word(line));
        }
    } else {
        if (!cfg.seed) throw param_error("--random needs --seed");
        std::mt19937_64 rng(*cfg.seed);
        const int maxlen = action.is_free()
                               ? std::max(1, action.ball().radius() - 2)
                               : cfg.max_word_len;
        for (int i = 0; i < random_words; ++i) {
            const int len = static_cast<int>(rng() % static_cast<std::uint64_t>(maxlen + 1));
            words.push_back(random_reduced_word(len, action.rank(), rng));
        }
    }

    GraphCocycle engine(action, bp);
    CsvWriter csv({"word", "length", "dist", "norm_p", "tail_bound", "lower_bound",
                   "upper_bound"});
    bool all_ok = true;
    for (const Word& w : words) {
        CocycleCertRow row = certify_cocycle_word(engine, w, consts, cfg.threads);
        all_ok = all_ok && row.ok;
        csv.row({row.word, CsvWriter::num(static_cast<std::int64_t>(row.length)),
                 CsvWriter::num(static_cast<std::int64_t>(row.dist)), CsvWriter::num(row.norm_p),
                 row.tail_summable ? CsvWriter::num(row.tail_bound) : "inf",
                 CsvWriter::num(row.lower_bound), CsvWriter::num(row.upper_bound)});
    }
    if (out.empty() || out == "-")
        std::cout << csv.str();
    else
        csv.save(out);
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tbundle: tangent-bundle and cocycle certification on hyperbolic graphs"};
    app.set_version_flag("--version",
                         std::string("tbundle ") + kVersion + " (schema " + kReportSchema + ")");
    app.require_subcommand(1);

    RunConfig cfg;
    cfg.threads = 0;  // CLI default: hardware concurrency

    auto add_space_flags = [&](CLI::App* c) {
        c->add_option("--graph", cfg.graph_path, "edge list file, one 'u<TAB>v' per line");
        c->add_option("--measure", cfg.measure_path, "vertex weight file, 'v<TAB>w' per line");
        c->add_option("--action", cfg.action_spec, "free:k builtin or generator JSON file");
        c->add_option("--radius", cfg.radius, "Cayley ball radius for free:k");
        c->add_option("--base", cfg.basepoint, "basepoint vertex label");
        c->add_option("--threads", cfg.threads, "worker threads (0 = hardware)");
        c->add_option("--seed", [&cfg](const std::vector<std::string>& v) {
            cfg.seed = std::stoull(v.at(0));
            return true;
        }, "seed for every sampled mode");
    };
    auto add_param_flags = [&](CLI::App* c) {
        c->add_option("--epsilon", [&cfg](const std::vector<std::string>& v) {
            cfg.epsilon = std::stod(v.at(0));
            return true;
        }, "pseudo-metric decay rate (default log2/(delta+D))");
        c->add_option("--D", [&cfg](const std::vector<std::string>& v) {
            cfg.D = std::stod(v.at(0));
            return true;
        }, "pseudo-metric scale parameter (default 1)");
        c->add_option("--p", cfg.p, "fiber exponent (default 2)");
        c->add_option("--C", cfg.curvature_C, "curvature slack d(x,y) <= C (default 2)");
        c->add_option("--properness-C", [&cfg](const std::vector<std::string>& v) {
            cfg.properness_C = std::stod(v.at(0));
            return true;
        }, "properness slack override");
        c->add_option("--delta", [&cfg](const std::vector<std::string>& v) {
            cfg.delta_override = std::stod(v.at(0));
            return true;
        }, "declared hyperbolicity upper bound");
    };

    auto* run = app.add_subcommand("run", "full certification pipeline");
    add_space_flags(run);
    add_param_flags(run);
    run->add_option("--delta-mode", cfg.delta_mode, "auto|exact|fixed|sampled");
    run->add_option("--delta-cap", cfg.delta_cap, "exact-delta vertex cap (default 300)");
    run->add_option("--delta-samples", cfg.delta_samples, "sampled-delta quadruple count");
    run->add_option("--scan-mode", cfg.scan_mode, "auto|exhaustive|sampled");
    run->add_option("--scan-samples", cfg.scan_samples, "sampled-scan triple count");
    run->add_option("--identity-pairs", cfg.identity_pairs, "random (g,h) pairs (default 100)");
    run->add_option("--max-word-len", cfg.max_word_len, "word length cap for sampled words");
    run->add_option("--growth-max-len", cfg.growth_max_len, "cocycle growth family length");
    run->add_option("--out", cfg.out_json, "report JSON path");
    run->add_option("--csv-dir", cfg.csv_dir, "directory for CSV tables");
    run->add_flag("--emit-timings", cfg.emit_timings, "include wall-clock timings in the JSON");

    auto* analyze = app.add_subcommand("analyze", "metric layer: delta, growth, entropy, p*");
    add_space_flags(analyze);
    add_param_flags(analyze);
    analyze->add_option("--delta-mode", cfg.delta_mode, "auto|exact|fixed|sampled");
    analyze->add_option("--delta-cap", cfg.delta_cap, "exact-delta vertex cap");
    analyze->add_option("--delta-samples", cfg.delta_samples, "sampled quadruples");
    analyze->add_option("--out", cfg.out_json, "report JSON path (default stdout)");

    std::string sources_csv, pm_out;
    auto* pm = app.add_subcommand("pseudometric", "weighted path pseudo-distance table + bounds");
    add_space_flags(pm);
    add_param_flags(pm);
    pm->add_option("--sources", sources_csv, "comma-separated source labels (default all)");
    pm->add_option("--out", pm_out, "CSV output path (default stdout)");

    auto* bundle = app.add_subcommand("bundle", "tangent bundle commands");
    auto* bv = bundle->add_subcommand("verify", "norm, curvature and properness certification");
    add_space_flags(bv);
    add_param_flags(bv);
    bv->add_option("--mode", cfg.scan_mode, "exhaustive|sampled");
    bv->add_option("--samples", cfg.scan_samples, "sampled triple count");
    bv->add_option("--out", cfg.out_json, "report JSON path (default stdout)");

    std::string words_file, cocycle_out;
    int random_words = 0;
    auto* co = app.add_subcommand("cocycle", "cocycle norms, bounds and growth rows");
    add_space_flags(co);
    add_param_flags(co);
    co->add_option("--words", words_file, "file with one word per line");
    co->add_option("--random", random_words, "number of random words");
    co->add_option("--max-word-len", cfg.max_word_len, "random word length cap (finite actions)");
    co->add_option("--out", cocycle_out, "CSV output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            tbundle::Report rep = run_pipeline(cfg);
            emit_report(rep, cfg.out_json, cfg.csv_dir);
            if (cfg.out_json.empty()) std::cout << rep.json.dump(2) << "\n";
            return rep.exit_code;
        }
        if (analyze->parsed()) return cmd_analyze(cfg);
        if (pm->parsed())
            return cmd_pseudometric(cfg.graph_path, cfg.measure_path, cfg.basepoint, cfg.epsilon,
                                    cfg.D, cfg.delta_override, sources_csv, pm_out, cfg.threads);
        if (bundle->parsed()) return cmd_bundle_verify(cfg);
        if (co->parsed()) return cmd_cocycle(cfg, words_file, random_words, cocycle_out);
    } catch (const tbundle::Error& e) {
        print_error(e);
        return 2;
    } catch (const std::exception& e) {
        print_error(tbundle::Error("internal", e.what()));
        return 2;
    }
    return 0;
}
