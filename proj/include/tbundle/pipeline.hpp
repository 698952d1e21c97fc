#pragma once

#include <optional>
#include <string>

#include "tbundle/action.hpp"
#include "tbundle/report.hpp"

namespace tbundle {

/// Full run configuration; a run is reproducible from this plus the input
/// files, and every derived default is echoed into the report.
struct RunConfig {
    // space: a graph file, or a builtin free:k action, or both graph + action file
    std::string graph_path;
    std::string measure_path;
    std::string action_spec;  // "free:k" or a generator JSON path
    int radius = 8;           // Cayley ball radius for free:k
    std::string basepoint;    // vertex label; empty = identity / first vertex

    // parameters; unset means derived per the module defaults
    std::optional<double> epsilon;
    std::optional<double> D;
    double p = 2.0;
    double curvature_C = 2.0;
    std::optional<double> properness_C;
    std::optional<double> delta_override;  // declared bound instead of a scan

    // modes
    std::string delta_mode = "auto";  // auto | exact | fixed | sampled
    int delta_cap = 300;
    std::uint64_t delta_samples = 20000;
    std::string scan_mode = "auto";  // auto | exhaustive | sampled
    std::uint64_t scan_samples = 2000;
    std::optional<std::uint64_t> seed;
    int threads = 1;

    // action stage sizes
    int identity_pairs = 100;
    int max_word_len = 6;
    int growth_max_len = 6;

    // output
    std::string out_json;
    std::string csv_dir;
    bool emit_timings = false;  // timings go to stderr unless opted into the JSON

    Json to_json() const;
    static RunConfig from_json(const Json& j);
};

struct Report {
    Json json;
    int exit_code = 0;  // 0 pass, 1 violations, 2 error (set by the CLI on throw)
};

/// analyze -> pseudometric-certify -> bundle-certify -> cocycle-certify,
/// short-circuiting on precondition failures with a partial report.
Report run_pipeline(const RunConfig& cfg);

/// Writes the report JSON (byte-stable) and optional CSV tables.
void emit_report(const Report& report, const std::string& out_json, const std::string& csv_dir);

/// Loads "label -> [image names]" generator permutations.
std::vector<PermGenerator> load_action_file(const std::string& path, const MetricGraph& g);

/// Builds the space and action described by the config.
struct Space {
    std::optional<WordAction> action;
    MetricGraph graph_storage;  // used when there is no action
    const MetricGraph* graph = nullptr;
    VertexId basepoint = 0;
};
Space build_space(const RunConfig& cfg);

}  // namespace tbundle
