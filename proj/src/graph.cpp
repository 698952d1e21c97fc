#include "tbundle/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

namespace tbundle {

namespace {

// Splits a line at the first tab; falls back to any whitespace run.
bool split_pair(const std::string& line, std::string& a, std::string& b) {
    auto tab = line.find('\t');
    if (tab != std::string::npos) {
        a = line.substr(0, tab);
        b = line.substr(tab + 1);
        // trim trailing \r
        while (!b.empty() && (b.back() == '\r' || b.back() == ' ')) b.pop_back();
        return !a.empty() && !b.empty();
    }
    std::istringstream ss(line);
    if (!(ss >> a >> b)) return false;
    std::string rest;
    if (ss >> rest) return false;
    return true;
}

bool is_blank_or_comment(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

}  // namespace

MetricGraph MetricGraph::from_edges(const std::vector<std::pair<std::string, std::string>>& edges) {
    MetricGraph g;
    std::set<std::string> names;
    for (const auto& [u, v] : edges) {
        if (u == v) throw graph_error("self-loop on vertex '" + u + "'");
        names.insert(u);
        names.insert(v);
    }
    g.labels_.assign(names.begin(), names.end());
    for (std::size_t i = 0; i < g.labels_.size(); ++i)
        g.ids_[g.labels_[i]] = static_cast<VertexId>(i);
    std::vector<std::pair<VertexId, VertexId>> idx_edges;
    idx_edges.reserve(edges.size());
    for (const auto& [u, v] : edges) {
        VertexId a = g.ids_[u], b = g.ids_[v];
        idx_edges.emplace_back(std::min(a, b), std::max(a, b));
    }
    g.finalize(std::move(idx_edges));
    return g;
}

MetricGraph MetricGraph::from_edge_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open graph file: " + path);
    std::vector<std::pair<std::string, std::string>> edges;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (is_blank_or_comment(line)) continue;
        std::string u, v;
        if (!split_pair(line, u, v))
            throw parse_error("expected 'u<TAB>v' in " + path, lineno);
        edges.emplace_back(std::move(u), std::move(v));
    }
    if (edges.empty()) throw parse_error("no edges in " + path, lineno);
    return from_edges(edges);
}

MetricGraph MetricGraph::path(int n) {
    if (n < 1) throw param_error("path length must be >= 1");
    MetricGraph g;
    g.labels_.resize(static_cast<std::size_t>(n));
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (int i = 0; i < n; ++i) {
        g.labels_[static_cast<std::size_t>(i)] = std::to_string(i);
        g.ids_[g.labels_[static_cast<std::size_t>(i)]] = i;
        if (i + 1 < n) edges.emplace_back(i, i + 1);
    }
    g.finalize(std::move(edges));
    return g;
}

MetricGraph MetricGraph::cycle(int n) {
    if (n < 3) throw param_error("cycle needs >= 3 vertices");
    MetricGraph g;
    g.labels_.resize(static_cast<std::size_t>(n));
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (int i = 0; i < n; ++i) {
        g.labels_[static_cast<std::size_t>(i)] = std::to_string(i);
        g.ids_[g.labels_[static_cast<std::size_t>(i)]] = i;
        edges.emplace_back(std::min(i, (i + 1) % n), std::max(i, (i + 1) % n));
    }
    g.finalize(std::move(edges));
    return g;
}

void MetricGraph::finalize(std::vector<std::pair<VertexId, VertexId>> edges) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    const std::size_t n = labels_.size();
    weights_.assign(n, 1.0);
    std::vector<int> deg(n, 0);
    for (auto& [u, v] : edges) {
        ++deg[static_cast<std::size_t>(u)];
        ++deg[static_cast<std::size_t>(v)];
    }
    offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + static_cast<std::size_t>(deg[i]);
    adj_.resize(offsets_[n]);
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    edge_u_.reserve(edges.size());
    edge_v_.reserve(edges.size());
    for (auto& [u, v] : edges) {
        adj_[cursor[static_cast<std::size_t>(u)]++] = v;
        adj_[cursor[static_cast<std::size_t>(v)]++] = u;
        edge_u_.push_back(u);
        edge_v_.push_back(v);
    }
    for (std::size_t i = 0; i < n; ++i)
        std::sort(adj_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
                  adj_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]));

    // connectivity
    if (n == 0) throw graph_error("empty graph");
    std::vector<std::int32_t> dist;
    bfs_row(0, dist);
    for (std::size_t v = 0; v < n; ++v) {
        if (dist[v] < 0) {
            throw graph_error("graph is disconnected: vertex '" + labels_[v] +
                              "' unreachable from '" + labels_[0] + "'");
        }
    }
}

void MetricGraph::load_measure_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open measure file: " + path);
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (is_blank_or_comment(line)) continue;
        std::string v, w;
        if (!split_pair(line, v, w))
            throw parse_error("expected 'v<TAB>weight' in " + path, lineno);
        auto it = ids_.find(v);
        if (it == ids_.end())
            throw parse_error("unknown vertex '" + v + "' in " + path, lineno);
        double wt;
        try {
            wt = std::stod(w);
        } catch (const std::exception&) {
            throw parse_error("bad weight '" + w + "' in " + path, lineno);
        }
        set_weight(it->second, wt);
    }
}

void MetricGraph::set_weight(VertexId v, double w) {
    if (!(w > 0.0)) throw param_error("vertex weight must be strictly positive");
    weights_[static_cast<std::size_t>(v)] = w;
}

VertexId MetricGraph::id_of(const std::string& label) const {
    auto it = ids_.find(label);
    if (it == ids_.end()) throw param_error("unknown vertex '" + label + "'");
    return it->second;
}

double MetricGraph::total_weight() const {
    double s = 0.0;
    for (double w : weights_) s += w;
    return s;
}

void MetricGraph::bfs_row(VertexId source, std::vector<std::int32_t>& out) const {
    const std::size_t n = labels_.size();
    out.assign(n, -1);
    std::deque<VertexId> q;
    out[static_cast<std::size_t>(source)] = 0;
    q.push_back(source);
    while (!q.empty()) {
        VertexId u = q.front();
        q.pop_front();
        std::int32_t du = out[static_cast<std::size_t>(u)];
        for (const VertexId* it = neighbors_begin(u); it != neighbors_end(u); ++it) {
            if (out[static_cast<std::size_t>(*it)] < 0) {
                out[static_cast<std::size_t>(*it)] = du + 1;
                q.push_back(*it);
            }
        }
    }
}

double MetricGraph::ball_weight(VertexId source, std::int32_t radius) const {
    if (radius < 0) return 0.0;
    const std::size_t n = labels_.size();
    std::vector<std::int32_t> dist(n, -1);
    std::deque<VertexId> q;
    dist[static_cast<std::size_t>(source)] = 0;
    q.push_back(source);
    double total = weights_[static_cast<std::size_t>(source)];
    while (!q.empty()) {
        VertexId u = q.front();
        q.pop_front();
        std::int32_t du = dist[static_cast<std::size_t>(u)];
        if (du == radius) continue;
        for (const VertexId* it = neighbors_begin(u); it != neighbors_end(u); ++it) {
            if (dist[static_cast<std::size_t>(*it)] < 0) {
                dist[static_cast<std::size_t>(*it)] = du + 1;
                total += weights_[static_cast<std::size_t>(*it)];
                q.push_back(*it);
            }
        }
    }
    return total;
}

std::int32_t MetricGraph::eccentricity(VertexId source) const {
    std::vector<std::int32_t> dist;
    bfs_row(source, dist);
    std::int32_t ecc = 0;
    for (std::int32_t d : dist) ecc = std::max(ecc, d);
    return ecc;
}

}  // namespace tbundle
