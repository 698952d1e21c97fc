#include "tbundle/words.hpp"

#include <algorithm>

#include "tbundle/error.hpp"

namespace tbundle {

Word Word::parse(const std::string& text, int k) {
    Word w;
    if (text == "1" || text.empty()) return w;
    for (char c : text) {
        std::int8_t l;
        if (c >= 'a' && c <= 'z') {
            l = static_cast<std::int8_t>(c - 'a' + 1);
        } else if (c >= 'A' && c <= 'Z') {
            l = static_cast<std::int8_t>(-(c - 'A' + 1));
        } else {
            throw parse_error(std::string("bad word letter '") + c + "'");
        }
        if (std::abs(static_cast<int>(l)) > k)
            throw parse_error(std::string("letter '") + c + "' is outside the generator set (k = " +
                              std::to_string(k) + ")");
        if (!w.letters.empty() && w.letters.back() == static_cast<std::int8_t>(-l))
            w.letters.pop_back();
        else
            w.letters.push_back(l);
    }
    return w;
}

std::string Word::str() const {
    if (letters.empty()) return "1";
    std::string s;
    s.reserve(letters.size());
    for (std::int8_t l : letters)
        s.push_back(l > 0 ? static_cast<char>('a' + l - 1) : static_cast<char>('A' - l - 1));
    return s;
}

Word reduced_concat(const Word& u, const Word& v) {
    Word w = u;
    for (std::int8_t l : v.letters) {
        if (!w.letters.empty() && w.letters.back() == static_cast<std::int8_t>(-l))
            w.letters.pop_back();
        else
            w.letters.push_back(l);
    }
    return w;
}

Word word_inverse(const Word& u) {
    Word w;
    w.letters.reserve(u.letters.size());
    for (auto it = u.letters.rbegin(); it != u.letters.rend(); ++it)
        w.letters.push_back(static_cast<std::int8_t>(-*it));
    return w;
}

int common_prefix(const Word& u, const Word& v) {
    const std::size_t m = std::min(u.letters.size(), v.letters.size());
    std::size_t i = 0;
    while (i < m && u.letters[i] == v.letters[i]) ++i;
    return static_cast<int>(i);
}

int word_distance(const Word& u, const Word& v) {
    return u.length() + v.length() - 2 * common_prefix(u, v);
}

Word random_reduced_word(int length, int k, std::mt19937_64& rng) {
    Word w;
    w.letters.reserve(static_cast<std::size_t>(length));
    for (int i = 0; i < length; ++i) {
        const int choices = w.letters.empty() ? 2 * k : 2 * k - 1;
        std::uint64_t pick = rng() % static_cast<std::uint64_t>(choices);
        // enumerate the allowed letters in canonical order and take the pick-th
        std::int8_t chosen = 0;
        for (std::int8_t l = 1; l <= static_cast<std::int8_t>(k) && chosen == 0; ++l) {
            for (std::int8_t s : {l, static_cast<std::int8_t>(-l)}) {
                if (!w.letters.empty() && w.letters.back() == static_cast<std::int8_t>(-s)) continue;
                if (pick == 0) {
                    chosen = s;
                    break;
                }
                --pick;
            }
        }
        w.letters.push_back(chosen);
    }
    return w;
}

FreeBall::FreeBall(int k, int radius) : k_(k), radius_(radius) {
    if (k < 1) throw param_error("free group rank must be >= 1");
    if (radius < 0) throw param_error("ball radius must be >= 0");
}

double FreeBall::ball_size(std::int64_t r) const {
    if (r < 0) return 0.0;
    r = std::min<std::int64_t>(r, radius_);
    // 1 + 2k * ((2k-1)^r - 1) / (2k - 2); for k = 1 the ball is a segment
    if (k_ == 1) return static_cast<double>(2 * r + 1);
    const double q = static_cast<double>(2 * k_ - 1);
    return 1.0 + static_cast<double>(2 * k_) * (std::pow(q, static_cast<double>(r)) - 1.0) /
                     (q - 1.0);
}

GrowthProfile FreeBall::profile() const {
    std::vector<double> f(static_cast<std::size_t>(radius_) + 1);
    for (int r = 0; r <= radius_; ++r) f[static_cast<std::size_t>(r)] = ball_size(r);
    return profile_from_counts(0, std::move(f));
}

FreeBall::Materialized FreeBall::materialize(std::size_t vertex_cap) const {
    const double size = ball_size(radius_);
    if (size > static_cast<double>(vertex_cap))
        throw param_error("free ball of radius " + std::to_string(radius_) + " has " +
                          std::to_string(static_cast<std::uint64_t>(size)) +
                          " vertices, above the materialization cap of " +
                          std::to_string(vertex_cap));
    Materialized m;
    m.words.reserve(static_cast<std::size_t>(size));
    m.words.push_back(Word{});
    std::vector<std::pair<VertexId, VertexId>> edges;
    // breadth-first by word length; child order follows the letter order
    std::size_t head = 0;
    while (head < m.words.size()) {
        const Word w = m.words[head];
        const VertexId wid = static_cast<VertexId>(head);
        ++head;
        if (w.length() == radius_) continue;
        for (std::int8_t l = 1; l <= static_cast<std::int8_t>(k_); ++l) {
            for (std::int8_t s : {l, static_cast<std::int8_t>(-l)}) {
                if (!w.letters.empty() && w.letters.back() == static_cast<std::int8_t>(-s)) continue;
                Word child = w;
                child.letters.push_back(s);
                const VertexId cid = static_cast<VertexId>(m.words.size());
                m.words.push_back(std::move(child));
                edges.emplace_back(wid, cid);
            }
        }
    }
    MetricGraph g;
    g.labels_.resize(m.words.size());
    for (std::size_t i = 0; i < m.words.size(); ++i) {
        g.labels_[i] = m.words[i].str();
        g.ids_[g.labels_[i]] = static_cast<VertexId>(i);
    }
    g.finalize(std::move(edges));
    m.graph = std::move(g);
    return m;
}

}  // namespace tbundle
