#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tbundle/graph.hpp"
#include "tbundle/metric.hpp"

namespace tbundle {

/// Reduced free-group word. Letters are +g / -g for generator g in 1..k;
/// construction keeps words reduced (no adjacent x x^{-1}).
struct Word {
    std::vector<std::int8_t> letters;

    bool is_identity() const { return letters.empty(); }
    int length() const { return static_cast<int>(letters.size()); }

    /// Lowercase letters are generators ('a' = 1), uppercase their inverses;
    /// "1" or "" is the identity. Rejects letters beyond generator count k.
    static Word parse(const std::string& text, int k);
    std::string str() const;

    bool operator==(const Word& o) const { return letters == o.letters; }
    bool operator<(const Word& o) const {
        if (letters.size() != o.letters.size()) return letters.size() < o.letters.size();
        return letters < o.letters;
    }
};

Word reduced_concat(const Word& u, const Word& v);
Word word_inverse(const Word& u);
/// Longest common prefix length; equals (u|v)_1 in the Cayley tree.
int common_prefix(const Word& u, const Word& v);
/// |u^{-1} v| = |u| + |v| - 2 lcp(u, v).
int word_distance(const Word& u, const Word& v);

/// Uniform reduced word of exactly the given length.
Word random_reduced_word(int length, int k, std::mt19937_64& rng);

/// Ball of reduced words in the free group F_k; the Cayley graph restricted
/// to it is the 2k-regular tree truncated at the radius. Left multiplication
/// is the isometric action.
class FreeBall {
public:
    FreeBall(int k, int radius);

    int rank() const { return k_; }
    int radius() const { return radius_; }

    /// Number of reduced words of length <= r (counting-measure ball volume).
    double ball_size(std::int64_t r) const;

    /// Visits every reduced word with |w| <= r in depth-first prefix order
    /// (letters ordered a, a^{-1}, b, b^{-1}, ...).
    template <typename Fn>
    void enumerate(int r, Fn&& fn) const {
        Word w;
        fn(static_cast<const Word&>(w));
        enumerate_rec(w, r, fn);
    }

    /// Growth profile of the truncated ball from the identity, using the
    /// closed-form shell counts (cross-checked against breadth-first
    /// enumeration in the tests).
    GrowthProfile profile() const;

    /// Explicit truncated Cayley graph; vertex ids follow the enumeration
    /// order, labels are word strings, the identity is vertex 0.
    struct Materialized {
        MetricGraph graph;
        std::vector<Word> words;  // id -> word
        VertexId id_of(const Word& w) const { return graph.id_of(w.str()); }
    };
    Materialized materialize(std::size_t vertex_cap = 2000000) const;

private:
    template <typename Fn>
    void enumerate_rec(Word& w, int r, Fn&& fn) const {
        if (w.length() == r) return;
        for (std::int8_t l = 1; l <= static_cast<std::int8_t>(k_); ++l) {
            for (std::int8_t s : {l, static_cast<std::int8_t>(-l)}) {
                if (!w.letters.empty() && w.letters.back() == static_cast<std::int8_t>(-s)) continue;
                w.letters.push_back(s);
                fn(static_cast<const Word&>(w));
                enumerate_rec(w, r, fn);
                w.letters.pop_back();
            }
        }
    }

    int k_;
    int radius_;
};

}  // namespace tbundle
