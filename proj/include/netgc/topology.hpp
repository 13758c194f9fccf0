#pragma once

// Undirected sensor-network graphs. Node indices are 0-based in the C++ API;
// the text representation (and everything user-facing) is 1-based.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <deque>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "netgc/errors.hpp"

namespace netgc {

/// Unordered node pair, normalized so that first < second.
struct NodePair {
    std::size_t first = 0;
    std::size_t second = 0;

    static NodePair of(std::size_t a, std::size_t b) {
        return a < b ? NodePair{a, b} : NodePair{b, a};
    }
    friend auto operator<=>(const NodePair&, const NodePair&) = default;
};

/// "m-j" with 1-based labels.
inline std::string to_label(NodePair p) {
    return std::to_string(p.first + 1) + "-" + std::to_string(p.second + 1);
}

class Topology {
public:
    Topology(std::size_t node_count, std::vector<NodePair> edges)
        : node_count_(node_count), adjacency_(node_count * node_count, false) {
        if (node_count < 2) throw InvalidInputError("Topology: node_count must be >= 2");
        for (auto e : edges) {
            if (e.first == e.second)
                throw InvalidInputError("Topology: self-loop at node " + std::to_string(e.first + 1));
            if (e.first >= node_count || e.second >= node_count)
                throw InvalidInputError("Topology: node index out of range in edge " + to_label(NodePair::of(e.first, e.second)));
            e = NodePair::of(e.first, e.second);
            if (adjacency_[e.first * node_count + e.second])
                throw InvalidInputError("Topology: duplicate edge " + to_label(e));
            adjacency_[e.first * node_count + e.second] = true;
            adjacency_[e.second * node_count + e.first] = true;
            edges_.push_back(e);
        }
        std::sort(edges_.begin(), edges_.end());
    }

    static Topology complete(std::size_t node_count) {
        std::vector<NodePair> edges;
        for (std::size_t i = 0; i < node_count; ++i)
            for (std::size_t j = i + 1; j < node_count; ++j) edges.push_back({i, j});
        return Topology(node_count, std::move(edges));
    }

    std::size_t node_count() const noexcept { return node_count_; }
    const std::vector<NodePair>& edges() const noexcept { return edges_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    bool has_edge(std::size_t i, std::size_t j) const {
        return i != j && adjacency_[i * node_count_ + j];
    }

    bool is_complete() const noexcept {
        return edges_.size() == node_count_ * (node_count_ - 1) / 2;
    }

    std::vector<std::size_t> neighbors(std::size_t i) const {
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < node_count_; ++j)
            if (has_edge(i, j)) out.push_back(j);
        return out;
    }

    Topology without_edge(NodePair e) const {
        e = NodePair::of(e.first, e.second);
        std::vector<NodePair> kept;
        for (auto f : edges_)
            if (f != e) kept.push_back(f);
        if (kept.size() == edges_.size())
            throw InvalidInputError("Topology: edge " + to_label(e) + " not present");
        return Topology(node_count_, std::move(kept));
    }

    friend bool operator==(const Topology& a, const Topology& b) {
        return a.node_count_ == b.node_count_ && a.edges_ == b.edges_;
    }

private:
    std::size_t node_count_;
    std::vector<bool> adjacency_;
    std::vector<NodePair> edges_;
};

inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

/// Breadth-first hop counts from `source`; kUnreachable for other components.
inline std::vector<std::size_t> hop_distances(const Topology& t, std::size_t source) {
    std::vector<std::size_t> dist(t.node_count(), kUnreachable);
    std::deque<std::size_t> queue{source};
    dist[source] = 0;
    while (!queue.empty()) {
        const auto v = queue.front();
        queue.pop_front();
        for (auto w : t.neighbors(v))
            if (dist[w] == kUnreachable) {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
    }
    return dist;
}

inline bool is_connected(const Topology& t) {
    const auto d = hop_distances(t, 0);
    return std::none_of(d.begin(), d.end(), [](std::size_t x) { return x == kUnreachable; });
}

/// Non-adjacent pairs ordered by increasing hop distance (pairs in different
/// components last), ties broken lexicographically.
inline std::vector<NodePair> missing_pairs(const Topology& t) {
    struct Keyed {
        std::size_t distance;
        NodePair pair;
        auto operator<=>(const Keyed&) const = default;
    };
    std::vector<Keyed> keyed;
    for (std::size_t i = 0; i < t.node_count(); ++i) {
        const auto d = hop_distances(t, i);
        for (std::size_t j = i + 1; j < t.node_count(); ++j)
            if (!t.has_edge(i, j)) keyed.push_back({d[j], {i, j}});
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<NodePair> out;
    out.reserve(keyed.size());
    for (const auto& k : keyed) out.push_back(k.pair);
    return out;
}

struct ChordalityResult {
    bool chordal = false;
    /// Perfect elimination ordering (0-based) when chordal; empty otherwise.
    std::vector<std::size_t> elimination_order;
};

/// Maximum-cardinality search followed by verification of the candidate
/// elimination ordering.
inline ChordalityResult is_chordal(const Topology& t) {
    const std::size_t n = t.node_count();
    std::vector<std::size_t> weight(n, 0);
    std::vector<bool> numbered(n, false);
    std::vector<std::size_t> visit;
    visit.reserve(n);
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t best = n;
        for (std::size_t v = 0; v < n; ++v)
            if (!numbered[v] && (best == n || weight[v] > weight[best])) best = v;
        numbered[best] = true;
        visit.push_back(best);
        for (auto w : t.neighbors(best))
            if (!numbered[w]) ++weight[w];
    }
    std::vector<std::size_t> order(visit.rbegin(), visit.rend());

    std::vector<std::size_t> position(n);
    for (std::size_t k = 0; k < n; ++k) position[order[k]] = k;
    for (auto v : order) {
        std::vector<std::size_t> later;
        for (auto w : t.neighbors(v))
            if (position[w] > position[v]) later.push_back(w);
        if (later.empty()) continue;
        const auto parent = *std::min_element(later.begin(), later.end(), [&](auto a, auto b) {
            return position[a] < position[b];
        });
        for (auto w : later)
            if (w != parent && !t.has_edge(parent, w)) return {};
    }
    return {true, std::move(order)};
}

/// Relabels node i as perm[i] (0-based bijection).
inline Topology apply_permutation(const Topology& t, std::span<const std::size_t> perm) {
    const std::size_t n = t.node_count();
    if (perm.size() != n)
        throw InvalidPermutationError("apply_permutation: expected " + std::to_string(n) + " entries");
    std::vector<bool> seen(n, false);
    for (auto p : perm) {
        if (p >= n || seen[p]) throw InvalidPermutationError("apply_permutation: not a bijection");
        seen[p] = true;
    }
    std::vector<NodePair> edges;
    for (auto e : t.edges()) edges.push_back(NodePair::of(perm[e.first], perm[e.second]));
    return Topology(n, std::move(edges));
}

/// Exhaustive isomorphism test; intended for small graphs (node_count <= 8).
inline bool are_isomorphic(const Topology& a, const Topology& b) {
    if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count()) return false;
    if (a.node_count() > 8) throw InvalidInputError("are_isomorphic: limited to 8 nodes");
    std::vector<std::size_t> perm(a.node_count());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        if (apply_permutation(a, perm) == b) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

namespace detail {

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

inline std::size_t parse_index(std::string_view text, std::size_t& pos) {
    while (pos < text.size() && is_space(text[pos])) ++pos;
    const std::size_t start = pos;
    std::size_t value = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
        value = value * 10 + static_cast<std::size_t>(text[pos] - '0');
        if (value > 1'000'000) throw ParseError("topology: index too large", 1, start + 1);
        ++pos;
    }
    if (pos == start) throw ParseError("topology: expected a node index", 1, start + 1);
    while (pos < text.size() && is_space(text[pos])) ++pos;
    return value;
}

}  // namespace detail

/// Parses `M: m-j, m-j, ...` (1-based labels, whitespace-insensitive).
inline Topology parse_topology(std::string_view text) {
    std::size_t pos = 0;
    const std::size_t m = detail::parse_index(text, pos);
    if (pos >= text.size() || text[pos] != ':')
        throw ParseError("topology: expected ':' after node count", 1, pos + 1);
    ++pos;
    std::vector<NodePair> edges;
    while (pos < text.size() && detail::is_space(text[pos])) ++pos;
    while (pos < text.size()) {
        const std::size_t token_start = pos;
        const std::size_t a = detail::parse_index(text, pos);
        if (pos >= text.size() || text[pos] != '-')
            throw ParseError("topology: expected '-' in edge token", 1, pos + 1);
        ++pos;
        const std::size_t b = detail::parse_index(text, pos);
        if (a < 1 || b < 1 || a > m || b > m)
            throw ParseError("topology: node label out of range [1.." + std::to_string(m) + "]", 1,
                             token_start + 1);
        edges.push_back({a - 1, b - 1});
        if (pos < text.size()) {
            if (text[pos] != ',') throw ParseError("topology: expected ',' between edges", 1, pos + 1);
            ++pos;
            if (pos == text.size()) throw ParseError("topology: trailing ','", 1, pos);
        }
    }
    try {
        return Topology(m, std::move(edges));
    } catch (const InvalidInputError& e) {
        throw ParseError(e.what(), 1, 0);
    }
}

inline std::string to_string(const Topology& t) {
    std::string out = std::to_string(t.node_count()) + ":";
    for (std::size_t k = 0; k < t.edges().size(); ++k) {
        out += k == 0 ? " " : ",";
        out += to_label(t.edges()[k]);
    }
    return out;
}

}  // namespace netgc
