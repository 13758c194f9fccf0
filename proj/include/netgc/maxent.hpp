#pragma once

// Maximum-entropy (maximum log-determinant) completion of a partially known,
// unit-diagonal Hermitian matrix. The completion is characterized by its
// inverse vanishing at every unknown position.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "netgc/errors.hpp"
#include "netgc/numerics.hpp"
#include "netgc/topology.hpp"

namespace netgc {

/// Unit-diagonal Hermitian matrix whose off-diagonal entries are known exactly
/// on the edges of a topology and missing elsewhere.
class PartialHermitian {
public:
    /// Magnitudes up to 1 + kUnitSlack are accepted to absorb roundoff in
    /// inner products of unit vectors.
    static constexpr double kUnitSlack = 1e-12;

    explicit PartialHermitian(Topology topology)
        : topology_(std::move(topology)), values_(HermitianMatrix::identity(topology_.node_count())) {}

    std::size_t order() const noexcept { return topology_.node_count(); }
    const Topology& topology() const noexcept { return topology_; }
    bool is_known(std::size_t i, std::size_t j) const { return i == j || topology_.has_edge(i, j); }

    void set_known(std::size_t i, std::size_t j, Complex g) {
        if (i >= order() || j >= order() || !topology_.has_edge(i, j))
            throw InvalidInputError("PartialHermitian: (" + std::to_string(i + 1) + "," +
                                    std::to_string(j + 1) + ") is not an edge");
        if (!is_finite(g)) throw InvalidInputError("PartialHermitian: non-finite entry");
        if (std::abs(g) > 1.0 + kUnitSlack)
            throw InvalidInputError("PartialHermitian: |entry| > 1 at " + to_label(NodePair::of(i, j)));
        values_.set(i, j, g);
    }

    /// Known entries in place, zeros at missing positions.
    const HermitianMatrix& values() const noexcept { return values_; }

private:
    Topology topology_;
    HermitianMatrix values_;
};

struct CompletionConfig {
    double tol = 1e-10;         ///< max entry change per refinement sweep, and residual bound
    std::size_t max_iter = 500; ///< refinement sweeps
    bool force_refinement = false;
};

struct CompletionResult {
    HermitianMatrix completed;
    std::map<NodePair, Complex> surrogates;
    std::size_t iterations = 0;          ///< refinement sweeps performed
    double zero_pattern_residual = 0.0;
    double entropy = 0.0;                ///< log det of `completed`, in nats
    bool chordal = false;
    std::vector<double> entropy_trace;   ///< log det after the initial fill and after each sweep
};

/// Conditional-expectation value for entry (i,j) given the principal block on
/// `conditioning`: u^H B^{-1} v with u = c(R,i), v = c(R,j), B = c(R,R).
inline Complex conditional_entry(const HermitianMatrix& c, std::size_t i, std::size_t j,
                                 std::span<const std::size_t> conditioning) {
    if (conditioning.empty()) return {};
    const auto block = principal_submatrix(c, conditioning);
    const auto factor = cholesky(block);
    if (!factor) {
        std::string names;
        for (auto k : conditioning) names += (names.empty() ? "" : ",") + std::to_string(k + 1);
        throw SubmatrixSingularError("conditioning submatrix {" + names + "} is not positive definite",
                                     {conditioning.begin(), conditioning.end()});
    }
    std::vector<Complex> v(conditioning.size());
    for (std::size_t k = 0; k < conditioning.size(); ++k) v[k] = c(conditioning[k], j);
    const auto w = factor->solve(v);
    Complex out{};
    for (std::size_t k = 0; k < conditioning.size(); ++k) out += std::conj(c(conditioning[k], i)) * w[k];
    return out;
}

/// Value of entry (i,j) that maximizes det(c) with every other entry held fixed;
/// the (i,j) entry of the inverse vanishes once it is placed.
inline Complex single_entry_update(const HermitianMatrix& c, NodePair pair) {
    std::vector<std::size_t> rest;
    for (std::size_t k = 0; k < c.order(); ++k)
        if (k != pair.first && k != pair.second) rest.push_back(k);
    return conditional_entry(c, pair.first, pair.second, rest);
}

/// Max |inverse(c)(i,j)| over `pairs`; 0 for an empty list.
inline double zero_pattern_residual(const HermitianMatrix& c, std::span<const NodePair> pairs) {
    if (pairs.empty()) return 0.0;
    const auto inv = inverse(c);
    double r = 0.0;
    for (auto p : pairs) r = std::max(r, std::abs(inv(p.first, p.second)));
    return r;
}

/// Recomputes the inverse of the completed matrix from scratch.
inline double verify_zero_pattern(const CompletionResult& r, const Topology& t) {
    const auto pairs = missing_pairs(t);
    return zero_pattern_residual(r.completed, pairs);
}

namespace detail {

// Pattern of determined entries during the initial fill.
class FillPattern {
public:
    explicit FillPattern(const Topology& t) : n_(t.node_count()), known_(n_ * n_, false) {
        for (auto e : t.edges()) mark(e);
    }

    bool known(std::size_t i, std::size_t j) const { return i == j || known_[i * n_ + j]; }
    void mark(NodePair p) { known_[p.first * n_ + p.second] = known_[p.second * n_ + p.first] = true; }

    std::vector<std::size_t> common_neighbors(NodePair p) const {
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < n_; ++k)
            if (k != p.first && k != p.second && known(p.first, k) && known(p.second, k)) out.push_back(k);
        return out;
    }

    bool is_clique(std::span<const std::size_t> nodes) const {
        for (std::size_t a = 0; a < nodes.size(); ++a)
            for (std::size_t b = a + 1; b < nodes.size(); ++b)
                if (!known(nodes[a], nodes[b])) return false;
        return true;
    }

    // True when every path from p.first to p.second passes through `cut`.
    bool separates(std::span<const std::size_t> cut, NodePair p) const {
        std::vector<bool> blocked(n_, false), seen(n_, false);
        for (auto k : cut) blocked[k] = true;
        std::deque<std::size_t> queue{p.first};
        seen[p.first] = true;
        while (!queue.empty()) {
            const auto v = queue.front();
            queue.pop_front();
            for (std::size_t w = 0; w < n_; ++w) {
                if (w == v || seen[w] || blocked[w] || !known(v, w)) continue;
                if (w == p.second) return false;
                seen[w] = true;
                queue.push_back(w);
            }
        }
        return true;
    }

    // Greedy clique among the common neighbors, in index order.
    std::vector<std::size_t> clique_subset(std::span<const std::size_t> nodes) const {
        std::vector<std::size_t> out;
        for (auto k : nodes)
            if (std::all_of(out.begin(), out.end(), [&](std::size_t m) { return known(k, m); }))
                out.push_back(k);
        return out;
    }

private:
    std::size_t n_;
    std::vector<bool> known_;
};

}  // namespace detail

/// Completes `p` whose known pattern must equal the edges of `t`.
///
/// Initial fill: missing pairs are taken in `missing_pairs` order, preferring
/// at each step the first pair whose common determined neighbors form a clique
/// separating its endpoints (adding such a pair keeps the determined pattern
/// chordal). Each pair is filled with its conditional value given that clique.
/// For chordal patterns this is already the exact maximum-entropy completion.
///
/// Refinement (non-chordal patterns, or on request): cyclic coordinate ascent
/// on log det, one missing entry at a time, until the largest entry change in
/// a sweep is below `tol` and the zero-pattern residual is at most `tol`.
inline CompletionResult complete(const PartialHermitian& p, const Topology& t,
                                 const CompletionConfig& config = {}) {
    if (!(config.tol > 0.0)) throw InvalidInputError("complete: tol must be > 0");
    if (config.max_iter < 1) throw InvalidInputError("complete: max_iter must be >= 1");
    if (!(p.topology() == t))
        throw InvalidInputError("complete: known pattern does not match topology " + to_string(t));

    for (auto e : t.edges())
        if (std::abs(p.values()(e.first, e.second)) >= 1.0 - PartialHermitian::kUnitSlack)
            throw InfeasiblePartialMatrixError("complete: known entry " + to_label(e) +
                                               " has unit magnitude; the completion would be singular");

    CompletionResult result;
    result.completed = p.values();
    auto& c = result.completed;
    const auto pairs = missing_pairs(t);
    result.chordal = is_chordal(t).chordal;

    detail::FillPattern pattern(t);
    std::vector<NodePair> pending = pairs;
    while (!pending.empty()) {
        auto chosen = pending.begin();
        std::vector<std::size_t> conditioning;
        bool found = false;
        for (auto it = pending.begin(); it != pending.end(); ++it) {
            auto common = pattern.common_neighbors(*it);
            if (pattern.is_clique(common) && pattern.separates(common, *it)) {
                chosen = it;
                conditioning = std::move(common);
                found = true;
                break;
            }
        }
        if (!found) conditioning = pattern.clique_subset(pattern.common_neighbors(*chosen));

        const NodePair pair = *chosen;
        try {
            c.set(pair.first, pair.second, conditional_entry(c, pair.first, pair.second, conditioning));
        } catch (const SubmatrixSingularError& e) {
            throw InfeasiblePartialMatrixError(std::string("complete: known entries admit no positive "
                                                           "definite completion (") + e.what() + ")");
        }
        pattern.mark(pair);
        pending.erase(chosen);
    }

    if (!cholesky(c))
        throw InfeasiblePartialMatrixError(
            pairs.empty() ? "complete: fully specified matrix is not positive definite"
                          : "complete: initial fill is not positive definite; known entries are "
                            "likely not completable");

    result.entropy_trace.push_back(log_det(c));
    result.zero_pattern_residual = zero_pattern_residual(c, pairs);

    const bool refine = !pairs.empty() &&
        (!result.chordal || config.force_refinement || result.zero_pattern_residual > config.tol);
    if (refine) {
        bool converged = false;
        while (result.iterations < config.max_iter) {
            double max_change = 0.0;
            for (auto pair : pairs) {
                const Complex updated = single_entry_update(c, pair);
                max_change = std::max(max_change, std::abs(updated - c(pair.first, pair.second)));
                c.set(pair.first, pair.second, updated);
            }
            ++result.iterations;
            result.entropy_trace.push_back(log_det(c));
            result.zero_pattern_residual = zero_pattern_residual(c, pairs);
            if (max_change < config.tol && result.zero_pattern_residual <= config.tol) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw ConvergenceError("complete: no convergence after " + std::to_string(config.max_iter) +
                                       " sweeps (residual " + std::to_string(result.zero_pattern_residual) + ")",
                                   result.zero_pattern_residual);
    }

    for (auto pair : pairs) result.surrogates.emplace(pair, c(pair.first, pair.second));
    result.entropy = result.entropy_trace.back();
    return result;
}

inline CompletionResult complete(const PartialHermitian& p, const CompletionConfig& config = {}) {
    return complete(p, p.topology(), config);
}

}  // namespace netgc
