#pragma once

// Generalized coherence (GC) statistic 1 - det G over a sensor network, with
// maximum-entropy surrogates for inner products between non-adjacent nodes.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "netgc/errors.hpp"
#include "netgc/maxent.hpp"
#include "netgc/numerics.hpp"
#include "netgc/topology.hpp"

namespace netgc {

/// One complex sample vector per node, all of the same length.
class ChannelData {
public:
    explicit ChannelData(std::vector<ComplexVector> channels) : channels_(std::move(channels)) {
        if (channels_.size() < 2) throw DimensionError("ChannelData: need at least 2 channels");
        for (std::size_t m = 0; m < channels_.size(); ++m) {
            if (channels_[m].size() != channels_[0].size())
                throw DimensionError("ChannelData: channel " + std::to_string(m + 1) + " has length " +
                                     std::to_string(channels_[m].size()) + ", expected " +
                                     std::to_string(channels_[0].size()));
            if (!(norm(channels_[m]) > 0.0))
                throw DegenerateInputError("ChannelData: channel " + std::to_string(m + 1) + " has zero norm");
        }
    }

    std::size_t channel_count() const noexcept { return channels_.size(); }
    std::size_t sample_count() const noexcept { return channels_[0].size(); }
    const ComplexVector& channel(std::size_t m) const { return channels_[m]; }
    const std::vector<ComplexVector>& channels() const noexcept { return channels_; }

private:
    std::vector<ComplexVector> channels_;
};

namespace detail {

inline std::vector<ComplexVector> normalized_channels(const ChannelData& d) {
    std::vector<ComplexVector> out;
    out.reserve(d.channel_count());
    for (const auto& x : d.channels()) out.push_back(normalize(x));
    return out;
}

// Cauchy-Schwarz bounds |<u,v>| by 1 for unit vectors; trim roundoff above it.
inline Complex unit_bounded(Complex g) {
    const double a = std::abs(g);
    return a > 1.0 ? g / a : g;
}

}  // namespace detail

/// Full normalized Gram matrix, entry (i,j) = <U_i, U_j>.
inline HermitianMatrix normalized_gram(const ChannelData& d) {
    const auto u = detail::normalized_channels(d);
    HermitianMatrix g = HermitianMatrix::identity(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = i + 1; j < u.size(); ++j) g.set(i, j, detail::unit_bounded(inner_product(u[i], u[j])));
    return g;
}

/// Normalized Gram entries for edges of `t` only; every other pair is missing.
inline PartialHermitian build_partial_gram(const ChannelData& d, const Topology& t) {
    if (t.node_count() != d.channel_count())
        throw DimensionError("build_partial_gram: topology has " + std::to_string(t.node_count()) +
                             " nodes but data has " + std::to_string(d.channel_count()) + " channels");
    const auto u = detail::normalized_channels(d);
    PartialHermitian p(t);
    for (auto e : t.edges())
        p.set_known(e.first, e.second, detail::unit_bounded(inner_product(u[e.first], u[e.second])));
    return p;
}

struct GcStatistic {
    double value = 0.0;     ///< 1 - gram_det, in [0, 1]
    double gram_det = 1.0;
    std::size_t surrogates_used = 0;
    std::optional<CompletionResult> completion;  ///< present when surrogates were needed
};

inline constexpr double kRoundoffGuard = 1e-12;

/// 1 - det of the normalized Gram matrix; missing inner products are replaced
/// by their maximum-entropy surrogates.
inline GcStatistic gc_statistic(const ChannelData& d, const Topology& t, const CompletionConfig& config = {}) {
    GcStatistic s;
    if (t.node_count() != d.channel_count())
        throw DimensionError("gc_statistic: topology/data size mismatch");
    if (t.is_complete()) {
        s.gram_det = det(normalized_gram(d));
    } else {
        s.completion = complete(build_partial_gram(d, t), t, config);
        s.surrogates_used = s.completion->surrogates.size();
        s.gram_det = det(s.completion->completed);
    }
    double value = 1.0 - s.gram_det;
    if (value < -kRoundoffGuard || value > 1.0 + kRoundoffGuard)
        throw InternalConsistencyError("gc_statistic: value " + std::to_string(value) + " outside [0,1]");
    s.value = std::clamp(value, 0.0, 1.0);
    return s;
}

enum class Decision { H0, H1 };

inline const char* to_string(Decision d) { return d == Decision::H1 ? "H1" : "H0"; }

/// H1 iff value > threshold; equality decides H0.
inline Decision gc_threshold_test(const GcStatistic& s, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0))
        throw InvalidThresholdError("gc_threshold_test: threshold must lie in [0,1]");
    return s.value > threshold ? Decision::H1 : Decision::H0;
}

}  // namespace netgc
