#pragma once

// Monte Carlo detection experiments: white circular complex Gaussian signal
// in white circular complex Gaussian noise, GC scores under both hypotheses,
// empirical ROC curves and per-link value reports.
//
// Reproducibility: every trial owns a generator seeded by
//   trial_seed(master, hypothesis, index)
//     = splitmix64(splitmix64(splitmix64(master) ^ (tag * 0x9E3779B97F4A7C15)) ^ index)
// with tag = 1 for H0 and 2 for H1. The generator is std::mt19937_64 (fully
// specified by the C++ standard). Normal variates come from the polar form of
// Box-Muller implemented here, since std::normal_distribution is not portable
// across standard libraries: with u1, u2 uniform on (0,1] built from the top
// 53 bits of successive draws, z = sqrt(-ln u1) * exp(2*pi*i*u2) is circular
// complex Gaussian with E|z|^2 = 1.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "netgc/coherence.hpp"
#include "netgc/errors.hpp"
#include "netgc/maxent.hpp"
#include "netgc/numerics.hpp"
#include "netgc/topology.hpp"

namespace netgc {

enum class Hypothesis { H0, H1 };

/// How an SNR in dB maps to the signal variance sigma_s^2 per complex sample,
/// with noise fixed at unit variance per complex sample (1/2 per component).
enum class SnrConvention {
    /// sigma_s^2 = 10^(snr/10): signal power over complex-sample noise power.
    complex_sample,
    /// sigma_s^2 = 10^(snr/10) / 2: signal power over the noise power of one
    /// real component (equivalently, noise with unit-variance real and
    /// imaginary parts).
    real_component,
};

inline const char* to_string(SnrConvention c) {
    return c == SnrConvention::complex_sample ? "complex_sample" : "real_component";
}

struct SignalModel {
    std::size_t samples = 64;       ///< N, samples per channel
    std::size_t nodes = 4;          ///< M
    std::vector<double> snr_db;     ///< per node; -infinity means no signal
    std::uint64_t master_seed = 0;
    SnrConvention convention = SnrConvention::real_component;

    static SignalModel equal_snr(std::size_t samples, std::size_t nodes, double snr_db, std::uint64_t seed,
                                 SnrConvention convention = SnrConvention::real_component) {
        return {samples, nodes, std::vector<double>(nodes, snr_db), seed, convention};
    }

    /// sigma_m, the signal amplitude at node m.
    double amplitude(std::size_t m) const {
        const double scale = convention == SnrConvention::complex_sample ? 1.0 : 0.5;
        return std::sqrt(scale * std::pow(10.0, snr_db[m] / 10.0));
    }

    void validate() const {
        if (samples < 1) throw InvalidInputError("SignalModel: samples must be >= 1");
        if (nodes < 2) throw InvalidInputError("SignalModel: nodes must be >= 2");
        if (snr_db.size() != nodes)
            throw InvalidInputError("SignalModel: snr_db must have one entry per node");
        for (double s : snr_db)
            if (std::isnan(s) || s == std::numeric_limits<double>::infinity())
                throw InvalidInputError("SignalModel: snr_db entries must be finite or -inf");
    }
};

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t trial_seed(std::uint64_t master, Hypothesis h, std::uint64_t index) noexcept {
    const std::uint64_t tag = h == Hypothesis::H0 ? 1 : 2;
    return splitmix64(splitmix64(splitmix64(master) ^ (tag * 0x9E3779B97F4A7C15ULL)) ^ index);
}

class ComplexGaussianSource {
public:
    explicit ComplexGaussianSource(std::uint64_t seed) : engine_(seed) {}

    Complex operator()() {
        const double u1 = unit();
        const double u2 = unit();
        const double r = std::sqrt(-std::log(u1));
        const double phase = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(phase), r * std::sin(phase)};
    }

private:
    // Uniform on (0, 1].
    double unit() { return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53; }

    std::mt19937_64 engine_;
};

/// H0: X_m = n_m. H1: X_m = sigma_m * s + n_m with a common unit-power signal
/// s drawn once per trial (before the noise), sigma_m from the SNR convention.
/// Unit noise power per complex sample.
inline ChannelData generate_trial(const SignalModel& model, Hypothesis h, std::uint64_t trial_index) {
    model.validate();
    ComplexGaussianSource source(trial_seed(model.master_seed, h, trial_index));
    std::vector<Complex> signal;
    if (h == Hypothesis::H1) {
        signal.resize(model.samples);
        for (auto& z : signal) z = source();
    }
    std::vector<ComplexVector> channels;
    channels.reserve(model.nodes);
    for (std::size_t m = 0; m < model.nodes; ++m) {
        const double amplitude = h == Hypothesis::H1 ? model.amplitude(m) : 0.0;
        std::vector<Complex> x(model.samples);
        for (std::size_t k = 0; k < model.samples; ++k) {
            x[k] = source();
            if (amplitude > 0.0) x[k] += amplitude * signal[k];
        }
        channels.emplace_back(std::move(x));
    }
    return ChannelData(std::move(channels));
}

struct BatchDiagnostics {
    std::size_t surrogates_filled = 0;   ///< summed over successful trials
    std::size_t max_sweeps = 0;
    double max_residual = 0.0;
    std::vector<std::string> failure_messages;  ///< first few, for reporting
};

struct TrialBatch {
    std::size_t trials = 0;  ///< requested per hypothesis
    std::vector<double> h0_scores;  ///< successful trials, in trial-index order
    std::vector<double> h1_scores;
    std::size_t h0_excluded = 0;
    std::size_t h1_excluded = 0;
    BatchDiagnostics diagnostics;

    double exclusion_rate() const {
        return trials == 0 ? 0.0 : static_cast<double>(h0_excluded + h1_excluded) / (2.0 * trials);
    }
};

struct BatchOptions {
    unsigned threads = 0;  ///< 0 selects std::thread::hardware_concurrency()
    double max_exclusion_rate = 0.01;
};

namespace detail {

struct TrialOutcome {
    std::optional<double> score;
    std::size_t surrogates = 0;
    std::size_t sweeps = 0;
    double residual = 0.0;
    std::string failure;
};

template <class Fn>
void parallel_for_index(std::size_t count, unsigned threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) fn(i);
        });
}

}  // namespace detail

/// GC scores for `trials` H0 and `trials` H1 realizations. Trials that fail
/// numerically are excluded and counted; more than `max_exclusion_rate`
/// exclusions fail the batch. Output depends only on the inputs, not on the
/// thread count.
inline TrialBatch run_batch(const SignalModel& model, const Topology& t, std::size_t trials,
                            const CompletionConfig& config = {}, const BatchOptions& options = {}) {
    model.validate();
    if (trials < 1) throw InvalidInputError("run_batch: trials must be >= 1");
    if (t.node_count() != model.nodes) throw DimensionError("run_batch: topology/model node count mismatch");

    std::vector<detail::TrialOutcome> outcomes(2 * trials);
    detail::parallel_for_index(outcomes.size(), options.threads, [&](std::size_t slot) {
        const Hypothesis h = slot < trials ? Hypothesis::H0 : Hypothesis::H1;
        const std::size_t index = slot % trials;
        auto& out = outcomes[slot];
        try {
            const auto s = gc_statistic(generate_trial(model, h, index), t, config);
            out.score = s.value;
            out.surrogates = s.surrogates_used;
            if (s.completion) {
                out.sweeps = s.completion->iterations;
                out.residual = s.completion->zero_pattern_residual;
            }
        } catch (const Error& e) {
            out.failure = e.what();
        }
    });

    TrialBatch batch;
    batch.trials = trials;
    batch.h0_scores.reserve(trials);
    batch.h1_scores.reserve(trials);
    for (std::size_t slot = 0; slot < outcomes.size(); ++slot) {
        const auto& out = outcomes[slot];
        const bool null = slot < trials;
        if (!out.score) {
            (null ? batch.h0_excluded : batch.h1_excluded) += 1;
            if (batch.diagnostics.failure_messages.size() < 5)
                batch.diagnostics.failure_messages.push_back(out.failure);
            continue;
        }
        (null ? batch.h0_scores : batch.h1_scores).push_back(*out.score);
        batch.diagnostics.surrogates_filled += out.surrogates;
        batch.diagnostics.max_sweeps = std::max(batch.diagnostics.max_sweeps, out.sweeps);
        batch.diagnostics.max_residual = std::max(batch.diagnostics.max_residual, out.residual);
    }
    if (batch.exclusion_rate() > options.max_exclusion_rate)
        throw BatchFailureError("run_batch: " + std::to_string(batch.h0_excluded + batch.h1_excluded) +
                                " of " + std::to_string(2 * trials) + " trials failed" +
                                (batch.diagnostics.failure_messages.empty()
                                     ? std::string()
                                     : " (first: " + batch.diagnostics.failure_messages.front() + ")"));
    return batch;
}

struct RocPoint {
    double threshold = 0.0;
    double pfa = 0.0;
    double pd = 0.0;
};

struct RocCurve {
    std::vector<RocPoint> points;  ///< increasing threshold
    double auc = 0.0;
};

namespace detail {

// Fraction of sorted scores strictly above t.
inline double exceedance(const std::vector<double>& sorted, double t) {
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t);
    return static_cast<double>(above) / static_cast<double>(sorted.size());
}

}  // namespace detail

/// Thresholds are {0, 1} plus every distinct score. Detection uses the same
/// strict rule as gc_threshold_test (score > threshold). The AUC integrates
/// the polyline from (1,1) through every point, trapezoidally.
inline RocCurve roc_from_scores(std::vector<double> h0, std::vector<double> h1) {
    if (h0.empty() || h1.empty()) throw InvalidInputError("roc_from_scores: empty score list");
    std::sort(h0.begin(), h0.end());
    std::sort(h1.begin(), h1.end());
    std::vector<double> thresholds{0.0, 1.0};
    thresholds.insert(thresholds.end(), h0.begin(), h0.end());
    thresholds.insert(thresholds.end(), h1.begin(), h1.end());
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

    RocCurve curve;
    curve.points.reserve(thresholds.size());
    for (double t : thresholds) curve.points.push_back({t, detail::exceedance(h0, t), detail::exceedance(h1, t)});

    double prev_pfa = 1.0, prev_pd = 1.0;
    for (const auto& p : curve.points) {
        curve.auc += (prev_pfa - p.pfa) * 0.5 * (prev_pd + p.pd);
        prev_pfa = p.pfa;
        prev_pd = p.pd;
    }
    return curve;
}

inline RocCurve roc_from_scores(const TrialBatch& b) { return roc_from_scores(b.h0_scores, b.h1_scores); }

/// Detection probability at false-alarm rate `pfa`, interpolating linearly
/// along the ROC polyline (anchored at (1,1)). On a vertical segment the
/// larger pd is returned.
inline double pd_at_pfa(const RocCurve& curve, double pfa) {
    if (!(pfa >= 0.0 && pfa <= 1.0)) throw InvalidInputError("pd_at_pfa: pfa must lie in [0,1]");
    RocPoint prev{-std::numeric_limits<double>::infinity(), 1.0, 1.0};
    for (const auto& p : curve.points) {
        if (prev.pfa >= pfa && p.pfa <= pfa) {
            if (prev.pfa == p.pfa) return prev.pd;
            const double w = (prev.pfa - pfa) / (prev.pfa - p.pfa);
            return prev.pd + w * (p.pd - prev.pd);
        }
        prev = p;
    }
    return prev.pd;
}

/// Standard error of an empirical proportion p over n trials.
inline double binomial_sigma(double p, std::size_t n) {
    return n == 0 ? 0.0 : std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw InvalidInputError("ks_statistic: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
    }
    return d;
}

struct LinkValue {
    NodePair edge;
    bool critical = false;  ///< removing the edge disconnects the network
    double pd_base = 0.0;
    double pd_reduced = 0.0;
    double pd_gain = 0.0;   ///< pd_base - pd_reduced at the operating pfa
    double auc_gain = 0.0;
    double pd_gain_sigma = 0.0;  ///< binomial standard error of pd_gain (independent-sample bound)
};

/// Value of each link: the detection gain it provides over replacing its
/// inner product by the maximum-entropy surrogate. Both curves are built from
/// the same trial realizations.
inline std::vector<LinkValue> link_value_report(const SignalModel& model, const Topology& base, std::size_t trials,
                                                const CompletionConfig& config = {},
                                                const BatchOptions& options = {}, double operating_pfa = 0.1) {
    const auto base_roc = roc_from_scores(run_batch(model, base, trials, config, options));
    const double pd_base = pd_at_pfa(base_roc, operating_pfa);
    std::vector<LinkValue> report;
    for (auto e : base.edges()) {
        LinkValue v;
        v.edge = e;
        const auto reduced = base.without_edge(e);
        if (!is_connected(reduced)) {
            v.critical = true;
            report.push_back(v);
            continue;
        }
        const auto batch = run_batch(model, reduced, trials, config, options);
        const auto roc = roc_from_scores(batch);
        v.pd_base = pd_base;
        v.pd_reduced = pd_at_pfa(roc, operating_pfa);
        v.pd_gain = v.pd_base - v.pd_reduced;
        v.auc_gain = base_roc.auc - roc.auc;
        v.pd_gain_sigma = std::hypot(binomial_sigma(v.pd_base, trials), binomial_sigma(v.pd_reduced, trials));
        report.push_back(v);
    }
    return report;
}

}  // namespace netgc
