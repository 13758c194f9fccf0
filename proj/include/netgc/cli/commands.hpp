#pragma once

// Subcommand implementations. Each returns a process exit code:
// 0 ok, 2 input/parse error, 3 numerical infeasibility, 4 I/O failure.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "netgc/cli/config.hpp"
#include "netgc/cli/io.hpp"
#include "netgc/cli/svg.hpp"
#include "netgc/coherence.hpp"
#include "netgc/errors.hpp"
#include "netgc/maxent.hpp"
#include "netgc/simulate.hpp"
#include "netgc/topology.hpp"

#ifndef NETGC_VERSION
#define NETGC_VERSION "0.0.0"
#endif

namespace netgc::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kInfeasible = 3, kIoFailure = 4 };

/// Maps an exception from the library to an exit code, printing the message.
inline int report_error(std::ostream& err, const std::exception& e) {
    if (dynamic_cast<const IoError*>(&e)) {
        err << "error: " << e.what() << "\n";
        return kIoFailure;
    }
    if (auto* p = dynamic_cast<const ParseError*>(&e)) {
        err << "error: " << p->what();
        if (p->line() > 0) err << " (line " << p->line() << ", column " << p->column() << ")";
        err << "\n";
        return kInputError;
    }
    if (dynamic_cast<const InvalidInputError*>(&e) || dynamic_cast<const DimensionError*>(&e) ||
        dynamic_cast<const DegenerateInputError*>(&e) || dynamic_cast<const InvalidPermutationError*>(&e) ||
        dynamic_cast<const InvalidThresholdError*>(&e)) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
    if (auto* c = dynamic_cast<const ConvergenceError*>(&e)) {
        err << "error: " << c->what() << "; last zero-pattern residual " << c->last_residual() << "\n";
        return kInfeasible;
    }
    if (dynamic_cast<const Error*>(&e)) {
        err << "error: " << e.what()
            << "\n  the known inner products admit no well-conditioned maximum-entropy completion\n";
        return kInfeasible;
    }
    err << "error: " << e.what() << "\n";
    return kInfeasible;
}

/// Unsigned 64-bit decimal, or nullopt.
inline std::optional<std::uint64_t> parse_seed(const std::string& text) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
    return v;
}

/// Seed precedence: --seed flag, then config, then COHERENCE_SEED, then the default.
inline void apply_seed_precedence(ExperimentConfig& c, std::optional<std::uint64_t> flag,
                                  const char* env_value) {
    if (flag) {
        c.master_seed = flag;
        return;
    }
    if (c.master_seed) return;
    if (env_value) {
        const auto v = parse_seed(env_value);
        if (!v) throw ParseError(std::string("COHERENCE_SEED is not an unsigned 64-bit integer: '") + env_value + "'");
        c.master_seed = v;
    }
}

// ---------------------------------------------------------------------------
// gc

struct GcOptions {
    std::vector<std::string> files;
    std::optional<std::string> topology;  ///< complete graph when absent
    CompletionConfig completion;
    std::optional<double> threshold;
};

inline int run_gc(const GcOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        std::vector<ComplexVector> channels;
        for (const auto& f : opt.files) channels.push_back(read_channel_file(f));
        ChannelData data(std::move(channels));
        const Topology t = opt.topology ? parse_topology(*opt.topology) : Topology::complete(data.channel_count());
        if (t.node_count() != data.channel_count())
            throw InvalidInputError("topology has " + std::to_string(t.node_count()) + " nodes but " +
                                    std::to_string(data.channel_count()) + " channel files were given");
        if (!is_connected(t))
            err << "warning: topology is disconnected; cross-component surrogates are zero\n";
        if (t.is_complete()) {
            const auto g = normalized_gram(data);
            for (auto e : t.edges())
                if (std::abs(g(e.first, e.second)) >= 1.0 - PartialHermitian::kUnitSlack)
                    err << "warning: channels " << to_label(e)
                        << " are perfectly coherent; the Gram matrix is singular (infeasible for completion)\n";
        }

        const auto s = gc_statistic(data, t, opt.completion);
        out << "channels: " << data.channel_count() << "\n";
        out << "samples: " << data.sample_count() << "\n";
        out << "topology: " << to_string(t) << "\n";
        out << "gc_value: " << format_number(s.value) << "\n";
        out << "gram_det: " << format_number(s.gram_det) << "\n";
        out << "surrogates: " << s.surrogates_used << "\n";
        if (s.completion) {
            for (const auto& [pair, value] : s.completion->surrogates)
                out << "surrogate " << to_label(pair) << ": " << format_number(value.real()) << " "
                    << format_number(value.imag()) << "\n";
            out << "zero_pattern_residual: " << format_number(verify_zero_pattern(*s.completion, t)) << "\n";
            out << "refinement_sweeps: " << s.completion->iterations << "\n";
            out << "entropy: " << format_number(s.completion->entropy) << "\n";
        } else {
            out << "zero_pattern_residual: " << format_number(0.0) << "\n";
        }
        if (opt.threshold)
            out << "decision: " << to_string(gc_threshold_test(s, *opt.threshold)) << " (threshold "
                << format_number(*opt.threshold) << ")\n";
        return kOk;
    } catch (const std::exception& e) {
        return report_error(err, e);
    }
}

// ---------------------------------------------------------------------------
// roc

inline std::string roc_csv(const RocCurve& curve) {
    std::string s = "threshold,pfa,pd\n";
    for (const auto& p : curve.points)
        s += format_number(p.threshold) + "," + format_number(p.pfa) + "," + format_number(p.pd) + "\n";
    return s;
}

inline std::string snr_label(const SnrSpec& s, std::size_t index) {
    if (s.scalar) return std::isinf(*s.scalar) ? "-inf" : format_short(*s.scalar);
    return "scenario" + std::to_string(index + 1);
}

inline std::string roc_file_name(const std::string& topology, const SnrSpec& s, std::size_t index) {
    return "roc_" + topology + "_snr" + snr_label(s, index) + ".csv";
}

struct RunOptions {
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::set<std::string>> formats;
    std::optional<unsigned> threads;
    const char* env_seed = nullptr;
};

inline ExperimentConfig load_run_config(const RunOptions& opt) {
    std::ifstream in(opt.config_path);
    if (!in) throw ParseError("cannot read config file " + opt.config_path);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    auto c = parse_config(text);
    apply_seed_precedence(c, opt.seed, opt.env_seed);
    if (opt.out_dir) c.output_dir = *opt.out_dir;
    if (opt.formats) c.formats = *opt.formats;
    if (opt.threads) c.threads = *opt.threads;
    return c;
}

inline nlohmann::json manifest_header(const ExperimentConfig& c, const char* command) {
    return {{"manifest_version", 1},
            {"tool", "netgc"},
            {"version", NETGC_VERSION},
            {"command", command},
            {"config", config_to_json(c)}};
}

/// Runs every (topology, snr) pair and returns the files to write.
inline std::vector<std::pair<std::string, std::string>> roc_outputs(const ExperimentConfig& c, std::ostream& log) {
    std::vector<std::pair<std::string, std::string>> files;
    auto manifest = manifest_header(c, "roc");
    manifest["runs"] = nlohmann::json::array();
    std::vector<SvgCurve> curves;
    const BatchOptions batch_options{c.threads};

    for (std::size_t k = 0; k < c.snr.size(); ++k)
        for (const auto& nt : c.topologies) {
            const std::size_t m = nt.topology.node_count();
            const SignalModel model{c.samples, m, c.snr[k].for_nodes(m), c.seed(), c.convention};
            const auto batch = run_batch(model, nt.topology, c.trials, c.completion, batch_options);
            const auto roc = roc_from_scores(batch);
            const auto name = roc_file_name(nt.name, c.snr[k], k);
            if (c.formats.contains("csv")) files.emplace_back(name, roc_csv(roc));
            manifest["runs"].push_back({{"topology", nt.name},
                                        {"graph", to_string(nt.topology)},
                                        {"snr_db", detail::snr_spec_to_json(c.snr[k])},
                                        {"file", name},
                                        {"auc", roc.auc},
                                        {"pd_at_operating_pfa", pd_at_pfa(roc, c.operating_pfa)},
                                        {"trials", c.trials},
                                        {"h0_excluded", batch.h0_excluded},
                                        {"h1_excluded", batch.h1_excluded},
                                        {"max_refinement_sweeps", batch.diagnostics.max_sweeps},
                                        {"max_zero_pattern_residual", batch.diagnostics.max_residual},
                                        {"master_seed", c.seed()}});
            curves.push_back({nt.name + " @ " + snr_label(c.snr[k], k) + " dB", roc, k, nt.name});
            log << "roc " << nt.name << " snr " << snr_label(c.snr[k], k) << ": auc " << format_number(roc.auc)
                << ", pd@pfa" << format_short(c.operating_pfa) << " "
                << format_number(pd_at_pfa(roc, c.operating_pfa)) << ", excluded "
                << batch.h0_excluded + batch.h1_excluded << "\n";
        }
    if (c.formats.contains("json")) files.emplace_back("manifest.json", manifest.dump(2) + "\n");
    if (c.formats.contains("svg")) files.emplace_back("roc.svg", render_roc_svg(curves));
    return files;
}

inline int run_roc(const RunOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        const auto c = load_run_config(opt);
        ensure_writable_directory(c.output_dir);
        const auto files = roc_outputs(c, out);
        write_files_atomically(c.output_dir, files);
        for (const auto& f : files) out << "wrote " << (std::filesystem::path(c.output_dir) / f.first).string() << "\n";
        return kOk;
    } catch (const std::exception& e) {
        return report_error(err, e);
    }
}

// ---------------------------------------------------------------------------
// link-value

inline std::vector<std::pair<std::string, std::string>> link_value_outputs(const ExperimentConfig& c,
                                                                           std::ostream& log) {
    if (c.topologies.size() != 1 || c.snr.size() != 1)
        throw InvalidInputError("link-value: config must name exactly one topology and one snr scenario");
    const auto& base = c.topologies.front().topology;
    if (!is_connected(base)) throw InvalidInputError("link-value: topology must be connected");
    const std::size_t m = base.node_count();
    const SignalModel model{c.samples, m, c.snr.front().for_nodes(m), c.seed(), c.convention};
    const auto report = link_value_report(model, base, c.trials, c.completion, BatchOptions{c.threads}, c.operating_pfa);

    std::string csv = "edge,pd_gain_at_pfa" + format_short(c.operating_pfa) + ",auc_gain,critical\n";
    auto manifest = manifest_header(c, "link-value");
    manifest["links"] = nlohmann::json::array();
    for (const auto& v : report) {
        if (v.critical) {
            csv += to_label(v.edge) + ",,,true\n";
            manifest["links"].push_back({{"edge", to_label(v.edge)}, {"critical", true}});
        } else {
            csv += to_label(v.edge) + "," + format_number(v.pd_gain) + "," + format_number(v.auc_gain) + ",false\n";
            manifest["links"].push_back({{"edge", to_label(v.edge)},
                                         {"critical", false},
                                         {"pd_base", v.pd_base},
                                         {"pd_reduced", v.pd_reduced},
                                         {"pd_gain", v.pd_gain},
                                         {"pd_gain_sigma", v.pd_gain_sigma},
                                         {"auc_gain", v.auc_gain}});
        }
        log << "link " << to_label(v.edge) << ": "
            << (v.critical ? std::string("critical (removal disconnects)") : "pd gain " + format_number(v.pd_gain))
            << "\n";
    }
    std::vector<std::pair<std::string, std::string>> files;
    if (c.formats.contains("csv")) files.emplace_back("link_value.csv", csv);
    if (c.formats.contains("json")) files.emplace_back("link_value_manifest.json", manifest.dump(2) + "\n");
    return files;
}

inline int run_link_value(const RunOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        const auto c = load_run_config(opt);
        ensure_writable_directory(c.output_dir);
        const auto files = link_value_outputs(c, out);
        write_files_atomically(c.output_dir, files);
        for (const auto& f : files) out << "wrote " << (std::filesystem::path(c.output_dir) / f.first).string() << "\n";
        return kOk;
    } catch (const std::exception& e) {
        return report_error(err, e);
    }
}

}  // namespace netgc::cli
