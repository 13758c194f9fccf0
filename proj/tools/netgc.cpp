// netgc: generalized-coherence detection on partially connected sensor networks.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "netgc/cli/commands.hpp"

namespace {

std::set<std::string> split_formats(const std::string& text) {
    std::set<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item != "csv" && item != "json" && item != "svg")
            throw netgc::ParseError("--format: unknown format '" + item + "'");
        out.insert(item);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace netgc::cli;

    CLI::App app{"Generalized coherence detection with maximum-entropy surrogates"};
    app.set_version_flag("--version", NETGC_VERSION);
    app.require_subcommand(1);

    GcOptions gc;
    double tol = gc.completion.tol;
    std::size_t max_iter = gc.completion.max_iter;
    std::optional<double> threshold;
    std::optional<std::string> topology;
    auto* gc_cmd = app.add_subcommand("gc", "GC statistic of channel files (one `re im` sample per line)");
    gc_cmd->add_option("files", gc.files, "channel data files, node order 1..M")->required();
    gc_cmd->add_option("-t,--topology", topology, "network graph, e.g. \"3: 1-3,2-3\" (default: complete)");
    gc_cmd->add_option("--tol", tol, "completion tolerance");
    gc_cmd->add_option("--max-iter", max_iter, "completion refinement sweeps");
    gc_cmd->add_option("--threshold", threshold, "decide H0/H1 against this threshold");

    RunOptions run;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> formats;
    std::optional<unsigned> threads;
    auto add_run_flags = [&](CLI::App* cmd) {
        cmd->add_option("--config", run.config_path, "experiment config (JSON) or a previous manifest")->required();
        cmd->add_option("--out", out_dir, "output directory (overrides config)");
        cmd->add_option("--seed", seed, "master seed (overrides config and COHERENCE_SEED)");
        cmd->add_option("--format", formats, "comma-separated subset of csv,json,svg");
        cmd->add_option("--threads", threads, "worker threads (0: hardware concurrency)");
    };
    auto* roc_cmd = app.add_subcommand("roc", "Monte Carlo ROC curves per topology and SNR");
    add_run_flags(roc_cmd);
    auto* link_cmd = app.add_subcommand("link-value", "Per-link detection gain over its surrogate");
    add_run_flags(link_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kInputError;
    }

    if (*gc_cmd) {
        gc.topology = topology;
        gc.threshold = threshold;
        gc.completion.tol = tol;
        gc.completion.max_iter = max_iter;
        return run_gc(gc, std::cout, std::cerr);
    }

    try {
        if (formats) run.formats = split_formats(*formats);
    } catch (const std::exception& e) {
        return report_error(std::cerr, e);
    }
    run.out_dir = out_dir;
    run.seed = seed;
    run.threads = threads;
    run.env_seed = std::getenv("COHERENCE_SEED");
    if (*roc_cmd) return run_roc(run, std::cout, std::cerr);
    return run_link_value(run, std::cout, std::cerr);
}
