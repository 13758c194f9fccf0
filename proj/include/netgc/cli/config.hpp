#pragma once

// Experiment configuration (JSON).
//
//   {
//     "topologies": [{"name": "complete", "graph": "4: 1-2,1-3,1-4,2-3,2-4,3-4"}],
//     "samples": 64,
//     "snr_sweep_db": [-3, -4.5, -6],        // or "snr_db": scalar | per-node list
//     "snr_convention": "real_component",    // or "complex_sample"
//     "trials": 10000,
//     "master_seed": 20240101,
//     "completion": {"tol": 1e-10, "max_iter": 500},
//     "output_dir": "out",
//     "formats": ["csv", "json", "svg"],
//     "threads": 0,
//     "operating_pfa": 0.1
//   }
//
// "topology": "<graph>" is shorthand for a single topology named "network".
// Unknown keys are rejected. A manifest written by the tool is also accepted;
// its embedded "config" object is used.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "netgc/errors.hpp"
#include "netgc/maxent.hpp"
#include "netgc/simulate.hpp"
#include "netgc/topology.hpp"

namespace netgc::cli {

using json = nlohmann::json;

inline constexpr std::uint64_t kDefaultSeed = 1;

struct NamedTopology {
    std::string name;
    Topology topology;
};

/// One SNR scenario: a scalar broadcast to every node, or one value per node.
struct SnrSpec {
    std::optional<double> scalar;
    std::vector<double> per_node;

    std::vector<double> for_nodes(std::size_t m) const {
        if (scalar) return std::vector<double>(m, *scalar);
        if (per_node.size() != m)
            throw InvalidInputError("snr list has " + std::to_string(per_node.size()) + " entries for " +
                                    std::to_string(m) + " nodes");
        return per_node;
    }
};

struct ExperimentConfig {
    std::vector<NamedTopology> topologies;
    std::size_t samples = 64;
    std::vector<SnrSpec> snr;
    SnrConvention convention = SnrConvention::real_component;
    std::size_t trials = 1000;
    std::optional<std::uint64_t> master_seed;
    CompletionConfig completion;
    std::string output_dir = "out";
    std::set<std::string> formats{"csv", "json", "svg"};
    unsigned threads = 0;
    double operating_pfa = 0.1;

    std::uint64_t seed() const { return master_seed.value_or(kDefaultSeed); }
};

namespace detail {

inline void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, _] : j.items())
        if (!allowed.contains(key)) throw ParseError("config: unknown key '" + key + "' in " + where);
}

inline double snr_value(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string() && (j.get<std::string>() == "-inf" || j.get<std::string>() == "-Infinity"))
        return -std::numeric_limits<double>::infinity();
    throw ParseError("config: snr values must be numbers or \"-inf\"");
}

inline json snr_to_json(double v) {
    if (std::isinf(v)) return "-inf";
    return v;
}

inline SnrSpec parse_snr_spec(const json& j) {
    SnrSpec s;
    if (j.is_array()) {
        if (j.empty()) throw ParseError("config: empty per-node snr list");
        for (const auto& v : j) s.per_node.push_back(snr_value(v));
    } else {
        s.scalar = snr_value(j);
    }
    return s;
}

inline json snr_spec_to_json(const SnrSpec& s) {
    if (s.scalar) return snr_to_json(*s.scalar);
    json a = json::array();
    for (double v : s.per_node) a.push_back(snr_to_json(v));
    return a;
}

template <class T>
T get_checked(const json& j, const char* key) {
    if constexpr (std::is_unsigned_v<T>)
        if (!j.at(key).is_number_unsigned())
            throw ParseError(std::string("config: '") + key + "' must be a non-negative integer");
    if constexpr (std::is_floating_point_v<T>)
        if (!j.at(key).is_number()) throw ParseError(std::string("config: '") + key + "' must be a number");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ParseError(std::string("config: '") + key + "' has the wrong type");
    }
}

inline bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return false;
    return true;
}

}  // namespace detail

/// Parses and validates; every error is a ParseError (or InvalidInputError
/// for semantically invalid values) raised before any computation.
inline ExperimentConfig config_from_json(const json& root_in) {
    if (!root_in.is_object()) throw ParseError("config: top level must be an object");
    const json* root = &root_in;
    if (root_in.contains("manifest_version")) {
        detail::reject_unknown(root_in, {"manifest_version", "tool", "version", "command", "config", "runs", "links"},
                               "manifest");
        if (!root_in.contains("config") || !root_in["config"].is_object())
            throw ParseError("config: manifest lacks a 'config' object");
        root = &root_in["config"];
    }
    const json& j = *root;
    detail::reject_unknown(j,
                           {"topologies", "topology", "samples", "snr_db", "snr_sweep_db", "snr_convention", "trials",
                            "master_seed", "completion", "output_dir", "formats", "threads", "operating_pfa"},
                           "config");

    ExperimentConfig c;
    if (j.contains("topologies") == j.contains("topology"))
        throw ParseError("config: exactly one of 'topologies' or 'topology' is required");
    if (j.contains("topology")) {
        c.topologies.push_back({"network", parse_topology(detail::get_checked<std::string>(j, "topology"))});
    } else {
        if (!j["topologies"].is_array() || j["topologies"].empty())
            throw ParseError("config: 'topologies' must be a non-empty array");
        for (const auto& t : j["topologies"]) {
            if (!t.is_object()) throw ParseError("config: topology entries must be objects");
            detail::reject_unknown(t, {"name", "graph"}, "topology entry");
            if (!t.contains("name") || !t.contains("graph"))
                throw ParseError("config: topology entries need 'name' and 'graph'");
            const auto name = detail::get_checked<std::string>(t, "name");
            if (!detail::valid_name(name))
                throw ParseError("config: topology name '" + name + "' must match [A-Za-z0-9_.-]+");
            for (const auto& existing : c.topologies)
                if (existing.name == name) throw ParseError("config: duplicate topology name '" + name + "'");
            c.topologies.push_back({name, parse_topology(detail::get_checked<std::string>(t, "graph"))});
        }
    }

    if (j.contains("snr_db") == j.contains("snr_sweep_db"))
        throw ParseError("config: exactly one of 'snr_db' or 'snr_sweep_db' is required");
    if (j.contains("snr_db")) {
        c.snr.push_back(detail::parse_snr_spec(j["snr_db"]));
    } else {
        if (!j["snr_sweep_db"].is_array() || j["snr_sweep_db"].empty())
            throw ParseError("config: 'snr_sweep_db' must be a non-empty array");
        for (const auto& s : j["snr_sweep_db"]) c.snr.push_back(detail::parse_snr_spec(s));
    }

    if (j.contains("samples")) c.samples = detail::get_checked<std::size_t>(j, "samples");
    if (j.contains("trials")) c.trials = detail::get_checked<std::size_t>(j, "trials");
    if (j.contains("master_seed")) c.master_seed = detail::get_checked<std::uint64_t>(j, "master_seed");
    if (j.contains("output_dir")) c.output_dir = detail::get_checked<std::string>(j, "output_dir");
    if (j.contains("threads")) c.threads = detail::get_checked<unsigned>(j, "threads");
    if (j.contains("operating_pfa")) c.operating_pfa = detail::get_checked<double>(j, "operating_pfa");
    if (j.contains("snr_convention")) {
        const auto s = detail::get_checked<std::string>(j, "snr_convention");
        if (s == "complex_sample") c.convention = SnrConvention::complex_sample;
        else if (s == "real_component") c.convention = SnrConvention::real_component;
        else throw ParseError("config: snr_convention must be 'complex_sample' or 'real_component'");
    }
    if (j.contains("completion")) {
        const auto& cc = j["completion"];
        if (!cc.is_object()) throw ParseError("config: 'completion' must be an object");
        detail::reject_unknown(cc, {"tol", "max_iter"}, "completion");
        if (cc.contains("tol")) c.completion.tol = detail::get_checked<double>(cc, "tol");
        if (cc.contains("max_iter")) c.completion.max_iter = detail::get_checked<std::size_t>(cc, "max_iter");
    }
    if (j.contains("formats")) {
        c.formats.clear();
        for (const auto& f : j["formats"]) {
            if (!f.is_string()) throw ParseError("config: formats must be strings");
            const auto s = f.get<std::string>();
            if (s != "csv" && s != "json" && s != "svg") throw ParseError("config: unknown format '" + s + "'");
            c.formats.insert(s);
        }
    }

    if (c.samples < 1) throw InvalidInputError("config: samples must be >= 1");
    if (c.trials < 1) throw InvalidInputError("config: trials must be >= 1");
    if (!(c.completion.tol > 0.0)) throw InvalidInputError("config: completion.tol must be > 0");
    if (c.completion.max_iter < 1) throw InvalidInputError("config: completion.max_iter must be >= 1");
    if (!(c.operating_pfa > 0.0 && c.operating_pfa < 1.0))
        throw InvalidInputError("config: operating_pfa must lie in (0,1)");
    for (const auto& t : c.topologies)
        for (const auto& s : c.snr) {
            SignalModel m{c.samples, t.topology.node_count(), s.for_nodes(t.topology.node_count()), 0, c.convention};
            m.validate();
        }
    return c;
}

/// Canonical form; config_from_json(config_to_json(c)) reproduces c.
inline json config_to_json(const ExperimentConfig& c) {
    json j;
    j["topologies"] = json::array();
    for (const auto& t : c.topologies) j["topologies"].push_back({{"name", t.name}, {"graph", to_string(t.topology)}});
    j["samples"] = c.samples;
    j["snr_sweep_db"] = json::array();
    for (const auto& s : c.snr) j["snr_sweep_db"].push_back(detail::snr_spec_to_json(s));
    j["snr_convention"] = to_string(c.convention);
    j["trials"] = c.trials;
    j["master_seed"] = c.seed();
    j["completion"] = {{"tol", c.completion.tol}, {"max_iter", c.completion.max_iter}};
    j["output_dir"] = c.output_dir;
    j["formats"] = json(std::vector<std::string>(c.formats.begin(), c.formats.end()));
    j["threads"] = c.threads;
    j["operating_pfa"] = c.operating_pfa;
    return j;
}

inline ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("config: ") + e.what(), 0, 0);
    }
    return config_from_json(j);
}

}  // namespace netgc::cli
