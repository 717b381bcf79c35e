#pragma once

// JSON configuration for sweeps and consistency grids.
//
// Sweep configs are flat objects whose keys mirror the command-line flags:
//   {"channel": "attenuator", "tau": 0.98, "env": "squeezed_thermal",
//    "nth": 0.01, "r": 0.1, "n_grid": "0:5:101", "units": "bits",
//    "oracle": "both", "fock_dim": 32, "preset": "fig3a", "out": "f.csv"}
// A preset, when present, supplies the starting point and every other key
// overrides it.
//
// Grid specs list channels and environments as objects:
//   {"channels": [{"type": "attenuator", "tau": 0.9}],
//    "envs": [{"type": "thermal", "nth": 1}, {"type": "fock", "n": 1}],
//    "n": [0.5, 1, 2], "oracle": "both"}

#include <string>

#include <json.hpp>

#include "qcap/sweep.hpp"

namespace qcap {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline double number_at(const nlohmann::json& j, const char* key) {
    if (!j.contains(key))
        throw ConfigError(std::string("missing key '") + key + "'");
    if (!j.at(key).is_number())
        throw ConfigError(std::string("key '") + key + "' must be a number");
    return j.at(key).get<double>();
}

inline std::string string_at(const nlohmann::json& j, const char* key) {
    if (!j.at(key).is_string())
        throw ConfigError(std::string("key '") + key + "' must be a string");
    return j.at(key).get<std::string>();
}

inline ChannelSpec channel_from(const nlohmann::json& j, const std::string& type) {
    if (type == "attenuator")
        return Attenuator{number_at(j, "tau")};
    if (type == "amplifier")
        return Amplifier{number_at(j, "kappa")};
    throw ConfigError("unknown channel '" + type + "' (expected attenuator or amplifier)");
}

inline EnvironmentModel env_from(const nlohmann::json& j, const std::string& type) {
    if (type == "thermal")
        return Thermal{number_at(j, "nth")};
    if (type == "squeezed_thermal")
        return SqueezedThermal{number_at(j, "nth"), number_at(j, "r")};
    if (type == "fock") {
        const double n = number_at(j, "fock_n");
        if (n < 0 || n != static_cast<double>(static_cast<unsigned>(n)))
            throw ConfigError("fock_n must be a non-negative integer");
        return Fock{static_cast<unsigned>(n)};
    }
    if (type == "generic")
        return Generic{number_at(j, "ne"), number_at(j, "se")};
    throw ConfigError("unknown environment '" + type + "' (expected thermal, squeezed_thermal, fock or generic)");
}

} // namespace detail

/// "start:stop:count"
inline EnergyGrid parse_grid(const std::string& text) {
    EnergyGrid g;
    char tail = '\0';
    if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &g.start, &g.stop, &g.count, &tail) != 3)
        throw ConfigError("energy grid must look like start:stop:count, got '" + text + "'");
    return g;
}

inline Units parse_units(const std::string& s) {
    if (s == "bits")
        return Units::bits;
    if (s == "nats")
        return Units::nats;
    throw ConfigError("units must be bits or nats, got '" + s + "'");
}

inline OracleChoice parse_oracle(const std::string& s) {
    if (s == "none")
        return OracleChoice::none;
    if (s == "gaussian")
        return OracleChoice::gaussian;
    if (s == "fock")
        return OracleChoice::fock;
    if (s == "both")
        return OracleChoice::both;
    throw ConfigError("oracle must be none, gaussian, fock or both, got '" + s + "'");
}

/// Builds a sweep config from flat keys; see the header comment for the schema.
inline SweepConfig sweep_config_from_json(const nlohmann::json& j) {
    if (!j.is_object())
        throw ConfigError("sweep config must be a JSON object");
    SweepConfig cfg;
    const bool has_preset = j.contains("preset");
    if (has_preset)
        cfg = preset_config(detail::string_at(j, "preset"));

    if (j.contains("channel")) {
        cfg.channel = detail::channel_from(j, detail::string_at(j, "channel"));
    } else if (j.contains("tau") || j.contains("kappa")) {
        if (!has_preset)
            throw ConfigError("'tau'/'kappa' given without 'channel'");
        cfg.channel = is_attenuator(cfg.channel) ? ChannelSpec{Attenuator{detail::number_at(j, "tau")}}
                                                 : ChannelSpec{Amplifier{detail::number_at(j, "kappa")}};
    } else if (!has_preset) {
        throw ConfigError("missing key 'channel' (or 'preset')");
    }

    if (j.contains("env")) {
        cfg.env = detail::env_from(j, detail::string_at(j, "env"));
        cfg.oracle_env.reset();
    } else if (!has_preset) {
        throw ConfigError("missing key 'env' (or 'preset')");
    }

    if (j.contains("n_grid")) {
        const auto& g = j.at("n_grid");
        if (g.is_string())
            cfg.n_grid = parse_grid(g.get<std::string>());
        else
            cfg.n_grid = {detail::number_at(g, "start"), detail::number_at(g, "stop"),
                          static_cast<int>(detail::number_at(g, "count"))};
    }
    if (j.contains("units"))
        cfg.units = parse_units(detail::string_at(j, "units"));
    if (j.contains("oracle"))
        cfg.oracles = parse_oracle(detail::string_at(j, "oracle"));
    if (j.contains("fock_dim"))
        cfg.fock_dim = static_cast<Eigen::Index>(detail::number_at(j, "fock_dim"));
    if (j.contains("out"))
        cfg.out = detail::string_at(j, "out");
    validate(cfg);
    return cfg;
}

inline GridSpec grid_spec_from_json(const nlohmann::json& j) {
    if (!j.is_object())
        throw ConfigError("grid spec must be a JSON object");
    GridSpec g;
    for (const auto& c : j.value("channels", nlohmann::json::array()))
        g.channels.push_back(detail::channel_from(c, detail::string_at(c, "type")));
    for (const auto& e : j.value("envs", nlohmann::json::array())) {
        nlohmann::json flat = e;
        if (flat.contains("n") && !flat.contains("fock_n"))
            flat["fock_n"] = flat["n"];
        g.envs.push_back(detail::env_from(flat, detail::string_at(e, "type")));
    }
    for (const auto& n : j.value("n", nlohmann::json::array())) {
        if (!n.is_number())
            throw ConfigError("grid 'n' entries must be numbers");
        g.n_values.push_back(n.get<double>());
    }
    if (j.contains("oracle"))
        g.oracles = parse_oracle(detail::string_at(j, "oracle"));
    if (j.contains("fock_dim"))
        g.fock_dim = static_cast<Eigen::Index>(detail::number_at(j, "fock_dim"));
    for (const auto& ch : g.channels)
        validate(ch);
    for (const auto& env : g.envs)
        validate(env);
    return g;
}

} // namespace qcap
