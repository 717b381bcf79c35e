// qcap: capacity bounds for general bosonic attenuators and amplifiers.
//
//   qcap sweep --preset fig3a --oracle both --out fig3a.csv
//   qcap sweep --channel amplifier --kappa 1.02 --env thermal --nth 1 --n-grid 0:5:51
//   qcap consistency --builtin attenuator
//   qcap point --channel attenuator --tau 0.98 --env fock --fock-n 1 --n 1 --oracle fock
//
// Exit codes: 0 success, 1 usage error, 2 consistency failure, 3 truncation failure.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcap/config.hpp"
#include "qcap/qcap.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConsistency = 2;
constexpr int kExitTruncation = 3;

struct PointFlags {
    std::string config;
    std::string preset;
    std::string channel;
    double tau = 0.0;
    double kappa = 0.0;
    std::string env;
    double nth = 0.0;
    double r = 0.0;
    unsigned fock_n = 0;
    double ne = 0.0;
    double se = 0.0;
    std::string n_grid;
    std::string units;
    std::string oracle;
    long fock_dim = 0;
    std::string out;
};

void add_state_flags(CLI::App* cmd, PointFlags& f) {
    cmd->add_option("--channel", f.channel, "attenuator or amplifier");
    cmd->add_option("--tau", f.tau, "attenuator transmissivity in [0, 1]");
    cmd->add_option("--kappa", f.kappa, "amplifier gain >= 1");
    cmd->add_option("--env", f.env, "thermal, squeezed_thermal, fock or generic");
    cmd->add_option("--nth", f.nth, "thermal photons of the environment");
    cmd->add_option("--r", f.r, "squeezing parameter of the environment");
    cmd->add_option("--fock-n", f.fock_n, "photon number of a Fock environment");
    cmd->add_option("--ne", f.ne, "mean photon number of a generic environment");
    cmd->add_option("--se", f.se, "entropy (nats) of a generic environment");
    cmd->add_option("--units", f.units, "bits (default) or nats");
    cmd->add_option("--oracle", f.oracle, "none, gaussian, fock or both");
    cmd->add_option("--fock-dim", f.fock_dim, "fixed Fock truncation (disables adaptive doubling)");
    cmd->add_option("--out", f.out, "output file (default stdout)");
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw qcap::ConfigError("cannot open config file '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw qcap::ConfigError("invalid JSON in '" + path + "': " + e.what());
    }
}

/// File values first, then every flag given on the command line.
nlohmann::json merged_config(const CLI::App* cmd, const PointFlags& f) {
    nlohmann::json j = f.config.empty() ? nlohmann::json::object() : read_json(f.config);
    auto given = [cmd](const char* name) {
        const CLI::Option* opt = cmd->get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
    };
    if (given("--preset")) j["preset"] = f.preset;
    if (given("--channel")) j["channel"] = f.channel;
    if (given("--tau")) j["tau"] = f.tau;
    if (given("--kappa")) j["kappa"] = f.kappa;
    if (given("--env")) j["env"] = f.env;
    if (given("--nth")) j["nth"] = f.nth;
    if (given("--r")) j["r"] = f.r;
    if (given("--fock-n")) j["fock_n"] = f.fock_n;
    if (given("--ne")) j["ne"] = f.ne;
    if (given("--se")) j["se"] = f.se;
    if (given("--n-grid")) j["n_grid"] = f.n_grid;
    if (given("--units")) j["units"] = f.units;
    if (given("--oracle")) j["oracle"] = f.oracle;
    if (given("--fock-dim")) j["fock_dim"] = f.fock_dim;
    if (given("--out")) j["out"] = f.out;
    return j;
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw qcap::ConfigError("cannot write '" + path + "'");
    out << text;
}

int run_sweep_cmd(const CLI::App* cmd, const PointFlags& f) {
    const qcap::SweepConfig cfg = qcap::sweep_config_from_json(merged_config(cmd, f));
    const qcap::SweepResult res = qcap::run_sweep(cfg);
    emit(res.csv, cfg.out);
    if (res.any(qcap::Flag::truncation_failure)) {
        std::cerr << "qcap: Fock truncation failed on at least one row\n";
        return kExitTruncation;
    }
    if (res.attenuator_inconsistent()) {
        std::cerr << "qcap: attenuator rows violate the bound sandwich\n";
        return kExitConsistency;
    }
    return kExitOk;
}

int run_point_cmd(const CLI::App* cmd, const PointFlags& f, double n) {
    nlohmann::json j = merged_config(cmd, f);
    j["n_grid"] = "0:1:2";  // satisfies sweep validation; only the channel and environment are used
    const qcap::SweepConfig cfg = qcap::sweep_config_from_json(j);
    const qcap::BoundsReport r = qcap::bounds_report(cfg.channel, cfg.env, n, cfg.units, qcap::oracle_set(cfg.oracles),
                                                     qcap::fock_options(cfg.fock_dim));
    const qcap::EnvSummary s = qcap::env_summary(cfg.env);
    nlohmann::ordered_json out;
    out["channel"] = qcap::describe(r.channel);
    out["env"] = qcap::describe(r.env);
    out["N"] = r.n;
    out["N_E"] = s.n_e;
    out["S_E_nats"] = s.s_e;
    out["N_th"] = s.n_th;
    out["units"] = qcap::units_name(r.units);
    out["q_u1"] = r.q_u1;
    out["q_u2"] = r.q_u2;
    out["q_l"] = r.q_l;
    out["q_l_clamped"] = r.q_l_clamped;
    if (r.oracle_gaussian) out["i_c_gaussian"] = *r.oracle_gaussian;
    if (r.oracle_fock) out["i_c_fock"] = *r.oracle_fock;
    if (r.fock_tail_mass) out["tail_mass"] = *r.fock_tail_mass;
    if (r.fock_dim) out["fock_dim"] = *r.fock_dim;
    out["flags"] = nlohmann::json::array();
    for (qcap::Flag fl : r.flags)
        out["flags"].push_back(qcap::flag_token(fl));
    emit(out.dump(2) + "\n", cfg.out);
    if (r.has(qcap::Flag::truncation_failure))
        return kExitTruncation;
    return kExitOk;
}

int run_consistency_cmd(const std::string& grid_path, const std::string& builtin, const std::string& oracle, long fock_dim,
                        const std::string& out) {
    qcap::GridSpec grid;
    if (!grid_path.empty()) {
        grid = qcap::grid_spec_from_json(read_json(grid_path));
    } else if (builtin == "attenuator") {
        grid = qcap::attenuator_grid();
    } else if (builtin == "amplifier") {
        grid = qcap::amplifier_grid();
    } else {
        throw qcap::ConfigError("consistency needs --grid FILE or --builtin attenuator|amplifier");
    }
    if (!oracle.empty())
        grid.oracles = qcap::parse_oracle(oracle);
    if (fock_dim > 0)
        grid.fock_dim = fock_dim;
    const qcap::ConsistencyResult res = qcap::consistency_report(grid);
    emit(res.csv, out);
    if (!res.ok())
        return kExitConsistency;
    if (res.truncation_failures > 0)
        return kExitTruncation;
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy-constrained quantum capacity bounds for general bosonic attenuators and amplifiers"};
    app.require_subcommand(1);

    PointFlags sweep_flags;
    CLI::App* sweep = app.add_subcommand("sweep", "sweep the input energy and emit CSV");
    sweep->add_option("--config", sweep_flags.config, "JSON config file; flags override its values");
    sweep->add_option("--preset", sweep_flags.preset, "figure preset: fig2a ... fig5b");
    sweep->add_option("--n-grid", sweep_flags.n_grid, "input energies start:stop:count");
    add_state_flags(sweep, sweep_flags);

    PointFlags point_flags;
    double point_n = 0.0;
    CLI::App* point = app.add_subcommand("point", "bounds and oracles at a single input energy, as JSON");
    point->add_option("--config", point_flags.config, "JSON config file; flags override its values");
    point->add_option("--preset", point_flags.preset, "take channel and environment from a figure preset");
    point->add_option("--n", point_n, "input mean photon number")->required();
    add_state_flags(point, point_flags);

    std::string grid_path, builtin, cons_oracle, cons_out;
    long cons_fock_dim = 0;
    CLI::App* cons = app.add_subcommand("consistency", "check q_l <= I_c <= min(q_u1, q_u2) over a grid");
    cons->add_option("--grid", grid_path, "JSON grid spec");
    cons->add_option("--builtin", builtin, "attenuator or amplifier reference grid");
    cons->add_option("--oracle", cons_oracle, "gaussian, fock or both (default both)");
    cons->add_option("--fock-dim", cons_fock_dim, "fixed Fock truncation");
    cons->add_option("--out", cons_out, "output file (default stdout)");

    app.add_subcommand("presets", "list figure presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sweep->parsed())
            return run_sweep_cmd(sweep, sweep_flags);
        if (point->parsed())
            return run_point_cmd(point, point_flags, point_n);
        if (cons->parsed())
            return run_consistency_cmd(grid_path, builtin, cons_oracle, cons_fock_dim, cons_out);
        for (const auto& name : qcap::preset_names()) {
            const qcap::SweepConfig cfg = qcap::preset_config(name);
            std::cout << name << ": " << qcap::describe(cfg.channel) << ", " << qcap::describe(cfg.env) << '\n';
        }
        return kExitOk;
    } catch (const qcap::ConfigError& e) {
        std::cerr << "qcap: " << e.what() << '\n';
        return kExitUsage;
    } catch (const qcap::DomainError& e) {
        std::cerr << "qcap: " << e.what() << '\n';
        return kExitUsage;
    } catch (const qcap::UnsupportedOracle& e) {
        std::cerr << "qcap: " << e.what() << '\n';
        return kExitUsage;
    } catch (const qcap::TruncationError& e) {
        std::cerr << "qcap: " << e.what() << '\n';
        return kExitTruncation;
    }
}
