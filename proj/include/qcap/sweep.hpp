#pragma once

// Parameter sweeps over the input energy, figure presets and the sandwich
// consistency harness. All output is CSV: comma separated, dot decimal,
// header row, preceded by '#' comment lines starting with "# schema=1".

#include <algorithm>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qcap/bounds.hpp"

namespace qcap {

inline constexpr int kCsvSchema = 1;

enum class OracleChoice { none, gaussian, fock, both };

inline OracleSet oracle_set(OracleChoice c) {
    return {c == OracleChoice::gaussian || c == OracleChoice::both, c == OracleChoice::fock || c == OracleChoice::both};
}

inline const char* oracle_choice_name(OracleChoice c) {
    switch (c) {
    case OracleChoice::none: return "none";
    case OracleChoice::gaussian: return "gaussian";
    case OracleChoice::fock: return "fock";
    case OracleChoice::both: return "both";
    }
    return "none";
}

struct EnergyGrid {
    double start = 0.0;
    double stop = 5.0;
    int count = 101;

    double at(int i) const {
        if (i == count - 1)
            return stop;
        return start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
};

struct SweepConfig {
    ChannelSpec channel = Attenuator{1.0};
    EnvironmentModel env = Thermal{0.0};
    EnergyGrid n_grid;
    Units units = Units::bits;
    OracleChoice oracles = OracleChoice::none;
    std::optional<Eigen::Index> fock_dim;
    /// Concrete stand-in state on which the oracles run, with its own bounds.
    std::optional<EnvironmentModel> oracle_env;
    std::string out;
};

inline void validate(const SweepConfig& cfg) {
    validate(cfg.channel);
    validate(cfg.env);
    if (cfg.oracle_env)
        validate(*cfg.oracle_env);
    const EnergyGrid& g = cfg.n_grid;
    if (!(g.start >= 0.0) || !std::isfinite(g.stop) || !(g.stop > g.start) || g.count < 2)
        throw DomainError("energy grid needs start >= 0, stop > start and count >= 2");
    if (cfg.fock_dim && *cfg.fock_dim < 2)
        throw DomainError("fock dimension must be >= 2");
}

inline std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

inline std::string format_optional(const std::optional<double>& x) { return x ? format_number(*x) : std::string(); }

/// Runs body(i) for i in [0, n) on worker threads; body writes only to slot i.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
    const std::size_t workers = std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers)
                    body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : pool)
        t.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

inline FockOptions fock_options(const std::optional<Eigen::Index>& fock_dim) {
    FockOptions opts;
    if (fock_dim) {
        opts.initial_dim = *fock_dim;
        opts.adaptive = false;
    }
    return opts;
}

namespace detail {

inline bool fock_oracle_in_range(const ChannelSpec& ch, double n, const FockOptions& opts) {
    if (const auto* amp = std::get_if<Amplifier>(&ch))
        return amp->kappa <= opts.kappa_max && n <= opts.max_amplifier_input;
    return true;
}

inline void append_unique(std::vector<Flag>& flags, Flag f) {
    if (std::find(flags.begin(), flags.end(), f) == flags.end())
        flags.push_back(f);
}

inline std::string join_flags(const std::vector<Flag>& flags) {
    std::string s;
    for (Flag f : flags) {
        if (!s.empty())
            s += '|';
        s += flag_token(f);
    }
    return s;
}

inline std::string flag_legend() {
    std::string s = "# flags:";
    for (Flag f : kAllFlags) {
        s += ' ';
        s += flag_token(f);
    }
    return s;
}

} // namespace detail

struct SweepRow {
    BoundsReport report;
    std::optional<double> oracle_q_l;      ///< bounds of the stand-in oracle environment
    std::optional<double> oracle_q_u_min;
};

struct SweepResult {
    std::string csv;
    std::vector<SweepRow> rows;

    bool any(Flag f) const {
        return std::any_of(rows.begin(), rows.end(), [f](const SweepRow& r) { return r.report.has(f); });
    }

    /// Attenuator rows whose oracle leaves the bound sandwich or whose bounds cross.
    bool attenuator_inconsistent() const {
        return std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) {
            return is_attenuator(r.report.channel) &&
                   (r.report.has(Flag::lower_above_upper) || r.report.has(Flag::gaussian_oracle_outside) ||
                    r.report.has(Flag::fock_oracle_outside));
        });
    }
};

/// Evaluates one grid point, degrading unavailable oracles to flags.
inline SweepRow evaluate_row(const SweepConfig& cfg, double n) {
    const OracleSet wanted = oracle_set(cfg.oracles);
    const FockOptions fopts = fock_options(cfg.fock_dim);
    const EnvironmentModel& oracle_env = cfg.oracle_env ? *cfg.oracle_env : cfg.env;

    OracleSet run;
    run.gaussian = wanted.gaussian && supports_gaussian_oracle(oracle_env);
    run.fock = wanted.fock && supports_fock_oracle(oracle_env) && detail::fock_oracle_in_range(cfg.channel, n, fopts);
    const bool missing = (wanted.gaussian && !run.gaussian) || (wanted.fock && !run.fock);

    SweepRow row;
    row.report = bounds_report(cfg.channel, cfg.env, n, cfg.units, cfg.oracle_env ? OracleSet{} : run, fopts);
    if (cfg.oracle_env && (run.gaussian || run.fock)) {
        const BoundsReport sub = bounds_report(cfg.channel, oracle_env, n, cfg.units, run, fopts);
        row.report.oracle_gaussian = sub.oracle_gaussian;
        row.report.oracle_fock = sub.oracle_fock;
        row.report.fock_tail_mass = sub.fock_tail_mass;
        row.report.fock_dim = sub.fock_dim;
        row.oracle_q_l = sub.q_l;
        row.oracle_q_u_min = sub.q_u_min();
        for (Flag f : sub.flags)
            if (f != Flag::lower_above_upper)
                detail::append_unique(row.report.flags, f);
    }
    if (missing)
        detail::append_unique(row.report.flags, Flag::oracle_unavailable);
    return row;
}

inline std::string describe(const SweepConfig& cfg) {
    std::string s = "# channel=" + describe(cfg.channel) + "; env=" + describe(cfg.env) + "; units=" + units_name(cfg.units) +
                    "; oracles=" + oracle_choice_name(cfg.oracles);
    if (cfg.fock_dim)
        s += "; fock_dim=" + std::to_string(*cfg.fock_dim);
    if (cfg.oracle_env)
        s += "; oracle_env=" + describe(*cfg.oracle_env);
    return s;
}

/// One CSV row per grid energy; rows are evaluated in parallel and emitted in grid order.
inline SweepResult run_sweep(const SweepConfig& cfg) {
    validate(cfg);
    SweepResult result;
    result.rows.resize(static_cast<std::size_t>(cfg.n_grid.count));
    parallel_for(result.rows.size(), [&](std::size_t i) {
        result.rows[i] = evaluate_row(cfg, cfg.n_grid.at(static_cast<int>(i)));
    });

    const OracleSet wanted = oracle_set(cfg.oracles);
    const bool substituted = cfg.oracle_env && (wanted.gaussian || wanted.fock);
    std::ostringstream os;
    os << "# schema=" << kCsvSchema << '\n' << describe(cfg) << '\n' << detail::flag_legend() << '\n';
    os << "N,q_u1,q_u2,q_l,q_l_clamped";
    if (wanted.gaussian)
        os << ",i_c_gaussian";
    if (wanted.fock)
        os << ",i_c_fock,tail_mass";
    if (substituted)
        os << ",oracle_q_l,oracle_q_u_min";
    os << ",flags\n";
    for (const SweepRow& row : result.rows) {
        const BoundsReport& r = row.report;
        os << format_number(r.n) << ',' << format_number(r.q_u1) << ',' << format_number(r.q_u2) << ','
           << format_number(r.q_l) << ',' << format_number(r.q_l_clamped);
        if (wanted.gaussian)
            os << ',' << format_optional(r.oracle_gaussian);
        if (wanted.fock)
            os << ',' << format_optional(r.oracle_fock) << ',' << format_optional(r.fock_tail_mass);
        if (substituted)
            os << ',' << format_optional(row.oracle_q_l) << ',' << format_optional(row.oracle_q_u_min);
        os << ',' << detail::join_flags(r.flags) << '\n';
    }
    result.csv = os.str();
    return result;
}

// ---------------------------------------------------------------------------
// Figure presets

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b", "fig5a", "fig5b"};
    return names;
}

/// Parameters of each figure preset, on N in [0, 5] with 101 points.
inline SweepConfig preset_config(const std::string& name) {
    SweepConfig cfg;
    cfg.n_grid = {0.0, 5.0, 101};
    const char panel = name.size() == 5 ? name[4] : '\0';
    if (panel == 'a')
        cfg.channel = Attenuator{name == "fig2a" ? 0.99 : 0.98};
    else
        cfg.channel = Amplifier{1.02};

    if (name == "fig2a" || name == "fig2b") {
        cfg.env = Thermal{1.0};
    } else if (name == "fig3a" || name == "fig3b") {
        cfg.env = SqueezedThermal{0.01, 0.1};
    } else if (name == "fig4a" || name == "fig4b") {
        // A pure state with N_E = 0.2; no Fock state has that energy, so oracles run on |1>.
        cfg.env = Generic{0.2, 0.0};
        cfg.oracle_env = Fock{1};
    } else if (name == "fig5a" || name == "fig5b") {
        cfg.env = Generic{3.0, g_nats(2.0)};
    } else {
        std::string valid;
        for (const auto& n : preset_names())
            valid += (valid.empty() ? "" : ", ") + n;
        throw DomainError("unknown preset '" + name + "'; valid presets: " + valid);
    }
    return cfg;
}

inline SweepResult run_preset(const std::string& name, OracleChoice oracles = OracleChoice::none) {
    SweepConfig cfg = preset_config(name);
    cfg.oracles = oracles;
    return run_sweep(cfg);
}

// ---------------------------------------------------------------------------
// Consistency report

struct GridSpec {
    std::vector<ChannelSpec> channels;
    std::vector<EnvironmentModel> envs;
    std::vector<double> n_values;
    OracleChoice oracles = OracleChoice::both;
    std::optional<Eigen::Index> fock_dim;
};

/// tau in {0.6, 0.9, 0.98, 0.99} x {thermal 1, squeezed thermal (0.01, 0.1), Fock 1} x N in {0.5, 1, 2, 5}.
inline GridSpec attenuator_grid() {
    GridSpec g;
    for (double tau : {0.6, 0.9, 0.98, 0.99})
        g.channels.push_back(Attenuator{tau});
    g.envs = {Thermal{1.0}, SqueezedThermal{0.01, 0.1}, Fock{1}};
    g.n_values = {0.5, 1.0, 2.0, 5.0};
    return g;
}

/// kappa in {1.01, 1.02, 1.1} x thermal 1 x N in {0.5, 1, 2}.
inline GridSpec amplifier_grid() {
    GridSpec g;
    for (double kappa : {1.01, 1.02, 1.1})
        g.channels.push_back(Amplifier{kappa});
    g.envs = {Thermal{1.0}};
    g.n_values = {0.5, 1.0, 2.0};
    return g;
}

struct ConsistencyRow {
    ChannelSpec channel;
    EnvironmentModel env;
    double n = 0.0;
    std::string oracle;              ///< "gaussian" or "fock"
    std::optional<double> i_c;       ///< bits; empty on truncation failure
    double q_l = 0.0;                ///< bits
    double q_u_min = 0.0;            ///< bits
    double tolerance = 0.0;          ///< bits
    bool pass = false;
    std::optional<AmplifierPhotonOffsets> photon_offsets;
    std::optional<double> tail_mass;
    std::optional<Eigen::Index> dim;

    double lower_gap() const { return i_c ? *i_c - q_l : 0.0; }
    double upper_gap() const { return i_c ? q_u_min - *i_c : 0.0; }
};

struct ConsistencyResult {
    std::string csv;
    std::vector<ConsistencyRow> rows;
    std::size_t attenuator_failures = 0;
    std::size_t truncation_failures = 0;
    std::size_t amplifier_lower_violations = 0;
    std::size_t amplifier_upper_violations = 0;
    double max_amplifier_lower_violation = 0.0;  ///< bits
    double max_amplifier_upper_violation = 0.0;  ///< bits

    bool ok() const { return attenuator_failures == 0; }
};

/// Checks q_l <= I_c <= min(q_u1, q_u2) for every grid point and available oracle.
/// Attenuator failures are hard failures; amplifier rows only record magnitudes.
inline ConsistencyResult consistency_report(const GridSpec& grid) {
    struct Task {
        ChannelSpec channel;
        EnvironmentModel env;
        double n;
        bool gaussian;
    };
    const OracleSet wanted = oracle_set(grid.oracles);
    const FockOptions fopts = fock_options(grid.fock_dim);
    std::vector<Task> tasks;
    for (const auto& ch : grid.channels)
        for (const auto& env : grid.envs)
            for (double n : grid.n_values) {
                if (wanted.gaussian && supports_gaussian_oracle(env))
                    tasks.push_back({ch, env, n, true});
                if (wanted.fock && supports_fock_oracle(env) && detail::fock_oracle_in_range(ch, n, fopts))
                    tasks.push_back({ch, env, n, false});
            }

    ConsistencyResult result;
    result.rows.resize(tasks.size());
    parallel_for(tasks.size(), [&](std::size_t i) {
        const Task& t = tasks[i];
        const OracleSet one{t.gaussian, !t.gaussian};
        const BoundsReport rep = bounds_report(t.channel, t.env, t.n, Units::bits, one, fopts);
        ConsistencyRow row;
        row.channel = t.channel;
        row.env = t.env;
        row.n = t.n;
        row.oracle = t.gaussian ? "gaussian" : "fock";
        row.i_c = t.gaussian ? rep.oracle_gaussian : rep.oracle_fock;
        row.q_l = rep.q_l;
        row.q_u_min = rep.q_u_min();
        row.tolerance = t.gaussian ? kGaussianOracleTolBits : kFockOracleTolBits;
        row.pass = row.i_c && within_sandwich(*row.i_c, rep, row.tolerance);
        row.tail_mass = rep.fock_tail_mass;
        row.dim = rep.fock_dim;
        if (const auto* amp = std::get_if<Amplifier>(&t.channel))
            row.photon_offsets = amplifier_photon_offsets(amp->kappa, t.n, env_summary(t.env));
        result.rows[i] = std::move(row);
    });

    std::ostringstream os;
    os << "# schema=" << kCsvSchema << '\n'
       << "# sandwich check q_l - tol <= i_c <= min(q_u1, q_u2) + tol, all values in bits\n"
       << "channel,param,env,N,oracle,i_c,q_l,q_u_min,lower_gap,upper_gap,tolerance,pass,output_photon_offset,"
          "wc_photon_offset,tail_mass,dim\n";
    for (const ConsistencyRow& r : result.rows) {
        const bool att = is_attenuator(r.channel);
        if (!r.i_c)
            ++result.truncation_failures;
        else if (att && !r.pass)
            ++result.attenuator_failures;
        if (!att && r.i_c) {
            const double lower = r.q_l - *r.i_c;
            const double upper = *r.i_c - r.q_u_min;
            if (lower > r.tolerance)
                ++result.amplifier_lower_violations;
            if (upper > r.tolerance)
                ++result.amplifier_upper_violations;
            result.max_amplifier_lower_violation = std::max(result.max_amplifier_lower_violation, lower);
            result.max_amplifier_upper_violation = std::max(result.max_amplifier_upper_violation, upper);
        }
        os << (att ? "attenuator" : "amplifier") << ',' << format_number(channel_parameter(r.channel)) << ','
           << '"' << describe(r.env) << '"' << ',' << format_number(r.n) << ',' << r.oracle << ','
           << format_optional(r.i_c) << ',' << format_number(r.q_l) << ',' << format_number(r.q_u_min) << ','
           << (r.i_c ? format_number(r.lower_gap()) : "") << ',' << (r.i_c ? format_number(r.upper_gap()) : "") << ','
           << format_number(r.tolerance) << ',' << (r.i_c ? (r.pass ? "pass" : "fail") : "truncation") << ','
           << (r.photon_offsets ? format_number(r.photon_offsets->output) : "") << ','
           << (r.photon_offsets ? format_number(r.photon_offsets->weak_complement) : "") << ','
           << format_optional(r.tail_mass) << ',' << (r.dim ? std::to_string(*r.dim) : "") << '\n';
    }
    os << "# points=" << result.rows.size() << " attenuator_failures=" << result.attenuator_failures
       << " truncation_failures=" << result.truncation_failures
       << " amplifier_lower_violations=" << result.amplifier_lower_violations
       << " amplifier_upper_violations=" << result.amplifier_upper_violations
       << " max_amplifier_lower_violation_bits=" << format_number(result.max_amplifier_lower_violation)
       << " max_amplifier_upper_violation_bits=" << format_number(result.max_amplifier_upper_violation) << '\n';
    result.csv = os.str();
    return result;
}

} // namespace qcap
