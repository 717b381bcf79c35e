#pragma once

// Energy-constrained quantum-capacity bounds for attenuators and amplifiers
// with arbitrary environments.
//
// Every formula depends on the environment only through its mean photon
// number N_E and entropy S_E (nats); N_th = g^{-1}(S_E). Upper bounds come from
// the maximal output entropy minus a conditional entropy-power lower bound
// on the complementary output, in linear (q_u1) or exponential (q_u2) form.
// Lower bounds are the coherent information of a thermal input, bounded with
// the thermal Gaussian optimizer for the output and Gaussian maximality for
// the complement.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qcap/channel.hpp"
#include "qcap/entropy.hpp"
#include "qcap/environment.hpp"
#include "qcap/error.hpp"
#include "qcap/fock.hpp"
#include "qcap/gaussian.hpp"

namespace qcap {

namespace detail {

inline void require_photons(double n) {
    if (!(n >= 0.0) || !std::isfinite(n))
        throw DomainError("input mean photon number must be finite and >= 0, got " + std::to_string(n));
}

inline void require_tau(double tau) { validate(ChannelSpec{Attenuator{tau}}); }
inline void require_kappa(double kappa) { validate(ChannelSpec{Amplifier{kappa}}); }

} // namespace detail

// ---------------------------------------------------------------------------
// Attenuator

/// g(tau N + (1-tau) N_E) - (1-tau) S_E
inline double attenuator_q_u1(double tau, double n, const EnvSummary& env) {
    detail::require_tau(tau);
    detail::require_photons(n);
    return g_nats(tau * n + (1.0 - tau) * env.n_e) - (1.0 - tau) * env.s_e;
}

/// g(tau N + (1-tau) N_E) - ln((1-tau) + tau e^{-S_E}) - S_E
inline double attenuator_q_u2(double tau, double n, const EnvSummary& env) {
    detail::require_tau(tau);
    detail::require_photons(n);
    // ln((1-tau) + tau e^{-S}) written so that S = 0 gives exactly 0.
    return g_nats(tau * n + (1.0 - tau) * env.n_e) - std::log1p(tau * std::expm1(-env.s_e)) - env.s_e;
}

/// g((1-tau) N_th + tau N) - g((1-tau) N + tau N_E) - S_E
inline double attenuator_q_l(double tau, double n, const EnvSummary& env) {
    detail::require_tau(tau);
    detail::require_photons(n);
    return g_nats((1.0 - tau) * env.n_th + tau * n) - g_nats((1.0 - tau) * n + tau * env.n_e) - env.s_e;
}

inline double attenuator_q_u1(double tau, double n, const EnvironmentModel& env) { return attenuator_q_u1(tau, n, env_summary(env)); }
inline double attenuator_q_u2(double tau, double n, const EnvironmentModel& env) { return attenuator_q_u2(tau, n, env_summary(env)); }
inline double attenuator_q_l(double tau, double n, const EnvironmentModel& env) { return attenuator_q_l(tau, n, env_summary(env)); }

// ---------------------------------------------------------------------------
// Amplifier

/// g(kappa N + (kappa-1)(N_E+1)) - (kappa-1)/(2 kappa-1) S_E - ln(2 kappa-1)
inline double amplifier_q_u1(double kappa, double n, const EnvSummary& env) {
    detail::require_kappa(kappa);
    detail::require_photons(n);
    return g_nats(kappa * n + (kappa - 1.0) * (env.n_e + 1.0)) - (kappa - 1.0) / (2.0 * kappa - 1.0) * env.s_e -
           std::log(2.0 * kappa - 1.0);
}

/// g(kappa N + (kappa-1)(N_E+1)) - ln(kappa-1 + kappa e^{-S_E}) - S_E
inline double amplifier_q_u2(double kappa, double n, const EnvSummary& env) {
    detail::require_kappa(kappa);
    detail::require_photons(n);
    // ln(kappa-1 + kappa e^{-S}) = ln(2 kappa-1) + ln(1 + kappa (e^{-S} - 1) / (2 kappa-1))
    const double mix = std::log(2.0 * kappa - 1.0) + std::log1p(kappa * std::expm1(-env.s_e) / (2.0 * kappa - 1.0));
    return g_nats(kappa * n + (kappa - 1.0) * (env.n_e + 1.0)) - mix - env.s_e;
}

/// g((kappa-1) N_th + kappa (N+1)) - g((kappa-1) N + kappa (N_E+1)) - S_E
///
/// The photon-number arguments are used as stated; each is one photon
/// above the corresponding <b^dag b> of the two-mode squeezer (see
/// amplifier_photon_offsets).
inline double amplifier_q_l(double kappa, double n, const EnvSummary& env) {
    detail::require_kappa(kappa);
    detail::require_photons(n);
    return g_nats((kappa - 1.0) * env.n_th + kappa * (n + 1.0)) - g_nats((kappa - 1.0) * n + kappa * (env.n_e + 1.0)) - env.s_e;
}

inline double amplifier_q_u1(double kappa, double n, const EnvironmentModel& env) { return amplifier_q_u1(kappa, n, env_summary(env)); }
inline double amplifier_q_u2(double kappa, double n, const EnvironmentModel& env) { return amplifier_q_u2(kappa, n, env_summary(env)); }
inline double amplifier_q_l(double kappa, double n, const EnvironmentModel& env) { return amplifier_q_l(kappa, n, env_summary(env)); }

// ---------------------------------------------------------------------------

struct BoundValues {
    double q_u1;
    double q_u2;
    double q_l;
};

/// All three bounds for a channel, in nats.
inline BoundValues evaluate_bounds(const ChannelSpec& channel, double n, const EnvSummary& env) {
    validate(channel);
    if (const auto* att = std::get_if<Attenuator>(&channel))
        return {attenuator_q_u1(att->tau, n, env), attenuator_q_u2(att->tau, n, env), attenuator_q_l(att->tau, n, env)};
    const double kappa = std::get<Amplifier>(channel).kappa;
    return {amplifier_q_u1(kappa, n, env), amplifier_q_u2(kappa, n, env), amplifier_q_l(kappa, n, env)};
}

/// Amplifier lower-bound arguments minus the photon numbers of the
/// actual Gaussian dilation, computed from covariance matrices.
struct AmplifierPhotonOffsets {
    double output;          ///< (kappa-1) N_th + kappa (N+1) - <b^dag b> with a thermal N_th environment
    double weak_complement; ///< (kappa-1) N + kappa (N_E+1) - <f^dag f>
};

inline AmplifierPhotonOffsets amplifier_photon_offsets(double kappa, double n, const EnvSummary& env) {
    detail::require_kappa(kappa);
    detail::require_photons(n);
    const ChannelSpec ch = Amplifier{kappa};
    const CovarianceMatrix out_th = dilation_output({ch, thermal_cov(env.n_th), n});
    // <f^dag f> is linear in second moments, so any state of energy N_E gives the thermal value.
    const CovarianceMatrix out_e = dilation_output({ch, thermal_cov(env.n_e), n});
    return {(kappa - 1.0) * env.n_th + kappa * (n + 1.0) - mean_photon(partial_trace_cov(out_th, {1})),
            (kappa - 1.0) * n + kappa * (env.n_e + 1.0) - mean_photon(partial_trace_cov(out_e, {2}))};
}

// ---------------------------------------------------------------------------
// Reports

enum class Flag {
    lower_above_upper,       ///< q_l > min(q_u1, q_u2) + 1e-9 nats
    gaussian_oracle_outside, ///< Gaussian I_c outside [q_l - tol, min(q_u) + tol]
    fock_oracle_outside,     ///< Fock I_c outside [q_l - tol, min(q_u) + tol]
    oracle_unavailable,      ///< requested oracle cannot represent the environment
    truncation_failure,      ///< Fock oracle could not reach an acceptable truncation
    truncation_tail,         ///< Fock oracle ran with boundary mass above the target
};

inline const char* flag_token(Flag f) {
    switch (f) {
    case Flag::lower_above_upper: return "LOWER_ABOVE_UPPER";
    case Flag::gaussian_oracle_outside: return "GAUSSIAN_ORACLE_OUTSIDE";
    case Flag::fock_oracle_outside: return "FOCK_ORACLE_OUTSIDE";
    case Flag::oracle_unavailable: return "ORACLE_UNAVAILABLE";
    case Flag::truncation_failure: return "TRUNCATION_FAILURE";
    case Flag::truncation_tail: return "TRUNCATION_TAIL";
    }
    return "UNKNOWN";
}

inline constexpr Flag kAllFlags[] = {Flag::lower_above_upper, Flag::gaussian_oracle_outside, Flag::fock_oracle_outside,
                                     Flag::oracle_unavailable, Flag::truncation_failure, Flag::truncation_tail};

/// Sandwich tolerances, in bits.
inline constexpr double kGaussianOracleTolBits = 1e-3;
inline constexpr double kFockOracleTolBits = 0.02;

struct OracleSet {
    bool gaussian = false;
    bool fock = false;
};

inline bool supports_gaussian_oracle(const EnvironmentModel& env) { return is_gaussian(env); }
inline bool supports_fock_oracle(const EnvironmentModel& env) { return !std::holds_alternative<Generic>(env); }

inline CovarianceMatrix env_covariance(const EnvironmentModel& env) {
    if (const auto* th = std::get_if<Thermal>(&env))
        return thermal_cov(th->n_th);
    if (const auto* sq = std::get_if<SqueezedThermal>(&env))
        return squeezed_thermal_cov(sq->n_th, sq->r);
    throw UnsupportedOracle("the Gaussian oracle needs a Gaussian environment; use the Fock oracle for " + describe(env));
}

struct BoundsReport {
    ChannelSpec channel;
    EnvironmentModel env;
    double n = 0.0;
    Units units = Units::bits;
    double q_u1 = 0.0;
    double q_u2 = 0.0;
    double q_l = 0.0;
    double q_l_clamped = 0.0;
    std::optional<double> oracle_gaussian;
    std::optional<double> oracle_fock;
    std::optional<double> fock_tail_mass;
    std::optional<Eigen::Index> fock_dim;
    std::vector<Flag> flags;

    double q_u_min() const { return std::min(q_u1, q_u2); }
    bool has(Flag f) const { return std::find(flags.begin(), flags.end(), f) != flags.end(); }
};

inline bool within_sandwich(double value, const BoundsReport& r, double tol_bits) {
    const double tol = r.units == Units::bits ? tol_bits : tol_bits * std::numbers::ln2;
    return value >= r.q_l - tol && value <= r.q_u_min() + tol;
}

/// Evaluates the bounds for one point and optionally the coherent-information
/// oracles. A truncation failure is recorded as a flag rather than thrown.
inline BoundsReport bounds_report(const ChannelSpec& channel, const EnvironmentModel& env, double n, Units units = Units::bits,
                                  OracleSet oracles = {}, const FockOptions& fock_opts = {}) {
    validate(channel);
    detail::require_photons(n);
    const EnvSummary summary = env_summary(env);
    if (oracles.gaussian && !supports_gaussian_oracle(env))
        throw UnsupportedOracle("Gaussian oracle requested for non-Gaussian environment " + describe(env) +
                                (supports_fock_oracle(env) ? "; use the Fock oracle" : ""));
    if (oracles.fock && !supports_fock_oracle(env))
        throw UnsupportedOracle("Fock oracle requested for " + describe(env) + ", which has no state representation");

    const BoundValues nats = evaluate_bounds(channel, n, summary);
    BoundsReport r;
    r.channel = channel;
    r.env = env;
    r.n = n;
    r.units = units;
    r.q_u1 = to_units(nats.q_u1, units);
    r.q_u2 = to_units(nats.q_u2, units);
    r.q_l = to_units(nats.q_l, units);
    r.q_l_clamped = std::max(0.0, r.q_l);

    if (nats.q_l > std::min(nats.q_u1, nats.q_u2) + 1e-9)
        r.flags.push_back(Flag::lower_above_upper);

    if (oracles.gaussian) {
        r.oracle_gaussian = to_units(gaussian_coherent_information({channel, env_covariance(env), n}), units);
        if (!within_sandwich(*r.oracle_gaussian, r, kGaussianOracleTolBits))
            r.flags.push_back(Flag::gaussian_oracle_outside);
    }
    if (oracles.fock) {
        try {
            const OracleResult res = coherent_information_fock(channel, env, n, fock_opts);
            r.oracle_fock = to_units(res.i_c, units);
            r.fock_tail_mass = res.tail_mass;
            r.fock_dim = res.dim_used;
            if (res.tail_mass > fock_opts.target_tail)
                r.flags.push_back(Flag::truncation_tail);
            if (!within_sandwich(*r.oracle_fock, r, kFockOracleTolBits))
                r.flags.push_back(Flag::fock_oracle_outside);
        } catch (const TruncationError&) {
            r.flags.push_back(Flag::truncation_failure);
        }
    }
    return r;
}

} // namespace qcap
