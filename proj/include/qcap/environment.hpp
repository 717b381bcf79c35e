#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <variant>

#include "qcap/entropy.hpp"
#include "qcap/error.hpp"

namespace qcap {

struct Thermal {
    double n_th;

    bool operator==(const Thermal&) const = default;
};

/// Thermal state with n_th photons followed by a single-mode squeeze r.
struct SqueezedThermal {
    double n_th;
    double r;

    bool operator==(const SqueezedThermal&) const = default;
};

struct Fock {
    unsigned n;

    bool operator==(const Fock&) const = default;
};

/// Environment known only through its energy and entropy (nats).
struct Generic {
    double n_e;
    double s_e;

    bool operator==(const Generic&) const = default;
};

using EnvironmentModel = std::variant<Thermal, SqueezedThermal, Fock, Generic>;

/// The two scalars the capacity bounds depend on, plus the entropy-equivalent thermal photon number.
struct EnvSummary {
    double n_e;   ///< mean photon number
    double s_e;   ///< von Neumann entropy, nats
    double n_th;  ///< g^{-1}(s_e)
};

inline bool is_gaussian(const EnvironmentModel& env) {
    return std::holds_alternative<Thermal>(env) || std::holds_alternative<SqueezedThermal>(env);
}

inline double squeezed_thermal_photons(double n_th, double r) {
    return 0.5 * ((2.0 * n_th + 1.0) * std::cosh(2.0 * r) - 1.0);
}

inline EnvSummary env_summary(const EnvironmentModel& env) {
    auto require = [](bool ok, const std::string& msg) {
        if (!ok)
            throw InvalidEnvironment(msg);
    };
    return std::visit([&](const auto& e) -> EnvSummary {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, Thermal>) {
            require(e.n_th >= 0.0 && std::isfinite(e.n_th), "thermal environment needs a finite n_th >= 0");
            return {e.n_th, g_nats(e.n_th), e.n_th};
        } else if constexpr (std::is_same_v<T, SqueezedThermal>) {
            require(e.n_th >= 0.0 && std::isfinite(e.n_th), "squeezed thermal environment needs a finite n_th >= 0");
            require(e.r >= 0.0 && std::isfinite(e.r), "squeezed thermal environment needs a finite r >= 0");
            return {squeezed_thermal_photons(e.n_th, e.r), g_nats(e.n_th), e.n_th};
        } else if constexpr (std::is_same_v<T, Fock>) {
            return {static_cast<double>(e.n), 0.0, 0.0};
        } else {
            require(e.n_e >= 0.0 && std::isfinite(e.n_e), "generic environment needs a finite N_E >= 0");
            require(e.s_e >= 0.0 && std::isfinite(e.s_e), "generic environment needs a finite S_E >= 0");
            // Gaussian states maximize entropy at fixed energy.
            require(e.s_e <= g_nats(e.n_e) + 1e-12,
                    "generic environment entropy " + std::to_string(e.s_e) + " exceeds the maximum g(N_E) = " +
                        std::to_string(g_nats(e.n_e)));
            return {e.n_e, e.s_e, g_inv(e.s_e)};
        }
    }, env);
}

inline void validate(const EnvironmentModel& env) { (void)env_summary(env); }

inline std::string describe(const EnvironmentModel& env) {
    char buf[96];
    std::visit([&](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, Thermal>)
            std::snprintf(buf, sizeof buf, "thermal nth=%.15g", e.n_th);
        else if constexpr (std::is_same_v<T, SqueezedThermal>)
            std::snprintf(buf, sizeof buf, "squeezed_thermal nth=%.15g r=%.15g", e.n_th, e.r);
        else if constexpr (std::is_same_v<T, Fock>)
            std::snprintf(buf, sizeof buf, "fock n=%u", e.n);
        else
            std::snprintf(buf, sizeof buf, "generic ne=%.15g se=%.15g", e.n_e, e.s_e);
    }, env);
    return buf;
}

} // namespace qcap
