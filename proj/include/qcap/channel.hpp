#pragma once

#include <cmath>
#include <string>
#include <variant>

#include "qcap/error.hpp"

namespace qcap {

/// Beam splitter of transmissivity tau mixing the input with the environment.
struct Attenuator {
    double tau;

    bool operator==(const Attenuator&) const = default;
};

/// Two-mode squeezer of gain kappa >= 1.
struct Amplifier {
    double kappa;

    bool operator==(const Amplifier&) const = default;
};

using ChannelSpec = std::variant<Attenuator, Amplifier>;

inline bool is_attenuator(const ChannelSpec& ch) { return std::holds_alternative<Attenuator>(ch); }

/// tau or kappa, whichever applies.
inline double channel_parameter(const ChannelSpec& ch) {
    return std::visit([](const auto& c) -> double {
        if constexpr (std::is_same_v<std::decay_t<decltype(c)>, Attenuator>)
            return c.tau;
        else
            return c.kappa;
    }, ch);
}

inline void validate(const ChannelSpec& ch) {
    if (const auto* att = std::get_if<Attenuator>(&ch)) {
        if (!(att->tau >= 0.0 && att->tau <= 1.0))
            throw DomainError("attenuator transmissivity must lie in [0, 1], got " + std::to_string(att->tau));
    } else {
        const double kappa = std::get<Amplifier>(ch).kappa;
        if (!(kappa >= 1.0) || !std::isfinite(kappa))
            throw DomainError("amplifier gain must be finite and >= 1, got " + std::to_string(kappa));
    }
}

inline std::string describe(const ChannelSpec& ch) {
    char buf[64];
    if (const auto* att = std::get_if<Attenuator>(&ch))
        std::snprintf(buf, sizeof buf, "attenuator tau=%.15g", att->tau);
    else
        std::snprintf(buf, sizeof buf, "amplifier kappa=%.15g", std::get<Amplifier>(ch).kappa);
    return buf;
}

} // namespace qcap
