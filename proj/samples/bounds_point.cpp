// Bounds and both oracles for a thermal attenuator at one input energy.

#include <cstdio>

#include "qcap/qcap.hpp"

int main() {
    const qcap::ChannelSpec channel = qcap::Attenuator{0.98};
    const qcap::EnvironmentModel env = qcap::Thermal{1.0};
    const double n = 1.0;

    const qcap::BoundsReport r = qcap::bounds_report(channel, env, n, qcap::Units::bits, {.gaussian = true, .fock = true});
    std::printf("%s, %s, N = %g\n", qcap::describe(channel).c_str(), qcap::describe(env).c_str(), n);
    std::printf("  q_u1 = %.6f bits\n  q_u2 = %.6f bits\n  q_l  = %.6f bits\n", r.q_u1, r.q_u2, r.q_l);
    std::printf("  I_c (covariance matrices) = %.6f bits\n", *r.oracle_gaussian);
    std::printf("  I_c (Fock space, d = %ld)  = %.6f bits\n", static_cast<long>(*r.fock_dim), *r.oracle_fock);
    return r.flags.empty() ? 0 : 1;
}
