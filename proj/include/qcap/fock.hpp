#pragma once

// Truncated Fock-space simulation of the attenuator and amplifier dilations.
//
// Three modes take part: R (purifies the thermal input), A (channel input)
// and E (environment). Two-mode basis states |a, e> are indexed a * d + e.
// The beam splitter conserves a + e and the two-mode squeezer conserves
// a - e, so both unitaries are stored as independent sector blocks.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qcap/channel.hpp"
#include "qcap/entropy.hpp"
#include "qcap/environment.hpp"
#include "qcap/error.hpp"
#include "qcap/linalg.hpp"

namespace qcap {

/// Lowering operator on levels |0> ... |d-1>.
inline Eigen::MatrixXd annihilation(Eigen::Index d) {
    if (d < 2)
        throw DomainError("annihilation: truncation dimension must be >= 2");
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index n = 1; n < d; ++n)
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

/// Hermitian, unit-trace, positive semidefinite matrix in the truncated Fock basis.
class DensityMatrix {
public:
    explicit DensityMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
        if (entries_.rows() != entries_.cols() || entries_.rows() == 0)
            throw DomainError("DensityMatrix: expected a non-empty square matrix");
        if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
            throw DomainError("DensityMatrix: matrix is not Hermitian");
        if (std::abs(entries_.trace() - std::complex<double>(1.0)) > 1e-10)
            throw DomainError("DensityMatrix: trace differs from 1");
        for (double lambda : hermitian_eigenvalues(entries_))
            if (lambda < -1e-10)
                throw DomainError("DensityMatrix: negative eigenvalue " + std::to_string(lambda));
    }

    const Eigen::MatrixXcd& entries() const noexcept { return entries_; }
    Eigen::Index dim() const noexcept { return entries_.rows(); }

    /// Photon-number distribution.
    Eigen::VectorXd populations() const { return entries_.diagonal().real(); }

private:
    Eigen::MatrixXcd entries_;
};

/// Von Neumann entropy in nats.
inline double entropy_dm(const Eigen::MatrixXcd& rho) {
    if (rho.rows() != rho.cols())
        throw DomainError("entropy_dm: matrix must be square");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw DomainError("entropy_dm: matrix is not Hermitian");
    return spectrum_entropy(hermitian_eigenvalues(rho));
}

inline double entropy_dm(const DensityMatrix& rho) { return spectrum_entropy(hermitian_eigenvalues(rho.entries())); }

/// Probability weight on the two highest retained levels.
inline double top_two_mass(const Eigen::VectorXd& populations) {
    const Eigen::Index d = populations.size();
    if (d < 2)
        return populations.sum();
    return std::max(0.0, populations(d - 2)) + std::max(0.0, populations(d - 1));
}

/// Unitary on two truncated modes, block diagonal over the sectors of a conserved quantity.
class ModePairUnitary {
public:
    struct Sector {
        std::vector<Eigen::Index> states;  ///< two-mode indices a * d + e
        Eigen::MatrixXd block;             ///< block(i, j) = <states[i]| U |states[j]>
    };

    ModePairUnitary(Eigen::Index d, std::vector<Sector> sectors) : d_(d), sectors_(std::move(sectors)) {
        sector_of_.assign(static_cast<std::size_t>(d * d), -1);
        slot_of_.assign(static_cast<std::size_t>(d * d), -1);
        for (std::size_t s = 0; s < sectors_.size(); ++s)
            for (std::size_t i = 0; i < sectors_[s].states.size(); ++i) {
                sector_of_[static_cast<std::size_t>(sectors_[s].states[i])] = static_cast<Eigen::Index>(s);
                slot_of_[static_cast<std::size_t>(sectors_[s].states[i])] = static_cast<Eigen::Index>(i);
            }
    }

    Eigen::Index dim() const noexcept { return d_; }
    const std::vector<Sector>& sectors() const noexcept { return sectors_; }

    Eigen::MatrixXd dense() const {
        Eigen::MatrixXd u = Eigen::MatrixXd::Zero(d_ * d_, d_ * d_);
        for (const Sector& s : sectors_)
            u(s.states, s.states) = s.block;
        return u;
    }

    /// U v, touching only the columns where v is nonzero.
    Eigen::VectorXd apply(const Eigen::VectorXd& v) const {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(d_ * d_);
        for (Eigen::Index j = 0; j < v.size(); ++j) {
            if (v(j) == 0.0)
                continue;
            const Sector& s = sectors_[static_cast<std::size_t>(sector_of_[static_cast<std::size_t>(j)])];
            const Eigen::Index col = slot_of_[static_cast<std::size_t>(j)];
            for (std::size_t i = 0; i < s.states.size(); ++i)
                w(s.states[i]) += s.block(static_cast<Eigen::Index>(i), col) * v(j);
        }
        return w;
    }

    /// max |U^T U - I| over basis states with at most max_photons in total.
    double unitarity_defect(Eigen::Index max_photons) const {
        double defect = 0.0;
        for (const Sector& s : sectors_) {
            std::vector<Eigen::Index> low;
            for (std::size_t i = 0; i < s.states.size(); ++i)
                if (s.states[i] / d_ + s.states[i] % d_ <= max_photons)
                    low.push_back(static_cast<Eigen::Index>(i));
            if (low.empty())
                continue;
            const Eigen::MatrixXd cols = s.block(Eigen::all, low);
            const Eigen::MatrixXd gram = cols.transpose() * cols;
            defect = std::max(defect, (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff());
        }
        return defect;
    }

private:
    Eigen::Index d_;
    std::vector<Sector> sectors_;
    std::vector<Eigen::Index> sector_of_;
    std::vector<Eigen::Index> slot_of_;
};

namespace detail {

/// Groups |a, e> by key(a, e) and exponentiates the generator restricted to each group.
/// element(a, e, a', e') returns <a', e'| G |a, e>.
inline ModePairUnitary exponentiate_sectors(Eigen::Index d, const std::function<long(Eigen::Index, Eigen::Index)>& key,
                                            const std::function<double(Eigen::Index, Eigen::Index, Eigen::Index, Eigen::Index)>& element) {
    std::map<long, std::vector<Eigen::Index>> groups;
    for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index e = 0; e < d; ++e)
            groups[key(a, e)].push_back(a * d + e);

    std::vector<ModePairUnitary::Sector> sectors;
    sectors.reserve(groups.size());
    for (auto& [k, states] : groups) {
        const auto m = static_cast<Eigen::Index>(states.size());
        Eigen::MatrixXd gen(m, m);
        for (Eigen::Index j = 0; j < m; ++j)
            for (Eigen::Index i = 0; i < m; ++i)
                gen(i, j) = element(states[j] / d, states[j] % d, states[i] / d, states[i] % d);
        sectors.push_back({std::move(states), matrix_exp(gen)});
    }
    return ModePairUnitary(d, std::move(sectors));
}

inline double sqrt_prod(Eigen::Index x, Eigen::Index y) {
    return std::sqrt(static_cast<double>(x) * static_cast<double>(y));
}

} // namespace detail

/// exp[theta (a^dag e - a e^dag)] with cos^2 theta = tau.
inline ModePairUnitary bs_unitary(double tau, Eigen::Index d) {
    if (!(tau > 0.0 && tau <= 1.0))
        throw DomainError("bs_unitary: transmissivity must lie in (0, 1]; use swap_unitary for tau = 0");
    if (d < 2)
        throw DomainError("bs_unitary: truncation dimension must be >= 2");
    const double theta = std::atan(std::sqrt((1.0 - tau) / tau));
    return detail::exponentiate_sectors(
        d, [](Eigen::Index a, Eigen::Index e) { return static_cast<long>(a + e); },
        [theta](Eigen::Index a, Eigen::Index e, Eigen::Index a2, Eigen::Index e2) {
            if (a2 == a + 1 && e2 == e - 1)
                return theta * detail::sqrt_prod(a + 1, e);
            if (a2 == a - 1 && e2 == e + 1)
                return -theta * detail::sqrt_prod(a, e + 1);
            return 0.0;
        });
}

/// Exchange of the two modes, the tau = 0 beam splitter up to phases.
inline ModePairUnitary swap_unitary(Eigen::Index d) {
    std::vector<ModePairUnitary::Sector> sectors;
    for (Eigen::Index total = 0; total <= 2 * (d - 1); ++total) {
        ModePairUnitary::Sector s;
        for (Eigen::Index a = std::max<Eigen::Index>(0, total - d + 1); a <= std::min(total, d - 1); ++a)
            s.states.push_back(a * d + (total - a));
        const auto m = static_cast<Eigen::Index>(s.states.size());
        s.block = Eigen::MatrixXd::Zero(m, m);
        for (Eigen::Index j = 0; j < m; ++j)
            s.block(m - 1 - j, j) = 1.0;
        sectors.push_back(std::move(s));
    }
    return ModePairUnitary(d, std::move(sectors));
}

inline constexpr double kDefaultKappaMax = 1.5;

/// exp[r (a^dag e^dag - a e)] with cosh^2 r = kappa.
inline ModePairUnitary tms_unitary(double kappa, Eigen::Index d, double kappa_max = kDefaultKappaMax) {
    if (!(kappa >= 1.0 && kappa <= kappa_max))
        throw DomainError("tms_unitary: gain " + std::to_string(kappa) + " outside [1, " + std::to_string(kappa_max) + "]");
    if (d < 2)
        throw DomainError("tms_unitary: truncation dimension must be >= 2");
    const double r = std::atanh(std::sqrt((kappa - 1.0) / kappa));
    return detail::exponentiate_sectors(
        d, [](Eigen::Index a, Eigen::Index e) { return static_cast<long>(a - e); },
        [r](Eigen::Index a, Eigen::Index e, Eigen::Index a2, Eigen::Index e2) {
            if (a2 == a + 1 && e2 == e + 1)
                return r * detail::sqrt_prod(a + 1, e + 1);
            if (a2 == a - 1 && e2 == e - 1)
                return -r * detail::sqrt_prod(a, e);
            return 0.0;
        });
}

/// Thermal populations N^n / (N+1)^{n+1}, n < d, not renormalized.
inline Eigen::VectorXd thermal_populations(double n_mean, Eigen::Index d) {
    Eigen::VectorXd p(d);
    const double q = n_mean / (n_mean + 1.0);
    double pn = 1.0 / (n_mean + 1.0);
    for (Eigen::Index n = 0; n < d; ++n) {
        p(n) = pn;
        pn *= q;
    }
    return p;
}

/// Smallest dimension whose top-two thermal mass is below target.
inline std::size_t suggest_thermal_dim(double n_mean, double target) {
    std::size_t d = 2;
    while (d < 4096 && top_two_mass(thermal_populations(n_mean, static_cast<Eigen::Index>(d))) >= target)
        ++d;
    return d;
}

/// Mixture sum_k p_k |phi_k><phi_k| with real amplitude vectors.
struct StateEnsemble {
    std::vector<double> weights;
    std::vector<Eigen::VectorXd> states;

    Eigen::MatrixXd density() const {
        const Eigen::Index d = states.empty() ? 0 : states.front().size();
        Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(d, d);
        for (std::size_t k = 0; k < states.size(); ++k)
            rho.noalias() += weights[k] * states[k] * states[k].transpose();
        return rho;
    }

    Eigen::VectorXd populations() const {
        const Eigen::Index d = states.empty() ? 0 : states.front().size();
        Eigen::VectorXd p = Eigen::VectorXd::Zero(d);
        for (std::size_t k = 0; k < states.size(); ++k)
            p += weights[k] * states[k].cwiseAbs2();
        return p;
    }
};

/// Default maximum top-two mass before a truncation is rejected outright.
inline constexpr double kDefaultMaxTail = 1e-3;

namespace detail {

inline constexpr double kNegligibleWeight = 1e-17;

/// exp[(r/2)(a^dag^2 - a^2)] built in a padded space so the retained block is
/// unaffected by the truncation boundary.
inline Eigen::MatrixXd squeeze_operator(double r, Eigen::Index d) {
    const Eigen::Index big = 2 * d + 16;
    const Eigen::MatrixXd a = annihilation(big);
    const Eigen::MatrixXd a2 = a * a;
    const Eigen::MatrixXd gen = 0.5 * r * (a2.transpose() - a2);
    return matrix_exp(gen).topLeftCorner(d, d);
}

} // namespace detail

/// Eigen-ensemble of the environment state in the truncated basis, renormalized.
inline StateEnsemble env_ensemble(const EnvironmentModel& env, Eigen::Index d, double max_tail = kDefaultMaxTail) {
    validate(env);
    if (d < 2)
        throw DomainError("env_ensemble: truncation dimension must be >= 2");
    StateEnsemble ens;
    auto basis = [d](Eigen::Index n) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
        v(n) = 1.0;
        return v;
    };
    std::visit([&](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, Thermal>) {
            const Eigen::VectorXd p = thermal_populations(e.n_th, d);
            for (Eigen::Index n = 0; n < d; ++n)
                if (p(n) > detail::kNegligibleWeight) {
                    ens.weights.push_back(p(n));
                    ens.states.push_back(basis(n));
                }
        } else if constexpr (std::is_same_v<T, SqueezedThermal>) {
            const Eigen::VectorXd p = thermal_populations(e.n_th, d);
            const Eigen::MatrixXd s = detail::squeeze_operator(e.r, d);
            for (Eigen::Index n = 0; n < d; ++n)
                if (p(n) > detail::kNegligibleWeight) {
                    ens.weights.push_back(p(n));
                    ens.states.push_back(s.col(n));
                }
        } else if constexpr (std::is_same_v<T, Fock>) {
            if (static_cast<Eigen::Index>(e.n) + 2 >= d)
                throw TruncationError("Fock environment |" + std::to_string(e.n) + "> touches the truncation boundary",
                                      static_cast<std::size_t>(e.n) + 3);
            ens.weights.push_back(1.0);
            ens.states.push_back(basis(static_cast<Eigen::Index>(e.n)));
        } else {
            throw UnsupportedOracle("generic environments carry no state; the Fock oracle needs a concrete state");
        }
    }, env);

    const double total = ens.populations().sum();
    const double tail = top_two_mass(ens.populations());
    if (tail > max_tail) {
        const double n_e = env_summary(env).n_e;
        throw TruncationError("environment mass near the truncation boundary is " + std::to_string(tail) + " at d = " +
                                  std::to_string(d),
                              std::max<std::size_t>(static_cast<std::size_t>(d) + 1, suggest_thermal_dim(n_e, max_tail)));
    }
    for (double& w : ens.weights)
        w /= total;
    return ens;
}

inline DensityMatrix env_density_matrix(const EnvironmentModel& env, Eigen::Index d, double max_tail = kDefaultMaxTail) {
    const Eigen::MatrixXd rho = env_ensemble(env, d, max_tail).density();
    return DensityMatrix(rho.cast<std::complex<double>>());
}

/// Schmidt coefficients sqrt(N^n / (N+1)^{n+1}) of the thermal purification, renormalized on n < d.
inline Eigen::VectorXd tmsv_coefficients(double n_mean, Eigen::Index d, double max_tail = kDefaultMaxTail) {
    if (!(n_mean >= 0.0) || !std::isfinite(n_mean))
        throw DomainError("tmsv: mean photon number must be finite and >= 0");
    if (d < 2)
        throw DomainError("tmsv: truncation dimension must be >= 2");
    Eigen::VectorXd p = thermal_populations(n_mean, d);
    if (top_two_mass(p) > max_tail)
        throw TruncationError("thermal input with N = " + std::to_string(n_mean) + " overflows d = " + std::to_string(d),
                              suggest_thermal_dim(n_mean, max_tail));
    p /= p.sum();
    return p.cwiseSqrt();
}

/// sum_n c_n |n>_R |n>_A, indexed r * d + a.
inline Eigen::VectorXd tmsv_vector(double n_mean, Eigen::Index d, double max_tail = kDefaultMaxTail) {
    const Eigen::VectorXd c = tmsv_coefficients(n_mean, d, max_tail);
    Eigen::VectorXd psi = Eigen::VectorXd::Zero(d * d);
    for (Eigen::Index n = 0; n < d; ++n)
        psi(n * d + n) = c(n);
    return psi;
}

struct FockOptions {
    Eigen::Index initial_dim = 0;  ///< 0 selects 20 (attenuator) or 24 (amplifier)
    bool adaptive = true;          ///< double the dimension until the tail target is met
    Eigen::Index max_dim = 64;
    double target_tail = 1e-8;
    double max_tail = kDefaultMaxTail;
    double kappa_max = kDefaultKappaMax;
    double max_amplifier_input = 5.0;
    std::size_t max_elements = std::size_t{1} << 26;
};

struct OracleResult {
    double i_c = 0.0;               ///< s_output - s_exchange, nats
    double s_output = 0.0;          ///< S(B)
    double s_exchange = 0.0;        ///< S(R_A B)
    double s_weak_complement = 0.0; ///< S(F), equals s_exchange for pure environments
    double tail_mass = 0.0;
    double unitarity_defect = 0.0;
    Eigen::Index dim_used = 0;
};

/// Coherent information of a thermal input at a fixed truncation d.
inline OracleResult coherent_information_fock_at(const ChannelSpec& channel, const EnvironmentModel& env, double n_input,
                                                 Eigen::Index d, const FockOptions& opts = {}) {
    validate(channel);
    if (!is_attenuator(channel) && n_input > opts.max_amplifier_input)
        throw DomainError("fock oracle: amplifier runs are limited to N <= " + std::to_string(opts.max_amplifier_input));

    const Eigen::VectorXd c = tmsv_coefficients(n_input, d, opts.max_tail);
    const StateEnsemble ens = env_ensemble(env, d, opts.max_tail);
    const auto k_count = static_cast<Eigen::Index>(ens.states.size());
    if (static_cast<std::size_t>(d * d) * static_cast<std::size_t>(k_count * d) > opts.max_elements)
        throw DomainError("fock oracle: state of " + std::to_string(d) + "^2 x " + std::to_string(k_count * d) +
                          " amplitudes exceeds the memory guard");

    const ModePairUnitary u = [&] {
        if (const auto* att = std::get_if<Attenuator>(&channel))
            return att->tau == 0.0 ? swap_unitary(d) : bs_unitary(att->tau, d);
        return tms_unitary(std::get<Amplifier>(channel).kappa, d, opts.kappa_max);
    }();

    // Psi[(r, b), (k, f)] = sqrt(p_k) c_r <b, f| U |r, phi_k>; rho_RB = Psi Psi^T.
    Eigen::MatrixXd psi = Eigen::MatrixXd::Zero(d * d, k_count * d);
    Eigen::VectorXd in = Eigen::VectorXd::Zero(d * d);
    for (Eigen::Index k = 0; k < k_count; ++k) {
        const double amp_k = std::sqrt(ens.weights[static_cast<std::size_t>(k)]);
        const Eigen::VectorXd& phi = ens.states[static_cast<std::size_t>(k)];
        for (Eigen::Index r = 0; r < d; ++r) {
            if (c(r) == 0.0)
                continue;
            in.setZero();
            in.segment(r * d, d) = phi;
            const Eigen::VectorXd out = u.apply(in);
            for (Eigen::Index b = 0; b < d; ++b)
                for (Eigen::Index f = 0; f < d; ++f)
                    psi(r * d + b, k * d + f) = amp_k * c(r) * out(b * d + f);
        }
    }

    Eigen::MatrixXd rho_b = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index r = 0; r < d; ++r)
        rho_b.noalias() += psi.middleRows(r * d, d) * psi.middleRows(r * d, d).transpose();
    Eigen::MatrixXd rho_f = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index k = 0; k < k_count; ++k)
        rho_f.noalias() += psi.middleCols(k * d, d).transpose() * psi.middleCols(k * d, d);

    OracleResult res;
    res.dim_used = d;
    res.s_output = spectrum_entropy(hermitian_eigenvalues(rho_b));
    res.s_weak_complement = spectrum_entropy(hermitian_eigenvalues(rho_f));
    res.s_exchange = spectrum_entropy(gram_eigenvalues(psi));
    res.i_c = res.s_output - res.s_exchange;
    res.unitarity_defect = u.unitarity_defect(d / 2);
    res.tail_mass = std::max({top_two_mass(c.cwiseAbs2()), top_two_mass(ens.populations()),
                              top_two_mass(rho_b.diagonal()), top_two_mass(rho_f.diagonal())});
    return res;
}

/// Coherent information of a thermal input, raising d until the boundary mass
/// drops below the target or the hard cap is reached.
inline OracleResult coherent_information_fock(const ChannelSpec& channel, const EnvironmentModel& env, double n_input,
                                              const FockOptions& opts = {}) {
    Eigen::Index d = opts.initial_dim > 0 ? opts.initial_dim : (is_attenuator(channel) ? 20 : 24);
    if (!opts.adaptive)
        return coherent_information_fock_at(channel, env, n_input, d, opts);

    d = std::min(d, opts.max_dim);
    while (true) {
        try {
            OracleResult res = coherent_information_fock_at(channel, env, n_input, d, opts);
            if (res.tail_mass <= opts.target_tail || d >= opts.max_dim) {
                if (res.tail_mass > opts.max_tail)
                    throw TruncationError("fock oracle: boundary mass " + std::to_string(res.tail_mass) +
                                              " at the dimension cap",
                                          static_cast<std::size_t>(2 * d));
                return res;
            }
        } catch (const TruncationError&) {
            if (d >= opts.max_dim)
                throw;
        }
        d = std::min(2 * d, opts.max_dim);
    }
}

} // namespace qcap
