#pragma once

// Covariance-matrix toolkit for centered Gaussian states.
//
// Conventions: quadratures ordered (x1, p1, x2, p2, ...), vacuum covariance
// is the identity, and a thermal state with mean photon number N has
// covariance (2N + 1) I.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qcap/channel.hpp"
#include "qcap/entropy.hpp"
#include "qcap/error.hpp"

namespace qcap {

inline constexpr double kSymmetryTol = 1e-12;
inline constexpr double kPhysicalityTol = 1e-10;
inline constexpr double kSymplecticTol = 1e-12;

/// Block-diagonal symplectic form with per-mode blocks [[0, 1], [-1, 0]].
inline Eigen::MatrixXd symplectic_form(Eigen::Index n_modes) {
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
    for (Eigen::Index k = 0; k < n_modes; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    return omega;
}

namespace detail {

inline void require_even_square(const Eigen::MatrixXd& m, const char* who) {
    if (m.rows() != m.cols() || m.rows() == 0 || m.rows() % 2 != 0)
        throw DomainError(std::string(who) + ": expected a non-empty 2n x 2n matrix");
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// |eigenvalues| of i*Omega*gamma, one per mode, ascending.
inline std::vector<double> symplectic_spectrum(const Eigen::MatrixXd& gamma) {
    require_even_square(gamma, "symplectic_eigenvalues");
    if (max_abs(gamma - gamma.transpose()) > kSymmetryTol)
        throw DomainError("symplectic_eigenvalues: covariance matrix is not symmetric");
    const Eigen::Index n = gamma.rows() / 2;
    const Eigen::MatrixXcd m = std::complex<double>(0.0, 1.0) * (symplectic_form(n) * gamma).cast<std::complex<double>>();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw DomainError("symplectic_eigenvalues: eigensolver failed");
    std::vector<double> mags(static_cast<std::size_t>(2 * n));
    for (Eigen::Index i = 0; i < 2 * n; ++i)
        mags[static_cast<std::size_t>(i)] = std::abs(solver.eigenvalues()(i));
    std::sort(mags.begin(), mags.end());
    // Eigenvalues come in +-nu pairs; after sorting magnitudes, pairs are adjacent.
    std::vector<double> nu(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k)
        nu[static_cast<std::size_t>(k)] = 0.5 * (mags[static_cast<std::size_t>(2 * k)] + mags[static_cast<std::size_t>(2 * k + 1)]);
    return nu;
}

} // namespace detail

/// Covariance matrix of a centered n-mode Gaussian state.
class CovarianceMatrix {
public:
    explicit CovarianceMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
        detail::require_even_square(entries_, "CovarianceMatrix");
        if (!entries_.allFinite())
            throw InvalidCovariance("CovarianceMatrix: non-finite entries");
        if (detail::max_abs(entries_ - entries_.transpose()) > kSymmetryTol)
            throw InvalidCovariance("CovarianceMatrix: matrix is not symmetric within 1e-12");
        for (double nu : detail::symplectic_spectrum(entries_))
            if (nu < 1.0 - kPhysicalityTol)
                throw InvalidCovariance("CovarianceMatrix: symplectic eigenvalue " + std::to_string(nu) + " < 1 violates the uncertainty principle");
    }

    static CovarianceMatrix vacuum(Eigen::Index n_modes) {
        return CovarianceMatrix(Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
    }

    const Eigen::MatrixXd& entries() const noexcept { return entries_; }
    Eigen::Index n_modes() const noexcept { return entries_.rows() / 2; }
    double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

private:
    Eigen::MatrixXd entries_;
};

/// Real matrix preserving the symplectic form: S Omega S^T = Omega.
class SymplecticMatrix {
public:
    explicit SymplecticMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
        detail::require_even_square(entries_, "SymplecticMatrix");
        const Eigen::MatrixXd omega = symplectic_form(entries_.rows() / 2);
        const double defect = detail::max_abs(entries_ * omega * entries_.transpose() - omega);
        if (!(defect < kSymplecticTol))
            throw DomainError("SymplecticMatrix: |S Omega S^T - Omega|_max = " + std::to_string(defect));
    }

    static SymplecticMatrix identity(Eigen::Index n_modes) {
        return SymplecticMatrix(Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
    }

    const Eigen::MatrixXd& entries() const noexcept { return entries_; }
    Eigen::Index n_modes() const noexcept { return entries_.rows() / 2; }

private:
    Eigen::MatrixXd entries_;
};

inline std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& gamma) {
    return detail::symplectic_spectrum(gamma.entries());
}

/// Unvalidated overload; rejects non-symmetric input with DomainError.
inline std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& gamma) {
    return detail::symplectic_spectrum(gamma);
}

/// Von Neumann entropy in nats: sum over modes of g((nu - 1) / 2).
inline double gaussian_entropy(const CovarianceMatrix& gamma) {
    double s = 0.0;
    for (double nu : symplectic_eigenvalues(gamma))
        s += g_nats(std::max(0.0, 0.5 * (nu - 1.0)));
    return s;
}

inline CovarianceMatrix thermal_cov(double n_th) {
    if (!(n_th >= 0.0) || !std::isfinite(n_th))
        throw DomainError("thermal_cov: thermal photon number must be finite and >= 0");
    return CovarianceMatrix((2.0 * n_th + 1.0) * Eigen::MatrixXd::Identity(2, 2));
}

/// (2 N_th + 1) diag(e^{2r}, e^{-2r}); the x quadrature carries the anti-squeezing.
inline CovarianceMatrix squeezed_thermal_cov(double n_th, double r) {
    if (!(n_th >= 0.0) || !std::isfinite(n_th))
        throw DomainError("squeezed_thermal_cov: thermal photon number must be finite and >= 0");
    if (!(r >= 0.0) || !std::isfinite(r))
        throw DomainError("squeezed_thermal_cov: squeezing parameter must be finite and >= 0");
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
    m(0, 0) = (2.0 * n_th + 1.0) * std::exp(2.0 * r);
    m(1, 1) = (2.0 * n_th + 1.0) * std::exp(-2.0 * r);
    return CovarianceMatrix(std::move(m));
}

/// Mean photon number (Tr gamma / 2 - 1) / 2 of a single-mode state.
inline double mean_photon(const CovarianceMatrix& gamma) {
    if (gamma.n_modes() != 1)
        throw DomainError("mean_photon: expected a single-mode covariance matrix");
    const double n = 0.5 * (0.5 * gamma.entries().trace() - 1.0);
    if (n < -kPhysicalityTol)
        throw InvalidCovariance("mean_photon: negative photon number " + std::to_string(n));
    return std::max(0.0, n);
}

/// Phase-space matrix of the two-mode dilation on (A, E); output B is mode 0, F is mode 1.
inline SymplecticMatrix channel_symplectic(const ChannelSpec& channel) {
    validate(channel);
    Eigen::MatrixXd s(4, 4);
    const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
    if (const auto* att = std::get_if<Attenuator>(&channel)) {
        const double t = std::sqrt(att->tau);
        const double r = std::sqrt(1.0 - att->tau);
        s << t * id, r * id,
            -r * id, t * id;
    } else {
        const double kappa = std::get<Amplifier>(channel).kappa;
        const double c = std::sqrt(kappa);
        const double sh = std::sqrt(kappa - 1.0);
        const Eigen::Matrix2d z = Eigen::Vector2d(1.0, -1.0).asDiagonal();
        s << c * id, sh * z,
            sh * z, c * id;
    }
    return SymplecticMatrix(std::move(s));
}

/// gamma -> S gamma S^T.
inline CovarianceMatrix apply_symplectic(const SymplecticMatrix& s, const CovarianceMatrix& gamma) {
    if (s.entries().rows() != gamma.entries().rows())
        throw DomainError("apply_symplectic: dimension mismatch");
    Eigen::MatrixXd out = s.entries() * gamma.entries() * s.entries().transpose();
    out = 0.5 * (out + out.transpose()).eval();
    return CovarianceMatrix(std::move(out));
}

/// Embed a two-mode symplectic acting on modes (i, j) of an n-mode system.
inline SymplecticMatrix embed_two_mode(const SymplecticMatrix& s, Eigen::Index n_modes, Eigen::Index i, Eigen::Index j) {
    if (s.n_modes() != 2 || i == j || i < 0 || j < 0 || i >= n_modes || j >= n_modes)
        throw DomainError("embed_two_mode: bad mode indices");
    Eigen::MatrixXd full = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
    const Eigen::Index idx[2] = {i, j};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            full.block(2 * idx[a], 2 * idx[b], 2, 2) = s.entries().block(2 * a, 2 * b, 2, 2);
    return SymplecticMatrix(std::move(full));
}

/// Reduced state on the kept modes: principal submatrix of their quadratures.
inline CovarianceMatrix partial_trace_cov(const CovarianceMatrix& gamma, const std::vector<Eigen::Index>& keep) {
    if (keep.empty())
        throw DomainError("partial_trace_cov: keep set is empty");
    std::vector<Eigen::Index> rows;
    for (Eigen::Index mode : keep) {
        if (mode < 0 || mode >= gamma.n_modes())
            throw DomainError("partial_trace_cov: mode index " + std::to_string(mode) + " out of range");
        if (std::count(keep.begin(), keep.end(), mode) != 1)
            throw DomainError("partial_trace_cov: duplicate mode index");
        rows.push_back(2 * mode);
        rows.push_back(2 * mode + 1);
    }
    return CovarianceMatrix(gamma.entries()(rows, rows));
}

inline CovarianceMatrix direct_sum(const CovarianceMatrix& a, const CovarianceMatrix& b) {
    const Eigen::Index na = a.entries().rows();
    const Eigen::Index nb = b.entries().rows();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(na + nb, na + nb);
    m.topLeftCorner(na, na) = a.entries();
    m.bottomRightCorner(nb, nb) = b.entries();
    return CovarianceMatrix(std::move(m));
}

/// Two-mode squeezed vacuum whose marginals are thermal with mean photon n.
inline CovarianceMatrix thermal_purification(double n) {
    if (!(n >= 0.0) || !std::isfinite(n))
        throw DomainError("thermal_purification: mean photon number must be finite and >= 0");
    const double diag = 2.0 * n + 1.0;
    const double off = 2.0 * std::sqrt(n * (n + 1.0));
    const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
    const Eigen::Matrix2d z = Eigen::Vector2d(1.0, -1.0).asDiagonal();
    Eigen::MatrixXd m(4, 4);
    m << diag * id, off * z,
        off * z, diag * id;
    return CovarianceMatrix(std::move(m));
}

struct GaussianChannelPoint {
    ChannelSpec channel;
    CovarianceMatrix env_cov;
    double n_input;
};

/// Output state of the full dilation for a thermal input.
/// Modes: 0 = R_A (purifies the input), 1 = B (channel output), 2 = F (environment output).
inline CovarianceMatrix dilation_output(const GaussianChannelPoint& point) {
    if (point.env_cov.n_modes() != 1)
        throw DomainError("gaussian oracle: environment covariance must be single-mode");
    if (!(point.n_input >= 0.0) || !std::isfinite(point.n_input))
        throw DomainError("gaussian oracle: input mean photon number must be finite and >= 0");
    const CovarianceMatrix joint = direct_sum(thermal_purification(point.n_input), point.env_cov);
    return apply_symplectic(embed_two_mode(channel_symplectic(point.channel), 3, 1, 2), joint);
}

/// Coherent information S(B) - S(R_A B) of a thermal input, in nats.
inline double gaussian_coherent_information(const GaussianChannelPoint& point) {
    const CovarianceMatrix out = dilation_output(point);
    return gaussian_entropy(partial_trace_cov(out, {1})) - gaussian_entropy(partial_trace_cov(out, {0, 1}));
}

} // namespace qcap
