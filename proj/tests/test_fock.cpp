#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "qcap/bounds.hpp"
#include "qcap/fock.hpp"
#include "qcap/gaussian.hpp"

using namespace qcap;

namespace {

constexpr double kBits = 1.0 / std::numbers::ln2;

Eigen::VectorXd basis2(Eigen::Index d, Eigen::Index a, Eigen::Index e) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(d * d);
    v(a * d + e) = 1.0;
    return v;
}

/// Reduced state of the first mode of a real two-mode vector indexed a * d + e.
Eigen::MatrixXd reduce_first(const Eigen::VectorXd& psi, Eigen::Index d) {
    const Eigen::Map<const Eigen::MatrixXd> m(psi.data(), d, d);  // m(e, a)
    return m.transpose() * m;
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

} // namespace

TEST(Annihilation, SmallestDimension) {
    Eigen::MatrixXd expected(2, 2);
    expected << 0, 1, 0, 0;
    EXPECT_EQ(annihilation(2), expected);
}

TEST(Annihilation, NumberOperatorAndCommutator) {
    const Eigen::Index d = 7;
    const Eigen::MatrixXd a = annihilation(d);
    const Eigen::MatrixXd num = a.transpose() * a;
    for (Eigen::Index n = 0; n < d; ++n)
        EXPECT_DOUBLE_EQ(num(n, n), static_cast<double>(n));
    const Eigen::MatrixXd comm = a * a.transpose() - a.transpose() * a;
    EXPECT_LT((comm.topLeftCorner(d - 1, d - 1) - Eigen::MatrixXd::Identity(d - 1, d - 1)).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_DOUBLE_EQ(comm(d - 1, d - 1), -static_cast<double>(d - 1));
}

TEST(Annihilation, RejectsTinyDimension) {
    EXPECT_THROW(annihilation(1), DomainError);
}

TEST(MatrixExp, ZeroIsIdentity) {
    EXPECT_EQ(matrix_exp(Eigen::MatrixXd::Zero(5, 5)), Eigen::MatrixXd::Identity(5, 5));
}

TEST(MatrixExp, DiagonalPhases) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
    for (int k = 0; k < 4; ++k)
        m(k, k) = std::complex<double>(0.0, std::numbers::pi * k);
    const Eigen::MatrixXcd u = matrix_exp(m);
    for (int k = 0; k < 4; ++k) {
        EXPECT_NEAR(u(k, k).real(), k % 2 == 0 ? 1.0 : -1.0, 1e-13);
        EXPECT_NEAR(u(k, k).imag(), 0.0, 1e-13);
    }
    EXPECT_NEAR(u(0, 1).real(), 0.0, 1e-15);
}

TEST(MatrixExp, InverseIsNegatedGenerator) {
    std::mt19937 rng(11);
    std::normal_distribution<double> normal(0.0, 1.5);
    Eigen::MatrixXd m(9, 9);
    for (Eigen::Index i = 0; i < m.size(); ++i)
        m.data()[i] = normal(rng);
    const Eigen::MatrixXd prod = matrix_exp(m) * matrix_exp(-m);
    EXPECT_LT((prod - Eigen::MatrixXd::Identity(9, 9)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(MatrixExp, Errors) {
    EXPECT_THROW(matrix_exp(Eigen::MatrixXd::Zero(2, 3)), DomainError);
    Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 2);
    bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(matrix_exp(bad), DomainError);
}

TEST(BeamSplitter, MatchesDenseGenerator) {
    const Eigen::Index d = 6;
    const double tau = 0.7;
    const double theta = std::acos(std::sqrt(tau));
    const Eigen::MatrixXd a = annihilation(d);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
    const Eigen::MatrixXd a_mode = kron(a, id);
    const Eigen::MatrixXd e_mode = kron(id, a);
    const Eigen::MatrixXd gen = theta * (a_mode.transpose() * e_mode - a_mode * e_mode.transpose());
    EXPECT_LT((bs_unitary(tau, d).dense() - matrix_exp(gen)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(BeamSplitter, FullTransmissionIsIdentity) {
    const Eigen::Index d = 5;
    EXPECT_LT((bs_unitary(1.0, d).dense() - Eigen::MatrixXd::Identity(d * d, d * d)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(BeamSplitter, BalancedSinglePhoton) {
    const Eigen::Index d = 4;
    const Eigen::VectorXd out = bs_unitary(0.5, d).apply(basis2(d, 1, 0));
    EXPECT_NEAR(std::abs(out(1 * d + 0)), 1.0 / std::sqrt(2.0), 1e-13);
    EXPECT_NEAR(std::abs(out(0 * d + 1)), 1.0 / std::sqrt(2.0), 1e-13);
    EXPECT_NEAR(entropy_dm(Eigen::MatrixXcd(reduce_first(out, d).cast<std::complex<double>>())), std::log(2.0), 1e-12);
}

TEST(BeamSplitter, SinglePhotonTransmission) {
    const Eigen::Index d = 4;
    const Eigen::VectorXd out = bs_unitary(0.98, d).apply(basis2(d, 1, 0));
    EXPECT_NEAR(reduce_first(out, d)(1, 1), 0.98, 1e-13);
}

TEST(BeamSplitter, ConservesPhotonNumberAndIsUnitary) {
    const Eigen::Index d = 12;
    const Eigen::MatrixXd u = bs_unitary(0.9, d).dense();
    double leak = 0.0;
    for (Eigen::Index i = 0; i < d * d; ++i)
        for (Eigen::Index j = 0; j < d * d; ++j)
            if (i / d + i % d != j / d + j % d)
                leak = std::max(leak, std::abs(u(i, j)));
    EXPECT_LT(leak, 1e-10);
    EXPECT_LT(bs_unitary(0.9, d).unitarity_defect(d / 2), 1e-10);
}

TEST(BeamSplitter, Errors) {
    EXPECT_THROW(bs_unitary(0.0, 4), DomainError);
    EXPECT_THROW(bs_unitary(1.2, 4), DomainError);
    EXPECT_THROW(bs_unitary(0.5, 1), DomainError);
}

TEST(Swap, ExchangesModes) {
    const Eigen::Index d = 5;
    const ModePairUnitary s = swap_unitary(d);
    for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index e = 0; e < d; ++e)
            EXPECT_EQ(s.apply(basis2(d, a, e)), basis2(d, e, a));
}

TEST(TwoModeSqueezer, UnitGainIsIdentity) {
    const Eigen::Index d = 5;
    EXPECT_LT((tms_unitary(1.0, d).dense() - Eigen::MatrixXd::Identity(d * d, d * d)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(TwoModeSqueezer, VacuumStatistics) {
    const Eigen::Index d = 12;
    const double kappa = 1.02;
    const Eigen::VectorXd out = tms_unitary(kappa, d).apply(basis2(d, 0, 0));
    const double r = std::acosh(std::sqrt(kappa));
    double mean = 0.0;
    for (Eigen::Index n = 0; n < d; ++n) {
        const double p = out(n * d + n) * out(n * d + n);
        EXPECT_NEAR(p, std::pow(std::tanh(r), 2.0 * n) / (kappa), 1e-12);
        mean += n * p;
    }
    EXPECT_NEAR(mean, kappa - 1.0, 1e-12);
    EXPECT_LT(top_two_mass(reduce_first(out, d).diagonal()), 1e-8);
    EXPECT_LT(tms_unitary(kappa, d).unitarity_defect(d / 2), 1e-10);
}

TEST(TwoModeSqueezer, Errors) {
    EXPECT_THROW(tms_unitary(0.9, 6), DomainError);
    EXPECT_THROW(tms_unitary(2.0, 6), DomainError);
    EXPECT_NO_THROW(tms_unitary(2.0, 6, 3.0));
}

TEST(EnvDensity, Examples) {
    const DensityMatrix vac = env_density_matrix(Thermal{0.0}, 6);
    EXPECT_NEAR(vac.entries()(0, 0).real(), 1.0, 1e-15);
    EXPECT_NEAR(vac.entries().cwiseAbs().sum(), 1.0, 1e-15);

    const DensityMatrix one = env_density_matrix(Fock{1}, 10);
    EXPECT_NEAR(one.populations()(1), 1.0, 1e-15);
    EXPECT_NEAR(entropy_dm(one), 0.0, 1e-12);

    EXPECT_NEAR(entropy_dm(env_density_matrix(Thermal{1.0}, 40)), g_nats(1.0), 1e-6);
}

TEST(EnvDensity, SqueezedThermalMoments) {
    const DensityMatrix rho = env_density_matrix(SqueezedThermal{0.01, 0.1}, 20);
    Eigen::VectorXd n(20);
    for (int k = 0; k < 20; ++k)
        n(k) = k;
    EXPECT_NEAR(rho.populations().dot(n), squeezed_thermal_photons(0.01, 0.1), 1e-10);
    EXPECT_NEAR(entropy_dm(rho), g_nats(0.01), 1e-10);
}

TEST(EnvDensity, Errors) {
    EXPECT_THROW(env_density_matrix(Generic{0.2, 0.0}, 10), UnsupportedOracle);
    EXPECT_THROW(env_density_matrix(Fock{5}, 6), TruncationError);
    try {
        env_density_matrix(Thermal{5.0}, 6);
        FAIL() << "expected a truncation error";
    } catch (const TruncationError& e) {
        EXPECT_GT(e.suggested_dim(), 6u);
    }
}

TEST(Tmsv, Examples) {
    const Eigen::VectorXd vac = tmsv_vector(0.0, 5);
    EXPECT_EQ(vac, basis2(5, 0, 0));

    const Eigen::VectorXd psi = tmsv_vector(1.0, 40);
    EXPECT_NEAR(psi.norm(), 1.0, 1e-10);
    EXPECT_NEAR(entropy_dm(Eigen::MatrixXcd(reduce_first(psi, 40).cast<std::complex<double>>())), g_nats(1.0), 1e-6);

    EXPECT_THROW(tmsv_vector(5.0, 4), TruncationError);
    EXPECT_THROW(tmsv_vector(-1.0, 4), DomainError);
}

TEST(EntropyDm, Examples) {
    Eigen::VectorXcd v(3);
    v << std::complex<double>(0.6, 0.0), std::complex<double>(0.0, 0.8), 0.0;
    EXPECT_NEAR(entropy_dm(Eigen::MatrixXcd(v * v.adjoint())), 0.0, 1e-9);
    EXPECT_NEAR(entropy_dm(Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(5, 5) / 5.0)), std::log(5.0), 1e-13);

    Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(2, 2) / 2.0;
    bad(0, 1) = 0.3;
    EXPECT_THROW(entropy_dm(bad), DomainError);
    EXPECT_THROW(DensityMatrix(Eigen::MatrixXcd::Identity(2, 2)), DomainError);
}

TEST(GramEigenvalues, MatchesDirectSolve) {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::bernoulli_distribution keep(0.15);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(14, 9 + trial % 7);
        for (Eigen::Index i = 0; i < m.size(); ++i)
            if (keep(rng))
                m.data()[i] = u(rng);
        std::vector<double> fast = gram_eigenvalues(m);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> direct(m * m.transpose());
        std::vector<double> slow(direct.eigenvalues().data(), direct.eigenvalues().data() + direct.eigenvalues().size());
        std::erase_if(fast, [](double x) { return x < 1e-12; });
        std::erase_if(slow, [](double x) { return x < 1e-12; });
        std::sort(fast.begin(), fast.end());
        std::sort(slow.begin(), slow.end());
        ASSERT_EQ(fast.size(), slow.size());
        for (std::size_t i = 0; i < fast.size(); ++i)
            EXPECT_NEAR(fast[i], slow[i], 1e-12);
    }
}

TEST(FockOracle, PureLossClosedForm) {
    for (double tau : {0.5, 0.9}) {
        for (double n : {0.5, 1.0, 2.0}) {
            const OracleResult res = coherent_information_fock(Attenuator{tau}, Thermal{0.0}, n);
            EXPECT_NEAR(res.i_c, g_nats(tau * n) - g_nats((1.0 - tau) * n), 0.01) << "tau=" << tau << " N=" << n;
        }
    }
}

TEST(FockOracle, AgreesWithGaussianOracle) {
    const OracleResult att = coherent_information_fock(Attenuator{0.98}, Thermal{1.0}, 1.0);
    EXPECT_NEAR(att.i_c, gaussian_coherent_information({Attenuator{0.98}, thermal_cov(1.0), 1.0}), 0.02);
    EXPECT_LT(att.unitarity_defect, 1e-10);

    const OracleResult sq = coherent_information_fock(Attenuator{0.9}, SqueezedThermal{0.01, 0.1}, 0.5);
    EXPECT_NEAR(sq.i_c, gaussian_coherent_information({Attenuator{0.9}, squeezed_thermal_cov(0.01, 0.1), 0.5}), 0.02);

    const OracleResult amp = coherent_information_fock(Amplifier{1.02}, Thermal{1.0}, 1.0);
    EXPECT_NEAR(amp.i_c, gaussian_coherent_information({Amplifier{1.02}, thermal_cov(1.0), 1.0}), 0.02);
}

TEST(FockOracle, FockEnvironmentInsideSandwich) {
    const OracleResult res = coherent_information_fock(Attenuator{0.98}, Fock{1}, 1.0);
    const double ic = res.i_c * kBits;
    const double lo = attenuator_q_l(0.98, 1.0, Fock{1}) * kBits;
    const double hi = std::min(attenuator_q_u1(0.98, 1.0, Fock{1}), attenuator_q_u2(0.98, 1.0, Fock{1})) * kBits;
    EXPECT_GE(ic, lo - 0.02);
    EXPECT_LE(ic, hi + 0.02);
}

TEST(FockOracle, ConvergedValueIsStableUnderLargerDimension) {
    FockOptions opts;
    opts.adaptive = false;
    // The entropy error of a truncation scales like tail * ln(1 / tail), so the
    // 1e-9 comparison is made where the boundary mass is far below the target.
    const OracleResult small = coherent_information_fock_at(Attenuator{0.9}, Thermal{0.1}, 0.3, 20, opts);
    ASSERT_LT(small.tail_mass, 1e-11);
    const OracleResult large = coherent_information_fock_at(Attenuator{0.9}, Thermal{0.1}, 0.3, 28, opts);
    EXPECT_NEAR(small.i_c, large.i_c, 1e-9);
}

TEST(FockOracle, PureEnvironmentComplementEntropies) {
    for (const EnvironmentModel& env : {EnvironmentModel{Thermal{0.0}}, EnvironmentModel{Fock{1}}}) {
        const OracleResult res = coherent_information_fock(Attenuator{0.9}, env, 1.0);
        EXPECT_NEAR(res.s_weak_complement, res.s_exchange, 1e-9);
    }
    const OracleResult amp = coherent_information_fock(Amplifier{1.02}, Thermal{0.0}, 1.0);
    EXPECT_NEAR(amp.s_weak_complement, amp.s_exchange, 1e-9);
}

TEST(FockOracle, ZeroTransmissionSwapsInEnvironment) {
    const OracleResult res = coherent_information_fock(Attenuator{0.0}, Thermal{0.3}, 1.0);
    EXPECT_NEAR(res.i_c, -g_nats(1.0), 1e-7);
}

TEST(FockOracle, Guards) {
    EXPECT_THROW(coherent_information_fock(Attenuator{0.9}, Generic{0.2, 0.0}, 1.0), UnsupportedOracle);
    EXPECT_THROW(coherent_information_fock(Amplifier{1.02}, Thermal{1.0}, 6.0), DomainError);
    EXPECT_THROW(coherent_information_fock(Amplifier{2.0}, Thermal{1.0}, 1.0), DomainError);

    FockOptions tiny;
    tiny.max_elements = 1000;
    EXPECT_THROW(coherent_information_fock(Attenuator{0.9}, Thermal{1.0}, 1.0, tiny), DomainError);

    FockOptions fixed;
    fixed.adaptive = false;
    fixed.initial_dim = 4;
    EXPECT_THROW(coherent_information_fock(Attenuator{0.9}, Thermal{1.0}, 1.0, fixed), TruncationError);
}
