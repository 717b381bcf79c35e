#pragma once

// Dense numerics shared by the Fock-space oracle.

#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "qcap/error.hpp"

namespace qcap {

/// Matrix exponential by scaling and squaring with a fixed 18th-order Taylor series.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
matrix_exp(const Eigen::MatrixBase<Derived>& m) {
    using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    if (m.rows() != m.cols())
        throw DomainError("matrix_exp: matrix must be square");
    if (!m.allFinite())
        throw DomainError("matrix_exp: non-finite entries");
    const Eigen::Index n = m.rows();
    if (n == 0)
        return Mat(0, 0);

    const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm1 > 0.5)
        squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
    const Mat a = m / std::ldexp(1.0, squarings);

    constexpr int kOrder = 18;
    const Mat id = Mat::Identity(n, n);
    Mat e = id;
    for (int k = kOrder; k >= 1; --k)
        e = id + (a * e) / static_cast<double>(k);
    for (int i = 0; i < squarings; ++i)
        e = (e * e).eval();
    return e;
}

namespace detail {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b)
            parent_[std::max(a, b)] = std::min(a, b);
    }

    /// Members of each set, sets ordered by smallest member.
    std::vector<std::vector<Eigen::Index>> groups() {
        std::vector<std::vector<Eigen::Index>> out;
        std::vector<std::size_t> slot(parent_.size(), parent_.size());
        for (std::size_t i = 0; i < parent_.size(); ++i) {
            const std::size_t root = find(i);
            if (slot[root] == parent_.size()) {
                slot[root] = out.size();
                out.emplace_back();
            }
            out[slot[root]].push_back(static_cast<Eigen::Index>(i));
        }
        return out;
    }

private:
    std::vector<std::size_t> parent_;
};

} // namespace detail

/// Eigenvalues of a Hermitian matrix. Exactly-zero couplings split the problem
/// into independent blocks, which is how number-conserving dynamics shows up.
template <typename Derived>
std::vector<double> hermitian_eigenvalues(const Eigen::MatrixBase<Derived>& h) {
    using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const Eigen::Index n = h.rows();
    detail::DisjointSets sets(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < j; ++i)
            if (h(i, j) != typename Derived::Scalar(0) || h(j, i) != typename Derived::Scalar(0))
                sets.unite(static_cast<std::size_t>(i), static_cast<std::size_t>(j));

    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    for (const auto& block : sets.groups()) {
        if (block.size() == 1) {
            out.push_back(std::real(h(block[0], block[0])));
            continue;
        }
        const Mat sub = h(block, block);
        Eigen::SelfAdjointEigenSolver<Mat> solver(sub, Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success)
            throw DomainError("hermitian_eigenvalues: eigensolver failed");
        for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
            out.push_back(solver.eigenvalues()(i));
    }
    return out;
}

/// Nonzero spectrum of M M^T (equivalently M^T M). Rows and columns linked by
/// nonzero entries form independent blocks; each block uses its smaller Gram side.
inline std::vector<double> gram_eigenvalues(const Eigen::MatrixXd& m) {
    const auto rows = static_cast<std::size_t>(m.rows());
    const auto cols = static_cast<std::size_t>(m.cols());
    detail::DisjointSets sets(rows + cols);
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (m(i, j) != 0.0)
                sets.unite(static_cast<std::size_t>(i), rows + static_cast<std::size_t>(j));

    std::vector<double> out;
    for (const auto& group : sets.groups()) {
        std::vector<Eigen::Index> r;
        std::vector<Eigen::Index> c;
        for (Eigen::Index node : group) {
            if (static_cast<std::size_t>(node) < rows)
                r.push_back(node);
            else
                c.push_back(node - static_cast<Eigen::Index>(rows));
        }
        if (r.empty() || c.empty())
            continue;
        const Eigen::MatrixXd sub = m(r, c);
        const Eigen::MatrixXd gram = r.size() <= c.size() ? Eigen::MatrixXd(sub * sub.transpose())
                                                           : Eigen::MatrixXd(sub.transpose() * sub);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success)
            throw DomainError("gram_eigenvalues: eigensolver failed");
        for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
            out.push_back(solver.eigenvalues()(i));
    }
    return out;
}

/// -sum p ln p over a probability spectrum; p <= 1e-14 contributes nothing.
inline double spectrum_entropy(const std::vector<double>& eigenvalues) {
    double s = 0.0;
    for (double p : eigenvalues)
        if (p > 1e-14)
            s -= p * std::log(p);
    return s;
}

} // namespace qcap
