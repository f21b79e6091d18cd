#pragma once

#include <algorithm>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cdmrg {

using Scalar = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Kronecker product with row index ia * rows(b) + ib.
template <class DerivedA, class DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(const Eigen::MatrixBase<DerivedA> &a,
                                                                             const Eigen::MatrixBase<DerivedB> &b) {
    Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(), a.cols() * b.cols());
    for(Eigen::Index i = 0; i < a.rows(); ++i)
        for(Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived> &m) {
    if(m.size() == 0) return 0.0;
    return m.cwiseAbs().maxCoeff();
}

template <class Derived>
double hermiticity_residual(const Eigen::MatrixBase<Derived> &m) {
    return max_abs(m - m.adjoint());
}

template <class Derived>
double unitarity_residual(const Eigen::MatrixBase<Derived> &m) {
    using M = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    return max_abs(M(m.adjoint() * m) - M::Identity(m.cols(), m.cols()));
}

/// Eigenvalues of a Hermitian matrix in ascending order.
template <class Derived>
std::vector<double> hermitian_eigenvalues(const Eigen::MatrixBase<Derived> &m) {
    if(m.rows() == 0) return {};
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>> es(m, Eigen::EigenvaluesOnly);
    std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    return out;
}

/// Largest elementwise deviation between two sorted lists; infinity if the lengths differ.
inline double sorted_deviation(std::vector<double> a, std::vector<double> b) {
    if(a.size() != b.size()) return std::numeric_limits<double>::infinity();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double dev = 0.0;
    for(size_t i = 0; i < a.size(); ++i) dev = std::max(dev, std::abs(a[i] - b[i]));
    return dev;
}

}

namespace cdmrg {

/// Union of spectra where each list counts `weight` times, with total multiplicities divided by `divisor`.
/// Values closer than `gap` are merged into one cluster; throws if a cluster count is not divisible.
inline std::vector<double> weighted_spectrum_union(const std::vector<std::pair<std::vector<double>, int>> &parts, int divisor,
                                                   double gap = 1e-8) {
    std::vector<std::pair<double, long>> all;
    for(const auto &[vals, w] : parts)
        for(double v : vals) all.emplace_back(v, w);
    std::sort(all.begin(), all.end());
    std::vector<double> out;
    size_t              i = 0;
    while(i < all.size()) {
        size_t j     = i;
        long   count = 0;
        while(j < all.size() && all[j].first - all[i].first <= gap * std::max(1.0, std::abs(all[i].first))) {
            count += all[j].second;
            ++j;
        }
        if(count % divisor != 0) throw Error("weighted_spectrum_union: cluster multiplicity not divisible by the group order");
        out.insert(out.end(), static_cast<size_t>(count / divisor), all[i].first);
        i = j;
    }
    return out;
}

}
