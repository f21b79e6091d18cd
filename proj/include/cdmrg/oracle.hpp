#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Sparse>

#include "cdmrg/mps.hpp"

namespace cdmrg {

using SparseMatrix = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;

/// Fusion paths (M0, a1, M1, ..., aL, ML) with fixed end sectors, in lexicographic order.
/// Each path is stored as 2L+1 bytes: entry 2b is the sector on bond b, entry 2i+1 the multiplicity at site i.
class ConstrainedBasis {
  public:
    ConstrainedBasis(int length, std::vector<std::uint8_t> paths);

    [[nodiscard]] int  length() const { return length_; }
    [[nodiscard]] long dim() const { return static_cast<long>(paths_.size() / stride()); }
    [[nodiscard]] int  sector(long state, int bond) const { return paths_[size_t(state) * stride() + size_t(2 * bond)]; }
    [[nodiscard]] int  mult(long state, int site) const { return paths_[size_t(state) * stride() + size_t(2 * site + 1)]; }
    [[nodiscard]] const std::uint8_t *path(long state) const { return paths_.data() + size_t(state) * stride(); }
    [[nodiscard]] size_t              stride() const { return size_t(2 * length_ + 1); }

    /// Index of a path, or -1.
    [[nodiscard]] long find(const std::uint8_t *path) const;

  private:
    int                                    length_;
    std::vector<std::uint8_t>              paths_;
    std::unordered_map<std::string, long>  index_;
};

/// Dimension from the fusion transfer matrix, without enumeration.
double basis_dimension(const ChainHamiltonian &h);

ConstrainedBasis enumerate_basis(const ChainHamiltonian &h, double cap = 2e6);

/// Bondwise assembly; throws if a bond term maps outside the basis.
SparseMatrix assemble(const ChainHamiltonian &h, const ConstrainedBasis &basis);

struct OracleSpectrum {
    std::vector<double> values;
    Vector              ground;
    double              residual = 0.0;
};

/// k lowest eigenvalues and the normalized ground vector; dense up to dimension 600, Lanczos with deflation above
/// (two extra pairs are computed and the values sorted).
OracleSpectrum ground_and_spectrum(const SparseMatrix &H, int k, double tol = 1e-12);
OracleSpectrum ground_and_spectrum(const ChainHamiltonian &h, int k, double tol = 1e-12);

/// Full spectrum by dense diagonalization.
std::vector<double> full_spectrum(const SparseMatrix &H);

/// Schmidt values of a basis vector across bond `cut`, grouped by the sector on that bond.
EntanglementSpectrum exact_entanglement(const ModuleCategory &cat, const ConstrainedBasis &basis, const Vector &psi, int cut);

/// Coefficients of an MPS with one-dimensional boundaries in the path basis.
Vector to_dense(const ConstrainedMps &mps, const ConstrainedBasis &basis);

/// Original-label MPS with open boundary legs: one dense vector per (m0, mL) pair, as columns ordered m0 * DL + mL.
Matrix to_dense_open(const ConstrainedMps &mps, const ConstrainedBasis &basis);

}
