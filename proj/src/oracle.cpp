#include "cdmrg/oracle.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

#include "cdmrg/krylov.hpp"

namespace cdmrg {

ConstrainedBasis::ConstrainedBasis(int length, std::vector<std::uint8_t> paths) : length_(length), paths_(std::move(paths)) {
    const long n = dim();
    index_.reserve(size_t(n));
    for(long s = 0; s < n; ++s) index_.emplace(std::string(reinterpret_cast<const char *>(path(s)), stride()), s);
}

long ConstrainedBasis::find(const std::uint8_t *p) const {
    auto it = index_.find(std::string(reinterpret_cast<const char *>(p), stride()));
    return it == index_.end() ? -1 : it->second;
}

namespace {
    std::vector<std::vector<double>> right_counts(const ChainHamiltonian &h) {
        const auto &cat = *h.cat;
        const int   nm = cat.num_modules(), p = cat.physical(), L = h.length;
        std::vector<std::vector<double>> nr(size_t(L + 1), std::vector<double>(size_t(nm), 0.0));
        nr[size_t(L)][size_t(h.right)] = 1;
        for(int b = L; b > 0; --b)
            for(int m1 = 0; m1 < nm; ++m1)
                for(int m2 = 0; m2 < nm; ++m2) nr[size_t(b - 1)][size_t(m1)] += cat.n_action(m1, p, m2) * nr[size_t(b)][size_t(m2)];
        return nr;
    }
}

double basis_dimension(const ChainHamiltonian &h) { return right_counts(h)[0][size_t(h.left)]; }

ConstrainedBasis enumerate_basis(const ChainHamiltonian &h, double cap) {
    const double dim = basis_dimension(h);
    if(dim > cap) throw Error(fmt::format("enumerate_basis: dimension {} exceeds the cap {}", dim, cap));
    const auto &cat = *h.cat;
    const int   nm = cat.num_modules(), p = cat.physical(), L = h.length;
    auto        nr = right_counts(h);
    int         max_mult = 0;
    for(int a = 0; a < nm; ++a)
        for(int b = 0; b < nm; ++b) max_mult = std::max(max_mult, cat.n_action(a, p, b));
    std::vector<std::uint8_t> paths;
    paths.reserve(size_t(dim) * size_t(2 * L + 1));
    std::vector<std::uint8_t> cur(size_t(2 * L + 1), 0);
    cur[0] = static_cast<std::uint8_t>(h.left);
    auto rec = [&](auto &&self, int site) -> void {
        if(site == L) {
            paths.insert(paths.end(), cur.begin(), cur.end());
            return;
        }
        const int m1 = cur[size_t(2 * site)];
        for(int a = 0; a < max_mult; ++a)
            for(int m2 = 0; m2 < nm; ++m2) {
                if(a >= cat.n_action(m1, p, m2) || nr[size_t(site + 1)][size_t(m2)] == 0) continue;
                cur[size_t(2 * site + 1)] = static_cast<std::uint8_t>(a);
                cur[size_t(2 * site + 2)] = static_cast<std::uint8_t>(m2);
                self(self, site + 1);
            }
    };
    if(nr[0][size_t(h.left)] > 0) rec(rec, 0);
    return ConstrainedBasis(L, std::move(paths));
}

SparseMatrix assemble(const ChainHamiltonian &h, const ConstrainedBasis &basis) {
    const long                       n = basis.dim();
    const int                        L = h.length;
    std::vector<Eigen::Triplet<Scalar>> trip;
    std::vector<std::uint8_t>        work(basis.stride());
    for(long s = 0; s < n; ++s) {
        for(int i = 0; i + 1 < L; ++i) {
            const int   m1  = basis.sector(s, i), m2 = basis.sector(s, i + 1), m3 = basis.sector(s, i + 2);
            const auto &blk = h.term(i).block(m1, m3);
            const int   col = blk.index(m2, basis.mult(s, i), basis.mult(s, i + 1));
            std::copy(basis.path(s), basis.path(s) + basis.stride(), work.begin());
            for(int row = 0; row < static_cast<int>(blk.basis.size()); ++row) {
                Scalar v = blk.h(row, col);
                if(std::abs(v) < 1e-15) continue;
                const auto &st = blk.basis[size_t(row)];
                work[size_t(2 * i + 1)] = static_cast<std::uint8_t>(st.first);
                work[size_t(2 * i + 2)] = static_cast<std::uint8_t>(st.mid);
                work[size_t(2 * i + 3)] = static_cast<std::uint8_t>(st.second);
                long t                  = basis.find(work.data());
                if(t < 0) throw Error(fmt::format("assemble: bond {} maps state {} outside the constrained basis", i, s));
                trip.emplace_back(t, s, v);
            }
        }
    }
    SparseMatrix H(n, n);
    H.setFromTriplets(trip.begin(), trip.end());
    return H;
}

OracleSpectrum ground_and_spectrum(const SparseMatrix &H, int k, double tol) {
    const long     n = H.rows();
    OracleSpectrum out;
    k = static_cast<int>(std::min<long>(k, n));
    if(n <= 600) {
        Matrix                                dense = Matrix(H);
        Eigen::SelfAdjointEigenSolver<Matrix> es((dense + dense.adjoint()) * 0.5);
        for(int i = 0; i < k; ++i) out.values.push_back(es.eigenvalues()(i));
        out.ground   = es.eigenvectors().col(0);
        out.residual = (H * out.ground - out.values[0] * out.ground).norm();
        return out;
    }
    std::vector<Vector> found;
    KrylovOptions       opt;
    opt.tol        = tol;
    opt.krylov_dim = 80;
    opt.max_iter   = 20000;
    const int m    = static_cast<int>(std::min<long>(k + 2, n));
    for(int i = 0; i < m; ++i) {
        opt.seed   = 1000 + static_cast<std::uint64_t>(i);
        Vector v0  = Vector::Zero(n);
        auto   pair = lowest_eigenpair([&](const Vector &v) { return Vector(H * v); }, v0, opt, found);
        if(!pair.converged) throw Error(fmt::format("ground_and_spectrum: Lanczos did not converge (residual {:.3e})", pair.residual));
        out.values.push_back(pair.value);
        found.push_back(pair.vector);
        out.residual = std::max(out.residual, (H * pair.vector - pair.value * pair.vector).norm());
    }
    std::vector<int> order(static_cast<size_t>(m));
    for(int i = 0; i < m; ++i) order[size_t(i)] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return out.values[size_t(a)] < out.values[size_t(b)]; });
    out.ground = found[size_t(order[0])];
    std::sort(out.values.begin(), out.values.end());
    out.values.resize(size_t(k));
    return out;
}

OracleSpectrum ground_and_spectrum(const ChainHamiltonian &h, int k, double tol) {
    auto basis = enumerate_basis(h);
    return ground_and_spectrum(assemble(h, basis), k, tol);
}

std::vector<double> full_spectrum(const SparseMatrix &H) {
    Matrix dense = Matrix(H);
    return hermitian_eigenvalues(Matrix((dense + dense.adjoint()) * 0.5));
}

EntanglementSpectrum exact_entanglement(const ModuleCategory &cat, const ConstrainedBasis &basis, const Vector &psi, int cut) {
    const int L = basis.length();
    if(cut < 1 || cut >= L) throw Error("exact_entanglement: cut out of range");
    struct SectorData {
        std::map<std::string, int>               rows, cols;
        std::vector<std::tuple<int, int, Scalar>> entries;
    };
    std::map<int, SectorData> data;
    const size_t              split = size_t(2 * cut + 1);
    for(long s = 0; s < basis.dim(); ++s) {
        const auto *p   = basis.path(s);
        auto       &d   = data[basis.sector(s, cut)];
        std::string pre(reinterpret_cast<const char *>(p), split);
        std::string suf(reinterpret_cast<const char *>(p) + split, basis.stride() - split);
        auto        r = d.rows.emplace(pre, static_cast<int>(d.rows.size())).first->second;
        auto        c = d.cols.emplace(suf, static_cast<int>(d.cols.size())).first->second;
        d.entries.emplace_back(r, c, psi(s));
    }
    std::vector<std::pair<int, RealVector>> sv;
    for(auto &[m, d] : data) {
        Matrix a = Matrix::Zero(static_cast<Eigen::Index>(d.rows.size()), static_cast<Eigen::Index>(d.cols.size()));
        for(auto [r, c, v] : d.entries) a(r, c) = v;
        sv.emplace_back(m, Eigen::BDCSVD<Matrix>(a).singularValues());
    }
    return spectrum_from_singular_values(cat, cut, sv, 1e-14);
}

namespace {
    // Product of the blocks along one path, as a D0 x DL matrix.
    Matrix path_amplitude(const ConstrainedMps &mps, const std::uint8_t *p) {
        const int L   = mps.length();
        Matrix    acc;
        for(int i = 0; i < L; ++i) {
            auto it = mps.sites[size_t(i)].blocks.find({p[2 * i], p[2 * i + 2], p[2 * i + 1]});
            if(it == mps.sites[size_t(i)].blocks.end()) return Matrix::Zero(mps.bonds.front().total(), mps.bonds.back().total());
            acc = i == 0 ? it->second : Matrix(acc * it->second);
        }
        return acc;
    }
}

Vector to_dense(const ConstrainedMps &mps, const ConstrainedBasis &basis) {
    if(mps.bonds.front().total() != 1 || mps.bonds.back().total() != 1) throw Error("to_dense: boundary bonds must be one-dimensional");
    Vector v(basis.dim());
    for(long s = 0; s < basis.dim(); ++s) v(s) = path_amplitude(mps, basis.path(s))(0, 0);
    return v;
}

Matrix to_dense_open(const ConstrainedMps &mps, const ConstrainedBasis &basis) {
    const int D0 = mps.bonds.front().total(), DL = mps.bonds.back().total();
    Matrix    out(basis.dim(), D0 * DL);
    for(long s = 0; s < basis.dim(); ++s) {
        Matrix a = path_amplitude(mps, basis.path(s));
        for(int i = 0; i < D0; ++i)
            for(int j = 0; j < DL; ++j) out(s, i * DL + j) = a(i, j);
    }
    return out;
}

}
